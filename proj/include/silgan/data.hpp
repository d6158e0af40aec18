#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "silgan/common.hpp"

namespace silgan {

inline const std::vector<std::string> kSignalNames = {"vehicle_speed", "engine_speed",
                                                      "selected_gear"};

/// An L x T matrix of normalized signal samples at 1 Hz, row-major.
struct Maneuver {
  std::size_t channels = 0;
  std::size_t length = 0;
  std::vector<float> values;  // channels * length, row-major
  std::vector<std::string> signal_names = kSignalNames;

  Maneuver() = default;
  Maneuver(std::size_t l, std::size_t t)
      : channels(l), length(t), values(l * t, 0.0f) {}

  float& at(std::size_t channel, std::size_t t) { return values[channel * length + t]; }
  float at(std::size_t channel, std::size_t t) const { return values[channel * length + t]; }

  std::span<float> channel(std::size_t c) {
    return {values.data() + c * length, length};
  }
  std::span<const float> channel(std::size_t c) const {
    return {values.data() + c * length, length};
  }

  int channel_index(const std::string& name) const {
    for (std::size_t i = 0; i < signal_names.size(); ++i)
      if (signal_names[i] == name) return static_cast<int>(i);
    return -1;
  }
};

/// One (time index, value) corner of a piecewise-linear template.
struct Breakpoint {
  std::size_t t = 0;
  float value = 0.0f;
};

/// Piecewise-linear sketch of one signal. `values` is always the exact
/// linear interpolation of `breakpoints`, which span [0, T-1].
struct Template {
  std::vector<float> values;
  std::size_t signal_index = 0;
  std::vector<Breakpoint> breakpoints;

  std::size_t length() const { return values.size(); }
};

/// Materializes the interpolated sample vector for a breakpoint list.
std::vector<float> interpolate_breakpoints(const std::vector<Breakpoint>& breakpoints);

/// Builds a validated Template from breakpoints (first t must be 0, strictly
/// increasing times, values in [0,1]).
Template make_template(std::vector<Breakpoint> breakpoints, std::size_t signal_index);

/// Checks the Template type invariants; throws param_error on violation.
void validate_template(const Template& t);

/// Ordered list of K equal-length templates spanning a composite scenario.
struct Scenario {
  std::vector<Template> templates;

  std::size_t size() const { return templates.size(); }
  std::size_t length() const { return templates.empty() ? 0 : templates.front().length(); }
};

void validate_scenario(const Scenario& s);

}  // namespace silgan
