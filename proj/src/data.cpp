#include "silgan/data.hpp"

#include <cmath>

namespace silgan {

std::vector<float> interpolate_breakpoints(const std::vector<Breakpoint>& breakpoints) {
  if (breakpoints.empty()) throw param_error("interpolate_breakpoints: no breakpoints");
  const std::size_t t_end = breakpoints.back().t;
  std::vector<float> out(t_end + 1, 0.0f);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const Breakpoint& a = breakpoints[i];
    const Breakpoint& b = breakpoints[i + 1];
    const double span = static_cast<double>(b.t - a.t);
    for (std::size_t t = a.t; t <= b.t; ++t) {
      const double w = span == 0.0 ? 0.0 : static_cast<double>(t - a.t) / span;
      out[t] = static_cast<float>((1.0 - w) * a.value + w * b.value);
    }
  }
  out[breakpoints.front().t] = breakpoints.front().value;
  out[t_end] = breakpoints.back().value;
  return out;
}

Template make_template(std::vector<Breakpoint> breakpoints, std::size_t signal_index) {
  Template t;
  t.signal_index = signal_index;
  t.breakpoints = std::move(breakpoints);
  t.values = interpolate_breakpoints(t.breakpoints);
  validate_template(t);
  return t;
}

void validate_template(const Template& t) {
  if (t.breakpoints.size() < 2) throw param_error("template: needs at least 2 breakpoints");
  if (t.breakpoints.front().t != 0)
    throw param_error("template: first breakpoint must be at t=0");
  if (t.breakpoints.back().t + 1 != t.values.size())
    throw param_error("template: last breakpoint must be at t=T-1");
  for (std::size_t i = 0; i + 1 < t.breakpoints.size(); ++i)
    if (t.breakpoints[i].t >= t.breakpoints[i + 1].t)
      throw param_error("template: breakpoint times must be strictly increasing");
  for (const Breakpoint& b : t.breakpoints)
    if (!(b.value >= 0.0f && b.value <= 1.0f))
      throw param_error("template: breakpoint value outside [0,1]");
  const std::vector<float> expected = interpolate_breakpoints(t.breakpoints);
  for (std::size_t i = 0; i < expected.size(); ++i)
    if (t.values[i] != expected[i])
      throw param_error("template: values are not the interpolation of breakpoints");
}

void validate_scenario(const Scenario& s) {
  if (s.templates.empty()) throw param_error("scenario: needs at least one template");
  const std::size_t n = s.templates.front().length();
  for (const Template& t : s.templates) {
    validate_template(t);
    if (t.length() != n) throw param_error("scenario: templates must share one length");
  }
}

}  // namespace silgan
