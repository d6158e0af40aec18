#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "silgan/data.hpp"

namespace silgan::templates {

struct ExtractParams {
  std::size_t smooth_window = 21;   // odd
  double flat_slope_eps = 0.002;    // per sample
  std::size_t min_flat_len = 10;
};

/// Centered moving average with edge replication. Window must be odd and
/// within [1, signal length].
std::vector<float> smooth(std::span<const float> signal, std::size_t window);

/// 1-D derivative filter (-1, 0, +1)/2 with edge replication. Needs T >= 3.
std::vector<float> sobel_1d(std::span<const float> signal);

/// Approximates a signal as flat regions around its major inflections with
/// straight-line edges between them.
Template extract_template(std::span<const float> signal, std::size_t signal_index,
                          const ExtractParams& params = {});

struct PairedSample {
  std::vector<Template> templates;  // one per channel, signal_index 0..L-1
  Maneuver maneuver;
};

std::vector<PairedSample> build_paired_dataset(const std::vector<Maneuver>& maneuvers,
                                               const ExtractParams& params = {});

}  // namespace silgan::templates
