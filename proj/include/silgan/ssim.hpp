#pragma once

#include <cstddef>
#include <span>

#include "silgan/data.hpp"

namespace silgan {

/// Structural similarity between two equal-length 1-D signals in [0,1].
/// Sliding uniform window (default 32, stride 1), stabilizers (0.01)^2 and
/// (0.03)^2 for unit data range. Returns the window mean clamped below at 0,
/// so the score lies in [0,1] and identical signals score exactly 1.
/// Signals shorter than the window are scored with one full-length window.
double ssim_1d(std::span<const float> a, std::span<const float> b,
               std::size_t window = 32);

/// Channel-mean ssim_1d over two maneuvers of identical shape.
double ssim_maneuver(const Maneuver& a, const Maneuver& b, std::size_t window = 32);

}  // namespace silgan
