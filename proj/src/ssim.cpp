#include "silgan/ssim.hpp"

#include <algorithm>
#include <vector>

namespace silgan {

double ssim_1d(std::span<const float> a, std::span<const float> b, std::size_t window) {
  if (a.size() != b.size()) throw shape_error("ssim_1d: signals must have equal length");
  if (a.empty()) throw param_error("ssim_1d: empty signal");
  if (window == 0) throw param_error("ssim_1d: window must be positive");
  const std::size_t t_total = a.size();
  const std::size_t w = std::min(window, t_total);

  // Prefix sums make every window O(1).
  std::vector<double> sa(t_total + 1, 0.0), sb(t_total + 1, 0.0), saa(t_total + 1, 0.0),
      sbb(t_total + 1, 0.0), sab(t_total + 1, 0.0);
  for (std::size_t i = 0; i < t_total; ++i) {
    const double x = a[i], y = b[i];
    sa[i + 1] = sa[i] + x;
    sb[i + 1] = sb[i] + y;
    saa[i + 1] = saa[i] + x * x;
    sbb[i + 1] = sbb[i] + y * y;
    sab[i + 1] = sab[i] + x * y;
  }

  constexpr double c1 = 0.01 * 0.01;
  constexpr double c2 = 0.03 * 0.03;
  const double n = static_cast<double>(w);
  double total = 0.0;
  const std::size_t n_windows = t_total - w + 1;
  for (std::size_t i = 0; i < n_windows; ++i) {
    const std::size_t j = i + w;
    const double mx = (sa[j] - sa[i]) / n;
    const double my = (sb[j] - sb[i]) / n;
    const double vx = (saa[j] - saa[i]) / n - mx * mx;
    const double vy = (sbb[j] - sbb[i]) / n - my * my;
    const double cxy = (sab[j] - sab[i]) / n - mx * my;
    total += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) /
             ((mx * mx + my * my + c1) * (vx + vy + c2));
  }
  return std::max(0.0, total / static_cast<double>(n_windows));
}

double ssim_maneuver(const Maneuver& a, const Maneuver& b, std::size_t window) {
  if (a.channels != b.channels || a.length != b.length)
    throw shape_error("ssim_maneuver: maneuvers must have identical shape");
  if (a.channels == 0) throw param_error("ssim_maneuver: empty maneuver");
  double total = 0.0;
  for (std::size_t c = 0; c < a.channels; ++c)
    total += ssim_1d(a.channel(c), b.channel(c), window);
  return total / static_cast<double>(a.channels);
}

}  // namespace silgan
