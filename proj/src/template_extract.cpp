#include "silgan/template_extract.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace silgan::templates {

namespace {

float clamp01(double v) { return static_cast<float>(std::clamp(v, 0.0, 1.0)); }

double mean(std::span<const float> v, std::size_t begin, std::size_t end) {
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) sum += v[i];
  return sum / static_cast<double>(end - begin);
}

}  // namespace

std::vector<float> smooth(std::span<const float> signal, std::size_t window) {
  const std::size_t t_total = signal.size();
  if (window == 0 || window % 2 == 0)
    throw param_error("smooth: window must be odd and positive");
  if (window > t_total) throw param_error("smooth: window exceeds signal length");
  const std::size_t half = window / 2;
  std::vector<float> out(t_total);
  for (std::size_t t = 0; t < t_total; ++t) {
    double sum = 0.0;
    for (std::size_t k = 0; k < window; ++k) {
      const std::ptrdiff_t raw = static_cast<std::ptrdiff_t>(t + k) -
                                 static_cast<std::ptrdiff_t>(half);
      const std::size_t idx = static_cast<std::size_t>(
          std::clamp<std::ptrdiff_t>(raw, 0, static_cast<std::ptrdiff_t>(t_total) - 1));
      sum += signal[idx];
    }
    out[t] = static_cast<float>(sum / static_cast<double>(window));
  }
  return out;
}

std::vector<float> sobel_1d(std::span<const float> signal) {
  const std::size_t t_total = signal.size();
  if (t_total < 3) throw param_error("sobel_1d: signal must have at least 3 samples");
  std::vector<float> out(t_total);
  for (std::size_t t = 0; t < t_total; ++t) {
    const std::size_t prev = t == 0 ? 0 : t - 1;
    const std::size_t next = t + 1 == t_total ? t : t + 1;
    out[t] = 0.5f * (signal[next] - signal[prev]);
  }
  return out;
}

Template extract_template(std::span<const float> signal, std::size_t signal_index,
                          const ExtractParams& params) {
  const std::size_t t_total = signal.size();
  if (params.min_flat_len == 0)
    throw param_error("extract_template: min_flat_len must be positive");
  if (t_total < std::max<std::size_t>(3, params.min_flat_len))
    throw param_error("extract_template: degenerate input, shorter than min_flat_len");

  const std::size_t window = std::min(params.smooth_window, (t_total - 1) | 1);
  const std::vector<float> sm = smooth(signal, window);
  const std::vector<float> slope = sobel_1d(sm);

  // Maximal runs where the smoothed slope stays within the flatness budget.
  struct Run {
    std::size_t begin, end;  // [begin, end] inclusive
    float level;
  };
  std::vector<Run> runs;
  std::size_t t = 0;
  while (t < t_total) {
    if (std::fabs(slope[t]) <= params.flat_slope_eps) {
      std::size_t e = t;
      while (e + 1 < t_total && std::fabs(slope[e + 1]) <= params.flat_slope_eps) ++e;
      if (e - t + 1 >= params.min_flat_len)
        runs.push_back({t, e, clamp01(mean(sm, t, e + 1))});
      t = e + 1;
    } else {
      ++t;
    }
  }

  std::vector<Breakpoint> bps;
  if (runs.empty()) {
    // Nothing flat: reduce to a straight line between the endpoint means.
    const std::size_t head = std::min(params.min_flat_len, t_total);
    bps.push_back({0, clamp01(mean(sm, 0, head))});
    bps.push_back({t_total - 1, clamp01(mean(sm, t_total - head, t_total))});
  } else {
    if (runs.front().begin > 0) bps.push_back({0, clamp01(sm.front())});
    for (const Run& r : runs) {
      bps.push_back({r.begin, r.level});
      if (r.end > r.begin) bps.push_back({r.end, r.level});
    }
    if (runs.back().end < t_total - 1) bps.push_back({t_total - 1, clamp01(sm.back())});
  }
  return make_template(std::move(bps), signal_index);
}

std::vector<PairedSample> build_paired_dataset(const std::vector<Maneuver>& maneuvers,
                                               const ExtractParams& params) {
  std::vector<PairedSample> out;
  out.reserve(maneuvers.size());
  for (const Maneuver& m : maneuvers) {
    if (m.channels == 0 || m.length == 0)
      throw shape_error("build_paired_dataset: empty maneuver");
    PairedSample p;
    p.maneuver = m;
    p.templates.reserve(m.channels);
    for (std::size_t c = 0; c < m.channels; ++c)
      p.templates.push_back(extract_template(m.channel(c), c, params));
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace silgan::templates
