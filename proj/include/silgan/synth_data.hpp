#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "silgan/data.hpp"

namespace silgan::sim {

/// Driving segment kinds sampled by the synthetic driveline model.
enum class SegmentKind { Stop = 0, Accelerate = 1, Cruise = 2, Decelerate = 3 };

struct SegmentMix {
  double stop = 0.15;
  double accelerate = 0.35;
  double cruise = 0.35;
  double decelerate = 0.15;
};

/// Configuration of the synthetic longitudinal driveline simulator.
/// All speeds are normalized to [0,1]; rate limits are per second.
struct SimConfig {
  std::uint32_t duration_s = 512;
  std::uint32_t n_gears = 12;           // top gear index; the channel grid is {0, 1/G, ..., 1}
  double idle_frac = 0.12;              // engine idle as fraction of max engine speed
  std::vector<double> shift_up_speeds;  // up[g]: speed to shift g -> g+1, g in [0, n_gears)
  std::vector<double> shift_down_speeds;  // down[g]: speed to shift g -> g-1, g in [1, n_gears]
  double accel_limit = 0.010;
  double decel_limit = 0.016;
  double engine_gain = 0.55;
  double engine_noise = 0.015;
  SegmentMix segment_mix;
  std::uint32_t min_segment_s = 20;
  std::uint32_t max_segment_s = 90;
  std::uint64_t seed = 0;

  /// Takeoff threshold: above this speed the gearbox leaves neutral.
  double takeoff_threshold() const { return shift_up_speeds.empty() ? 0.0 : shift_up_speeds[0]; }

  static SimConfig defaults();
};

/// Throws config_error when shift thresholds are not strictly increasing or
/// the hysteresis gap up[g] - down[g+1] is not positive.
void validate_config(const SimConfig& config);

/// Simulates one maneuver of (vehicle speed, engine speed, selected gear).
/// Pure in (config, seed).
Maneuver simulate_maneuver(const SimConfig& config, std::uint64_t seed);

/// Simulates `count` maneuvers of duration T and writes them as a SILD file
/// plus a JSON manifest beside it. Returns the dataset path.
std::string build_dataset(const SimConfig& config, std::uint32_t count, std::uint32_t t,
                          std::uint64_t seed, const std::string& path);

std::vector<Maneuver> simulate_batch(const SimConfig& config, std::uint32_t count,
                                     std::uint32_t t, std::uint64_t seed);

}  // namespace silgan::sim
