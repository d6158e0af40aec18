#include "silgan/synth_data.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

#include "silgan/sild_io.hpp"

namespace silgan::sim {

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

SegmentKind draw_segment(const SegmentMix& mix, std::mt19937_64& rng) {
  const double total = mix.stop + mix.accelerate + mix.cruise + mix.decelerate;
  std::uniform_real_distribution<double> u(0.0, total);
  double x = u(rng);
  if ((x -= mix.stop) < 0.0) return SegmentKind::Stop;
  if ((x -= mix.accelerate) < 0.0) return SegmentKind::Accelerate;
  if ((x -= mix.cruise) < 0.0) return SegmentKind::Cruise;
  return SegmentKind::Decelerate;
}

}  // namespace

SimConfig SimConfig::defaults() {
  SimConfig c;
  c.shift_up_speeds.resize(c.n_gears);
  c.shift_down_speeds.resize(c.n_gears);
  for (std::uint32_t g = 0; g < c.n_gears; ++g) {
    c.shift_up_speeds[g] = 0.06 + 0.068 * g;
    c.shift_down_speeds[g] = c.shift_up_speeds[g] - 0.035;
  }
  return c;
}

void validate_config(const SimConfig& config) {
  if (config.duration_s == 0) throw config_error("sim config: duration must be positive");
  if (config.n_gears == 0) throw config_error("sim config: n_gears must be positive");
  if (!(config.idle_frac > 0.0 && config.idle_frac < 1.0))
    throw config_error("sim config: idle_frac must be in (0,1)");
  if (config.shift_up_speeds.size() != config.n_gears ||
      config.shift_down_speeds.size() != config.n_gears)
    throw config_error("sim config: need one up and one down threshold per gear step");
  for (std::uint32_t g = 0; g + 1 < config.n_gears; ++g) {
    if (!(config.shift_up_speeds[g] < config.shift_up_speeds[g + 1]))
      throw config_error("sim config: shift-up thresholds must be strictly increasing");
    if (!(config.shift_down_speeds[g] < config.shift_down_speeds[g + 1]))
      throw config_error("sim config: shift-down thresholds must be strictly increasing");
  }
  for (std::uint32_t g = 0; g < config.n_gears; ++g) {
    // shift_down_speeds[g] guards leaving gear g+1 downward, i.e. down[g+1].
    if (!(config.shift_up_speeds[g] - config.shift_down_speeds[g] > 0.0))
      throw config_error("sim config: hysteresis gap up[g] - down[g+1] must be positive");
  }
  const SegmentMix& m = config.segment_mix;
  if (m.stop < 0 || m.accelerate < 0 || m.cruise < 0 || m.decelerate < 0 ||
      m.stop + m.accelerate + m.cruise + m.decelerate <= 0.0)
    throw config_error("sim config: segment mix must be nonnegative with positive total");
  if (config.accel_limit <= 0.0 || config.decel_limit <= 0.0)
    throw config_error("sim config: rate limits must be positive");
  if (config.min_segment_s == 0 || config.min_segment_s > config.max_segment_s)
    throw config_error("sim config: bad segment duration bounds");
}

Maneuver simulate_maneuver(const SimConfig& config, std::uint64_t seed) {
  validate_config(config);
  const std::uint32_t t_total = config.duration_s;
  const std::uint32_t gears = config.n_gears;
  Maneuver m(3, t_total);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  double speed = 0.0;
  std::uint32_t gear = 0;
  std::uint32_t remaining = 0;
  SegmentKind kind = SegmentKind::Stop;
  double target = 0.0;

  for (std::uint32_t t = 0; t < t_total; ++t) {
    if (remaining == 0) {
      kind = draw_segment(config.segment_mix, rng);
      remaining = config.min_segment_s +
                  static_cast<std::uint32_t>(unit(rng) * (config.max_segment_s -
                                                          config.min_segment_s + 1));
      switch (kind) {
        case SegmentKind::Stop:
          target = 0.0;
          break;
        case SegmentKind::Accelerate:
          target = clamp01(speed + 0.15 + 0.45 * unit(rng));
          break;
        case SegmentKind::Cruise:
          target = speed;
          break;
        case SegmentKind::Decelerate:
          target = speed * (0.5 * unit(rng));
          break;
      }
    }
    --remaining;

    if (target > speed) {
      speed = std::min(target, speed + config.accel_limit * (0.6 + 0.4 * unit(rng)));
    } else if (target < speed) {
      speed = std::max(target, speed - config.decel_limit * (0.6 + 0.4 * unit(rng)));
    } else if (kind == SegmentKind::Cruise) {
      speed = clamp01(speed + 0.25 * config.accel_limit * (2.0 * unit(rng) - 1.0));
    }

    while (gear < gears && speed >= config.shift_up_speeds[gear]) ++gear;
    while (gear > 0 && speed <= config.shift_down_speeds[gear - 1]) --gear;

    double engine = config.idle_frac;
    if (gear > 0) {
      const double ratio = gear < gears ? config.shift_up_speeds[gear]
                                        : config.shift_up_speeds[gears - 1] * 1.08;
      engine = config.idle_frac + config.engine_gain * speed / ratio;
      engine += config.engine_noise * (2.0 * unit(rng) - 1.0);
    }
    engine = std::clamp(engine, config.idle_frac, 1.0);

    m.at(0, t) = static_cast<float>(clamp01(speed));
    m.at(1, t) = static_cast<float>(engine);
    m.at(2, t) = static_cast<float>(gear) / static_cast<float>(gears);
  }
  return m;
}

std::vector<Maneuver> simulate_batch(const SimConfig& config, std::uint32_t count,
                                     std::uint32_t t, std::uint64_t seed) {
  SimConfig c = config;
  c.duration_s = t;
  validate_config(c);
  std::vector<Maneuver> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i)
    out.push_back(simulate_maneuver(c, substream(seed, i)));
  return out;
}

std::string build_dataset(const SimConfig& config, std::uint32_t count, std::uint32_t t,
                          std::uint64_t seed, const std::string& path) {
  const std::vector<Maneuver> maneuvers = simulate_batch(config, count, t, seed);
  io::save_dataset(maneuvers, path);

  nlohmann::json manifest;
  manifest["seed"] = seed;
  manifest["count"] = count;
  manifest["T"] = t;
  manifest["signal_names"] = kSignalNames;
  nlohmann::json cfg;
  cfg["duration_s"] = config.duration_s;
  cfg["n_gears"] = config.n_gears;
  cfg["idle_frac"] = config.idle_frac;
  cfg["shift_up_speeds"] = config.shift_up_speeds;
  cfg["shift_down_speeds"] = config.shift_down_speeds;
  cfg["accel_limit"] = config.accel_limit;
  cfg["decel_limit"] = config.decel_limit;
  cfg["engine_gain"] = config.engine_gain;
  cfg["engine_noise"] = config.engine_noise;
  cfg["segment_mix"] = {{"stop", config.segment_mix.stop},
                        {"accelerate", config.segment_mix.accelerate},
                        {"cruise", config.segment_mix.cruise},
                        {"decelerate", config.segment_mix.decelerate}};
  cfg["min_segment_s"] = config.min_segment_s;
  cfg["max_segment_s"] = config.max_segment_s;
  manifest["config"] = cfg;
  io::write_file(path + ".manifest.json", manifest.dump(2) + "\n");
  return path;
}

}  // namespace silgan::sim
