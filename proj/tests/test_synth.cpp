#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>

#include <doctest.h>
#include <json.hpp>

#include "silgan/sild_io.hpp"
#include "silgan/synth_data.hpp"

using namespace silgan;

TEST_CASE("default simulator config is self-consistent") {
  CHECK_NOTHROW(sim::validate_config(sim::SimConfig::defaults()));
}

TEST_CASE("config validation rejects broken shift curves and mixes") {
  sim::SimConfig c = sim::SimConfig::defaults();
  c.shift_up_speeds[3] = c.shift_up_speeds[2];  // not strictly increasing
  CHECK_THROWS_AS(sim::validate_config(c), config_error);

  c = sim::SimConfig::defaults();
  c.shift_down_speeds[4] = c.shift_up_speeds[4] + 0.01;  // hysteresis gap gone
  CHECK_THROWS_AS(sim::validate_config(c), config_error);

  c = sim::SimConfig::defaults();
  c.segment_mix.cruise = -0.2;
  CHECK_THROWS_AS(sim::validate_config(c), config_error);

  c = sim::SimConfig::defaults();
  c.accel_limit = 0.0;
  CHECK_THROWS_AS(sim::validate_config(c), config_error);

  c = sim::SimConfig::defaults();
  c.min_segment_s = 100;
  c.max_segment_s = 50;
  CHECK_THROWS_AS(sim::validate_config(c), config_error);
}

TEST_CASE("an all-stop mix never leaves standstill") {
  sim::SimConfig c = sim::SimConfig::defaults();
  c.segment_mix = {1.0, 0.0, 0.0, 0.0};
  for (std::uint64_t seed : {0u, 1u, 2u, 3u}) {
    const Maneuver m = sim::simulate_maneuver(c, seed);
    REQUIRE(m.channels == 3);
    REQUIRE(m.length == c.duration_s);
    for (std::size_t t = 0; t < m.length; ++t) {
      CHECK(m.at(0, t) < c.takeoff_threshold());
      CHECK(m.at(2, t) == 0.0f);  // gear stays neutral
      // engine sits near idle: idle + noise, never below idle
      CHECK(m.at(1, t) >= static_cast<float>(c.idle_frac));
      CHECK(m.at(1, t) < static_cast<float>(c.idle_frac + 0.1));
    }
  }
}

TEST_CASE("a pure-accelerate mix reaches high speed and the upper gears") {
  sim::SimConfig c = sim::SimConfig::defaults();
  c.segment_mix = {0.0, 1.0, 0.0, 0.0};
  int reached_top_half = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Maneuver m = sim::simulate_maneuver(c, seed);
    float top_speed = 0.0f, top_gear = 0.0f;
    for (std::size_t t = 0; t < m.length; ++t) {
      top_speed = std::max(top_speed, m.at(0, t));
      top_gear = std::max(top_gear, m.at(2, t));
    }
    CHECK(top_speed > 0.5f);
    if (top_gear > 0.5f) ++reached_top_half;
  }
  CHECK(reached_top_half == 10);
}

TEST_CASE("all channels stay in the unit interval and gears on their grid") {
  const sim::SimConfig c = sim::SimConfig::defaults();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Maneuver m = sim::simulate_maneuver(c, seed);
    for (std::size_t ch = 0; ch < 3; ++ch)
      for (std::size_t t = 0; t < m.length; ++t) {
        CHECK(m.at(ch, t) >= 0.0f);
        CHECK(m.at(ch, t) <= 1.0f);
      }
    for (std::size_t t = 0; t < m.length; ++t) {
      const float g = m.at(2, t) * static_cast<float>(c.n_gears);
      CHECK(std::abs(g - std::round(g)) < 1e-4f);
    }
  }
}

TEST_CASE("the gearbox shifts one step at a time") {
  const sim::SimConfig c = sim::SimConfig::defaults();
  const float step = 1.0f / static_cast<float>(c.n_gears);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Maneuver m = sim::simulate_maneuver(c, seed);
    for (std::size_t t = 1; t < m.length; ++t)
      CHECK(std::abs(m.at(2, t) - m.at(2, t - 1)) <= step + 1e-6f);
  }
}

TEST_CASE("engine speed stays within the idle-to-max band") {
  const sim::SimConfig c = sim::SimConfig::defaults();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Maneuver m = sim::simulate_maneuver(c, seed);
    for (std::size_t t = 0; t < m.length; ++t) {
      CHECK(m.at(1, t) >= static_cast<float>(c.idle_frac) - 1e-6f);
      CHECK(m.at(1, t) <= 1.0f);
    }
  }
}

TEST_CASE("simulation is pure in (config, seed)") {
  const sim::SimConfig c = sim::SimConfig::defaults();
  const std::vector<Maneuver> a = sim::simulate_batch(c, 6, 128, 42);
  const std::vector<Maneuver> b = sim::simulate_batch(c, 6, 128, 42);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].values == b[i].values);
  const std::vector<Maneuver> other = sim::simulate_batch(c, 6, 128, 43);
  CHECK(a[0].values != other[0].values);
}

TEST_CASE("batch members do not depend on the batch layout") {
  const sim::SimConfig c = sim::SimConfig::defaults();
  const std::vector<Maneuver> six = sim::simulate_batch(c, 6, 64, 7);
  const std::vector<Maneuver> three = sim::simulate_batch(c, 3, 64, 7);
  for (std::size_t i = 0; i < three.size(); ++i) CHECK(six[i].values == three[i].values);
}

TEST_CASE("build_dataset writes a loadable container and a manifest") {
  const auto dir = std::filesystem::temp_directory_path();
  const std::string path = (dir / "silgan_synth_ds.sild").string();
  sim::build_dataset(sim::SimConfig::defaults(), 4, 96, 11, path);
  const std::vector<Maneuver> back = io::load_dataset(path);
  REQUIRE(back.size() == 4);
  CHECK(back[0].length == 96);

  std::ifstream mf(path + ".manifest.json");
  REQUIRE(mf.good());
  nlohmann::json j;
  mf >> j;
  CHECK(j["count"] == 4);
  CHECK(j["T"] == 96);
  CHECK(j["seed"] == 11);
  CHECK(j["signal_names"].size() == 3);
}
