#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include <doctest.h>

#include "silgan/ssim.hpp"

using namespace silgan;

namespace {

// Frozen closed form for two constants a, b with stabilizers (0.01)^2 and
// (0.03)^2: variances vanish, so every window scores
// (2ab + 1e-4) / (a^2 + b^2 + 1e-4), with a = double(0.2f), b = double(0.8f)
// because the inputs are float32 samples.
constexpr double kConst02vs08 = 0.4706660785155454;

std::vector<float> wave(std::size_t t_total, float amp, float phase) {
  std::vector<float> s(t_total);
  for (std::size_t t = 0; t < t_total; ++t)
    s[t] = 0.5f + amp * std::sin(2.0f * 3.14159265f * static_cast<float>(t) / 64.0f + phase);
  return s;
}

}  // namespace

TEST_CASE("identical signals score exactly 1") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  std::vector<float> a(200);
  for (float& v : a) v = unit(rng);
  CHECK(ssim_1d(a, a) == 1.0);

  // shorter than the window: scored as one full-length window, still exact
  std::vector<float> b(a.begin(), a.begin() + 8);
  CHECK(ssim_1d(b, b) == 1.0);
}

TEST_CASE("the score is symmetric in its arguments") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  std::vector<float> a(300), b(300);
  for (float& v : a) v = unit(rng);
  for (float& v : b) v = unit(rng);
  CHECK(ssim_1d(a, b) == ssim_1d(b, a));
}

TEST_CASE("two constants score the closed-form luminance ratio") {
  std::vector<float> a(128, 0.2f), b(128, 0.8f);
  CHECK(ssim_1d(a, b) == doctest::Approx(kConst02vs08).epsilon(1e-12));

  // the single-window path gives the same ratio — means are all that matter
  std::vector<float> sa(5, 0.2f), sb(5, 0.8f);
  CHECK(ssim_1d(sa, sb) == doctest::Approx(kConst02vs08).epsilon(1e-12));
}

TEST_CASE("scores stay within the unit interval") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  for (int rep = 0; rep < 20; ++rep) {
    std::vector<float> a(97), b(97);
    for (float& v : a) v = unit(rng);
    for (float& v : b) v = unit(rng);
    const double s = ssim_1d(a, b);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("similar signals outrank anti-correlated ones") {
  auto a = wave(256, 0.4f, 0.0f);
  auto near = a;
  for (std::size_t t = 0; t < near.size(); ++t)
    near[t] += 0.02f * std::sin(2.0f * 3.14159265f * static_cast<float>(t) / 8.0f + 1.0f);
  auto flipped = wave(256, -0.4f, 0.0f);  // phase-inverted, same mean

  const double s_near = ssim_1d(a, near);
  const double s_flip = ssim_1d(a, flipped);
  CHECK(s_near > 0.9);
  CHECK(s_flip < 0.1);
  CHECK(s_near > s_flip);
}

TEST_CASE("shape and parameter violations are rejected") {
  std::vector<float> a(64, 0.5f), b(65, 0.5f);
  CHECK_THROWS_AS(ssim_1d(a, b), shape_error);
  CHECK_THROWS_AS(ssim_1d(std::vector<float>{}, std::vector<float>{}), param_error);
  CHECK_THROWS_AS(ssim_1d(a, a, 0), param_error);
}

TEST_CASE("maneuver score is the channel mean") {
  Maneuver a(2, 100), b(2, 100);
  for (std::size_t t = 0; t < 100; ++t) {
    a.at(0, t) = 0.3f + 0.001f * static_cast<float>(t);
    b.at(0, t) = a.at(0, t);  // channel 0 identical -> 1.0
    a.at(1, t) = 0.2f;        // channel 1 is the frozen constant pair
    b.at(1, t) = 0.8f;
  }
  CHECK(ssim_maneuver(a, b) == doctest::Approx((1.0 + kConst02vs08) / 2.0).epsilon(1e-12));

  Maneuver c(3, 100);
  CHECK_THROWS_AS(ssim_maneuver(a, c), shape_error);
}
