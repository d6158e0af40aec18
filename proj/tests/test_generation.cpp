#include <cstdint>
#include <random>
#include <vector>

#include <doctest.h>
#include <torch/torch.h>

#include "silgan/generation.hpp"
#include "silgan/model_core.hpp"

using namespace silgan;
using model::ModelConfig;

namespace {

Template ramp_template(std::size_t len, float lo, float hi, std::size_t signal) {
  return make_template({{0, lo}, {len - 1, hi}}, signal);
}

}  // namespace

TEST_CASE("simplex validation enforces the unit-sum constraint") {
  CHECK_NOTHROW(gen::validate_simplex({{1.0}}));
  CHECK_NOTHROW(gen::validate_simplex({{0.25, 0.75}}));
  CHECK_THROWS_AS(gen::validate_simplex({{}}), param_error);
  CHECK_THROWS_AS(gen::validate_simplex({{0.5, 0.6}}), param_error);
  CHECK_THROWS_AS(gen::validate_simplex({{-0.1, 1.1}}), param_error);
}

TEST_CASE("order-one simplex draws do not consume randomness") {
  std::mt19937_64 a(99), b(99);
  const gen::Simplex s = gen::sample_simplex(1, a);
  REQUIRE(s.alpha.size() == 1);
  CHECK(s.alpha[0] == 1.0);
  CHECK(a() == b());  // the generator state is untouched

  CHECK_THROWS_AS(gen::sample_simplex(0, a), param_error);
}

TEST_CASE("simplex draws are valid mixing weights") {
  std::mt19937_64 rng(7);
  for (std::size_t k : {2, 3, 8}) {
    for (int rep = 0; rep < 200; ++rep) {
      const gen::Simplex s = gen::sample_simplex(k, rng);
      REQUIRE(s.alpha.size() == k);
      CHECK_NOTHROW(gen::validate_simplex(s));
    }
  }
}

TEST_CASE("mixing at a vertex returns that code bit-exactly") {
  std::vector<torch::Tensor> codes = {torch::rand({1, 4, 8}), torch::rand({1, 4, 8}),
                                      torch::rand({1, 4, 8})};
  for (std::size_t i = 0; i < codes.size(); ++i) {
    gen::Simplex vertex;
    vertex.alpha.assign(codes.size(), 0.0);
    vertex.alpha[i] = 1.0;
    CHECK(torch::equal(gen::mix_codes(codes, vertex), codes[i]));
  }

  gen::Simplex uneven;
  uneven.alpha = {0.5, 0.5};
  CHECK_THROWS_AS(gen::mix_codes(codes, uneven), shape_error);
}

TEST_CASE("maneuver tensor conversions are inverses") {
  Maneuver m(3, 16);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  for (float& v : m.values) v = unit(rng);
  const Maneuver back = gen::maneuver_from_tensor(gen::maneuver_to_tensor(m));
  CHECK(back.values == m.values);
  CHECK(back.channels == m.channels);
  CHECK(back.length == m.length);

  CHECK_THROWS_AS(gen::maneuver_from_tensor(torch::rand({2, 3, 16})), shape_error);
}

TEST_CASE("translation is deterministic in the seed") {
  auto m = model::make_model(ModelConfig::tiny(), 21);
  const Template t = ramp_template(m->cfg.n, 0.1f, 0.7f, 0);

  const auto a = gen::translate(m, t, 3, 5);
  const auto b = gen::translate(m, t, 3, 5);
  const auto c = gen::translate(m, t, 3, 6);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(a[i].values == b[i].values);
    CHECK(a[i].channels == 3);
    CHECK(a[i].length == static_cast<std::size_t>(m->cfg.n));
  }
  // a different seed draws different styles
  bool any_diff = false;
  for (std::size_t i = 0; i < 3; ++i) any_diff = any_diff || a[i].values != c[i].values;
  CHECK(any_diff);
}

TEST_CASE("a one-template scenario reproduces plain translation bit-exactly") {
  auto m = model::make_model(ModelConfig::tiny(), 22);
  const Template t = ramp_template(m->cfg.n, 0.2f, 0.6f, 1);
  Scenario s;
  s.templates.push_back(t);

  const auto direct = gen::translate(m, t, 4, 31);
  const auto via_scenario = gen::generate_from_scenario(m, s, 4, 31);
  REQUIRE(direct.size() == via_scenario.size());
  for (std::size_t i = 0; i < direct.size(); ++i)
    CHECK(direct[i].values == via_scenario[i].values);
}

TEST_CASE("scenario traces let a sample be reproduced exactly") {
  auto m = model::make_model(ModelConfig::tiny(), 23);
  Scenario s;
  s.templates.push_back(ramp_template(m->cfg.n, 0.1f, 0.5f, 0));
  s.templates.push_back(ramp_template(m->cfg.n, 0.8f, 0.2f, 0));
  s.templates.push_back(ramp_template(m->cfg.n, 0.4f, 0.4f, 2));

  std::vector<gen::ScenarioTrace> traces;
  const auto out = gen::generate_from_scenario(m, s, 5, 17, &traces);
  REQUIRE(traces.size() == 5);

  torch::NoGradGuard ng;
  std::vector<torch::Tensor> codes;
  for (const Template& t : s.templates) codes.push_back(gen::encode_template_values(m, t));

  for (std::size_t i = 0; i < out.size(); ++i) {
    CHECK_NOTHROW(gen::validate_simplex(traces[i].alpha));
    REQUIRE(traces[i].c2.size() == static_cast<std::size_t>(m->cfg.style_dim));
    torch::Tensor c2 = torch::empty({1, m->cfg.style_dim}, torch::kFloat32);
    std::copy(traces[i].c2.begin(), traces[i].c2.end(), c2.data_ptr<float>());
    const torch::Tensor mixed = gen::mix_codes(codes, traces[i].alpha);
    const Maneuver redo = gen::maneuver_from_tensor(m->generate_maneuver(mixed, c2));
    CHECK(redo.values == out[i].values);
  }
}

TEST_CASE("expansion embeds the input block unmodified at the documented offset") {
  auto m = model::make_model(ModelConfig::tiny(), 24);
  const auto& cfg = m->cfg;
  const std::int64_t flank = cfg.m - cfg.n;

  Maneuver x12(static_cast<std::size_t>(cfg.channels), static_cast<std::size_t>(cfg.n));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<float> unit(0.0f, 1.0f);
  for (float& v : x12.values) v = unit(rng);

  for (std::int64_t p : {std::int64_t{0}, std::int64_t{7}, flank}) {
    const Maneuver big = gen::expand_maneuver(m, x12, p, 77);
    REQUIRE(big.length == static_cast<std::size_t>(cfg.m));
    const std::size_t off = static_cast<std::size_t>(flank - p);
    for (std::size_t c = 0; c < x12.channels; ++c)
      for (std::size_t t = 0; t < x12.length; ++t)
        REQUIRE(big.at(c, off + t) == x12.at(c, t));
  }

  // the sentinel centers the block
  const Maneuver centered = gen::expand_maneuver(m, x12, gen::kCenterCrop, 77);
  const std::size_t off = static_cast<std::size_t>(flank - flank / 2);
  for (std::size_t t = 0; t < x12.length; ++t)
    CHECK(centered.at(0, off + t) == x12.at(0, t));

  // same expansion seed, same flanks; different seed, different flanks
  const Maneuver again = gen::expand_maneuver(m, x12, 0, 77);
  CHECK(again.values == gen::expand_maneuver(m, x12, 0, 77).values);
  CHECK(again.values != gen::expand_maneuver(m, x12, 0, 78).values);

  CHECK_THROWS_AS(gen::expand_maneuver(m, x12, -2, 77), param_error);
  CHECK_THROWS_AS(gen::expand_maneuver(m, x12, flank + 1, 77), param_error);
  Maneuver wrong(static_cast<std::size_t>(cfg.channels), 16);
  CHECK_THROWS_AS(gen::expand_maneuver(m, wrong, 0, 77), shape_error);
}

TEST_CASE("scenario validation rejects mismatched members") {
  Scenario s;
  CHECK_THROWS_AS(validate_scenario(s), param_error);
  s.templates.push_back(ramp_template(32, 0.1f, 0.5f, 0));
  CHECK_NOTHROW(validate_scenario(s));
  s.templates.push_back(ramp_template(16, 0.1f, 0.5f, 0));  // different length
  CHECK_THROWS_AS(validate_scenario(s), param_error);
}
