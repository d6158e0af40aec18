#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>
#include <torch/torch.h>

#include "silgan/model_core.hpp"
#include "silgan/synth_data.hpp"
#include "silgan/template_extract.hpp"
#include "silgan/training.hpp"

using namespace silgan;
using model::ModelConfig;

namespace {

std::filesystem::path tmp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("silgan_train_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

struct TinyData {
  std::vector<templates::PairedSample> paired;
  std::vector<Maneuver> longs;
};

TinyData tiny_data(std::size_t pairs, std::size_t longs, std::uint64_t seed) {
  const sim::SimConfig cfg = sim::SimConfig::defaults();
  TinyData d;
  d.paired = templates::build_paired_dataset(
      sim::simulate_batch(cfg, static_cast<std::uint32_t>(pairs), 32, seed));
  d.longs = sim::simulate_batch(cfg, static_cast<std::uint32_t>(longs), 64, seed + 1);
  return d;
}

/// Drops the trailing wall-clock column from one CSV row.
std::string strip_wall(const std::string& row) {
  return row.substr(0, row.rfind(','));
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

bool params_bitwise_equal(const model::Model& a, const model::Model& b) {
  auto pa = a->named_parameters();
  auto pb = b->named_parameters();
  if (pa.size() != pb.size()) return false;
  for (const auto& item : pa)
    if (!torch::equal(item.value(), *pb.find(item.key()))) return false;
  return true;
}

}  // namespace

TEST_CASE("train config validation") {
  train::TrainConfig c;
  CHECK_NOTHROW(train::validate_train_config(c));
  c.epochs = 0;
  CHECK_THROWS_AS(train::validate_train_config(c), config_error);
  c = {};
  c.batch_size = 0;
  CHECK_THROWS_AS(train::validate_train_config(c), config_error);
  c = {};
  c.lr_gen = -1e-4;
  CHECK_THROWS_AS(train::validate_train_config(c), config_error);
  c = {};
  c.beta1 = 1.0;
  CHECK_THROWS_AS(train::validate_train_config(c), config_error);
  c = {};
  c.eval_samples_per_template = 0;
  CHECK_THROWS_AS(train::validate_train_config(c), config_error);
}

TEST_CASE("training rejects data that does not fit the model") {
  auto m = model::make_model(ModelConfig::tiny(), 1);
  train::TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 2;

  const TinyData good = tiny_data(4, 2, 7);
  CHECK_THROWS_AS(train::train(m, {}, good.longs, cfg), config_error);
  CHECK_THROWS_AS(train::train(m, good.paired, {}, cfg), config_error);

  // paired maneuvers of the wrong length
  const sim::SimConfig sc = sim::SimConfig::defaults();
  auto short_paired =
      templates::build_paired_dataset(sim::simulate_batch(sc, 2, 16, 3));
  CHECK_THROWS_AS(train::train(m, short_paired, good.longs, cfg), shape_error);

  // length-M data that is not length M
  auto bad_longs = sim::simulate_batch(sc, 2, 32, 3);
  CHECK_THROWS_AS(train::train(m, good.paired, bad_longs, cfg), shape_error);
}

TEST_CASE("step count is epochs times floor(pairs / batch)") {
  auto m = model::make_model(ModelConfig::tiny(), 2);
  const TinyData d = tiny_data(9, 3, 11);
  train::TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 4;  // 9/4 -> 2 steps per epoch
  const auto r = train::train(m, d.paired, d.longs, cfg);
  CHECK(r.steps == 4);
  CHECK(std::isfinite(r.step0_gen_adv));
  CHECK(std::isfinite(r.final_gen_adv));
  CHECK(std::isfinite(r.final_composite));

  // a batch larger than the dataset still trains one step per epoch
  auto m2 = model::make_model(ModelConfig::tiny(), 2);
  train::TrainConfig cfg2;
  cfg2.epochs = 3;
  cfg2.batch_size = 64;
  CHECK(train::train(m2, d.paired, d.longs, cfg2).steps == 3);
}

TEST_CASE("metrics and checkpoints are reproducible for a fixed seed") {
  const TinyData d = tiny_data(8, 3, 19);
  const auto csv_a = tmp_path("ma.csv"), csv_b = tmp_path("mb.csv");
  const auto ck_a = tmp_path("ma.silc"), ck_b = tmp_path("mb.silc");

  train::TrainConfig cfg;
  cfg.epochs = 2;
  cfg.batch_size = 4;
  cfg.seed = 5;

  auto ma = model::make_model(ModelConfig::tiny(), 30);
  cfg.metrics_path = csv_a.string();
  cfg.checkpoint_path = ck_a.string();
  train::train(ma, d.paired, d.longs, cfg);

  auto mb = model::make_model(ModelConfig::tiny(), 30);
  cfg.metrics_path = csv_b.string();
  cfg.checkpoint_path = ck_b.string();
  train::train(mb, d.paired, d.longs, cfg);

  const auto la = read_lines(csv_a), lb = read_lines(csv_b);
  REQUIRE(la.size() == lb.size());
  REQUIRE(la.size() == 5);  // header + 4 steps
  CHECK(la[0] ==
        "step,gen_tran,dis_tran,pair,cyc,gen_exp,dis_exp,id1,id2,cr2,cr3,"
        "gen_total,dis_total,wall_ms");
  for (std::size_t i = 1; i < la.size(); ++i) CHECK(strip_wall(la[i]) == strip_wall(lb[i]));

  CHECK(slurp(ck_a) == slurp(ck_b));
  CHECK(params_bitwise_equal(ma, mb));

  for (const auto& p : {csv_a, csv_b, ck_a, ck_b}) std::filesystem::remove(p);
}

TEST_CASE("zero learning rates leave every parameter bitwise unchanged") {
  auto m = model::make_model(ModelConfig::tiny(), 8);
  auto reference = model::make_model(ModelConfig::tiny(), 8);
  const TinyData d = tiny_data(4, 2, 23);

  train::TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 4;
  cfg.lr_gen = 0.0;
  cfg.lr_dis = 0.0;
  train::train(m, d.paired, d.longs, cfg);
  CHECK(params_bitwise_equal(m, reference));
}

TEST_CASE("a zero generator rate freezes exactly the generator group") {
  auto m = model::make_model(ModelConfig::tiny(), 9);
  auto reference = model::make_model(ModelConfig::tiny(), 9);
  const TinyData d = tiny_data(4, 2, 29);

  train::TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 4;
  cfg.lr_gen = 0.0;
  const auto gen_a = m->generator_parameters();
  const auto gen_b = reference->generator_parameters();
  train::train(m, d.paired, d.longs, cfg);
  for (std::size_t i = 0; i < gen_a.size(); ++i)
    CHECK(torch::equal(gen_a[i], gen_b[i]));

  const auto dis_a = m->discriminator_parameters();
  const auto dis_b = reference->discriminator_parameters();
  bool any_moved = false;
  for (std::size_t i = 0; i < dis_a.size(); ++i)
    any_moved = any_moved || !torch::equal(dis_a[i], dis_b[i]);
  CHECK(any_moved);
}

TEST_CASE("optimizer groups partition the parameter set") {
  auto m = model::make_model(ModelConfig::tiny(), 10);
  const auto gen = m->generator_parameters();
  const auto dis = m->discriminator_parameters();
  const auto all = m->named_parameters();

  std::set<const void*> seen;
  for (const auto& t : gen) CHECK(seen.insert(t.data_ptr()).second);
  for (const auto& t : dis) CHECK(seen.insert(t.data_ptr()).second);
  CHECK(gen.size() + dis.size() == all.size());
  for (const auto& item : all) CHECK(seen.count(item.value().data_ptr()) == 1);
}

TEST_CASE("a poisoned weight surfaces as a named non-finite loss") {
  auto m = model::make_model(ModelConfig::tiny(), 12);
  {
    torch::NoGradGuard ng;
    m->g2->head->weight.fill_(std::numeric_limits<float>::quiet_NaN());
  }
  const TinyData d = tiny_data(4, 2, 31);
  train::TrainConfig cfg;
  cfg.epochs = 1;
  cfg.batch_size = 4;
  try {
    train::train(m, d.paired, d.longs, cfg);
    FAIL("expected numeric_error");
  } catch (const numeric_error& e) {
    CHECK(std::string(e.what()).find("train: non-finite") != std::string::npos);
    CHECK(std::string(e.what()).find("at step 0") != std::string::npos);
  }
}

TEST_CASE("a perfect cycle stub scores exactly 1") {
  std::vector<Template> ts = {make_template({{0, 0.1f}, {31, 0.8f}}, 0),
                              make_template({{0, 0.5f}, {15, 0.2f}, {31, 0.6f}}, 1)};
  train::CycleFn perfect = [](const Template& t, std::size_t) { return t.values; };
  CHECK(train::evaluate_cycle_ssim(perfect, ts, 3) == 1.0);

  train::CycleFn wrong_len = [](const Template& t, std::size_t) {
    return std::vector<float>(t.values.size() + 1, 0.5f);
  };
  CHECK_THROWS_AS(train::evaluate_cycle_ssim(wrong_len, ts, 1), shape_error);
  CHECK_THROWS_AS(train::evaluate_cycle_ssim(perfect, {}, 1), param_error);
  CHECK_THROWS_AS(train::evaluate_cycle_ssim(perfect, ts, 0), param_error);
}

TEST_CASE("an untrained model does not reproduce its templates") {
  auto m = model::make_model(ModelConfig::tiny(), 13);
  std::vector<Template> ts;
  for (int i = 0; i < 8; ++i) {
    const float lo = 0.1f + 0.08f * static_cast<float>(i);
    ts.push_back(make_template({{0, lo}, {31, 0.9f - lo}}, static_cast<std::size_t>(i % 3)));
  }
  const double s = train::evaluate_cycle_ssim(m, ts, 2, 7);
  CHECK(s < 0.5);  // measured ~0.10 for fresh tiny models across init seeds
  CHECK(s >= 0.0);

  // deterministic in the seed
  CHECK(train::evaluate_cycle_ssim(m, ts, 2, 7) == s);
  CHECK(train::evaluate_cycle_ssim(m, ts, 2, 8) != s);
}
