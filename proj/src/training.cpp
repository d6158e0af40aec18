#include "silgan/training.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "silgan/generation.hpp"
#include "silgan/ssim.hpp"

namespace silgan::train {

namespace {

// Substream ids for the independent draw sequences of one training run.
enum : std::uint64_t {
  kOrderStream = 10,
  kLongOrderStream = 11,
  kStyleStream = 12,
  kExpansionStream = 13,
  kCropStream = 14,
  kChannelStream = 15,
};

struct Batch {
  torch::Tensor x1;      // (B,1,N)
  torch::Tensor l;       // (B) int64
  torch::Tensor x2;      // (B,L,N)
  torch::Tensor x3;      // (B,L,M)
  torch::Tensor c2, c3;  // (B,d_s) / (B,d_e)
  std::vector<std::int64_t> p;
};

class BatchSource {
 public:
  BatchSource(const std::vector<templates::PairedSample>& paired,
              const std::vector<Maneuver>& longs, const model::ModelConfig& mc,
              std::int64_t batch, std::uint64_t seed)
      : paired_(paired),
        longs_(longs),
        mc_(mc),
        batch_(batch),
        order_rng_(substream(seed, kOrderStream)),
        long_rng_(substream(seed, kLongOrderStream)),
        style_rng_(substream(seed, kStyleStream)),
        exp_rng_(substream(seed, kExpansionStream)),
        crop_rng_(substream(seed, kCropStream)),
        chan_rng_(substream(seed, kChannelStream)) {
    order_.resize(paired.size());
    std::iota(order_.begin(), order_.end(), 0u);
    long_order_.resize(longs.size());
    std::iota(long_order_.begin(), long_order_.end(), 0u);
    reshuffle_long();
  }

  void start_epoch() {
    std::shuffle(order_.begin(), order_.end(), order_rng_);
    cursor_ = 0;
  }

  std::int64_t steps_per_epoch() const {
    return std::max<std::int64_t>(
        1, static_cast<std::int64_t>(paired_.size()) / batch_);
  }

  Batch next() {
    const std::int64_t b =
        std::min<std::int64_t>(batch_, static_cast<std::int64_t>(paired_.size()));
    Batch out;
    out.x1 = torch::empty({b, 1, mc_.n}, torch::kFloat32);
    out.l = torch::empty({b}, torch::kInt64);
    out.x2 = torch::empty({b, mc_.channels, mc_.n}, torch::kFloat32);
    out.x3 = torch::empty({b, mc_.channels, mc_.m}, torch::kFloat32);
    std::uniform_int_distribution<std::int64_t> chan(0, mc_.channels - 1);
    std::uniform_int_distribution<std::int64_t> crop(0, mc_.m - mc_.n);
    for (std::int64_t i = 0; i < b; ++i) {
      if (cursor_ >= order_.size()) {
        std::shuffle(order_.begin(), order_.end(), order_rng_);
        cursor_ = 0;
      }
      const templates::PairedSample& s = paired_[order_[cursor_++]];
      const std::int64_t li = chan(chan_rng_);
      out.l[i] = li;
      const std::vector<float>& tv = s.templates[static_cast<std::size_t>(li)].values;
      std::copy(tv.begin(), tv.end(), out.x1[i][0].data_ptr<float>());
      std::copy(s.maneuver.values.begin(), s.maneuver.values.end(),
                out.x2[i].data_ptr<float>());

      if (long_cursor_ >= long_order_.size()) reshuffle_long();
      const Maneuver& lm = longs_[long_order_[long_cursor_++]];
      std::copy(lm.values.begin(), lm.values.end(), out.x3[i].data_ptr<float>());
      out.p.push_back(crop(crop_rng_));
    }
    out.c2 = draw_codes(b, mc_.style_dim, style_rng_);
    out.c3 = draw_codes(b, mc_.expansion_dim, exp_rng_);
    return out;
  }

 private:
  static torch::Tensor draw_codes(std::int64_t b, std::int64_t dim,
                                  std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    torch::Tensor c = torch::empty({b, dim}, torch::kFloat32);
    float* dst = c.data_ptr<float>();
    for (std::int64_t i = 0; i < b * dim; ++i)
      dst[i] = static_cast<float>(normal(rng));
    return c;
  }

  void reshuffle_long() {
    std::shuffle(long_order_.begin(), long_order_.end(), long_rng_);
    long_cursor_ = 0;
  }

  const std::vector<templates::PairedSample>& paired_;
  const std::vector<Maneuver>& longs_;
  model::ModelConfig mc_;
  std::int64_t batch_;
  std::vector<std::size_t> order_, long_order_;
  std::size_t cursor_ = 0, long_cursor_ = 0;
  std::mt19937_64 order_rng_, long_rng_, style_rng_, exp_rng_, crop_rng_, chan_rng_;
};

torch::Tensor crop_batch(const torch::Tensor& f1, const torch::Tensor& x12,
                         const torch::Tensor& f2, const std::vector<std::int64_t>& p) {
  const torch::Tensor full = torch::cat({f1, x12, f2}, 2);
  const std::int64_t m = f1.size(2) + x12.size(2);
  std::vector<torch::Tensor> rows;
  rows.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    rows.push_back(full[static_cast<std::int64_t>(i)].narrow(1, p[i], m));
  return torch::stack(rows);
}

double finite_item(const torch::Tensor& t, const char* term, std::int64_t step) {
  const double v = t.item<double>();
  if (!std::isfinite(v))
    throw numeric_error(std::string("train: non-finite ") + term + " at step " +
                        std::to_string(step));
  return v;
}

struct StepLog {
  double gen_tran, dis_tran, pair, cyc, gen_exp, dis_exp, id1, id2, cr2, cr3;
  double gen_total, dis_total;
};

}  // namespace

void validate_train_config(const TrainConfig& cfg) {
  if (cfg.epochs < 1) throw config_error("train config: epochs must be positive");
  if (cfg.batch_size < 1) throw config_error("train config: batch_size must be positive");
  if (cfg.lr_gen < 0 || cfg.lr_dis < 0)
    throw config_error("train config: learning rates must be nonnegative");
  if (cfg.beta1 < 0 || cfg.beta1 >= 1 || cfg.beta2 < 0 || cfg.beta2 >= 1)
    throw config_error("train config: betas must lie in [0,1)");
  if (cfg.eval_samples_per_template < 1)
    throw config_error("train config: eval draws must be positive");
}

TrainResult train(model::Model& m, const std::vector<templates::PairedSample>& paired,
                  const std::vector<Maneuver>& long_maneuvers, const TrainConfig& cfg) {
  validate_train_config(cfg);
  const model::ModelConfig& mc = m->cfg;
  if (paired.empty()) throw config_error("train: paired dataset is empty");
  if (long_maneuvers.empty()) throw config_error("train: length-M dataset is empty");
  for (const templates::PairedSample& s : paired) {
    if (s.templates.size() != static_cast<std::size_t>(mc.channels) ||
        s.maneuver.channels != static_cast<std::size_t>(mc.channels) ||
        s.maneuver.length != static_cast<std::size_t>(mc.n))
      throw shape_error("train: paired sample shape does not match the model config");
  }
  for (const Maneuver& x : long_maneuvers) {
    if (x.channels != static_cast<std::size_t>(mc.channels) ||
        x.length != static_cast<std::size_t>(mc.m))
      throw shape_error("train: length-M sample shape does not match the model config");
  }

  torch::optim::Adam opt_gen(
      m->generator_parameters(),
      torch::optim::AdamOptions(cfg.lr_gen).betas({cfg.beta1, cfg.beta2}));
  torch::optim::Adam opt_dis(
      m->discriminator_parameters(),
      torch::optim::AdamOptions(cfg.lr_dis).betas({cfg.beta1, cfg.beta2}));

  BatchSource source(paired, long_maneuvers, mc, cfg.batch_size, cfg.seed);

  std::ofstream metrics;
  if (!cfg.metrics_path.empty()) {
    metrics.open(cfg.metrics_path, std::ios::trunc);
    if (!metrics)
      throw io_error("train: cannot open metrics log " + cfg.metrics_path);
    metrics << "step,gen_tran,dis_tran,pair,cyc,gen_exp,dis_exp,id1,id2,cr2,cr3,"
               "gen_total,dis_total,wall_ms\n";
  }

  TrainResult result;
  StepLog log{};
  const auto t_start = std::chrono::steady_clock::now();

  auto forward_generator = [&](const Batch& b, std::int64_t step) {
    const torch::Tensor c1 = m->encode_template(b.x1, b.l);
    const torch::Tensor x12 = m->generate_maneuver(c1, b.c2);
    auto [c1_hat, c2_hat] = m->encode_maneuver(x12);
    const torch::Tensor x121 = m->decode_template(c1_hat);
    auto [f1, f2] = m->expand(x12, b.c3);
    const torch::Tensor x13 = crop_batch(f1, x12, f2, b.p);
    const torch::Tensor c3_hat = m->encode_flanks(torch::cat({f1, f2}, 1));
    auto [c1_real, c2_real] = m->encode_maneuver(b.x2);

    model::GenTerms terms;
    terms.gen_tran = model::lsgan_gen_translation(m->discriminate(x12));
    terms.gen_exp = model::lsgan_gen_expansion(m->discriminate_expansion(x13));
    terms.pair = model::pairing_loss(x12, b.x2, b.l);
    terms.cyc = model::cycle_loss(x121, b.x1);
    terms.id1 = model::identity_recon(b.x1, m->decode_template(c1));
    terms.id2 = model::identity_recon(b.x2, m->generate_maneuver(c1_real, c2_real));
    terms.cr2 = model::code_recon_translation(c1, b.c2, c1_hat, c2_hat);
    terms.cr3 = model::code_recon_expansion(b.c3, c3_hat);

    log.gen_tran = finite_item(terms.gen_tran, "gen_tran", step);
    log.gen_exp = finite_item(terms.gen_exp, "gen_exp", step);
    log.pair = finite_item(terms.pair, "pair", step);
    log.cyc = finite_item(terms.cyc, "cyc", step);
    log.id1 = finite_item(terms.id1, "id1", step);
    log.id2 = finite_item(terms.id2, "id2", step);
    log.cr2 = finite_item(terms.cr2, "cr2", step);
    log.cr3 = finite_item(terms.cr3, "cr3", step);
    return model::generator_objective(terms, mc.weights);
  };

  std::int64_t step = 0;
  for (std::int64_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    source.start_epoch();
    const std::int64_t steps = source.steps_per_epoch();
    for (std::int64_t e_step = 0; e_step < steps; ++e_step, ++step) {
      const Batch b = source.next();

      if (step == 0) {
        torch::NoGradGuard no_grad;
        const torch::Tensor c1 = m->encode_template(b.x1, b.l);
        const torch::Tensor x12 = m->generate_maneuver(c1, b.c2);
        auto [f1, f2] = m->expand(x12, b.c3);
        const torch::Tensor x13 = crop_batch(f1, x12, f2, b.p);
        result.step0_gen_adv =
            (model::lsgan_gen_translation(m->discriminate(x12)) +
             model::lsgan_gen_expansion(m->discriminate_expansion(x13)))
                .item<double>();
      }

      // Discriminator update on detached translations/expansions.
      torch::Tensor x12_d, x13_d;
      {
        torch::NoGradGuard no_grad;
        const torch::Tensor c1 = m->encode_template(b.x1, b.l);
        x12_d = m->generate_maneuver(c1, b.c2);
        auto [f1, f2] = m->expand(x12_d, b.c3);
        x13_d = crop_batch(f1, x12_d, f2, b.p);
      }
      const torch::Tensor dis_tran =
          model::lsgan_dis_translation(m->discriminate(b.x2), m->discriminate(x12_d));
      const torch::Tensor dis_exp = model::lsgan_dis_expansion(
          m->discriminate_expansion(b.x3), m->discriminate_expansion(x13_d));
      log.dis_tran = finite_item(dis_tran, "dis_tran", step);
      log.dis_exp = finite_item(dis_exp, "dis_exp", step);
      const torch::Tensor dis_total =
          model::discriminator_objective({dis_tran, dis_exp});
      log.dis_total = finite_item(dis_total, "dis_total", step);
      opt_dis.zero_grad();
      dis_total.backward();
      opt_dis.step();

      // Generator-group update.
      const torch::Tensor gen_total = forward_generator(b, step);
      log.gen_total = finite_item(gen_total, "gen_total", step);
      opt_gen.zero_grad();
      gen_total.backward();
      opt_gen.step();

      if (metrics.is_open()) {
        const auto wall = std::chrono::duration_cast<std::chrono::milliseconds>(
                              std::chrono::steady_clock::now() - t_start)
                              .count();
        std::ostringstream row;
        row.precision(9);
        row << step << ',' << log.gen_tran << ',' << log.dis_tran << ',' << log.pair
            << ',' << log.cyc << ',' << log.gen_exp << ',' << log.dis_exp << ','
            << log.id1 << ',' << log.id2 << ',' << log.cr2 << ',' << log.cr3 << ','
            << log.gen_total << ',' << log.dis_total << ',' << wall << '\n';
        metrics << row.str();
      }
    }
  }
  result.steps = step;
  result.final_gen_adv = log.gen_tran + log.gen_exp;
  result.final_composite = log.gen_total;

  if (metrics.is_open()) {
    metrics.close();
    if (!metrics) throw io_error("train: failed writing " + cfg.metrics_path);
  }
  if (!cfg.checkpoint_path.empty()) model::save_checkpoint(m, cfg.checkpoint_path);
  return result;
}

double evaluate_cycle_ssim(const CycleFn& cycle, const std::vector<Template>& templates,
                           std::size_t samples_per_template) {
  if (templates.empty())
    throw param_error("evaluate_cycle_ssim: no templates");
  if (samples_per_template == 0)
    throw param_error("evaluate_cycle_ssim: need at least one draw per template");
  double total = 0.0;
  for (const Template& t : templates) {
    for (std::size_t d = 0; d < samples_per_template; ++d) {
      const std::vector<float> rec = cycle(t, d);
      if (rec.size() != t.values.size())
        throw shape_error("evaluate_cycle_ssim: cycle output length mismatch");
      total += ssim_1d(t.values, rec);
    }
  }
  return total / static_cast<double>(templates.size() * samples_per_template);
}

double evaluate_cycle_ssim(model::Model& m, const std::vector<Template>& templates,
                           std::size_t samples_per_template, std::uint64_t seed) {
  std::size_t index = 0;
  std::size_t current = static_cast<std::size_t>(-1);
  // One substream per template so the score is independent of chunking.
  std::mt19937_64 rng;
  CycleFn cycle = [&](const Template& t, std::size_t draw) {
    if (index != current) {
      // translate() seeds its style stream the same way, keeping eval draws
      // aligned with generation draws for the same (seed, template index).
      rng.seed(substream(substream(seed, index), gen::kStyleStream));
      current = index;
    }
    (void)draw;
    torch::NoGradGuard no_grad;
    const torch::Tensor c2 = gen::draw_code(m->cfg.style_dim, rng);
    const torch::Tensor c1 = gen::encode_template_values(m, t);
    const torch::Tensor x12 = m->generate_maneuver(c1, c2);
    auto [c1_hat, c2_hat] = m->encode_maneuver(x12);
    const torch::Tensor x121 = m->decode_template(c1_hat);
    const torch::Tensor flat = x121.reshape({-1}).contiguous();
    const float* p = flat.data_ptr<float>();
    return std::vector<float>(p, p + flat.numel());
  };
  double total = 0.0;
  for (std::size_t i = 0; i < templates.size(); ++i) {
    index = i;
    std::vector<Template> one = {templates[i]};
    total += evaluate_cycle_ssim(cycle, one, samples_per_template);
  }
  return total / static_cast<double>(templates.size());
}

}  // namespace silgan::train
