#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "silgan/model_core.hpp"
#include "silgan/template_extract.hpp"

namespace silgan::train {

struct TrainConfig {
  std::int64_t epochs = 10;
  std::int64_t batch_size = 32;
  double lr_gen = 2e-4;
  double lr_dis = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  std::uint64_t seed = 0;
  std::int64_t eval_samples_per_template = 4;
  std::string metrics_path;     // per-step CSV; empty disables logging
  std::string checkpoint_path;  // written after the final step; empty disables
};

/// Throws config_error on nonpositive epochs/batch or negative rates.
void validate_train_config(const TrainConfig& cfg);

struct TrainResult {
  std::int64_t steps = 0;
  double step0_gen_adv = 0.0;  // generator adversarial loss before any update
  double final_gen_adv = 0.0;  // same term at the last step
  double final_composite = 0.0;
};

/// Optimizes the full objective over paired (template, maneuver) data at
/// length N plus a separate length-M dataset. Per step: one discriminator
/// update, then one generator-group update, on freshly drawn style/expansion
/// codes and crop offsets. Deterministic given (model state, cfg.seed).
/// Throws numeric_error naming the first non-finite loss term, if any.
TrainResult train(model::Model& m, const std::vector<templates::PairedSample>& paired,
                  const std::vector<Maneuver>& long_maneuvers, const TrainConfig& cfg);

/// One full cycle (encode template, decode a maneuver with style `c2`,
/// re-encode, decode the template) as a plain vector; `draw` numbers the
/// style draw so stubs can be deterministic.
using CycleFn =
    std::function<std::vector<float>(const Template& t, std::size_t draw)>;

/// Mean 1-D SSIM between each template and `samples_per_template` cycle
/// reconstructions of it.
double evaluate_cycle_ssim(const CycleFn& cycle, const std::vector<Template>& templates,
                           std::size_t samples_per_template);

/// The model-backed cycle: fresh style draws come from `seed`, batch of one
/// throughout so results are independent of evaluation batching.
double evaluate_cycle_ssim(model::Model& m, const std::vector<Template>& templates,
                           std::size_t samples_per_template, std::uint64_t seed);

}  // namespace silgan::train
