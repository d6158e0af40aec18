#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "silgan/coverage_dsl.hpp"
#include "silgan/generation.hpp"

namespace silgan::search {

struct SearchParams {
  std::int64_t n_sim = 50;  // max sampling steps
  std::int64_t n_gd = 200;  // max gradient steps
  double eta = 0.05;        // gradient step size
  std::uint64_t seed = 0;
};

/// Throws config_error on negative budgets or nonpositive eta.
void validate_search_params(const SearchParams& p);

enum class Phase { Sampling, Gradient };

struct SearchResult {
  enum class Status { Found, Timeout } status = Status::Timeout;
  std::optional<Maneuver> maneuver;  // set when found
  std::vector<double> trace;         // targeted-branch indicator per step
  std::size_t sampling_steps = 0;    // prefix of `trace` from phase 1
  Phase phase = Phase::Sampling;     // phase where the hit happened
  std::vector<double> alpha;         // final mixing weights
  std::vector<float> c2;             // final style code
  std::string error;                 // nonempty when a branch aborted (multi only)
};

/// Anything that maps (alpha, c2) to an (L,T) maneuver tensor with gradient
/// flow. Decouples the search from GAN training quality; tests drive it with
/// a closed-form generator.
class LatentGenerator {
 public:
  virtual ~LatentGenerator() = default;
  virtual std::size_t k() const = 0;
  virtual std::int64_t style_dim() const = 0;
  /// alpha: (K) double/float tensor, c2: (1, style_dim) -> (L, T).
  virtual torch::Tensor generate(const torch::Tensor& alpha,
                                 const torch::Tensor& c2) const = 0;
};

/// The trained-model generator over a scenario's encoded template codes.
class ScenarioGenerator : public LatentGenerator {
 public:
  ScenarioGenerator(model::Model m, const Scenario& s);
  std::size_t k() const override { return codes_.size(); }
  std::int64_t style_dim() const override { return model_->cfg.style_dim; }
  torch::Tensor generate(const torch::Tensor& alpha,
                         const torch::Tensor& c2) const override;

 private:
  mutable model::Model model_;
  std::vector<torch::Tensor> codes_;
};

/// Two-phase search for a maneuver driving `search`'s branch indicator
/// negative: uniform simplex sampling while tracking the argmin, then plain
/// gradient descent on (logit reparameterization of alpha, c2) from the best
/// sample. The candidate is checked before each descent update; ties at 0
/// count as not found. Throws numeric_error on a non-finite gradient.
SearchResult automate(const LatentGenerator& g, const dsl::SearchFn& search,
                      std::size_t branch, const SearchParams& params);

/// Model-facing wrapper over ScenarioGenerator.
SearchResult automate(model::Model& m, const Scenario& s, const dsl::SearchFn& search,
                      std::size_t branch, const SearchParams& params);

/// One independent search per branch, each run with the same params (a
/// single-branch predicate reproduces automate() exactly). A branch that
/// throws is reported via `error` instead of aborting its siblings.
std::vector<SearchResult> automate_multi(const LatentGenerator& g,
                                         const dsl::SearchFn& search,
                                         const SearchParams& params);
std::vector<SearchResult> automate_multi(model::Model& m, const Scenario& s,
                                         const dsl::SearchFn& search,
                                         const SearchParams& params);

/// JSON report of one search (params, trace, phase boundary, final codes,
/// optional path of the persisted maneuver).
std::string report_json(const SearchResult& r, const SearchParams& params,
                        const std::string& maneuver_path);

}  // namespace silgan::search
