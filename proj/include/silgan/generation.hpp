#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "silgan/data.hpp"
#include "silgan/model_core.hpp"
#include "silgan/ssim.hpp"

namespace silgan::gen {

/// Substream ids for the per-operation RNGs. Alpha and style draws use
/// separate streams so a K=1 scenario consumes the same style sequence as
/// plain translation.
inline constexpr std::uint64_t kAlphaStream = 0;
inline constexpr std::uint64_t kStyleStream = 1;
inline constexpr std::uint64_t kExpansionStream = 2;

/// Mixing weights over the K vertices of a scenario's latent simplex.
struct Simplex {
  std::vector<double> alpha;

  std::size_t k() const { return alpha.size(); }
};

/// Throws param_error unless components are >= 0 and sum to 1 within 1e-9.
void validate_simplex(const Simplex& s);

/// Draws uniformly over the K-simplex (symmetric Dirichlet, unit
/// concentration) via normalized unit exponentials. K = 1 returns [1.0]
/// without consuming randomness.
Simplex sample_simplex(std::size_t k, std::mt19937_64& rng);
Simplex sample_simplex(std::size_t k, std::uint64_t seed);

/// Draws a standard-normal code row (1 x dim) from `rng` as float32.
torch::Tensor draw_code(std::int64_t dim, std::mt19937_64& rng);

/// (L,T) or (1,L,T) float tensor -> Maneuver; and the reverse, (1,L,T).
Maneuver maneuver_from_tensor(const torch::Tensor& x);
torch::Tensor maneuver_to_tensor(const Maneuver& m);

/// Encodes one template with a batch of one; returns the content code.
torch::Tensor encode_template_values(model::Model& m, const Template& t);

/// Elementwise convex mix of equal-shaped content codes. alpha = e_i
/// returns codes[i] bit-exactly.
torch::Tensor mix_codes(const std::vector<torch::Tensor>& codes, const Simplex& alpha);

/// One translation with a caller-provided style code (batch of one).
Maneuver translate_one(model::Model& m, const Template& t, const torch::Tensor& c2);

/// n_samples translations of one template with fresh style draws.
std::vector<Maneuver> translate(model::Model& m, const Template& t,
                                std::size_t n_samples, std::uint64_t seed);

/// Sentinel p for "place the translated block at the center", (M-N)/2.
inline constexpr std::int64_t kCenterCrop = -1;

/// Expands an N-length maneuver to length M: generate flanks from a seeded
/// expansion code, assemble and crop at p (or centered). The input block is
/// embedded unmodified at offset (M-N)-p.
Maneuver expand_maneuver(model::Model& m, const Maneuver& x12, std::int64_t p,
                         std::uint64_t c3_seed);

/// Per-sample record of the draws behind a scenario generation.
struct ScenarioTrace {
  Simplex alpha;
  std::vector<float> c2;
};

/// Per sample: mix the K template codes with a fresh simplex draw and decode
/// with a fresh style draw. K = 1 reproduces translate() exactly.
std::vector<Maneuver> generate_from_scenario(model::Model& m, const Scenario& s,
                                             std::size_t n_samples, std::uint64_t seed,
                                             std::vector<ScenarioTrace>* traces = nullptr);

}  // namespace silgan::gen
