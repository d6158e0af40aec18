#include "silgan/generation.hpp"

#include <cmath>

namespace silgan::gen {

namespace {

torch::Tensor template_tensor(const Template& t) {
  torch::Tensor x = torch::empty({1, 1, static_cast<std::int64_t>(t.values.size())},
                                 torch::kFloat32);
  std::copy(t.values.begin(), t.values.end(), x.data_ptr<float>());
  return x;
}

}  // namespace

Maneuver maneuver_from_tensor(const torch::Tensor& x) {
  if (x.dim() != 2 && !(x.dim() == 3 && x.size(0) == 1))
    throw shape_error("maneuver_from_tensor: expected an (L,T) or (1,L,T) tensor");
  const torch::Tensor flat =
      x.detach().to(torch::kFloat32).reshape({-1}).contiguous();
  const std::int64_t channels = x.size(x.dim() - 2);
  const std::int64_t t = x.size(x.dim() - 1);
  Maneuver m(static_cast<std::size_t>(channels), static_cast<std::size_t>(t));
  const float* src = flat.data_ptr<float>();
  std::copy(src, src + channels * t, m.values.begin());
  return m;
}

torch::Tensor maneuver_to_tensor(const Maneuver& m) {
  torch::Tensor x = torch::empty({1, static_cast<std::int64_t>(m.channels),
                                  static_cast<std::int64_t>(m.length)},
                                 torch::kFloat32);
  std::copy(m.values.begin(), m.values.end(), x.data_ptr<float>());
  return x;
}

void validate_simplex(const Simplex& s) {
  if (s.alpha.empty()) throw param_error("simplex: needs at least one component");
  double sum = 0.0;
  for (double a : s.alpha) {
    if (!(a >= 0.0)) throw param_error("simplex: components must be nonnegative");
    sum += a;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw param_error("simplex: components must sum to 1 within 1e-9");
}

Simplex sample_simplex(std::size_t k, std::mt19937_64& rng) {
  if (k < 1) throw param_error("sample_simplex: order must be at least 1");
  Simplex s;
  if (k == 1) {
    s.alpha = {1.0};
    return s;
  }
  // Normalized unit exponentials are a symmetric Dirichlet draw.
  std::exponential_distribution<double> exp1(1.0);
  s.alpha.resize(k);
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    s.alpha[i] = exp1(rng);
    sum += s.alpha[i];
  }
  for (double& a : s.alpha) a /= sum;
  return s;
}

Simplex sample_simplex(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return sample_simplex(k, rng);
}

torch::Tensor draw_code(std::int64_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  torch::Tensor c = torch::empty({1, dim}, torch::kFloat32);
  float* dst = c.data_ptr<float>();
  for (std::int64_t i = 0; i < dim; ++i) dst[i] = static_cast<float>(normal(rng));
  return c;
}

torch::Tensor encode_template_values(model::Model& m, const Template& t) {
  torch::NoGradGuard no_grad;
  const torch::Tensor x = template_tensor(t);
  const torch::Tensor idx =
      torch::full({1}, static_cast<std::int64_t>(t.signal_index), torch::kInt64);
  return m->encode_template(x, idx);
}

torch::Tensor mix_codes(const std::vector<torch::Tensor>& codes, const Simplex& alpha) {
  if (codes.empty() || codes.size() != alpha.k())
    throw shape_error("mix_codes: need one code per mixing weight");
  validate_simplex(alpha);
  torch::Tensor mixed = codes[0] * alpha.alpha[0];
  for (std::size_t i = 1; i < codes.size(); ++i) {
    if (codes[i].sizes() != codes[0].sizes())
      throw shape_error("mix_codes: code shapes disagree");
    mixed = mixed + codes[i] * alpha.alpha[i];
  }
  return mixed;
}

Maneuver translate_one(model::Model& m, const Template& t, const torch::Tensor& c2) {
  torch::NoGradGuard no_grad;
  const torch::Tensor c1 = encode_template_values(m, t);
  return maneuver_from_tensor(m->generate_maneuver(c1, c2));
}

std::vector<Maneuver> translate(model::Model& m, const Template& t,
                                std::size_t n_samples, std::uint64_t seed) {
  torch::NoGradGuard no_grad;
  std::mt19937_64 style_rng(substream(seed, kStyleStream));
  const torch::Tensor c1 = encode_template_values(m, t);
  std::vector<Maneuver> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const torch::Tensor c2 = draw_code(m->cfg.style_dim, style_rng);
    out.push_back(maneuver_from_tensor(m->generate_maneuver(c1, c2)));
  }
  return out;
}

Maneuver expand_maneuver(model::Model& m, const Maneuver& x12, std::int64_t p,
                         std::uint64_t c3_seed) {
  torch::NoGradGuard no_grad;
  const std::int64_t flank = m->cfg.m - m->cfg.n;
  if (p == kCenterCrop) p = flank / 2;
  if (p < 0 || p > flank)
    throw param_error("expand_maneuver: p must lie in [0, M-N], got " +
                      std::to_string(p));
  if (x12.channels != static_cast<std::size_t>(m->cfg.channels) ||
      x12.length != static_cast<std::size_t>(m->cfg.n))
    throw shape_error("expand_maneuver: input must be an L x N maneuver");

  torch::Tensor x = torch::empty(
      {1, m->cfg.channels, m->cfg.n}, torch::kFloat32);
  std::copy(x12.values.begin(), x12.values.end(), x.data_ptr<float>());

  std::mt19937_64 rng(substream(c3_seed, kExpansionStream));
  const torch::Tensor c3 = draw_code(m->cfg.expansion_dim, rng);
  auto [f1, f2] = m->expand(x, c3);
  return maneuver_from_tensor(model::assemble_and_crop(f1, x, f2, p));
}

std::vector<Maneuver> generate_from_scenario(model::Model& m, const Scenario& s,
                                             std::size_t n_samples, std::uint64_t seed,
                                             std::vector<ScenarioTrace>* traces) {
  validate_scenario(s);
  torch::NoGradGuard no_grad;
  std::mt19937_64 alpha_rng(substream(seed, kAlphaStream));
  std::mt19937_64 style_rng(substream(seed, kStyleStream));

  std::vector<torch::Tensor> codes;
  codes.reserve(s.size());
  for (const Template& t : s.templates) codes.push_back(encode_template_values(m, t));

  std::vector<Maneuver> out;
  out.reserve(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const Simplex alpha = sample_simplex(s.size(), alpha_rng);
    const torch::Tensor c2 = draw_code(m->cfg.style_dim, style_rng);
    const torch::Tensor mixed = mix_codes(codes, alpha);
    out.push_back(maneuver_from_tensor(m->generate_maneuver(mixed, c2)));
    if (traces != nullptr) {
      ScenarioTrace tr;
      tr.alpha = alpha;
      const float* c = c2.data_ptr<float>();
      tr.c2.assign(c, c + m->cfg.style_dim);
      traces->push_back(std::move(tr));
    }
  }
  return out;
}

}  // namespace silgan::gen
