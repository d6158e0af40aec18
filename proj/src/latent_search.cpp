#include "silgan/latent_search.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

namespace silgan::search {

namespace {

torch::Tensor alpha_tensor(const gen::Simplex& s) {
  torch::Tensor a = torch::empty({static_cast<std::int64_t>(s.k())}, torch::kFloat32);
  float* dst = a.data_ptr<float>();
  for (std::size_t i = 0; i < s.k(); ++i) dst[i] = static_cast<float>(s.alpha[i]);
  return a;
}

std::vector<double> to_double_vec(const torch::Tensor& t) {
  const torch::Tensor d = t.detach().to(torch::kFloat64).reshape({-1}).contiguous();
  const double* p = d.data_ptr<double>();
  return {p, p + d.numel()};
}

std::vector<float> to_float_vec(const torch::Tensor& t) {
  const torch::Tensor f = t.detach().to(torch::kFloat32).reshape({-1}).contiguous();
  const float* p = f.data_ptr<float>();
  return {p, p + f.numel()};
}

/// Reference-path indicator of the candidate; the tensor path drives
/// gradients, this drives the found/not-found decision and the trace.
double branch_indicator(const dsl::SearchFn& search, const Maneuver& m,
                        std::size_t branch) {
  return search(m).at(branch);
}

}  // namespace

void validate_search_params(const SearchParams& p) {
  if (p.n_sim < 0 || p.n_gd < 0)
    throw config_error("search params: budgets must be nonnegative");
  if (!(p.eta > 0.0)) throw config_error("search params: eta must be positive");
}

ScenarioGenerator::ScenarioGenerator(model::Model m, const Scenario& s)
    : model_(std::move(m)) {
  validate_scenario(s);
  codes_.reserve(s.size());
  for (const Template& t : s.templates)
    codes_.push_back(gen::encode_template_values(model_, t));
}

torch::Tensor ScenarioGenerator::generate(const torch::Tensor& alpha,
                                          const torch::Tensor& c2) const {
  if (alpha.dim() != 1 || alpha.size(0) != static_cast<std::int64_t>(codes_.size()))
    throw shape_error("scenario generator: need one mixing weight per template");
  torch::Tensor mixed = codes_[0] * alpha[0];
  for (std::size_t i = 1; i < codes_.size(); ++i)
    mixed = mixed + codes_[i] * alpha[static_cast<std::int64_t>(i)];
  return model_->generate_maneuver(mixed, c2).squeeze(0);
}

SearchResult automate(const LatentGenerator& g, const dsl::SearchFn& search,
                      std::size_t branch, const SearchParams& params) {
  validate_search_params(params);
  if (branch >= search.branches())
    throw param_error("automate: branch " + std::to_string(branch) + " out of range (" +
                      std::to_string(search.branches()) + " branches)");
  const std::size_t k = g.k();
  std::mt19937_64 alpha_rng(substream(params.seed, gen::kAlphaStream));
  std::mt19937_64 style_rng(substream(params.seed, gen::kStyleStream));

  SearchResult res;
  double s_min = std::numeric_limits<double>::infinity();
  gen::Simplex alpha_best;
  alpha_best.alpha.assign(k, 1.0 / static_cast<double>(k));
  torch::Tensor c2_best = torch::zeros({1, g.style_dim()}, torch::kFloat32);

  // Phase 1: uniform simplex sampling, tracking the best candidate.
  for (std::int64_t step = 0; step < params.n_sim; ++step) {
    const gen::Simplex alpha = gen::sample_simplex(k, alpha_rng);
    const torch::Tensor c2 = gen::draw_code(g.style_dim(), style_rng);
    torch::Tensor h;
    {
      torch::NoGradGuard no_grad;
      h = g.generate(alpha_tensor(alpha), c2);
    }
    const Maneuver m = gen::maneuver_from_tensor(h);
    const double s = branch_indicator(search, m, branch);
    res.trace.push_back(s);
    if (s < 0.0) {
      res.status = SearchResult::Status::Found;
      res.phase = Phase::Sampling;
      res.sampling_steps = res.trace.size();
      res.maneuver = m;
      res.alpha = alpha.alpha;
      res.c2 = to_float_vec(c2);
      return res;
    }
    if (s < s_min) {
      s_min = s;
      alpha_best = alpha;
      c2_best = c2;
    }
  }
  res.sampling_steps = res.trace.size();

  // Phase 2: plain gradient descent from the best sample, with alpha
  // reparameterized through logit/sigmoid so it stays inside the simplex.
  torch::Tensor gamma =
      torch::logit(alpha_tensor(alpha_best).clamp(1e-6, 1.0 - 1e-6))
          .set_requires_grad(true);
  torch::Tensor c2 = c2_best.detach().clone().set_requires_grad(true);
  for (std::int64_t step = 0; step < params.n_gd; ++step) {
    const torch::Tensor raw = torch::sigmoid(gamma);
    const torch::Tensor alpha = raw / raw.sum();
    const torch::Tensor h = g.generate(alpha, c2);
    const torch::Tensor s_t = search.eval(h, branch);
    const Maneuver m = gen::maneuver_from_tensor(h);
    const double s = branch_indicator(search, m, branch);
    res.trace.push_back(s);
    if (s < 0.0) {
      res.status = SearchResult::Status::Found;
      res.phase = Phase::Gradient;
      res.maneuver = m;
      res.alpha = to_double_vec(alpha);
      res.c2 = to_float_vec(c2);
      return res;
    }
    const auto grads = torch::autograd::grad({s_t}, {gamma, c2}, /*grad_outputs=*/{},
                                             /*retain_graph=*/false,
                                             /*create_graph=*/false,
                                             /*allow_unused=*/true);
    torch::Tensor g_gamma =
        grads[0].defined() ? grads[0] : torch::zeros_like(gamma);
    torch::Tensor g_c2 = grads[1].defined() ? grads[1] : torch::zeros_like(c2);
    if (!torch::isfinite(g_gamma).all().item<bool>() ||
        !torch::isfinite(g_c2).all().item<bool>())
      throw numeric_error("automate: non-finite gradient at descent step " +
                          std::to_string(step));
    gamma = (gamma.detach() - params.eta * g_gamma).set_requires_grad(true);
    c2 = (c2.detach() - params.eta * g_c2).set_requires_grad(true);
  }

  res.status = SearchResult::Status::Timeout;
  res.phase = params.n_gd > 0 ? Phase::Gradient : Phase::Sampling;
  {
    torch::NoGradGuard no_grad;
    const torch::Tensor raw = torch::sigmoid(gamma.detach());
    res.alpha = to_double_vec(raw / raw.sum());
    res.c2 = to_float_vec(c2);
  }
  return res;
}

SearchResult automate(model::Model& m, const Scenario& s, const dsl::SearchFn& search,
                      std::size_t branch, const SearchParams& params) {
  const ScenarioGenerator g(m, s);
  return automate(g, search, branch, params);
}

std::vector<SearchResult> automate_multi(const LatentGenerator& g,
                                         const dsl::SearchFn& search,
                                         const SearchParams& params) {
  std::vector<SearchResult> out(search.branches());
  for (std::size_t b = 0; b < search.branches(); ++b) {
    try {
      out[b] = automate(g, search, b, params);
    } catch (const std::exception& e) {
      out[b] = SearchResult{};
      out[b].error = e.what();
    }
  }
  return out;
}

std::vector<SearchResult> automate_multi(model::Model& m, const Scenario& s,
                                         const dsl::SearchFn& search,
                                         const SearchParams& params) {
  const ScenarioGenerator g(m, s);
  return automate_multi(g, search, params);
}

std::string report_json(const SearchResult& r, const SearchParams& params,
                        const std::string& maneuver_path) {
  nlohmann::json j;
  j["params"] = {{"n_sim", params.n_sim},
                 {"n_gd", params.n_gd},
                 {"eta", params.eta},
                 {"seed", params.seed}};
  j["status"] = r.status == SearchResult::Status::Found ? "found" : "timeout";
  j["phase"] = r.phase == Phase::Sampling ? "sampling" : "gradient";
  j["sampling_steps"] = r.sampling_steps;
  j["gradient_steps"] = r.trace.size() - r.sampling_steps;
  j["trace"] = r.trace;
  j["alpha"] = r.alpha;
  j["c2"] = r.c2;
  if (!maneuver_path.empty()) {
    j["maneuver"] = maneuver_path;
  } else {
    j["maneuver"] = nullptr;
  }
  if (!r.error.empty()) j["error"] = r.error;
  return j.dump(2) + "\n";
}

}  // namespace silgan::search
