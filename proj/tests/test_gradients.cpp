#include <cmath>
#include <functional>

#include <doctest.h>
#include <torch/torch.h>

#include "silgan/coverage_dsl.hpp"
#include "silgan/model_core.hpp"

using namespace silgan;
using model::ModelConfig;

namespace {

/// Central-difference derivative of `f` along coordinate `i` of `x`.
double fd_grad(const std::function<double(const torch::Tensor&)>& f,
               const torch::Tensor& x, std::int64_t i, double h) {
  auto hi = x.clone(), lo = x.clone();
  hi.view(-1)[i] += h;
  lo.view(-1)[i] -= h;
  return (f(hi) - f(lo)) / (2.0 * h);
}

void check_grad_matches(double analytic, double numeric) {
  const double tol =
      1e-4 * std::max({std::abs(analytic), std::abs(numeric), 1e-2});
  CHECK(std::abs(analytic - numeric) <= tol);
}

}  // namespace

TEST_CASE("maneuver generation backpropagates correctly into the style code") {
  auto m = model::make_model(ModelConfig::tiny(), 21);
  m->to(torch::kDouble);
  torch::manual_seed(77);
  const auto c1 = 0.3 * torch::randn({1, 32, 8}, torch::kDouble);
  const auto w = torch::randn({1, 3, 32}, torch::kDouble);

  auto c2 = (0.5 * torch::randn({1, 8}, torch::kDouble)).set_requires_grad(true);
  auto loss = (m->generate_maneuver(c1, c2) * w).sum();
  loss.backward();
  const auto analytic = c2.grad().clone().view(-1);

  auto f = [&](const torch::Tensor& v) {
    torch::NoGradGuard ng;
    return (m->generate_maneuver(c1, v) * w).sum().item<double>();
  };
  for (std::int64_t i = 0; i < 8; ++i)
    check_grad_matches(analytic[i].item<double>(),
                       fd_grad(f, c2.detach(), i, 1e-6));
}

TEST_CASE("flank expansion backpropagates correctly into the expansion code") {
  auto m = model::make_model(ModelConfig::tiny(), 22);
  m->to(torch::kDouble);
  torch::manual_seed(78);
  const auto x12 = torch::rand({1, 3, 32}, torch::kDouble);
  const auto w1 = torch::randn({1, 3, 32}, torch::kDouble);
  const auto w2 = torch::randn({1, 3, 32}, torch::kDouble);

  auto c3 = (0.5 * torch::randn({1, 8}, torch::kDouble)).set_requires_grad(true);
  auto [f1, f2] = m->expand(x12, c3);
  auto loss = (f1 * w1).sum() + (f2 * w2).sum();
  loss.backward();
  const auto analytic = c3.grad().clone().view(-1);

  auto f = [&](const torch::Tensor& v) {
    torch::NoGradGuard ng;
    auto [a, b] = m->expand(x12, v);
    return ((a * w1).sum() + (b * w2).sum()).item<double>();
  };
  for (std::int64_t i = 0; i < 8; ++i)
    check_grad_matches(analytic[i].item<double>(),
                       fd_grad(f, c3.detach(), i, 1e-6));
}

TEST_CASE("branch indicators backpropagate correctly into the maneuver") {
  const auto fn = dsl::compile_indicators(dsl::parse(
      "mean(vehicle_speed[0:16]) < 0.5 and max(selected_gear[2:14]) > 0.3\n"
      "min(engine_speed[4:12]) > 0.1 or not mean(vehicle_speed[2:5]) < 0.2"));
  REQUIRE(fn.branches() == 2);

  torch::manual_seed(79);
  auto x = torch::rand({3, 16}, torch::kDouble).set_requires_grad(true);
  for (std::size_t branch = 0; branch < fn.branches(); ++branch) {
    if (x.grad().defined()) x.grad().zero_();
    fn.eval(x, branch).backward();
    const auto analytic = x.grad().clone().view(-1);

    auto f = [&](const torch::Tensor& v) {
      torch::NoGradGuard ng;
      return fn.eval(v, branch).item<double>();
    };
    // every fourth coordinate; min/max routes make most gradients exactly 0
    for (std::int64_t i = 0; i < 48; i += 4)
      check_grad_matches(analytic[i].item<double>(),
                         fd_grad(f, x.detach(), i, 1e-6));
  }
}
