#include <doctest.h>

#include <cmath>
#include <vector>

#include "../support/oracles.hpp"
#include "qprio/equilibrium.hpp"
#include "qprio/error.hpp"
#include "qprio/revenue.hpp"

using namespace qprio;
using Shape = RevenueShape::Kind;

namespace {

ModelParams unit(double rho, double K) { return ModelParams::validate(rho, 1.0, K); }

constexpr auto NP = Policy::NonPreemptive;
constexpr auto PR = Policy::PreemptiveResume;

const std::vector<double> kGridK{1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 6.0, 10.0, 20.0};

std::vector<double> grid_rho() {
  std::vector<double> out;
  for (int i = 1; i <= 19; ++i) out.push_back(0.05 * i);
  out.push_back(0.01);
  out.push_back(0.02);
  return out;
}

}  // namespace

TEST_CASE("revenue at reference points") {
  CHECK(revenue(unit(0.3, 6.0), PR, 0.0) == 0.0);
  CHECK(revenue(unit(0.3, 6.0), NP, 0.0) == 0.0);
  CHECK(revenue(unit(0.5, 2.0), NP, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(revenue(unit(0.5, 2.0), PR, 1.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("revenue equals lambda * phi * cost") {
  for (double mu : {1.0, 3.0})
    for (double K : kGridK)
      for (double rho : grid_rho()) {
        const auto p = ModelParams::validate(rho * mu, mu, K);
        for (int i = 0; i <= 20; ++i) {
          const double phi = i / 20.0;
          for (auto policy : {NP, PR})
            CHECK(oracle::rel_close(revenue(p, policy, phi), p.lambda() * phi * cost(p, policy, phi), 1e-9));
        }
      }
}

TEST_CASE("revenue derivative matches central differences") {
  const double h = 1e-6;
  for (double K : kGridK)
    for (double rho : grid_rho())
      for (int i = 1; i < 20; ++i) {
        const auto p = unit(rho, K);
        const double phi = i / 20.0;
        for (auto policy : {NP, PR}) {
          const double fd = oracle::central_difference([&](double x) { return revenue(p, policy, x); }, phi, h);
          const double exact = revenue_derivative(p, policy, phi);
          const double scale = std::max(std::abs(exact), 1e-3 * revenue(p, policy, 1.0));
          CHECK(std::abs(fd - exact) <= 1e-4 * scale);
        }
      }
}

TEST_CASE("revenue regimes") {
  CHECK(revenue_shape_pr(unit(0.5, 2.0)).kind == Shape::MonotoneIncreasing);
  const auto uni = revenue_shape_pr(unit(0.1, 6.0));
  CHECK(uni.kind == Shape::Unimodal);
  CHECK(*uni.threshold == doctest::Approx(0.177124).epsilon(1e-6));
  CHECK(revenue_shape_pr(unit(0.3, 6.0)).kind == Shape::MonotoneIncreasing);
  CHECK(revenue_shape_pr(unit(0.01, 4.0)).kind == Shape::MonotoneIncreasing);
  CHECK(revenue_shape(unit(0.1, 6.0), NP).kind == Shape::MonotoneIncreasing);
  CHECK(unimodal_threshold(4.0) == doctest::Approx(0.0));
}

TEST_CASE("grid search agrees with the reported regime") {
  for (double K : kGridK)
    for (double rho : grid_rho()) {
      const auto p = unit(rho, K);
      const auto best = oracle::grid_max([&](double x) { return revenue(p, PR, x); }, 0.0, 1.0, 1e-3);
      if (revenue_shape_pr(p).kind == Shape::Unimodal) {
        CHECK(best.x < 1.0);
        CHECK(std::abs(best.x - phi_max(p)) <= 1e-3);
      } else {
        CHECK(best.x == 1.0);
      }
    }
}

TEST_CASE("interior maximizer") {
  CHECK(phi_max(unit(0.1, 6.0)) == doctest::Approx(0.8712907).epsilon(1e-7));
  // Independent grid search (step 1e-6) puts this maximizer at 0.7145178.
  CHECK(phi_max(unit(0.05, 8.0)) == doctest::Approx(0.7145178).epsilon(1e-7));
  CHECK_THROWS_AS(phi_max(unit(0.1, 3.0)), NoInteriorSolution);
  CHECK_THROWS_AS(max_revenue_pr_interior(unit(0.3, 6.0)), NoInteriorSolution);

  const auto p = unit(0.05, 8.0);
  const auto best = oracle::grid_max([&](double x) { return revenue(p, PR, x); }, 0.0, 1.0, 1e-6);
  CHECK(std::abs(best.x - 0.7145178) < 2e-6);
}

TEST_CASE("closed-form interior maximum equals revenue at the maximizer") {
  for (double K : {4.5, 5.0, 6.0, 8.0, 10.0, 20.0})
    for (double rho : grid_rho()) {
      const auto p = unit(rho, K);
      if (revenue_shape_pr(p).kind != Shape::Unimodal) continue;
      CHECK(oracle::rel_close(max_revenue_pr_interior(p), revenue(p, PR, phi_max(p)), 1e-9));
    }
}

TEST_CASE("max_revenue profiles") {
  const auto np = max_revenue(unit(0.5, 2.0), NP);
  CHECK(np.phi_star == 1.0);
  CHECK(np.fee_star == doctest::Approx(1.0));
  CHECK(np.revenue_star == doctest::Approx(0.5));
  CHECK(np.stable);

  const auto pr = max_revenue(unit(0.1, 6.0), PR);
  CHECK(pr.shape.kind == Shape::Unimodal);
  CHECK(pr.phi_star == doctest::Approx(0.8712907).epsilon(1e-7));
  CHECK(pr.fee_star == doctest::Approx(0.1742581).epsilon(1e-7));
  CHECK(pr.revenue_star == doctest::Approx(0.0151830).epsilon(1e-6));
  CHECK(pr.stable);

  const auto pr2 = max_revenue(unit(0.5, 2.0), PR);
  CHECK(pr2.phi_star == 1.0);
  CHECK(pr2.fee_star == doctest::Approx(2.0));
  CHECK(pr2.revenue_star == doctest::Approx(1.0));

  const auto k1 = max_revenue(unit(0.5, 1.0), NP);
  CHECK(k1.revenue_star == doctest::Approx(0.25));
}

TEST_CASE("margin lowers a boundary fee only") {
  const auto p = unit(0.5, 2.0);
  const auto with_margin = max_revenue(p, NP, 0.01);
  CHECK(with_margin.fee_star == doctest::Approx(0.99));
  CHECK(with_margin.revenue_star == doctest::Approx(0.495));
  CHECK(with_margin.stable);
  CHECK(max_revenue(unit(0.1, 6.0), PR, 0.01).fee_star == max_revenue(unit(0.1, 6.0), PR).fee_star);
  CHECK_THROWS_AS(max_revenue(p, NP, -0.1), InvalidArgument);
  CHECK_THROWS_AS(max_revenue(p, NP, 5.0), InvalidArgument);
}

TEST_CASE("profile invariants on the grid") {
  for (double K : kGridK)
    for (double rho : grid_rho())
      for (auto policy : {NP, PR}) {
        const auto p = unit(rho, K);
        const auto prof = max_revenue(p, policy);
        // On the constant-cost knife edge the fee makes every phi an
        // equilibrium, which is only neutrally stable.
        const bool knife_edge = cost_shape(p, policy) == CostShape::Constant;
        CHECK(prof.stable == !knife_edge);
        CHECK(oracle::rel_close(prof.revenue_star, p.lambda() * prof.phi_star * cost(p, policy, prof.phi_star), 1e-9));
        if (prof.phi_star < 1.0) CHECK(cost_shape_pr(p) == CostShape::MonotoneDecreasing);
      }
}

TEST_CASE("knife-edge optimum is reported as not asymptotically stable") {
  const auto prof = max_revenue(unit(1.0 / 3.0, 4.0), PR);
  CHECK(prof.phi_star == 1.0);
  CHECK(prof.fee_star == doctest::Approx(1.0));
  CHECK_FALSE(prof.stable);
}

TEST_CASE("policy comparison") {
  const auto a = compare_policies(unit(0.5, 2.0));
  CHECK(a.revenue_np == doctest::Approx(0.5));
  CHECK(a.revenue_pr == doctest::Approx(1.0));
  CHECK(a.difference == doctest::Approx(0.5));

  const auto b = compare_policies(unit(0.1, 6.0));
  CHECK(b.revenue_np == doctest::Approx(0.0037037).epsilon(1e-5));
  CHECK(b.revenue_pr == doctest::Approx(0.0151830).epsilon(1e-5));
  CHECK(b.difference > 0.0);

  CHECK(compare_policies(unit(0.9, 1.0)).difference == doctest::Approx(8.1).epsilon(1e-9));

  for (double K = 1.0; K <= 20.0; K += 0.5)
    for (int i = 1; i <= 95; ++i) CHECK(compare_policies(unit(i / 100.0, K)).difference > 0.0);
}
