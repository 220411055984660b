#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/oracles.hpp"
#include "qprio/equilibrium.hpp"
#include "qprio/error.hpp"

using namespace qprio;
using Kind = EquilibriumKind;

namespace {

ModelParams unit(double rho, double K) { return ModelParams::validate(rho, 1.0, K); }

constexpr auto NP = Policy::NonPreemptive;
constexpr auto PR = Policy::PreemptiveResume;

}  // namespace

TEST_CASE("NP mixed root") {
  CHECK(some_join_np(unit(0.5, 2.0), 0.75) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(some_join_np(unit(0.5, 2.0), 0.5), NoInteriorSolution);
  CHECK_THROWS_AS(some_join_np(unit(0.5, 2.0), 1.0), NoInteriorSolution);
  CHECK_THROWS_AS(some_join_np(unit(0.5, 2.0), 3.0), NoInteriorSolution);
  CHECK_THROWS_AS(some_join_np(unit(0.5, 2.0), 0.0), InvalidArgument);
  CHECK_THROWS_AS(some_join_np(unit(0.5, 2.0), -1.0), InvalidArgument);
}

TEST_CASE("PR mixed root") {
  CHECK(some_join_pr(unit(0.1, 6.0), cost_pr(unit(0.1, 6.0), 0.5)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(some_join_pr(unit(0.1, 6.0), 0.2456140) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK_THROWS_AS(some_join_pr(unit(0.1, 6.0), 1.0 / 3.0), NoInteriorSolution);
  CHECK(some_join_pr(unit(0.5, 2.0), 1.5) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(some_join_pr(unit(1.0 / 3.0, 4.0), 1.0), NoInteriorSolution);
}

TEST_CASE("closed-form roots agree with bisection") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> K_dist(1.0, 20.0), rho_dist(0.01, 0.95), u_dist(0.01, 0.99);
  int checked = 0;
  while (checked < 500) {
    const auto p = unit(rho_dist(rng), K_dist(rng));
    for (auto policy : {NP, PR}) {
      if (cost_shape(p, policy) == CostShape::Constant) continue;
      const double c0 = cost(p, policy, 0.0), c1 = cost(p, policy, 1.0);
      const double fee = c0 + u_dist(rng) * (c1 - c0);
      const double root = some_join(p, policy, fee);
      const double reference = oracle::bisect([&](double phi) { return cost(p, policy, phi) - fee; }, 0.0, 1.0);
      CHECK(std::abs(root - reference) < 1e-10);
      CHECK(std::abs(cost(p, policy, root) - fee) / fee < 1e-9);
      ++checked;
    }
  }
}

TEST_CASE("NP equilibrium sets") {
  const auto p = unit(0.5, 2.0);
  const auto low = equilibria(p, NP, 0.4).equilibria;
  REQUIRE(low.size() == 1);
  CHECK(low[0] == Equilibrium{Kind::AllJoin, 1.0, true});

  const auto mid = equilibria(p, NP, 0.75).equilibria;
  REQUIRE(mid.size() == 3);
  CHECK(mid[0] == Equilibrium{Kind::AllJoin, 1.0, true});
  CHECK(mid[1] == Equilibrium{Kind::NoneJoin, 0.0, true});
  CHECK(mid[2].kind == Kind::SomeJoin);
  CHECK(*mid[2].phi == doctest::Approx(2.0 / 3.0));
  CHECK_FALSE(mid[2].stable);

  const auto high = equilibria(p, NP, 1.2).equilibria;
  REQUIRE(high.size() == 1);
  CHECK(high[0].kind == Kind::NoneJoin);
}

TEST_CASE("PR decreasing cost has a unique equilibrium") {
  const auto p = unit(0.1, 6.0);
  const auto mid = equilibria(p, PR, 0.2456140).equilibria;
  REQUIRE(mid.size() == 1);
  CHECK(mid[0].kind == Kind::SomeJoin);
  CHECK(*mid[0].phi == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(mid[0].stable);

  const auto cheap = equilibria(p, PR, 0.1).equilibria;
  REQUIRE(cheap.size() == 1);
  CHECK(cheap[0].kind == Kind::AllJoin);
  const auto dear = equilibria(p, PR, 0.5).equilibria;
  REQUIRE(dear.size() == 1);
  CHECK(dear[0].kind == Kind::NoneJoin);
}

TEST_CASE("constant PR cost yields a continuum at the constant") {
  const auto p = unit(1.0 / 3.0, 4.0);
  const auto on = equilibria(p, PR, 1.0).equilibria;
  REQUIRE(on.size() == 1);
  CHECK(on[0].kind == Kind::Continuum);
  CHECK_FALSE(on[0].phi.has_value());
  CHECK_FALSE(on[0].stable);
  CHECK(equilibria(p, PR, 0.9).equilibria.at(0).kind == Kind::AllJoin);
  CHECK(equilibria(p, PR, 1.1).equilibria.at(0).kind == Kind::NoneJoin);
}

TEST_CASE("boundary fees: indifferent customers join") {
  const auto p = unit(0.5, 2.0);
  const auto at_c0 = equilibria(p, NP, cost_np(p, 0.0)).equilibria;
  REQUIRE(at_c0.size() == 1);
  CHECK(at_c0[0].kind == Kind::AllJoin);

  const auto at_c1 = equilibria(p, NP, cost_np(p, 1.0)).equilibria;
  REQUIRE(at_c1.size() == 2);
  CHECK(at_c1[0].kind == Kind::AllJoin);
  CHECK(at_c1[1].kind == Kind::NoneJoin);

  const auto d = unit(0.1, 6.0);
  const auto dec_c1 = equilibria(d, PR, cost_pr(d, 1.0)).equilibria;
  REQUIRE(dec_c1.size() == 1);
  CHECK(dec_c1[0].kind == Kind::AllJoin);
  const auto dec_c0 = equilibria(d, PR, cost_pr(d, 0.0)).equilibria;
  REQUIRE(dec_c0.size() == 1);
  CHECK(dec_c0[0].kind == Kind::NoneJoin);
}

TEST_CASE("every reported equilibrium satisfies its defining condition") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> K_dist(1.0, 20.0), rho_dist(0.01, 0.95), f_dist(-0.5, 1.5);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto p = unit(rho_dist(rng), K_dist(rng));
    for (auto policy : {NP, PR}) {
      const double c0 = cost(p, policy, 0.0), c1 = cost(p, policy, 1.0);
      const double fee = std::max(1e-6, std::min(c0, c1) + f_dist(rng) * std::abs(c1 - c0));
      const auto set = equilibria(p, policy, fee);
      REQUIRE_FALSE(set.equilibria.empty());
      int mixed = 0;
      for (const auto& eq : set.equilibria) {
        switch (eq.kind) {
          case Kind::AllJoin: CHECK(c1 >= fee * (1 - 1e-12)); break;
          case Kind::NoneJoin: CHECK(c0 <= fee * (1 + 1e-12)); break;
          case Kind::SomeJoin:
            ++mixed;
            CHECK(std::abs(cost(p, policy, *eq.phi) - fee) / fee < 1e-9);
            CHECK(eq.stable == (cost_shape(p, policy) == CostShape::MonotoneDecreasing));
            break;
          case Kind::Continuum: CHECK(cost_shape(p, policy) == CostShape::Constant); break;
        }
        CHECK(is_stable(p, policy, fee, eq) == eq.stable);
      }
      CHECK(mixed <= 1);
    }
  }
}

TEST_CASE("is_stable") {
  const auto p = unit(0.5, 2.0);
  const double phi_e = some_join_np(p, 0.75);
  CHECK_FALSE(is_stable(p, NP, 0.75, {Kind::SomeJoin, phi_e, false}));
  CHECK(is_stable(p, NP, 0.4, {Kind::AllJoin, 1.0, true}));
  CHECK(is_stable(unit(0.1, 6.0), PR, 0.2456140, {Kind::SomeJoin, some_join_pr(unit(0.1, 6.0), 0.2456140), true}));
  CHECK_THROWS_AS(is_stable(p, NP, 0.4, {Kind::NoneJoin, 0.0, true}), InvalidArgument);
}

TEST_CASE("equilibrium kind names") {
  for (auto k : {Kind::AllJoin, Kind::NoneJoin, Kind::SomeJoin, Kind::Continuum})
    CHECK(parse_equilibrium_kind(to_string(k)) == k);
  CHECK_THROWS_AS(parse_equilibrium_kind("maybe"), ParseError);
}
