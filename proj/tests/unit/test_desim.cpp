#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "../support/oracles.hpp"
#include "qprio/desim.hpp"
#include "qprio/error.hpp"

using namespace qprio;

namespace {

constexpr auto NP = Policy::NonPreemptive;
constexpr auto PR = Policy::PreemptiveResume;

// The interval checks below share one arrival stream (common random numbers)
// and number about twenty, so each runs at a Bonferroni-adjusted level that
// keeps the family-wise confidence at 99%.
constexpr double kCheckConfidence = 1.0 - 0.01 / 20;

SimConfig config(double rho, double K, Policy policy, double phi, std::uint64_t horizon, unsigned reps,
                 std::uint64_t seed = kDefaultSeed) {
  return make_sim_config(ModelParams::validate(rho, 1.0, K), policy, phi, horizon, reps, seed);
}

std::vector<CustomerRecord> trace(const SimConfig& c, std::uint64_t seed) {
  std::vector<CustomerRecord> out;
  const CustomerObserver observe = [&](const CustomerRecord& r) { out.push_back(r); };
  simulate_replication(c, seed, &observe);
  return out;
}

}  // namespace

TEST_CASE("config checks") {
  auto c = config(0.5, 2.0, NP, 0.5, 1000, 2);
  CHECK(c.warmup == 100);
  CHECK_NOTHROW(check_config(c));
  c.warmup = 1000;
  CHECK_THROWS_AS(check_config(c), InvalidArgument);
  c = config(0.5, 2.0, NP, 0.5, 1000, 0);
  CHECK_THROWS_AS(check_config(c), InvalidArgument);
  c = config(0.5, 2.0, NP, 0.5, 1000, 2);
  c.phi = 1.5;
  CHECK_THROWS_AS(check_config(c), InvalidArgument);
  c.phi = 0.5;
  c.fee = -1.0;
  CHECK_THROWS_AS(check_config(c), InvalidArgument);
  c.fee = 0.3;
  CHECK(effective_fee(c) == 0.3);
  CHECK_THROWS_AS(validate(config(0.5, 2.0, NP, 0.5, 1000, 1)), InvalidArgument);
}

TEST_CASE("replications are deterministic and independent of thread count") {
  const auto c = config(0.5, 6.0, PR, 0.4, 20000, 6, 99);
  const auto a = run_sim(c, 1);
  const auto b = run_sim(c, 3);
  CHECK(a == b);
  CHECK(a.replication_seeds.size() == 6);
  auto other = c;
  other.seed = 100;
  CHECK_FALSE(run_sim(other, 1).wait_ordinary->mean == a.wait_ordinary->mean);
}

TEST_CASE("preemption never loses or duplicates work") {
  const auto c = config(0.5, 6.0, PR, 0.5, 50000, 1);
  const auto records = trace(c, 5);
  REQUIRE(records.size() == 50000);
  unsigned preempted = 0;
  for (const auto& r : records) {
    CHECK(std::abs(r.received - r.service) <= 1e-9 * std::max(1.0, r.service));
    CHECK(r.departure - r.arrival >= r.service - 1e-9 * std::max(1.0, r.departure));
    if (r.premium) CHECK(r.preemptions == 0);
    if (r.preemptions > 0) ++preempted;
  }
  CHECK(preempted > 0);
}

TEST_CASE("non-preemptive service runs uninterrupted") {
  const auto c = config(0.7, 6.0, NP, 0.5, 50000, 1);
  const auto records = trace(c, 5);
  REQUIRE(records.size() == 50000);
  for (const auto& r : records) {
    CHECK(r.preemptions == 0);
    CHECK(std::abs(r.departure - r.first_start - r.service) <= 1e-9 * std::max(1.0, r.departure));
  }
}

TEST_CASE("arrival epochs do not depend on the premium fraction") {
  auto arrivals = [](double phi) {
    std::vector<double> out;
    for (const auto& r : trace(config(0.5, 2.0, PR, phi, 5000, 1), 17)) out.push_back(r.arrival);
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(arrivals(0.2) == arrivals(0.8));
}

TEST_CASE("queue-length integral equals total wait on every sample path") {
  for (auto policy : {NP, PR}) {
    const auto stats = simulate_replication(config(0.6, 4.0, policy, 0.3, 50000, 1), 21);
    CHECK(oracle::rel_close(stats.premium_queue_area, stats.premium_wait_total, 1e-9));
    CHECK(oracle::rel_close(stats.ordinary_queue_area, stats.ordinary_wait_total, 1e-9));
    CHECK(stats.premium_total + stats.ordinary_total == 50000);
  }
}

TEST_CASE("Little's law per class") {
  for (auto policy : {NP, PR}) {
    const auto c = config(0.5, 3.0, policy, 0.4, 200000, 10);
    std::vector<double> premium_L, ordinary_L;
    for (unsigned i = 0; i < c.replications; ++i) {
      const auto s = simulate_replication(c, replication_seed(c.seed, i));
      premium_L.push_back(s.premium_queue_area / s.end_time);
      ordinary_L.push_back(s.ordinary_queue_area / s.end_time);
    }
    const auto w = wait_times(c.params, policy, c.phi);
    const double lambda = c.params.lambda();
    CHECK(estimate_from(premium_L).covers(lambda * c.phi * w.premium, kCheckConfidence));
    CHECK(estimate_from(ordinary_L).covers(lambda * (1 - c.phi) * w.ordinary, kCheckConfidence));
  }
}

TEST_CASE("result invariants") {
  const auto r = run_sim(config(0.5, 2.0, NP, 0.3, 50000, 5));
  REQUIRE(r.wait_premium);
  REQUIRE(r.wait_ordinary);
  CHECK(*r.wait_premium->half_width(0.95) > 0);
  CHECK(*r.wait_ordinary->half_width(0.95) > 0);
  CHECK(*r.welfare.half_width(0.95) > 0);
  CHECK(r.welfare.mean == doctest::Approx(r.realized_phi * r.wait_premium->mean +
                                          (1 - r.realized_phi) * r.wait_ordinary->mean)
                             .epsilon(1e-12));
  CHECK(std::abs(r.realized_phi - 0.3) < 0.01);
  CHECK(r.analytical.wait_difference == doctest::Approx(cost_np(r.config.params, 0.3)));

  const auto none = run_sim(config(0.5, 2.0, NP, 0.0, 5000, 2));
  CHECK_FALSE(none.wait_premium.has_value());
  CHECK_FALSE(none.wait_difference.has_value());
  CHECK(none.revenue_rate.mean == 0.0);
  const auto all = run_sim(config(0.5, 2.0, NP, 1.0, 5000, 2));
  CHECK_FALSE(all.wait_ordinary.has_value());
}

TEST_CASE("simulation reproduces the closed forms") {
  SUBCASE("NP exponential, half premium") {
    const auto report = validate(config(0.5, 2.0, NP, 0.5, 200000, 10), 0, kCheckConfidence);
    CHECK(report.passed);
    CHECK(report.checks.size() == 5);
  }
  SUBCASE("NP exponential, all premium is FCFS") {
    const auto report = validate(config(0.5, 2.0, NP, 1.0, 200000, 10), 0, kCheckConfidence);
    CHECK(report.passed);
    CHECK(report.result.wait_premium->covers(1.0, kCheckConfidence));
  }
  SUBCASE("PR constant-cost knife edge") {
    for (double phi : {0.2, 0.5, 0.8}) {
      CAPTURE(phi);
      const auto report = validate(config(1.0 / 3.0, 4.0, PR, phi, 200000, 10), 0, kCheckConfidence);
      CHECK(report.passed);
      CHECK(report.result.wait_difference->covers(1.0, kCheckConfidence));
    }
  }
  SUBCASE("PR welfare at the social optimum") {
    const auto report = validate(config(0.5, 6.0, PR, 0.5857864, 200000, 10), 0, kCheckConfidence);
    CHECK(report.passed);
    CHECK(report.result.welfare.covers(2.6568542, kCheckConfidence));
  }
  SUBCASE("NP deterministic service") {
    const auto report = validate(config(0.5, 1.0, NP, 0.3, 200000, 10), 0, kCheckConfidence);
    CHECK(report.passed);
    CHECK(report.result.welfare.covers(0.5, kCheckConfidence));
  }
  SUBCASE("PR gamma service") {
    const auto report = validate(config(0.7, 1.5, PR, 0.6, 200000, 10), 0, kCheckConfidence);
    CHECK(report.passed);
  }
}

TEST_CASE("replication seeds differ") {
  CHECK(replication_seed(1, 0) != replication_seed(1, 1));
  CHECK(replication_seed(1, 0) != replication_seed(2, 0));
}
