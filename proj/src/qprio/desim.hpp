#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "qprio/model.hpp"
#include "qprio/stats.hpp"

namespace qprio {

struct SimConfig {
  ModelParams params;
  Policy policy;
  double phi;  // probability that an arrival buys the upgrade
  std::uint64_t horizon;  // customers generated per replication
  std::uint64_t warmup;   // leading customers excluded from statistics
  unsigned replications;
  std::uint64_t seed;
  // Fee used for revenue accounting; cost(phi) when absent.
  std::optional<double> fee;

  bool operator==(const SimConfig&) const = default;
};

inline constexpr std::uint64_t kDefaultSeed = 20200901;

// Config with the default 10% warmup.
SimConfig make_sim_config(const ModelParams& params, Policy policy, double phi,
                          std::uint64_t horizon, unsigned replications,
                          std::uint64_t seed = kDefaultSeed);

// Throws InvalidArgument unless horizon > warmup, replications >= 1, phi in [0,1]
// and any explicit fee is positive.
void check_config(const SimConfig& config);

double effective_fee(const SimConfig& config);

// Seed of replication `index` under master seed `seed`.
std::uint64_t replication_seed(std::uint64_t seed, unsigned index);

// Life of one customer, reported to an optional observer as it departs.
struct CustomerRecord {
  std::uint64_t index;
  bool premium;
  double arrival;
  double service;      // sampled requirement
  double received;     // sum of service segments actually delivered
  double first_start;  // start of the first service segment
  double departure;
  unsigned preemptions;
};

using CustomerObserver = std::function<void(const CustomerRecord&)>;

struct ReplicationStats {
  std::uint64_t seed = 0;
  // Measured customers (index >= warmup).
  std::uint64_t premium_count = 0;
  std::uint64_t ordinary_count = 0;
  double premium_wait_sum = 0.0;
  double ordinary_wait_sum = 0.0;
  // Arrival time of the first measured customer to the arrival epoch that
  // would follow the last one; divides the measured joiner count.
  double measured_span = 0.0;
  // Whole-run bookkeeping for conservation checks.
  double end_time = 0.0;
  double premium_queue_area = 0.0;  // integral of waiting premium customers over time
  double ordinary_queue_area = 0.0;
  double premium_wait_total = 0.0;
  double ordinary_wait_total = 0.0;
  std::uint64_t premium_total = 0;
  std::uint64_t ordinary_total = 0;
  std::uint64_t preemptions = 0;
};

/// Runs one replication: Poisson arrivals, Bernoulli(phi) class choice and
/// service draws come from three independent substreams of `seed`, so the
/// arrival epochs do not depend on phi. Completions are processed before an
/// arrival carrying the same timestamp.
ReplicationStats simulate_replication(const SimConfig& config, std::uint64_t seed,
                                      const CustomerObserver* observer = nullptr);

struct AnalyticalPrediction {
  double wait_premium;
  double wait_ordinary;
  double wait_difference;
  double welfare;
  double revenue_rate;
  double fee;

  bool operator==(const AnalyticalPrediction&) const = default;
};

AnalyticalPrediction predict(const SimConfig& config);

struct SimulationResult {
  SimConfig config;
  // Absent when no replication produced a customer of that class.
  std::optional<Estimate> wait_premium;
  std::optional<Estimate> wait_ordinary;
  std::optional<Estimate> wait_difference;
  Estimate welfare;
  Estimate revenue_rate;
  double realized_phi;
  AnalyticalPrediction analytical;
  std::vector<std::uint64_t> replication_seeds;

  bool operator==(const SimulationResult&) const = default;
};

SimulationResult aggregate(const SimConfig& config, const std::vector<ReplicationStats>& reps);

// Replications fan out over `threads` workers (0: worker_threads()); the
// result does not depend on the thread count.
SimulationResult run_sim(const SimConfig& config, unsigned threads = 0);

struct ValidationCheck {
  std::string quantity;
  double analytical;
  double estimate;
  double half_width;
  bool pass;

  bool operator==(const ValidationCheck&) const = default;
};

struct ValidationReport {
  SimulationResult result;
  double confidence;
  std::vector<ValidationCheck> checks;
  bool passed;

  bool operator==(const ValidationReport&) const = default;
};

inline constexpr double kValidationConfidence = 0.99;

// Simulates and compares every estimable quantity against its closed form.
// Needs at least two replications.
ValidationReport validate(const SimConfig& config, unsigned threads = 0,
                          double confidence = kValidationConfidence);
ValidationReport validate(const ModelParams& params, Policy policy, double phi,
                          std::uint64_t budget, unsigned replications = 20,
                          std::uint64_t seed = kDefaultSeed);

}  // namespace qprio
