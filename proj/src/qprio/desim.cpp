#include "qprio/desim.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <random>

#include "qprio/error.hpp"
#include "qprio/parallel.hpp"
#include "qprio/random.hpp"
#include "qprio/service.hpp"
#include "qprio/welfare.hpp"

namespace qprio {

namespace {

enum Stream : std::uint64_t { kArrivalStream = 1, kClassStream = 2, kServiceStream = 3 };

struct Job {
  double arrival;
  double service;
  double remaining;
  double received;
  double first_start;
  std::uint64_t index;
  unsigned preemptions;
  bool premium;
};

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace

SimConfig make_sim_config(const ModelParams& params, Policy policy, double phi,
                          std::uint64_t horizon, unsigned replications, std::uint64_t seed) {
  return SimConfig{params, policy, phi, horizon, horizon / 10, replications, seed, std::nullopt};
}

void check_config(const SimConfig& c) {
  check_fraction(c.phi);
  if (c.horizon == 0 || c.warmup >= c.horizon) throw InvalidArgument("need horizon > warmup >= 0");
  if (c.replications < 1) throw InvalidArgument("need at least one replication");
  if (c.fee && !(*c.fee > 0.0 && std::isfinite(*c.fee))) throw InvalidArgument("fee must be > 0");
}

double effective_fee(const SimConfig& c) { return c.fee ? *c.fee : cost(c.params, c.policy, c.phi); }

std::uint64_t replication_seed(std::uint64_t seed, unsigned index) {
  return derive_seed(seed, 0x5eed0000ULL + index);
}

ReplicationStats simulate_replication(const SimConfig& config, std::uint64_t seed,
                                      const CustomerObserver* observer) {
  check_config(config);
  const auto service_law = ServiceDistribution::make(config.params.mu(), config.params.K());
  Rng arrival_rng(derive_seed(seed, kArrivalStream));
  Rng class_rng(derive_seed(seed, kClassStream));
  Rng service_rng(derive_seed(seed, kServiceStream));
  std::exponential_distribution<double> interarrival(config.params.lambda());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const bool preemptive = config.policy == Policy::PreemptiveResume;

  ReplicationStats stats;
  stats.seed = seed;

  std::deque<Job> premium_queue;
  std::deque<Job> ordinary_queue;
  Job current{};
  bool busy = false;
  double segment_start = 0.0;
  double now = 0.0;
  double next_arrival = interarrival(arrival_rng);
  std::uint64_t generated = 0;
  double measured_start = 0.0;

  auto advance = [&](double t) {
    const double dt = t - now;
    stats.premium_queue_area += static_cast<double>(premium_queue.size()) * dt;
    stats.ordinary_queue_area += static_cast<double>(ordinary_queue.size()) * dt;
    now = t;
  };
  auto start = [&](Job job) {
    if (std::isnan(job.first_start)) job.first_start = now;
    current = job;
    segment_start = now;
    busy = true;
  };
  auto start_next = [&] {
    if (!premium_queue.empty()) {
      start(premium_queue.front());
      premium_queue.pop_front();
    } else if (!ordinary_queue.empty()) {
      start(ordinary_queue.front());
      ordinary_queue.pop_front();
    } else {
      busy = false;
    }
  };

  for (;;) {
    const bool arrivals_left = generated < config.horizon;
    if (!busy && !arrivals_left) break;
    const double completion = busy ? segment_start + current.remaining : kInfinity;
    if (busy && (!arrivals_left || completion <= next_arrival)) {
      advance(completion);
      current.received += now - segment_start;
      const double wait = now - current.arrival - current.service;
      if (current.premium) {
        stats.premium_wait_total += wait;
        ++stats.premium_total;
      } else {
        stats.ordinary_wait_total += wait;
        ++stats.ordinary_total;
      }
      if (current.index >= config.warmup) {
        if (current.premium) {
          stats.premium_wait_sum += wait;
          ++stats.premium_count;
        } else {
          stats.ordinary_wait_sum += wait;
          ++stats.ordinary_count;
        }
      }
      if (observer) {
        (*observer)({current.index, current.premium, current.arrival, current.service,
                     current.received, current.first_start, now, current.preemptions});
      }
      start_next();
      continue;
    }

    advance(next_arrival);
    Job job{};
    job.arrival = now;
    job.premium = unit(class_rng) < config.phi;
    job.service = service_law.sample(service_rng);
    job.remaining = job.service;
    job.first_start = std::numeric_limits<double>::quiet_NaN();
    job.index = generated++;
    if (job.index == config.warmup) measured_start = now;
    next_arrival = now + interarrival(arrival_rng);
    if (generated == config.horizon) stats.measured_span = next_arrival - measured_start;

    if (!busy) {
      start(job);
    } else if (preemptive && job.premium && !current.premium) {
      const double served = now - segment_start;
      current.remaining -= served;
      current.received += served;
      if (current.remaining < 0.0) {
        if (current.remaining < -1e-9 * std::max(1.0, current.service))
          throw SimulationError("negative remaining work after preemption");
        current.remaining = 0.0;
      }
      ++current.preemptions;
      ++stats.preemptions;
      ordinary_queue.push_front(current);
      start(job);
    } else {
      (job.premium ? premium_queue : ordinary_queue).push_back(job);
    }
  }
  stats.end_time = now;
  return stats;
}

AnalyticalPrediction predict(const SimConfig& c) {
  const auto waits = wait_times(c.params, c.policy, c.phi);
  const double fee = effective_fee(c);
  return {waits.premium,
          waits.ordinary,
          waits.ordinary - waits.premium,
          welfare(c.params, c.policy, c.phi),
          c.params.lambda() * c.phi * fee,
          fee};
}

SimulationResult aggregate(const SimConfig& config, const std::vector<ReplicationStats>& reps) {
  const double fee = effective_fee(config);
  std::vector<double> premium, ordinary, difference, welfare_values, revenue;
  std::uint64_t premium_total = 0;
  std::uint64_t customers = 0;
  for (const auto& r : reps) {
    const bool has_premium = r.premium_count > 0;
    const bool has_ordinary = r.ordinary_count > 0;
    const double wp = has_premium ? r.premium_wait_sum / static_cast<double>(r.premium_count) : 0.0;
    const double wo = has_ordinary ? r.ordinary_wait_sum / static_cast<double>(r.ordinary_count) : 0.0;
    if (has_premium) premium.push_back(wp);
    if (has_ordinary) ordinary.push_back(wo);
    if (has_premium && has_ordinary) difference.push_back(wo - wp);
    const auto n = r.premium_count + r.ordinary_count;
    welfare_values.push_back((r.premium_wait_sum + r.ordinary_wait_sum) / static_cast<double>(n));
    revenue.push_back(fee * static_cast<double>(r.premium_count) / r.measured_span);
    premium_total += r.premium_count;
    customers += n;
  }

  SimulationResult result{config,
                          std::nullopt,
                          std::nullopt,
                          std::nullopt,
                          estimate_from(welfare_values),
                          estimate_from(revenue),
                          static_cast<double>(premium_total) / static_cast<double>(customers),
                          predict(config),
                          {}};
  if (!premium.empty()) result.wait_premium = estimate_from(premium);
  if (!ordinary.empty()) result.wait_ordinary = estimate_from(ordinary);
  if (!difference.empty()) result.wait_difference = estimate_from(difference);
  // Point welfare is the realized-mix average of the class means.
  const double phi_hat = result.realized_phi;
  result.welfare.mean = (result.wait_premium ? phi_hat * result.wait_premium->mean : 0.0) +
                        (result.wait_ordinary ? (1.0 - phi_hat) * result.wait_ordinary->mean : 0.0);
  for (const auto& r : reps) result.replication_seeds.push_back(r.seed);
  return result;
}

SimulationResult run_sim(const SimConfig& config, unsigned threads) {
  check_config(config);
  std::vector<ReplicationStats> reps(config.replications);
  parallel_for(reps.size(), threads == 0 ? worker_threads() : threads, [&](std::size_t i) {
    reps[i] = simulate_replication(config, replication_seed(config.seed, static_cast<unsigned>(i)));
  });
  return aggregate(config, reps);
}

ValidationReport validate(const SimConfig& config, unsigned threads, double confidence) {
  if (config.replications < 2) throw InvalidArgument("validation needs at least two replications");
  ValidationReport report{run_sim(config, threads), confidence, {}, true};
  const auto& r = report.result;
  const auto& a = r.analytical;
  auto check = [&](const char* name, double analytical, const std::optional<Estimate>& est) {
    if (!est) return;
    const auto hw = est->half_width(confidence);
    if (!hw) return;
    const bool pass = std::abs(analytical - est->mean) <= *hw;
    report.checks.push_back({name, analytical, est->mean, *hw, pass});
    report.passed = report.passed && pass;
  };
  check("wait_premium", a.wait_premium, r.wait_premium);
  check("wait_ordinary", a.wait_ordinary, r.wait_ordinary);
  check("wait_difference", a.wait_difference, r.wait_difference);
  check("welfare", a.welfare, r.welfare);
  if (config.phi > 0.0) check("revenue_rate", a.revenue_rate, r.revenue_rate);
  return report;
}

ValidationReport validate(const ModelParams& params, Policy policy, double phi,
                          std::uint64_t budget, unsigned replications, std::uint64_t seed) {
  return validate(make_sim_config(params, policy, phi, budget, replications, seed));
}

}  // namespace qprio
