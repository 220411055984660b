#include "qprio/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "qprio/error.hpp"

namespace qprio {

std::string_view to_string(DynamicsMode mode) {
  return mode == DynamicsMode::Empirical ? "empirical" : "analytical";
}

double simulated_cost(const ModelParams& params, Policy policy, double phi,
                      std::uint64_t horizon, std::uint64_t seed) {
  const auto config = make_sim_config(params, policy, phi, horizon, 1, seed);
  const auto stats = simulate_replication(config, seed);
  if (stats.premium_count == 0 || stats.ordinary_count == 0)
    throw SimulationError("cost estimate needs customers of both classes");
  return stats.ordinary_wait_sum / static_cast<double>(stats.ordinary_count) -
         stats.premium_wait_sum / static_cast<double>(stats.premium_count);
}

DynamicsTrace adaptive_dynamics(const DynamicsConfig& c) {
  if (!(c.fee > 0.0) || !std::isfinite(c.fee)) throw InvalidArgument("fee must be > 0");
  check_fraction(c.phi0, "phi0");
  if (!(c.step > 0.0 && c.step <= 1.0)) throw InvalidArgument("step must lie in (0,1]");
  if (c.mode == DynamicsMode::Empirical && c.sim_horizon < 10)
    throw InvalidArgument("empirical dynamics needs a horizon of at least 10 customers");

  auto cost_at = [&](double phi) {
    if (c.mode == DynamicsMode::Analytical) return cost(c.params, c.policy, phi);
    const double probe = std::clamp(phi, kEmpiricalProbeFloor, 1.0 - kEmpiricalProbeFloor);
    return simulated_cost(c.params, c.policy, probe, c.sim_horizon, c.seed);
  };

  const double tolerance =
      c.mode == DynamicsMode::Empirical ? kEmpiricalConvergenceTolerance : kConvergenceTolerance;
  DynamicsTrace trace{{c.phi0}, false, c.phi0, EquilibriumKind::SomeJoin};
  double phi = c.phi0;
  unsigned quiet = 0;
  for (unsigned round = 0; round < c.rounds; ++round) {
    // Relative gap keeps the speed independent of the time unit.
    const double gap = (cost_at(phi) - c.fee) / c.fee;
    const double move = std::copysign(std::min(std::abs(gap), 1.0), gap);
    const double next = std::clamp(phi + c.step * (gap == 0.0 ? 0.0 : move), 0.0, 1.0);
    quiet = std::abs(next - phi) < tolerance ? quiet + 1 : 0;
    phi = next;
    trace.phi.push_back(phi);
    if (quiet >= kConvergenceRounds) {
      trace.converged = true;
      break;
    }
  }
  trace.limit = phi;
  if (phi <= kConvergenceTolerance)
    trace.verdict = EquilibriumKind::NoneJoin;
  else if (phi >= 1.0 - kConvergenceTolerance)
    trace.verdict = EquilibriumKind::AllJoin;
  else
    trace.verdict = EquilibriumKind::SomeJoin;
  return trace;
}

}  // namespace qprio
