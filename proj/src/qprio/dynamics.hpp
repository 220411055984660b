#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "qprio/desim.hpp"
#include "qprio/equilibrium.hpp"

namespace qprio {

enum class DynamicsMode {
  Analytical,  // closed-form cost
  Empirical,   // cost estimated by a short simulation each round
};

std::string_view to_string(DynamicsMode mode);

struct DynamicsConfig {
  ModelParams params;
  Policy policy;
  double fee;
  double phi0;
  unsigned rounds = 10000;
  double step = 0.5;  // gain in (0, 1]
  DynamicsMode mode = DynamicsMode::Analytical;
  // Empirical mode: customers per estimate; every round reuses `seed`
  // (common random numbers) so estimates differ only through phi.
  std::uint64_t sim_horizon = 20000;
  std::uint64_t seed = kDefaultSeed;

  bool operator==(const DynamicsConfig&) const = default;
};

inline constexpr double kConvergenceTolerance = 1e-6;
// A simulated cost is a step function of phi (each arrival's class flips at
// its own threshold), so empirical runs settle into a band, not a point.
inline constexpr double kEmpiricalConvergenceTolerance = 1e-3;
inline constexpr unsigned kConvergenceRounds = 50;
// Empirical estimates need customers in both classes.
inline constexpr double kEmpiricalProbeFloor = 0.005;

struct DynamicsTrace {
  std::vector<double> phi;  // phi[t] is the fraction after round t; phi[0] = phi0
  bool converged;
  double limit;                 // last phi
  EquilibriumKind verdict;      // classification of `limit`

  bool operator==(const DynamicsTrace&) const = default;
};

// Simulated E[W_o] - E[W_p] at phi from one replication.
double simulated_cost(const ModelParams& params, Policy policy, double phi,
                      std::uint64_t horizon, std::uint64_t seed);

/// Damped best-response dynamics on the premium fraction:
///   phi <- clamp(phi + step * sign(g) * min(|g|, 1), 0, 1),  g = (cost(phi) - fee) / fee.
/// Converged once |phi_{t+1} - phi_t| stays below 1e-6 (1e-3 in empirical mode)
/// for 50 consecutive rounds. Running out of rounds is reported through
/// `converged`, not thrown.
DynamicsTrace adaptive_dynamics(const DynamicsConfig& config);

}  // namespace qprio
