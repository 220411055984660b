#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qprio/model.hpp"

namespace qprio {

enum class EquilibriumKind { AllJoin, NoneJoin, SomeJoin, Continuum };

std::string_view to_string(EquilibriumKind kind);
EquilibriumKind parse_equilibrium_kind(std::string_view text);

struct Equilibrium {
  EquilibriumKind kind;
  // Premium fraction at the equilibrium; empty for Continuum (every phi).
  std::optional<double> phi;
  // Asymptotically stable under the sign-following best-response dynamics.
  bool stable;

  bool operator==(const Equilibrium&) const = default;
};

struct EquilibriumSet {
  ModelParams params;
  Policy policy;
  double fee;
  std::vector<Equilibrium> equilibria;

  bool operator==(const EquilibriumSet&) const = default;
};

// Relative tolerance for deciding that a fee sits exactly on cost(0) or cost(1).
inline constexpr double kBoundaryFeeTolerance = 1e-12;

// Interior root of cost_np(phi) = C. Throws NoInteriorSolution unless
// cost_np(0) < C < cost_np(1).
double some_join_np(const ModelParams& params, double fee);

// Interior root of cost_pr(phi) = C. Throws NoInteriorSolution when C is not
// strictly inside the cost range or when the cost is constant in phi.
double some_join_pr(const ModelParams& params, double fee);

double some_join(const ModelParams& params, Policy policy, double fee);

/// All equilibria of the joining game at fee C. Customers who are exactly
/// indifferent are taken to join, so a fee equal to cost(1) keeps all-join
/// as an equilibrium.
EquilibriumSet equilibria(const ModelParams& params, Policy policy, double fee);

// Stability flag of `eq`, which must be a member of equilibria(params, policy, fee).
bool is_stable(const ModelParams& params, Policy policy, double fee, const Equilibrium& eq);

}  // namespace qprio
