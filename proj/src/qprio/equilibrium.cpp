#include "qprio/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qprio/error.hpp"

namespace qprio {

namespace {

bool same_fee(double a, double b) {
  return std::abs(a - b) <= kBoundaryFeeTolerance * std::max(std::abs(a), std::abs(b));
}

void check_fee(double fee) {
  if (!(fee > 0.0) || !std::isfinite(fee)) throw InvalidArgument("fee must be finite and > 0");
}

// Fee strictly inside (lo, hi) with boundary ties excluded.
bool strictly_inside(double fee, double lo, double hi) {
  return fee > lo && fee < hi && !same_fee(fee, lo) && !same_fee(fee, hi);
}

}  // namespace

std::string_view to_string(EquilibriumKind kind) {
  switch (kind) {
    case EquilibriumKind::AllJoin: return "all_join";
    case EquilibriumKind::NoneJoin: return "none_join";
    case EquilibriumKind::SomeJoin: return "some_join";
    case EquilibriumKind::Continuum: return "continuum";
  }
  return "?";
}

EquilibriumKind parse_equilibrium_kind(std::string_view text) {
  for (auto kind : {EquilibriumKind::AllJoin, EquilibriumKind::NoneJoin,
                    EquilibriumKind::SomeJoin, EquilibriumKind::Continuum})
    if (to_string(kind) == text) return kind;
  throw ParseError("unknown equilibrium kind '" + std::string(text) + "'");
}

double some_join_np(const ModelParams& p, double fee) {
  check_fee(fee);
  if (!strictly_inside(fee, cost_np(p, 0.0), cost_np(p, 1.0)))
    throw NoInteriorSolution("fee outside (cost_np(0), cost_np(1)): no interior root");
  const double rho = p.rho();
  return 1.0 / rho - p.K() * rho / (2.0 * p.mu() * fee * (1.0 - rho));
}

double some_join_pr(const ModelParams& p, double fee) {
  check_fee(fee);
  if (cost_shape_pr(p) == CostShape::Constant)
    throw NoInteriorSolution("PR cost is constant in phi: no isolated root");
  const double c0 = cost_pr(p, 0.0);
  const double c1 = cost_pr(p, 1.0);
  if (!strictly_inside(fee, std::min(c0, c1), std::max(c0, c1)))
    throw NoInteriorSolution("fee outside the open range of cost_pr: no interior root");
  const double rho = p.rho();
  const double scaled_fee = 2.0 * p.mu() * fee;
  return (scaled_fee * (1.0 - rho) - p.K() * rho) /
         (rho * (1.0 - rho) * (scaled_fee + 2.0 - p.K()));
}

double some_join(const ModelParams& params, Policy policy, double fee) {
  return policy == Policy::NonPreemptive ? some_join_np(params, fee) : some_join_pr(params, fee);
}

EquilibriumSet equilibria(const ModelParams& params, Policy policy, double fee) {
  check_fee(fee);
  EquilibriumSet set{params, policy, fee, {}};
  auto& out = set.equilibria;
  const Equilibrium all_join{EquilibriumKind::AllJoin, 1.0, true};
  const Equilibrium none_join{EquilibriumKind::NoneJoin, 0.0, true};

  const double c0 = cost(params, policy, 0.0);
  const double c1 = cost(params, policy, 1.0);
  switch (cost_shape(params, policy)) {
    case CostShape::Constant:
      if (same_fee(fee, c0))
        out.push_back({EquilibriumKind::Continuum, std::nullopt, false});
      else
        out.push_back(fee < c0 ? all_join : none_join);
      break;
    case CostShape::MonotoneIncreasing:
      if (fee < c0 || same_fee(fee, c0)) {
        out.push_back(all_join);
      } else if (same_fee(fee, c1)) {
        out.push_back(all_join);
        out.push_back(none_join);
      } else if (fee > c1) {
        out.push_back(none_join);
      } else {
        out.push_back(all_join);
        out.push_back(none_join);
        out.push_back({EquilibriumKind::SomeJoin, some_join(params, policy, fee), false});
      }
      break;
    case CostShape::MonotoneDecreasing:
      if (fee < c1 || same_fee(fee, c1))
        out.push_back(all_join);
      else if (fee > c0 || same_fee(fee, c0))
        out.push_back(none_join);
      else
        out.push_back({EquilibriumKind::SomeJoin, some_join_pr(params, fee), true});
      break;
  }
  return set;
}

bool is_stable(const ModelParams& params, Policy policy, double fee, const Equilibrium& eq) {
  const auto set = equilibria(params, policy, fee);
  for (const auto& member : set.equilibria) {
    if (member.kind != eq.kind) continue;
    if (member.phi.has_value() != eq.phi.has_value()) continue;
    if (member.phi && std::abs(*member.phi - *eq.phi) > 1e-12) continue;
    return member.stable;
  }
  throw InvalidArgument("equilibrium is not a member of the equilibrium set at this fee");
}

}  // namespace qprio
