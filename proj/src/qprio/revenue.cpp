#include "qprio/revenue.hpp"

#include <cmath>

#include "qprio/equilibrium.hpp"
#include "qprio/error.hpp"

namespace qprio {

std::string_view to_string(RevenueShape::Kind kind) {
  return kind == RevenueShape::Kind::Unimodal ? "unimodal" : "increasing";
}

double revenue(const ModelParams& p, Policy policy, double phi) {
  check_fraction(phi);
  const double rho = p.rho();
  const double K = p.K();
  const double denom = 2.0 * (1.0 - rho) * (1.0 - phi * rho);
  if (policy == Policy::NonPreemptive) return K * rho * rho * rho * phi / denom;
  return (K * phi * rho * rho + (2.0 - K) * phi * phi * rho * rho * (1.0 - rho)) / denom;
}

double revenue_derivative(const ModelParams& p, Policy policy, double phi) {
  check_fraction(phi);
  const double rho = p.rho();
  const double K = p.K();
  const double denom = 2.0 * (1.0 - rho) * (1.0 - phi * rho) * (1.0 - phi * rho);
  if (policy == Policy::NonPreemptive) return K * rho * rho * rho / denom;
  // Sign is carried entirely by K + (2-K) phi (1-rho) (2 - phi rho).
  return rho * rho * (K + (2.0 - K) * phi * (1.0 - rho) * (2.0 - phi * rho)) / denom;
}

double unimodal_threshold(double K) {
  return 1.5 - 0.5 * std::sqrt((5.0 * K - 2.0) / (K - 2.0));
}

RevenueShape revenue_shape_pr(const ModelParams& p) {
  if (p.K() <= 4.0) return {RevenueShape::Kind::MonotoneIncreasing, std::nullopt};
  const double threshold = unimodal_threshold(p.K());
  if (p.rho() >= threshold) return {RevenueShape::Kind::MonotoneIncreasing, std::nullopt};
  return {RevenueShape::Kind::Unimodal, threshold};
}

RevenueShape revenue_shape(const ModelParams& params, Policy policy) {
  if (policy == Policy::NonPreemptive) return {RevenueShape::Kind::MonotoneIncreasing, std::nullopt};
  return revenue_shape_pr(params);
}

namespace {

double interior_root_term(const ModelParams& p) {
  const double K = p.K();
  const double rho = p.rho();
  return std::sqrt((K - 2.0 - 2.0 * rho * (K - 1.0)) / ((K - 2.0) * (1.0 - rho)));
}

}  // namespace

double phi_max(const ModelParams& p) {
  if (revenue_shape_pr(p).kind != RevenueShape::Kind::Unimodal)
    throw NoInteriorSolution("PR revenue is monotone here; maximum is at phi = 1");
  return (1.0 - interior_root_term(p)) / p.rho();
}

double max_revenue_pr_interior(const ModelParams& p) {
  if (revenue_shape_pr(p).kind != RevenueShape::Kind::Unimodal)
    throw NoInteriorSolution("PR revenue is monotone here; maximum is at phi = 1");
  const double K = p.K();
  const double rho = p.rho();
  return (2.0 * (K - 2.0) - rho * (3.0 * K - 4.0)) / (2.0 * (1.0 - rho)) -
         (K - 2.0) * interior_root_term(p);
}

RevenueProfile max_revenue(const ModelParams& params, Policy policy, double margin) {
  if (!(margin >= 0.0) || !std::isfinite(margin)) throw InvalidArgument("margin must be >= 0");
  RevenueProfile profile{policy, revenue_shape(params, policy), 1.0, 0.0, 0.0, false};
  if (profile.shape.kind == RevenueShape::Kind::Unimodal) {
    profile.phi_star = phi_max(params);
    profile.fee_star = cost_pr(params, profile.phi_star);
    profile.revenue_star = max_revenue_pr_interior(params);
  } else {
    profile.fee_star = cost(params, policy, 1.0) - margin;
    if (!(profile.fee_star > 0.0)) throw InvalidArgument("margin must be below cost(1)");
    profile.revenue_star = params.lambda() * profile.fee_star;
  }
  for (const auto& eq : equilibria(params, policy, profile.fee_star).equilibria) {
    if (eq.phi && std::abs(*eq.phi - profile.phi_star) < 1e-9) profile.stable = eq.stable;
  }
  return profile;
}

PolicyComparison compare_policies(const ModelParams& params) {
  const double np = max_revenue(params, Policy::NonPreemptive).revenue_star;
  const double pr = max_revenue(params, Policy::PreemptiveResume).revenue_star;
  return {np, pr, pr - np};
}

}  // namespace qprio
