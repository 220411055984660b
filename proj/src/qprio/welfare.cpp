#include "qprio/welfare.hpp"

#include <cmath>

#include "qprio/revenue.hpp"

namespace qprio {

namespace {

bool is_exponential_variance(double K) { return std::abs(K - 2.0) <= 2e-9; }

double interior_social_phi(double rho) { return (1.0 - std::sqrt(1.0 - rho)) / rho; }

}  // namespace

std::string_view to_string(SocialOptimum::Kind kind) {
  switch (kind) {
    case SocialOptimum::Kind::AllStates: return "all";
    case SocialOptimum::Kind::Boundaries: return "boundaries";
    case SocialOptimum::Kind::Interior: return "interior";
  }
  return "?";
}

double welfare(const ModelParams& p, Policy policy, double phi) {
  check_fraction(phi);
  const double rho = p.rho();
  const double K = p.K();
  const double mu = p.mu();
  if (policy == Policy::NonPreemptive) return K * rho / (2.0 * mu * (1.0 - rho));
  const double numer =
      rho * (K + 2.0 * phi * (1.0 - phi) * (1.0 - rho) - K * phi * (1.0 - phi * (1.0 - rho)));
  return numer / (2.0 * mu * (1.0 - rho) * (1.0 - phi * rho));
}

SocialOptimum socially_optimal(const ModelParams& params, Policy policy) {
  if (policy == Policy::NonPreemptive || is_exponential_variance(params.K()))
    return {SocialOptimum::Kind::AllStates, std::nullopt};
  if (params.K() < 2.0) return {SocialOptimum::Kind::Boundaries, std::nullopt};
  return {SocialOptimum::Kind::Interior, interior_social_phi(params.rho())};
}

WelfareProfile welfare_at_revenue_max(const ModelParams& params, Policy policy) {
  const auto revenue_max = max_revenue(params, policy);
  const auto optimal = socially_optimal(params, policy);
  WelfareProfile profile{policy, revenue_max.phi_star,
                         welfare(params, policy, revenue_max.phi_star), optimal, 0.0, 0.0};
  const double boundary = welfare(params, policy, 0.0);
  profile.optimal_welfare = optimal.phi ? welfare(params, policy, *optimal.phi) : boundary;
  // For K < 2 the interior stationary point is the PR maximum; otherwise the
  // boundaries (which coincide) are.
  profile.worst_welfare =
      (policy == Policy::PreemptiveResume && optimal.kind == SocialOptimum::Kind::Boundaries)
          ? welfare(params, policy, interior_social_phi(params.rho()))
          : boundary;
  return profile;
}

}  // namespace qprio
