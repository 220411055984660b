#include "qprio/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "qprio/error.hpp"

namespace qprio {

std::string_view to_string(Policy policy) {
  return policy == Policy::NonPreemptive ? "np" : "pr";
}

Policy parse_policy(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "np") return Policy::NonPreemptive;
  if (lower == "pr") return Policy::PreemptiveResume;
  throw InvalidArgument("unknown policy '" + std::string(text) + "' (expected np or pr)");
}

std::string_view to_string(CostShape shape) {
  switch (shape) {
    case CostShape::MonotoneIncreasing: return "increasing";
    case CostShape::Constant: return "constant";
    case CostShape::MonotoneDecreasing: return "decreasing";
  }
  return "?";
}

ModelParams ModelParams::validate(double lambda, double mu, double K) {
  if (!std::isfinite(lambda) || !std::isfinite(mu) || !std::isfinite(K))
    throw InvalidArgument("parameters must be finite");
  if (lambda <= 0.0) throw InvalidArgument("lambda must be > 0");
  if (mu <= 0.0) throw InvalidArgument("mu must be > 0");
  const double rho = lambda / mu;
  if (!(rho > 0.0 && rho < 1.0)) throw InvalidArgument("rho not in (0,1)");
  if (K < 1.0) throw InvalidArgument("K < 1 (second moment below squared mean)");
  return ModelParams(lambda, mu, K);
}

void check_fraction(double phi, const char* what) {
  if (!(phi >= 0.0 && phi <= 1.0))
    throw InvalidArgument(std::string(what) + " must lie in [0,1]");
}

double cost_np(const ModelParams& p, double phi) {
  check_fraction(phi);
  const double rho = p.rho();
  return p.K() * rho * rho / (2.0 * p.mu() * (1.0 - rho) * (1.0 - phi * rho));
}

double cost_pr(const ModelParams& p, double phi) {
  check_fraction(phi);
  const double rho = p.rho();
  const double K = p.K();
  return (K * rho + (2.0 - K) * phi * rho * (1.0 - rho)) /
         (2.0 * p.mu() * (1.0 - rho) * (1.0 - phi * rho));
}

double cost(const ModelParams& params, Policy policy, double phi) {
  return policy == Policy::NonPreemptive ? cost_np(params, phi) : cost_pr(params, phi);
}

double constant_cost_load(double K) { return (K - 2.0) / (2.0 * K - 2.0); }

CostShape cost_shape_pr(const ModelParams& p) {
  if (p.K() <= 2.0) return CostShape::MonotoneIncreasing;
  const double edge = constant_cost_load(p.K());
  if (std::abs(p.rho() - edge) <= kConstantShapeTolerance * edge) return CostShape::Constant;
  return p.rho() < edge ? CostShape::MonotoneDecreasing : CostShape::MonotoneIncreasing;
}

CostShape cost_shape(const ModelParams& params, Policy policy) {
  return policy == Policy::NonPreemptive ? CostShape::MonotoneIncreasing
                                         : cost_shape_pr(params);
}

WaitTimes wait_times(const ModelParams& p, Policy policy, double phi) {
  check_fraction(phi);
  const double rho = p.rho();
  const double mu = p.mu();
  const double K = p.K();
  const double premium_load = 1.0 - phi * rho;
  if (policy == Policy::NonPreemptive) {
    // Residual work seen by an arrival is K*rho/(2 mu) regardless of class.
    const double residual = K * rho / (2.0 * mu);
    return {residual / premium_load, residual / (premium_load * (1.0 - rho))};
  }
  // Premium customers only ever see other premium work.
  const double premium = K * phi * rho / (2.0 * mu * premium_load);
  const double ordinary = (1.0 / mu) * (1.0 / premium_load - 1.0) +
                          K * rho / (2.0 * mu * premium_load * (1.0 - rho));
  return {premium, ordinary};
}

}  // namespace qprio
