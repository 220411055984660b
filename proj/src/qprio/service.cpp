#include "qprio/service.hpp"

#include <cmath>

#include "qprio/error.hpp"

namespace qprio {

ServiceDistribution ServiceDistribution::make(double mu, double K) {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw InvalidArgument("mu must be > 0");
  if (!(K >= 1.0) || !std::isfinite(K)) throw InvalidArgument("K < 1 (second moment below squared mean)");
  const double mean = 1.0 / mu;
  if (K == 1.0) return {Family::Deterministic, mu, K, mean, 0.0, 0.0};
  if (K < 2.0) return {Family::Gamma, mu, K, 1.0 / (K - 1.0), (K - 1.0) / mu, 0.0};
  if (K == 2.0) return {Family::Exponential, mu, K, mu, 0.0, 0.0};
  // Balanced means: p1/rate1 = p2/rate2 = mean/2, squared coefficient of variation K-1.
  const double scv = K - 1.0;
  const double p1 = 0.5 * (1.0 + std::sqrt((scv - 1.0) / (scv + 1.0)));
  const double p2 = 1.0 - p1;
  return {Family::Hyperexponential2, mu, K, p1, 2.0 * p1 / mean, 2.0 * p2 / mean};
}

double ServiceDistribution::mean() const {
  switch (family_) {
    case Family::Deterministic: return a_;
    case Family::Gamma: return a_ * b_;
    case Family::Exponential: return 1.0 / a_;
    case Family::Hyperexponential2: return a_ / b_ + (1.0 - a_) / c_;
  }
  return 0.0;
}

double ServiceDistribution::second_moment() const {
  switch (family_) {
    case Family::Deterministic: return a_ * a_;
    case Family::Gamma: return a_ * (a_ + 1.0) * b_ * b_;
    case Family::Exponential: return 2.0 / (a_ * a_);
    case Family::Hyperexponential2: return 2.0 * a_ / (b_ * b_) + 2.0 * (1.0 - a_) / (c_ * c_);
  }
  return 0.0;
}

double ServiceDistribution::sample(Rng& rng) const {
  switch (family_) {
    case Family::Deterministic:
      return a_;
    case Family::Gamma:
      return std::gamma_distribution<double>(a_, b_)(rng);
    case Family::Exponential:
      return std::exponential_distribution<double>(a_)(rng);
    case Family::Hyperexponential2: {
      const bool first = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < a_;
      return std::exponential_distribution<double>(first ? b_ : c_)(rng);
    }
  }
  return 0.0;
}

std::string_view to_string(ServiceDistribution::Family family) {
  switch (family) {
    case ServiceDistribution::Family::Deterministic: return "deterministic";
    case ServiceDistribution::Family::Gamma: return "gamma";
    case ServiceDistribution::Family::Exponential: return "exponential";
    case ServiceDistribution::Family::Hyperexponential2: return "hyperexponential2";
  }
  return "?";
}

}  // namespace qprio
