#pragma once

#include <string_view>

#include "qprio/random.hpp"

namespace qprio {

/// Service-time family with mean 1/mu and second moment K/mu^2.
///
/// K = 1 is deterministic, 1 < K < 2 a gamma law, K = 2 exponential and
/// K > 2 a balanced-means two-phase hyperexponential. Only the first two
/// moments are matched; mean waits depend on nothing else.
class ServiceDistribution {
 public:
  enum class Family { Deterministic, Gamma, Exponential, Hyperexponential2 };

  static ServiceDistribution make(double mu, double K);

  Family family() const { return family_; }
  double mu() const { return mu_; }
  double K() const { return K_; }

  // Moments computed from the family parameters, not from (mu, K).
  double mean() const;
  double second_moment() const;

  // Gamma: shape/scale. Hyperexponential: branch-1 probability and the two rates.
  double gamma_shape() const { return a_; }
  double gamma_scale() const { return b_; }
  double branch_probability() const { return a_; }
  double rate1() const { return b_; }
  double rate2() const { return c_; }

  double sample(Rng& rng) const;

 private:
  ServiceDistribution(Family family, double mu, double K, double a, double b, double c)
      : family_(family), mu_(mu), K_(K), a_(a), b_(b), c_(c) {}

  Family family_;
  double mu_;
  double K_;
  double a_;
  double b_;
  double c_;
};

std::string_view to_string(ServiceDistribution::Family family);

}  // namespace qprio
