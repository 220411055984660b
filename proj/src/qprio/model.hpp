#pragma once

#include <string_view>

namespace qprio {

enum class Policy { NonPreemptive, PreemptiveResume };

std::string_view to_string(Policy policy);
// Accepts "np" / "pr" (case-insensitive).
Policy parse_policy(std::string_view text);

// Shape of the upgrade cost as a function of the premium fraction.
enum class CostShape { MonotoneIncreasing, Constant, MonotoneDecreasing };

std::string_view to_string(CostShape shape);

/// Validated exogenous environment of the joining game: arrival rate, service
/// rate and the service variance parameter K (second moment of service is
/// K / mu^2). Only constructible through validate(), so every instance has
/// 0 < rho < 1 and K >= 1.
class ModelParams {
 public:
  static ModelParams validate(double lambda, double mu, double K);

  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  double K() const { return K_; }
  double rho() const { return rho_; }

  bool operator==(const ModelParams&) const = default;

 private:
  ModelParams(double lambda, double mu, double K)
      : lambda_(lambda), mu_(mu), K_(K), rho_(lambda / mu) {}

  double lambda_;
  double mu_;
  double K_;
  double rho_;
};

// Throws InvalidArgument unless phi is a number in [0, 1].
void check_fraction(double phi, const char* what = "phi");

// Expected difference E[W_o] - E[W_p]: what a customer saves by upgrading.
double cost_np(const ModelParams& params, double phi);
double cost_pr(const ModelParams& params, double phi);
double cost(const ModelParams& params, Policy policy, double phi);

// Load at which the PR cost is flat in phi; only meaningful for K > 2.
double constant_cost_load(double K);

// Relative tolerance used to detect the constant-cost knife edge.
inline constexpr double kConstantShapeTolerance = 1e-9;

CostShape cost_shape_pr(const ModelParams& params);
// NP cost is increasing for every parameter choice.
CostShape cost_shape(const ModelParams& params, Policy policy);

struct WaitTimes {
  double premium;
  double ordinary;
};

/// Mean waits per class for a premium fraction phi. Waits exclude the
/// customer's own service requirement; under PR they include time spent
/// suspended by preemptions.
WaitTimes wait_times(const ModelParams& params, Policy policy, double phi);

}  // namespace qprio
