#pragma once

#include <optional>
#include <string_view>

#include "qprio/model.hpp"

namespace qprio {

struct RevenueShape {
  enum class Kind { MonotoneIncreasing, Unimodal };
  Kind kind;
  // Load below which PR revenue has an interior peak; set only for Unimodal.
  std::optional<double> threshold;

  bool operator==(const RevenueShape&) const = default;
};

std::string_view to_string(RevenueShape::Kind kind);

struct RevenueProfile {
  Policy policy;
  RevenueShape shape;
  double phi_star;
  double fee_star;
  double revenue_star;
  // Whether the equilibrium induced by fee_star is stable.
  bool stable;

  bool operator==(const RevenueProfile&) const = default;
};

struct PolicyComparison {
  double revenue_np;
  double revenue_pr;
  double difference;

  bool operator==(const PolicyComparison&) const = default;
};

// Fee income per unit time when a fraction phi upgrades: lambda * phi * cost(phi).
double revenue(const ModelParams& params, Policy policy, double phi);
double revenue_derivative(const ModelParams& params, Policy policy, double phi);

// 3/2 - sqrt((5K-2)/(K-2))/2. Positive only for K > 4.
double unimodal_threshold(double K);

RevenueShape revenue_shape_pr(const ModelParams& params);
RevenueShape revenue_shape(const ModelParams& params, Policy policy);

// Interior maximizer of PR revenue. Throws NoInteriorSolution outside the
// unimodal regime.
double phi_max(const ModelParams& params);

// Closed-form PR maximum in the unimodal regime.
double max_revenue_pr_interior(const ModelParams& params);

/// Revenue-maximizing operating point. When the maximum sits at phi = 1 the
/// fee is cost(1) - margin (margin >= 0 lets a provider leave customers a
/// strict preference); interior maxima ignore the margin.
RevenueProfile max_revenue(const ModelParams& params, Policy policy, double margin = 0.0);

PolicyComparison compare_policies(const ModelParams& params);

}  // namespace qprio
