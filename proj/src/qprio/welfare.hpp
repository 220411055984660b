#pragma once

#include <optional>
#include <string_view>

#include "qprio/model.hpp"

namespace qprio {

// Population-average expected wait, phi E[W_p] + (1 - phi) E[W_o].
// Lower is better; fees are a transfer and do not enter.
double welfare(const ModelParams& params, Policy policy, double phi);

struct SocialOptimum {
  enum class Kind {
    AllStates,   // welfare is flat in phi
    Boundaries,  // phi in {0, 1}
    Interior,    // single phi in (0, 1)
  };
  Kind kind;
  std::optional<double> phi;  // Interior only

  bool operator==(const SocialOptimum&) const = default;
};

std::string_view to_string(SocialOptimum::Kind kind);

// Minimizer set of welfare over phi in [0, 1].
SocialOptimum socially_optimal(const ModelParams& params, Policy policy);

struct WelfareProfile {
  Policy policy;
  double revenue_phi;  // premium fraction at the revenue maximum
  double welfare_at_revenue_max;
  SocialOptimum optimal;
  double optimal_welfare;
  double worst_welfare;  // maximum of welfare over [0, 1]

  bool operator==(const WelfareProfile&) const = default;
};

WelfareProfile welfare_at_revenue_max(const ModelParams& params, Policy policy);

}  // namespace qprio
