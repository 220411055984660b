#pragma once

#include <optional>
#include <span>

namespace qprio {

// Mean of independent replication outputs with its standard error.
struct Estimate {
  double mean = 0.0;
  std::optional<double> std_error;  // absent with fewer than two samples
  unsigned samples = 0;

  // Student-t confidence half-width; absent with fewer than two samples.
  std::optional<double> half_width(double confidence) const;
  bool covers(double value, double confidence) const;

  bool operator==(const Estimate&) const = default;
};

Estimate estimate_from(std::span<const double> values);

// Two-sided Student-t critical value for `confidence` (e.g. 0.95).
double t_critical(double confidence, unsigned degrees_of_freedom);

}  // namespace qprio
