#include "qprio/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>

#include "qprio/error.hpp"

namespace qprio {

double t_critical(double confidence, unsigned degrees_of_freedom) {
  if (!(confidence > 0.0 && confidence < 1.0)) throw InvalidArgument("confidence must be in (0,1)");
  if (degrees_of_freedom == 0) throw InvalidArgument("need at least one degree of freedom");
  const boost::math::students_t dist(static_cast<double>(degrees_of_freedom));
  return boost::math::quantile(dist, 0.5 + 0.5 * confidence);
}

Estimate estimate_from(std::span<const double> values) {
  Estimate e;
  e.samples = static_cast<unsigned>(values.size());
  if (values.empty()) return e;
  // Welford keeps the variance accurate when the mean dominates.
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t n = 0;
  for (double v : values) {
    ++n;
    const double delta = v - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (v - mean);
  }
  e.mean = mean;
  if (n >= 2) e.std_error = std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n));
  return e;
}

std::optional<double> Estimate::half_width(double confidence) const {
  if (!std_error || samples < 2) return std::nullopt;
  return t_critical(confidence, samples - 1) * *std_error;
}

bool Estimate::covers(double value, double confidence) const {
  const auto hw = half_width(confidence);
  return hw && std::abs(value - mean) <= *hw;
}

}  // namespace qprio
