#pragma once

// Independent numerical oracles. Nothing here calls into the closed forms
// under test; each helper only evaluates a callable it is handed.

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

inline double rel_error(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Root of f on [lo, hi]; f(lo) and f(hi) must differ in sign. Runs until the
// bracket stops shrinking in floating point.
inline double bisect(const std::function<double(double)>& f, double lo, double hi) {
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

struct GridMax {
  double x;
  double value;
};

// Maximum of f over lo, lo + step, ..., hi (endpoint included).
inline GridMax grid_max(const std::function<double(double)>& f, double lo, double hi, double step) {
  GridMax best{lo, f(lo)};
  const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
  for (long i = 1; i <= n; ++i) {
    const double x = std::min(hi, lo + static_cast<double>(i) * step);
    const double v = f(x);
    if (v > best.value) best = {x, v};
  }
  const double v = f(hi);
  if (v > best.value) best = {hi, v};
  return best;
}

// Points 0, 1e-3, ..., 1 plus a geometric approach to 1 (1 - 10^(-k/4)).
inline std::vector<double> shape_probe_points() {
  std::vector<double> xs;
  for (int i = 0; i <= 1000; ++i) xs.push_back(i / 1000.0);
  for (int k = 12; k <= 48; ++k) xs.push_back(1.0 - std::pow(10.0, -k / 4.0));
  std::sort(xs.begin(), xs.end());
  // 1 - 10^-3 lands on the uniform grid; a near-duplicate would read as a tie.
  xs.erase(std::unique(xs.begin(), xs.end(), [](double a, double b) { return b - a < 1e-13; }), xs.end());
  return xs;
}

// Sign pattern of successive differences of f over xs: +1 all increasing,
// -1 all decreasing, 0 flat within `flat_tol` relative, 2 otherwise.
inline int monotone_verdict(const std::function<double(double)>& f, const std::vector<double>& xs,
                            double flat_tol = 1e-12) {
  bool up = true, down = true, flat = true;
  double prev = f(xs.front());
  for (std::size_t i = 1; i < xs.size(); ++i) {
    const double v = f(xs[i]);
    if (!(v > prev)) up = false;
    if (!(v < prev)) down = false;
    if (!rel_close(v, prev, flat_tol)) flat = false;
    prev = v;
  }
  if (flat) return 0;
  if (up) return 1;
  if (down) return -1;
  return 2;
}

}  // namespace oracle
