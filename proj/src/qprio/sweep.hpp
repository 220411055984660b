#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "qprio/model.hpp"

namespace qprio {

enum class SweepQuantity {
  Equilibrium,  // PR/NP cost shape and equilibrium regions
  Revenue,      // revenue regime and optimum for one policy
  Optimum,      // R* for both policies and their gap
  Welfare,      // welfare at the revenue maximum versus the social optimum
};

std::string_view to_string(SweepQuantity quantity);
SweepQuantity parse_sweep_quantity(std::string_view text);

struct Range {
  double min;
  double max;
  double step;

  // min, min + step, ... up to max (inclusive within 1e-9 steps).
  std::vector<double> values() const;
};

struct SweepSpec {
  Range K;
  Range rho;
  Policy policy = Policy::PreemptiveResume;
  SweepQuantity quantity = SweepQuantity::Revenue;
  double mu = 1.0;
};

void check_sweep_spec(const SweepSpec& spec);

struct SweepTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> sweep_header(SweepQuantity quantity);

// One row per (K, rho) point, K-major. Row order is fixed regardless of `threads`.
SweepTable run_sweep(const SweepSpec& spec, unsigned threads = 0);

// Comma-separated, header first, '.' decimal separator, 9 significant digits.
void write_csv(const SweepTable& table, std::ostream& out);

std::string format_number(double value);

}  // namespace qprio
