#include "qprio/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "qprio/equilibrium.hpp"
#include "qprio/error.hpp"
#include "qprio/parallel.hpp"
#include "qprio/revenue.hpp"
#include "qprio/welfare.hpp"

namespace qprio {

std::string_view to_string(SweepQuantity quantity) {
  switch (quantity) {
    case SweepQuantity::Equilibrium: return "equilibrium";
    case SweepQuantity::Revenue: return "revenue";
    case SweepQuantity::Optimum: return "optimum";
    case SweepQuantity::Welfare: return "welfare";
  }
  return "?";
}

SweepQuantity parse_sweep_quantity(std::string_view text) {
  for (auto q : {SweepQuantity::Equilibrium, SweepQuantity::Revenue, SweepQuantity::Optimum,
                 SweepQuantity::Welfare})
    if (to_string(q) == text) return q;
  throw InvalidArgument("unknown sweep quantity '" + std::string(text) + "'");
}

std::vector<double> Range::values() const {
  if (!(step > 0.0) || !std::isfinite(step)) throw InvalidArgument("range step must be > 0");
  if (!(max >= min)) throw InvalidArgument("range max must be >= min");
  const auto count = static_cast<std::size_t>(std::floor((max - min) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(min + static_cast<double>(i) * step);
  return out;
}

void check_sweep_spec(const SweepSpec& spec) {
  (void)spec.K.values();
  (void)spec.rho.values();
  if (spec.K.min < 1.0) throw InvalidArgument("K range must satisfy K >= 1");
  if (!(spec.rho.min > 0.0) || !(spec.rho.max < 1.0))
    throw InvalidArgument("rho range must lie inside (0,1)");
  if (!(spec.mu > 0.0)) throw InvalidArgument("mu must be > 0");
}

std::string format_number(double value) {
  if (std::isnan(value)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

std::vector<std::string> sweep_header(SweepQuantity quantity) {
  switch (quantity) {
    case SweepQuantity::Equilibrium:
      return {"K", "rho", "policy", "cost_shape", "shape_boundary_rho", "cost_phi0", "cost_phi1",
              "mixed_equilibrium_stable"};
    case SweepQuantity::Revenue:
      return {"K", "rho", "policy", "revenue_shape", "unimodal_threshold_rho", "phi_star",
              "fee_star", "revenue_star", "stable"};
    case SweepQuantity::Optimum:
      return {"K", "rho", "revenue_star_np", "revenue_star_pr", "pr_minus_np", "phi_star_pr"};
    case SweepQuantity::Welfare:
      return {"K", "rho", "policy", "phi_revenue", "welfare_at_revenue_max", "social_optimum",
              "phi_social", "optimal_welfare", "welfare_gap"};
  }
  return {};
}

namespace {

constexpr double kNotApplicable = std::numeric_limits<double>::quiet_NaN();

std::vector<std::string> sweep_row(const SweepSpec& spec, double K, double rho) {
  const auto params = ModelParams::validate(rho * spec.mu, spec.mu, K);
  const auto policy = spec.policy;
  std::vector<std::string> row{format_number(K), format_number(rho)};
  auto num = [&](double v) { row.push_back(format_number(v)); };
  auto text = [&](std::string_view v) { row.emplace_back(v); };
  auto flag = [&](bool v) { text(v ? "true" : "false"); };

  switch (spec.quantity) {
    case SweepQuantity::Equilibrium: {
      const auto shape = cost_shape(params, policy);
      text(to_string(policy));
      text(to_string(shape));
      num(policy == Policy::PreemptiveResume && K > 2.0 ? constant_cost_load(K) : kNotApplicable);
      num(cost(params, policy, 0.0));
      num(cost(params, policy, 1.0));
      flag(shape == CostShape::MonotoneDecreasing);
      break;
    }
    case SweepQuantity::Revenue: {
      const auto profile = max_revenue(params, policy);
      text(to_string(policy));
      text(to_string(profile.shape.kind));
      num(policy == Policy::PreemptiveResume && K > 4.0 ? unimodal_threshold(K) : kNotApplicable);
      num(profile.phi_star);
      num(profile.fee_star);
      num(profile.revenue_star);
      flag(profile.stable);
      break;
    }
    case SweepQuantity::Optimum: {
      const auto cmp = compare_policies(params);
      num(cmp.revenue_np);
      num(cmp.revenue_pr);
      num(cmp.difference);
      num(max_revenue(params, Policy::PreemptiveResume).phi_star);
      break;
    }
    case SweepQuantity::Welfare: {
      const auto profile = welfare_at_revenue_max(params, policy);
      text(to_string(policy));
      num(profile.revenue_phi);
      num(profile.welfare_at_revenue_max);
      text(to_string(profile.optimal.kind));
      num(profile.optimal.phi ? *profile.optimal.phi : kNotApplicable);
      num(profile.optimal_welfare);
      num(profile.welfare_at_revenue_max - profile.optimal_welfare);
      break;
    }
  }
  return row;
}

}  // namespace

SweepTable run_sweep(const SweepSpec& spec, unsigned threads) {
  check_sweep_spec(spec);
  const auto Ks = spec.K.values();
  const auto rhos = spec.rho.values();
  SweepTable table{sweep_header(spec.quantity), {}};
  table.rows.resize(Ks.size() * rhos.size());
  parallel_for(table.rows.size(), threads == 0 ? worker_threads() : threads, [&](std::size_t i) {
    table.rows[i] = sweep_row(spec, Ks[i / rhos.size()], rhos[i % rhos.size()]);
  });
  return table;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

}  // namespace qprio
