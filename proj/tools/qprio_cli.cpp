// qprio command-line front end. Talks to the library only through qprio.h.
//
// Exit codes: 0 success, 2 usage or parameter error, 3 validation failure,
// 1 internal error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "qprio/qprio.h"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitValidation = 3;
constexpr int kExitInternal = 1;

struct CliFailure {
  int exit_code;
  std::string message;
};

int exit_code_for(int status) {
  switch (status) {
    case QP_ERROR_SIMULATION:
    case QP_ERROR_UNKNOWN:
    case QP_ERROR_INVALID_HANDLE:
    case QP_ERROR_NULL_POINTER:
    case QP_ERROR_INSUFFICIENT_BUFFER:
      return kExitInternal;
    default:
      return kExitUsage;
  }
}

void check(int status) {
  if (status != QP_OK) throw CliFailure{exit_code_for(status), qp_last_error()};
}

// Two-call protocol for the library's text outputs.
template <typename F>
std::string fetch_text(F&& call) {
  std::size_t len = 0;
  int status = call(nullptr, &len);
  if (status != QP_ERROR_INSUFFICIENT_BUFFER) check(status);
  std::string text(len, '\0');
  check(call(text.data(), &len));
  text.resize(len - 1);
  return text;
}

std::string num(double v) {
  if (std::isnan(v)) return "-";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

template <typename T, int (*Destroy)(T)>
struct HandleDeleter {
  void operator()(T h) const { Destroy(h); }
};

using Params = std::unique_ptr<qp_params_struct, HandleDeleter<qp_params_t, qp_params_destroy>>;
using Equilibria = std::unique_ptr<qp_equilibria_struct, HandleDeleter<qp_equilibria_t, qp_equilibria_destroy>>;
using SimConfig = std::unique_ptr<qp_sim_config_struct, HandleDeleter<qp_sim_config_t, qp_sim_config_destroy>>;
using Validation = std::unique_ptr<qp_validation_struct, HandleDeleter<qp_validation_t, qp_validation_destroy>>;
using Dynamics = std::unique_ptr<qp_dynamics_struct, HandleDeleter<qp_dynamics_t, qp_dynamics_destroy>>;

struct ModelFlags {
  double lambda = 0.0;
  double mu = 1.0;
  double K = 0.0;
  std::string policy;
  bool json = false;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool policy_required) {
  cmd->add_option("--lambda", f.lambda, "Arrival rate (> 0)")->required();
  cmd->add_option("--mu", f.mu, "Service rate (> 0)")->capture_default_str();
  cmd->add_option("--K", f.K, "Service variance parameter: E[S^2] = K/mu^2, K >= 1")->required();
  auto* policy = cmd->add_option("--policy", f.policy, "Scheduling policy")
                     ->check(CLI::IsMember({"np", "pr"}, CLI::ignore_case));
  if (policy_required) policy->required();
  cmd->add_flag("--json", f.json, "Emit JSON instead of text");
}

int policy_code(const std::string& p) {
  return (p == "pr" || p == "PR") ? QP_POLICY_PR : QP_POLICY_NP;
}

const char* policy_name(int code) { return code == QP_POLICY_PR ? "pr" : "np"; }

const char* kind_name(int kind) {
  switch (kind) {
    case QP_EQ_ALL_JOIN: return "all_join";
    case QP_EQ_NONE_JOIN: return "none_join";
    case QP_EQ_SOME_JOIN: return "some_join";
    case QP_EQ_CONTINUUM: return "continuum";
  }
  return "?";
}

const char* cost_shape_name(int shape) {
  switch (shape) {
    case QP_COST_INCREASING: return "increasing";
    case QP_COST_CONSTANT: return "constant";
    case QP_COST_DECREASING: return "decreasing";
  }
  return "?";
}

const char* social_name(int kind) {
  switch (kind) {
    case QP_SOCIAL_ALL_STATES: return "every phi in [0,1]";
    case QP_SOCIAL_BOUNDARIES: return "phi in {0,1}";
    case QP_SOCIAL_INTERIOR: return "interior";
  }
  return "?";
}

Params make_params(const ModelFlags& f) {
  qp_params_t raw = nullptr;
  check(qp_params_create(&raw, f.lambda, f.mu, f.K));
  return Params(raw);
}

int run_analyze(const ModelFlags& f, double fee) {
  const auto params = make_params(f);
  const int policy = policy_code(f.policy);
  qp_equilibria_t raw = nullptr;
  check(qp_equilibria_compute(&raw, params.get(), policy, fee));
  const Equilibria set(raw);

  if (f.json) {
    std::cout << fetch_text([&](char* out, std::size_t* len) {
      return qp_equilibria_to_json(set.get(), out, len);
    }) << '\n';
    return 0;
  }
  double rho = 0.0, c0 = 0.0, c1 = 0.0;
  int shape = 0;
  check(qp_params_get(params.get(), nullptr, nullptr, nullptr, &rho));
  check(qp_cost(params.get(), policy, 0.0, &c0));
  check(qp_cost(params.get(), policy, 1.0, &c1));
  check(qp_cost_shape(params.get(), policy, &shape));
  std::cout << "policy " << policy_name(policy) << "  lambda=" << num(f.lambda) << " mu=" << num(f.mu)
            << " K=" << num(f.K) << " rho=" << num(rho) << '\n'
            << "cost shape: " << cost_shape_name(shape) << "  cost(0)=" << num(c0)
            << "  cost(1)=" << num(c1) << '\n'
            << "fee: " << num(fee) << '\n'
            << "equilibria:\n";
  std::size_t count = 0;
  check(qp_equilibria_count(set.get(), &count));
  for (std::size_t i = 0; i < count; ++i) {
    int kind = 0, stable = 0;
    double phi = 0.0;
    check(qp_equilibria_get(set.get(), i, &kind, &phi, &stable));
    std::cout << "  " << kind_name(kind) << "  phi=" << (kind == QP_EQ_CONTINUUM ? "[0,1]" : num(phi))
              << "  " << (stable ? "stable" : "unstable") << '\n';
  }
  return 0;
}

struct Optimum {
  qp_revenue_profile revenue;
  qp_welfare_profile welfare;
};

Optimum optimum_for(qp_params_t params, int policy, double margin) {
  Optimum o{};
  check(qp_max_revenue(params, policy, margin, &o.revenue));
  check(qp_welfare_at_revenue_max(params, policy, &o.welfare));
  return o;
}

std::string optimum_json(const Optimum& o) {
  return "{\"revenue\":" + fetch_text([&](char* out, std::size_t* len) {
           return qp_revenue_profile_to_json(&o.revenue, out, len);
         }) +
         ",\"welfare\":" + fetch_text([&](char* out, std::size_t* len) {
           return qp_welfare_profile_to_json(&o.welfare, out, len);
         }) +
         "}";
}

void print_optimum(const Optimum& o) {
  const auto& r = o.revenue;
  const auto& w = o.welfare;
  std::cout << "policy " << policy_name(r.policy) << '\n'
            << "  revenue shape: " << (r.shape == QP_REVENUE_UNIMODAL ? "unimodal" : "increasing");
  if (r.shape == QP_REVENUE_UNIMODAL) std::cout << " (rho below " << num(r.threshold_rho) << ")";
  std::cout << '\n'
            << "  phi*=" << num(r.phi_star) << "  C*=" << num(r.fee_star) << "  R*=" << num(r.revenue_star)
            << "  " << (r.stable ? "stable" : "unstable") << '\n'
            << "  welfare at optimum=" << num(w.welfare_at_revenue_max)
            << "  social optimum: " << social_name(w.social_kind);
  if (w.social_kind == QP_SOCIAL_INTERIOR) std::cout << " phi=" << num(w.phi_social);
  std::cout << "  optimal welfare=" << num(w.optimal_welfare) << '\n';
}

int run_optimize(const ModelFlags& f, bool compare, double margin) {
  const auto params = make_params(f);
  if (!compare) {
    const auto o = optimum_for(params.get(), policy_code(f.policy), margin);
    if (f.json)
      std::cout << optimum_json(o) << '\n';
    else
      print_optimum(o);
    return 0;
  }
  const auto np = optimum_for(params.get(), QP_POLICY_NP, margin);
  const auto pr = optimum_for(params.get(), QP_POLICY_PR, margin);
  qp_policy_comparison cmp{};
  check(qp_compare_policies(params.get(), &cmp));
  if (f.json) {
    std::cout << "{\"np\":" << optimum_json(np) << ",\"pr\":" << optimum_json(pr) << ",\"comparison\":"
              << fetch_text([&](char* out, std::size_t* len) {
                   return qp_policy_comparison_to_json(&cmp, out, len);
                 })
              << "}\n";
    return 0;
  }
  print_optimum(np);
  print_optimum(pr);
  std::cout << "R*_PR - R*_NP = " << num(cmp.difference) << '\n';
  return 0;
}

struct SweepFlags {
  std::string quantity = "revenue";
  std::string policy = "pr";
  double K_min = 1.0, K_max = 20.0, K_step = 0.5;
  double rho_min = 0.05, rho_max = 0.95, rho_step = 0.05;
  double mu = 1.0;
  std::string out;
};

int sweep_quantity_code(const std::string& q) {
  if (q == "equilibrium") return QP_SWEEP_EQUILIBRIUM;
  if (q == "optimum") return QP_SWEEP_OPTIMUM;
  if (q == "welfare") return QP_SWEEP_WELFARE;
  return QP_SWEEP_REVENUE;
}

int run_sweep(const SweepFlags& f) {
  const qp_sweep_spec spec{f.K_min,   f.K_max,   f.K_step, f.rho_min, f.rho_max, f.rho_step,
                           policy_code(f.policy), sweep_quantity_code(f.quantity), f.mu};
  if (!f.out.empty()) {
    check(qp_sweep_write_csv(&spec, 0, f.out.c_str()));
    return 0;
  }
  std::cout << fetch_text([&](char* out, std::size_t* len) { return qp_sweep_to_csv(&spec, 0, out, len); });
  return 0;
}

std::string sweep_help() {
  std::ostringstream out;
  out << "CSV columns (one row per (K, rho) point, K-major; empty cell = not applicable):\n";
  for (const char* q : {"equilibrium", "revenue", "optimum", "welfare"}) {
    out << "  " << q << ": " << fetch_text([&](char* o, std::size_t* len) {
      return qp_sweep_header(sweep_quantity_code(q), o, len);
    }) << '\n';
  }
  return out.str();
}

struct SimulateFlags {
  std::string config;
  std::optional<double> lambda, mu, K, phi, fee;
  std::optional<std::string> policy;
  std::optional<std::uint64_t> seed, horizon, warmup;
  std::optional<unsigned> reps;
  bool dynamics = false;
  bool empirical = false;
  std::optional<double> phi0;
  unsigned rounds = 10000;
  double step = 0.5;
};

nlohmann::json simulation_document(const SimulateFlags& f) {
  nlohmann::json doc = nlohmann::json::object();
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw CliFailure{kExitUsage, "cannot read config file '" + f.config + "'"};
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw CliFailure{kExitUsage, std::string("malformed config: ") + e.what()};
    }
    if (!doc.is_object()) throw CliFailure{kExitUsage, "malformed config: expected a JSON object"};
  }
  if (f.lambda) doc["lambda"] = *f.lambda;
  if (f.mu) doc["mu"] = *f.mu;
  if (f.K) doc["K"] = *f.K;
  if (f.policy) doc["policy"] = *f.policy;
  if (f.phi) doc["phi"] = *f.phi;
  if (f.fee) doc["fee"] = *f.fee;
  if (f.seed) doc["seed"] = *f.seed;
  if (f.horizon) doc["horizon"] = *f.horizon;
  if (f.warmup) doc["warmup"] = *f.warmup;
  if (f.reps) doc["replications"] = *f.reps;
  if (!doc.contains("mu")) doc["mu"] = 1.0;
  return doc;
}

double required_number(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || !doc.at(key).is_number())
    throw CliFailure{kExitUsage, std::string("missing numeric '") + key + "'"};
  return doc.at(key).get<double>();
}

int run_dynamics(const SimulateFlags& f, const nlohmann::json& doc) {
  if (!doc.contains("fee")) throw CliFailure{kExitUsage, "--dynamics needs --fee"};
  qp_params_t raw = nullptr;
  check(qp_params_create(&raw, required_number(doc, "lambda"), required_number(doc, "mu"),
                         required_number(doc, "K")));
  const Params params(raw);
  const std::string policy = doc.value("policy", std::string("np"));
  const double phi0 = f.phi0 ? *f.phi0 : doc.value("phi", 0.5);
  qp_dynamics_t trace_raw = nullptr;
  check(qp_dynamics_run(&trace_raw, params.get(), policy_code(policy), required_number(doc, "fee"), phi0,
                        f.rounds, f.step, f.empirical ? QP_DYNAMICS_EMPIRICAL : QP_DYNAMICS_ANALYTICAL,
                        doc.value("horizon", std::uint64_t{20000}), doc.value("seed", std::uint64_t{20200901})));
  const Dynamics trace(trace_raw);
  std::cout << fetch_text([&](char* out, std::size_t* len) { return qp_dynamics_to_json(trace.get(), out, len); })
            << '\n';
  return 0;
}

int run_simulate(const SimulateFlags& f) {
  const auto doc = simulation_document(f);
  if (f.dynamics) return run_dynamics(f, doc);
  qp_sim_config_t raw = nullptr;
  check(qp_sim_config_from_json(&raw, doc.dump().c_str()));
  const SimConfig config(raw);
  qp_validation_t report_raw = nullptr;
  check(qp_validate(&report_raw, config.get(), 0));
  const Validation report(report_raw);
  std::cout << fetch_text([&](char* out, std::size_t* len) {
    return qp_validation_to_json(report.get(), out, len);
  }) << '\n';
  int passed = 0;
  check(qp_validation_passed(report.get(), &passed));
  return passed ? 0 : kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equilibria, optimal upgrade fees and welfare for a two-class M|G|1 priority queue"};
  app.require_subcommand(1);

  ModelFlags analyze_flags;
  double fee = 0.0;
  auto* analyze = app.add_subcommand("analyze", "List equilibria and their stability at a given fee");
  add_model_flags(analyze, analyze_flags, true);
  analyze->add_option("--fee", fee, "Upgrade fee (time units, > 0)")->required();

  ModelFlags optimize_flags;
  bool compare = false;
  double margin = 0.0;
  auto* optimize = app.add_subcommand("optimize", "Revenue-maximizing fee, premium fraction and welfare");
  add_model_flags(optimize, optimize_flags, false);
  optimize->add_flag("--compare", compare, "Report both policies and the PR - NP revenue gap");
  optimize->add_option("--margin", margin, "Amount subtracted from a boundary-optimal fee (>= 0)")
      ->capture_default_str();

  SweepFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep", "Tabulate regimes and optima over a (K, rho) grid as CSV");
  sweep->add_option("--quantity", sweep_flags.quantity, "What to tabulate")
      ->check(CLI::IsMember({"equilibrium", "revenue", "optimum", "welfare"}))
      ->capture_default_str();
  sweep->add_option("--policy", sweep_flags.policy, "Policy for per-policy quantities")
      ->check(CLI::IsMember({"np", "pr"}, CLI::ignore_case))
      ->capture_default_str();
  sweep->add_option("--K-min", sweep_flags.K_min)->capture_default_str();
  sweep->add_option("--K-max", sweep_flags.K_max)->capture_default_str();
  sweep->add_option("--K-step", sweep_flags.K_step)->capture_default_str();
  sweep->add_option("--rho-min", sweep_flags.rho_min)->capture_default_str();
  sweep->add_option("--rho-max", sweep_flags.rho_max)->capture_default_str();
  sweep->add_option("--rho-step", sweep_flags.rho_step)->capture_default_str();
  sweep->add_option("--mu", sweep_flags.mu, "Service rate (scales costs and welfare)")->capture_default_str();
  sweep->add_option("--out", sweep_flags.out, "Output CSV path (default: stdout)");

  SimulateFlags sim;
  auto* simulate = app.add_subcommand(
      "simulate", "Simulate the queue and check closed forms (JSON); --dynamics runs best-response dynamics");
  simulate->add_option("--config", sim.config, "Flat JSON config; flags override its keys");
  simulate->add_option("--lambda", sim.lambda, "Arrival rate");
  simulate->add_option("--mu", sim.mu, "Service rate (default 1)");
  simulate->add_option("--K", sim.K, "Service variance parameter");
  simulate->add_option("--policy", sim.policy, "np or pr")->check(CLI::IsMember({"np", "pr"}, CLI::ignore_case));
  simulate->add_option("--phi", sim.phi, "Premium joining probability");
  simulate->add_option("--fee", sim.fee, "Fee for revenue accounting / dynamics (default cost(phi))");
  simulate->add_option("--seed", sim.seed, "Master seed");
  simulate->add_option("--reps", sim.reps, "Replications (default 20)");
  simulate->add_option("--horizon", sim.horizon, "Customers per replication");
  simulate->add_option("--warmup", sim.warmup, "Customers discarded per replication (default horizon/10)");
  simulate->add_flag("--dynamics", sim.dynamics, "Run adaptive best-response dynamics instead");
  simulate->add_option("--phi0", sim.phi0, "Dynamics start (default --phi, else 0.5)");
  simulate->add_option("--rounds", sim.rounds, "Dynamics round budget")->capture_default_str();
  simulate->add_option("--step", sim.step, "Dynamics gain in (0,1]")->capture_default_str();
  simulate->add_flag("--empirical", sim.empirical, "Dynamics use simulated costs (horizon per round)");

  try {
    sweep->footer(sweep_help());
  } catch (const CliFailure&) {
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*analyze) return run_analyze(analyze_flags, fee);
    if (*optimize) {
      if (!compare && optimize_flags.policy.empty())
        throw CliFailure{kExitUsage, "optimize needs --policy or --compare"};
      return run_optimize(optimize_flags, compare, margin);
    }
    if (*sweep) return run_sweep(sweep_flags);
    if (*simulate) return run_simulate(sim);
  } catch (const CliFailure& failure) {
    std::cerr << "qprio: " << failure.message << '\n';
    return failure.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "qprio: " << e.what() << '\n';
    return kExitInternal;
  }
  return 0;
}
