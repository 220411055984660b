#include "qprio/report_json.hpp"

#include <set>
#include <string>

#include "qprio/error.hpp"

namespace qprio {

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> optional_number_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

// Runs a parser, translating library exceptions into ParseError.
template <typename F>
auto guarded(const char* what, F&& parse) {
  try {
    return parse();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed ") + what + ": " + e.what());
  }
}

Policy policy_from(const Json& j) {
  try {
    return parse_policy(j.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ParseError(e.what());
  }
}

RevenueShape::Kind revenue_kind_from(const std::string& s) {
  if (s == to_string(RevenueShape::Kind::Unimodal)) return RevenueShape::Kind::Unimodal;
  if (s == to_string(RevenueShape::Kind::MonotoneIncreasing)) return RevenueShape::Kind::MonotoneIncreasing;
  throw ParseError("unknown revenue shape '" + s + "'");
}

SocialOptimum::Kind social_kind_from(const std::string& s) {
  for (auto k : {SocialOptimum::Kind::AllStates, SocialOptimum::Kind::Boundaries,
                 SocialOptimum::Kind::Interior})
    if (to_string(k) == s) return k;
  throw ParseError("unknown social optimum kind '" + s + "'");
}

std::optional<Estimate> optional_estimate_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return estimate_from_json(j.at(key));
}

Json optional_estimate(const std::optional<Estimate>& e) { return e ? to_json(*e) : Json(nullptr); }

}  // namespace

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

Json to_json(const ModelParams& p) {
  return {{"lambda", p.lambda()}, {"mu", p.mu()}, {"K", p.K()}, {"rho", p.rho()}};
}

ModelParams params_from_json(const Json& j) {
  return guarded("params", [&] {
    return ModelParams::validate(j.at("lambda").get<double>(), j.at("mu").get<double>(),
                                 j.at("K").get<double>());
  });
}

Json to_json(const EquilibriumSet& set) {
  Json list = Json::array();
  for (const auto& eq : set.equilibria)
    list.push_back({{"kind", to_string(eq.kind)}, {"phi", optional_number(eq.phi)}, {"stable", eq.stable}});
  return {{"params", to_json(set.params)},
          {"policy", to_string(set.policy)},
          {"fee", set.fee},
          {"equilibria", list}};
}

EquilibriumSet equilibrium_set_from_json(const Json& j) {
  return guarded("equilibrium set", [&] {
    EquilibriumSet set{params_from_json(j.at("params")), policy_from(j.at("policy")),
                       j.at("fee").get<double>(), {}};
    for (const auto& e : j.at("equilibria"))
      set.equilibria.push_back({parse_equilibrium_kind(e.at("kind").get<std::string>()),
                                optional_number_from(e, "phi"), e.at("stable").get<bool>()});
    return set;
  });
}

Json to_json(const RevenueProfile& p) {
  return {{"policy", to_string(p.policy)},
          {"shape", to_string(p.shape.kind)},
          {"threshold_rho", optional_number(p.shape.threshold)},
          {"phi_star", p.phi_star},
          {"fee_star", p.fee_star},
          {"revenue_star", p.revenue_star},
          {"stable", p.stable}};
}

RevenueProfile revenue_profile_from_json(const Json& j) {
  return guarded("revenue profile", [&] {
    return RevenueProfile{policy_from(j.at("policy")),
                          {revenue_kind_from(j.at("shape").get<std::string>()),
                           optional_number_from(j, "threshold_rho")},
                          j.at("phi_star").get<double>(),
                          j.at("fee_star").get<double>(),
                          j.at("revenue_star").get<double>(),
                          j.at("stable").get<bool>()};
  });
}

Json to_json(const PolicyComparison& c) {
  return {{"revenue_star_np", c.revenue_np}, {"revenue_star_pr", c.revenue_pr}, {"pr_minus_np", c.difference}};
}

PolicyComparison policy_comparison_from_json(const Json& j) {
  return guarded("policy comparison", [&] {
    return PolicyComparison{j.at("revenue_star_np").get<double>(), j.at("revenue_star_pr").get<double>(),
                            j.at("pr_minus_np").get<double>()};
  });
}

Json to_json(const WelfareProfile& p) {
  return {{"policy", to_string(p.policy)},
          {"phi_revenue", p.revenue_phi},
          {"welfare_at_revenue_max", p.welfare_at_revenue_max},
          {"social_optimum", to_string(p.optimal.kind)},
          {"phi_social", optional_number(p.optimal.phi)},
          {"optimal_welfare", p.optimal_welfare},
          {"worst_welfare", p.worst_welfare}};
}

WelfareProfile welfare_profile_from_json(const Json& j) {
  return guarded("welfare profile", [&] {
    return WelfareProfile{policy_from(j.at("policy")),
                          j.at("phi_revenue").get<double>(),
                          j.at("welfare_at_revenue_max").get<double>(),
                          {social_kind_from(j.at("social_optimum").get<std::string>()),
                           optional_number_from(j, "phi_social")},
                          j.at("optimal_welfare").get<double>(),
                          j.at("worst_welfare").get<double>()};
  });
}

Json to_json(const SimConfig& c) {
  return {{"lambda", c.params.lambda()},
          {"mu", c.params.mu()},
          {"K", c.params.K()},
          {"policy", to_string(c.policy)},
          {"phi", c.phi},
          {"horizon", c.horizon},
          {"warmup", c.warmup},
          {"replications", c.replications},
          {"seed", c.seed},
          {"fee", optional_number(c.fee)}};
}

SimConfig sim_config_from_json(const Json& j) {
  return guarded("simulation config", [&] {
    if (!j.is_object()) throw ParseError("simulation config must be a JSON object");
    static const std::set<std::string> known{"lambda", "mu",           "K",    "policy", "phi",
                                             "horizon", "warmup", "replications", "seed", "fee"};
    for (const auto& [key, value] : j.items())
      if (!known.count(key)) throw ParseError("unknown config key '" + key + "'");
    const auto horizon = j.at("horizon").get<std::uint64_t>();
    SimConfig c{params_from_json(j),
                policy_from(j.at("policy")),
                j.at("phi").get<double>(),
                horizon,
                j.value("warmup", horizon / 10),
                j.value("replications", 20u),
                j.value("seed", kDefaultSeed),
                optional_number_from(j, "fee")};
    check_config(c);
    return c;
  });
}

Json to_json(const Estimate& e) {
  return {{"mean", e.mean},
          {"std_error", optional_number(e.std_error)},
          {"samples", e.samples},
          {"half_width_95", optional_number(e.half_width(0.95))}};
}

Estimate estimate_from_json(const Json& j) {
  return guarded("estimate", [&] {
    return Estimate{j.at("mean").get<double>(), optional_number_from(j, "std_error"),
                    j.at("samples").get<unsigned>()};
  });
}

Json to_json(const SimulationResult& r) {
  const auto& a = r.analytical;
  return {{"config", to_json(r.config)},
          {"mean_wait_premium", optional_estimate(r.wait_premium)},
          {"mean_wait_ordinary", optional_estimate(r.wait_ordinary)},
          {"wait_difference", optional_estimate(r.wait_difference)},
          {"empirical_welfare", to_json(r.welfare)},
          {"revenue_rate", to_json(r.revenue_rate)},
          {"realized_phi", r.realized_phi},
          {"analytical",
           {{"wait_premium", a.wait_premium},
            {"wait_ordinary", a.wait_ordinary},
            {"wait_difference", a.wait_difference},
            {"welfare", a.welfare},
            {"revenue_rate", a.revenue_rate},
            {"fee", a.fee}}},
          {"replication_seeds", r.replication_seeds}};
}

SimulationResult simulation_result_from_json(const Json& j) {
  return guarded("simulation result", [&] {
    const auto& a = j.at("analytical");
    return SimulationResult{sim_config_from_json(j.at("config")),
                            optional_estimate_from(j, "mean_wait_premium"),
                            optional_estimate_from(j, "mean_wait_ordinary"),
                            optional_estimate_from(j, "wait_difference"),
                            estimate_from_json(j.at("empirical_welfare")),
                            estimate_from_json(j.at("revenue_rate")),
                            j.at("realized_phi").get<double>(),
                            {a.at("wait_premium").get<double>(), a.at("wait_ordinary").get<double>(),
                             a.at("wait_difference").get<double>(), a.at("welfare").get<double>(),
                             a.at("revenue_rate").get<double>(), a.at("fee").get<double>()},
                            j.at("replication_seeds").get<std::vector<std::uint64_t>>()};
  });
}

Json to_json(const ValidationReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks)
    checks.push_back({{"quantity", c.quantity},
                      {"analytical", c.analytical},
                      {"estimate", c.estimate},
                      {"half_width", c.half_width},
                      {"pass", c.pass}});
  return {{"result", to_json(report.result)},
          {"confidence", report.confidence},
          {"checks", checks},
          {"passed", report.passed}};
}

ValidationReport validation_report_from_json(const Json& j) {
  return guarded("validation report", [&] {
    ValidationReport report{simulation_result_from_json(j.at("result")), j.at("confidence").get<double>(),
                            {}, j.at("passed").get<bool>()};
    for (const auto& c : j.at("checks"))
      report.checks.push_back({c.at("quantity").get<std::string>(), c.at("analytical").get<double>(),
                               c.at("estimate").get<double>(), c.at("half_width").get<double>(),
                               c.at("pass").get<bool>()});
    return report;
  });
}

Json to_json(const DynamicsTrace& t) {
  Json trajectory = Json::array();
  for (std::size_t i = 0; i < t.phi.size(); ++i) trajectory.push_back({i, t.phi[i]});
  return {{"trajectory", trajectory},
          {"converged", t.converged},
          {"limit", t.limit},
          {"verdict", to_string(t.verdict)},
          {"stability_notion", "asymptotic stability under damped best-response dynamics"}};
}

DynamicsTrace dynamics_trace_from_json(const Json& j) {
  return guarded("dynamics trace", [&] {
    DynamicsTrace t{{}, j.at("converged").get<bool>(), j.at("limit").get<double>(),
                    parse_equilibrium_kind(j.at("verdict").get<std::string>())};
    for (const auto& point : j.at("trajectory")) {
      if (point.at(0).get<std::size_t>() != t.phi.size()) throw ParseError("trajectory rounds out of order");
      t.phi.push_back(point.at(1).get<double>());
    }
    return t;
  });
}

}  // namespace qprio
