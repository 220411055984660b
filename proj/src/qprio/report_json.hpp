#pragma once

#include <json.hpp>

#include "qprio/desim.hpp"
#include "qprio/dynamics.hpp"
#include "qprio/equilibrium.hpp"
#include "qprio/revenue.hpp"
#include "qprio/welfare.hpp"

// JSON forms of every report record. Doubles are written in shortest
// round-trip form, so parse(dump(x)) == x. Parsers throw ParseError.
namespace qprio {

using Json = nlohmann::json;

Json to_json(const ModelParams& params);
ModelParams params_from_json(const Json& j);

Json to_json(const EquilibriumSet& set);
EquilibriumSet equilibrium_set_from_json(const Json& j);

Json to_json(const RevenueProfile& profile);
RevenueProfile revenue_profile_from_json(const Json& j);

Json to_json(const PolicyComparison& comparison);
PolicyComparison policy_comparison_from_json(const Json& j);

Json to_json(const WelfareProfile& profile);
WelfareProfile welfare_profile_from_json(const Json& j);

/// Flat config document: lambda, mu, K, policy, phi, horizon, and optionally
/// warmup (default horizon/10), replications (default 20), seed, fee.
/// Unknown keys are rejected.
Json to_json(const SimConfig& config);
SimConfig sim_config_from_json(const Json& j);

Json to_json(const Estimate& estimate);
Estimate estimate_from_json(const Json& j);

Json to_json(const SimulationResult& result);
SimulationResult simulation_result_from_json(const Json& j);

Json to_json(const ValidationReport& report);
ValidationReport validation_report_from_json(const Json& j);

Json to_json(const DynamicsTrace& trace);
DynamicsTrace dynamics_trace_from_json(const Json& j);

// Parses text, mapping syntax errors to ParseError.
Json parse_json(std::string_view text);

}  // namespace qprio
