#include "qprio/qprio.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <string>

#include "qprio/desim.hpp"
#include "qprio/dynamics.hpp"
#include "qprio/equilibrium.hpp"
#include "qprio/error.hpp"
#include "qprio/report_json.hpp"
#include "qprio/revenue.hpp"
#include "qprio/service.hpp"
#include "qprio/sweep.hpp"
#include "qprio/welfare.hpp"

namespace capi {

class NullPointer : public qprio::Error {
 public:
  using Error::Error;
};

class InvalidHandle : public qprio::Error {
 public:
  using Error::Error;
};

class IoError : public qprio::Error {
 public:
  using Error::Error;
};

class ShortBuffer : public qprio::Error {
 public:
  using Error::Error;
};

// Handle payload tagged with a magic number so stale or foreign pointers are
// rejected instead of dereferenced as the wrong type.
template <typename T, std::uint32_t Magic>
struct Handle {
  static constexpr std::uint32_t kMagic = Magic;
  explicit Handle(T v) : value(std::move(v)) {}
  ~Handle() { magic = 0; }
  std::uint32_t magic = Magic;
  T value;
};

template <typename H>
auto& get(H* h) {
  if (!h) throw NullPointer("null handle");
  if (h->magic != H::kMagic) throw InvalidHandle("handle has the wrong type or was destroyed");
  return h->value;
}

template <typename H>
void destroy(H* h) {
  if (!h) return;
  (void)get(h);
  delete h;
}

}  // namespace capi

using capi::Handle;
using capi::NullPointer;
using capi::InvalidHandle;
using capi::IoError;
using capi::ShortBuffer;

namespace {

using capi::get;
using capi::destroy;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

thread_local std::string g_last_error;


template <typename P>
void require(P* p, const char* name) {
  if (!p) throw NullPointer(std::string("argument ") + name + " is null");
}

template <typename F>
int guard(F&& body) {
  try {
    body();
    return QP_OK;
  } catch (const qprio::InvalidArgument& e) {
    g_last_error = e.what();
    return QP_ERROR_INVALID_ARGUMENT;
  } catch (const qprio::NoInteriorSolution& e) {
    g_last_error = e.what();
    return QP_ERROR_NO_INTERIOR_SOLUTION;
  } catch (const qprio::SimulationError& e) {
    g_last_error = e.what();
    return QP_ERROR_SIMULATION;
  } catch (const qprio::ParseError& e) {
    g_last_error = e.what();
    return QP_ERROR_PARSE;
  } catch (const NullPointer& e) {
    g_last_error = e.what();
    return QP_ERROR_NULL_POINTER;
  } catch (const InvalidHandle& e) {
    g_last_error = e.what();
    return QP_ERROR_INVALID_HANDLE;
  } catch (const ShortBuffer& e) {
    g_last_error = e.what();
    return QP_ERROR_INSUFFICIENT_BUFFER;
  } catch (const IoError& e) {
    g_last_error = e.what();
    return QP_ERROR_IO;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return QP_ERROR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown exception";
    return QP_ERROR_UNKNOWN;
  }
}

void write_text(const std::string& text, char* out, std::size_t* out_len) {
  require(out_len, "out_len");
  const std::size_t available = *out_len;
  *out_len = text.size() + 1;
  if (!out || available < text.size() + 1) {
    if (out && available > 0) out[0] = '\0';
    throw ShortBuffer("output buffer too small");
  }
  std::memcpy(out, text.c_str(), text.size() + 1);
}

qprio::Policy to_policy(int policy) {
  if (policy == QP_POLICY_NP) return qprio::Policy::NonPreemptive;
  if (policy == QP_POLICY_PR) return qprio::Policy::PreemptiveResume;
  throw qprio::InvalidArgument("unknown policy code " + std::to_string(policy));
}

int from_policy(qprio::Policy policy) {
  return policy == qprio::Policy::NonPreemptive ? QP_POLICY_NP : QP_POLICY_PR;
}

int from_kind(qprio::EquilibriumKind kind) {
  switch (kind) {
    case qprio::EquilibriumKind::AllJoin: return QP_EQ_ALL_JOIN;
    case qprio::EquilibriumKind::NoneJoin: return QP_EQ_NONE_JOIN;
    case qprio::EquilibriumKind::SomeJoin: return QP_EQ_SOME_JOIN;
    case qprio::EquilibriumKind::Continuum: return QP_EQ_CONTINUUM;
  }
  return -1;
}

int from_shape(qprio::CostShape shape) {
  switch (shape) {
    case qprio::CostShape::MonotoneIncreasing: return QP_COST_INCREASING;
    case qprio::CostShape::Constant: return QP_COST_CONSTANT;
    case qprio::CostShape::MonotoneDecreasing: return QP_COST_DECREASING;
  }
  return -1;
}

int from_social(qprio::SocialOptimum::Kind kind) {
  switch (kind) {
    case qprio::SocialOptimum::Kind::AllStates: return QP_SOCIAL_ALL_STATES;
    case qprio::SocialOptimum::Kind::Boundaries: return QP_SOCIAL_BOUNDARIES;
    case qprio::SocialOptimum::Kind::Interior: return QP_SOCIAL_INTERIOR;
  }
  return -1;
}

qprio::SocialOptimum::Kind to_social(int kind) {
  switch (kind) {
    case QP_SOCIAL_ALL_STATES: return qprio::SocialOptimum::Kind::AllStates;
    case QP_SOCIAL_BOUNDARIES: return qprio::SocialOptimum::Kind::Boundaries;
    case QP_SOCIAL_INTERIOR: return qprio::SocialOptimum::Kind::Interior;
  }
  throw qprio::InvalidArgument("unknown social optimum code");
}

qprio::SweepQuantity to_quantity(int quantity) {
  switch (quantity) {
    case QP_SWEEP_EQUILIBRIUM: return qprio::SweepQuantity::Equilibrium;
    case QP_SWEEP_REVENUE: return qprio::SweepQuantity::Revenue;
    case QP_SWEEP_OPTIMUM: return qprio::SweepQuantity::Optimum;
    case QP_SWEEP_WELFARE: return qprio::SweepQuantity::Welfare;
  }
  throw qprio::InvalidArgument("unknown sweep quantity code " + std::to_string(quantity));
}

std::optional<double> optional_from_nan(double v) {
  return std::isnan(v) ? std::nullopt : std::optional<double>(v);
}

qprio::RevenueProfile to_profile(const qp_revenue_profile& p) {
  return {to_policy(p.policy),
          {p.shape == QP_REVENUE_UNIMODAL ? qprio::RevenueShape::Kind::Unimodal
                                          : qprio::RevenueShape::Kind::MonotoneIncreasing,
           optional_from_nan(p.threshold_rho)},
          p.phi_star,
          p.fee_star,
          p.revenue_star,
          p.stable != 0};
}

qprio::SweepSpec to_spec(const qp_sweep_spec* s) {
  require(s, "spec");
  return {{s->K_min, s->K_max, s->K_step},
          {s->rho_min, s->rho_max, s->rho_step},
          to_policy(s->policy),
          to_quantity(s->quantity),
          s->mu == 0.0 ? 1.0 : s->mu};
}

std::string sweep_csv(const qp_sweep_spec* spec, unsigned threads) {
  std::ostringstream out;
  qprio::write_csv(qprio::run_sweep(to_spec(spec), threads), out);
  return out.str();
}

}  // namespace

struct qp_params_struct : Handle<qprio::ModelParams, 0x51500001> {
  using Handle::Handle;
};
struct qp_equilibria_struct : Handle<qprio::EquilibriumSet, 0x51500002> {
  using Handle::Handle;
};
struct qp_sim_config_struct : Handle<qprio::SimConfig, 0x51500003> {
  using Handle::Handle;
};
struct qp_sim_result_struct : Handle<qprio::SimulationResult, 0x51500004> {
  using Handle::Handle;
};
struct qp_validation_struct : Handle<qprio::ValidationReport, 0x51500005> {
  using Handle::Handle;
};
struct qp_dynamics_struct : Handle<qprio::DynamicsTrace, 0x51500006> {
  using Handle::Handle;
};


extern "C" {

const char* qp_version(void) { return "1.0.0"; }

const char* qp_status_string(int status) {
  switch (status) {
    case QP_OK: return "ok";
    case QP_ERROR_INVALID_ARGUMENT: return "invalid argument";
    case QP_ERROR_NO_INTERIOR_SOLUTION: return "no interior solution";
    case QP_ERROR_SIMULATION: return "simulation consistency failure";
    case QP_ERROR_PARSE: return "parse error";
    case QP_ERROR_NULL_POINTER: return "null pointer";
    case QP_ERROR_INVALID_HANDLE: return "invalid handle";
    case QP_ERROR_INSUFFICIENT_BUFFER: return "insufficient buffer";
    case QP_ERROR_IO: return "i/o error";
    default: return "unknown error";
  }
}

const char* qp_last_error(void) { return g_last_error.c_str(); }

/* model */

int qp_params_create(qp_params_t* out, double lambda, double mu, double K) {
  return guard([&] {
    require(out, "out");
    *out = new qp_params_struct(qprio::ModelParams::validate(lambda, mu, K));
  });
}

int qp_params_destroy(qp_params_t params) { return guard([&] { destroy(params); }); }

int qp_params_get(qp_params_t params, double* lambda, double* mu, double* K, double* rho) {
  return guard([&] {
    const auto& p = get(params);
    if (lambda) *lambda = p.lambda();
    if (mu) *mu = p.mu();
    if (K) *K = p.K();
    if (rho) *rho = p.rho();
  });
}

int qp_cost(qp_params_t params, int policy, double phi, double* out) {
  return guard([&] {
    require(out, "out");
    *out = qprio::cost(get(params), to_policy(policy), phi);
  });
}

int qp_cost_shape(qp_params_t params, int policy, int* out_shape) {
  return guard([&] {
    require(out_shape, "out_shape");
    *out_shape = from_shape(qprio::cost_shape(get(params), to_policy(policy)));
  });
}

int qp_wait_times(qp_params_t params, int policy, double phi, double* premium, double* ordinary) {
  return guard([&] {
    const auto w = qprio::wait_times(get(params), to_policy(policy), phi);
    if (premium) *premium = w.premium;
    if (ordinary) *ordinary = w.ordinary;
  });
}

int qp_service_moments(double mu, double K, int* family, double* mean, double* second_moment) {
  return guard([&] {
    const auto law = qprio::ServiceDistribution::make(mu, K);
    if (family) *family = static_cast<int>(law.family());
    if (mean) *mean = law.mean();
    if (second_moment) *second_moment = law.second_moment();
  });
}

/* equilibria */

int qp_some_join(qp_params_t params, int policy, double fee, double* phi) {
  return guard([&] {
    require(phi, "phi");
    *phi = qprio::some_join(get(params), to_policy(policy), fee);
  });
}

int qp_equilibria_compute(qp_equilibria_t* out, qp_params_t params, int policy, double fee) {
  return guard([&] {
    require(out, "out");
    *out = new qp_equilibria_struct(qprio::equilibria(get(params), to_policy(policy), fee));
  });
}

int qp_equilibria_destroy(qp_equilibria_t set) { return guard([&] { destroy(set); }); }

int qp_equilibria_count(qp_equilibria_t set, size_t* count) {
  return guard([&] {
    require(count, "count");
    *count = get(set).equilibria.size();
  });
}

int qp_equilibria_get(qp_equilibria_t set, size_t index, int* kind, double* phi, int* stable) {
  return guard([&] {
    const auto& list = get(set).equilibria;
    if (index >= list.size()) throw qprio::InvalidArgument("equilibrium index out of range");
    const auto& eq = list[index];
    if (kind) *kind = from_kind(eq.kind);
    if (phi) *phi = eq.phi.value_or(kNaN);
    if (stable) *stable = eq.stable ? 1 : 0;
  });
}

int qp_equilibria_to_json(qp_equilibria_t set, char* out, size_t* out_len) {
  return guard([&] { write_text(qprio::to_json(get(set)).dump(), out, out_len); });
}

/* revenue */

int qp_revenue(qp_params_t params, int policy, double phi, double* out) {
  return guard([&] {
    require(out, "out");
    *out = qprio::revenue(get(params), to_policy(policy), phi);
  });
}

int qp_revenue_shape(qp_params_t params, int policy, int* shape, double* threshold_rho) {
  return guard([&] {
    const auto s = qprio::revenue_shape(get(params), to_policy(policy));
    if (shape) *shape = s.kind == qprio::RevenueShape::Kind::Unimodal ? QP_REVENUE_UNIMODAL : QP_REVENUE_INCREASING;
    if (threshold_rho) *threshold_rho = s.threshold.value_or(kNaN);
  });
}

int qp_phi_max(qp_params_t params, double* out) {
  return guard([&] {
    require(out, "out");
    *out = qprio::phi_max(get(params));
  });
}

int qp_max_revenue(qp_params_t params, int policy, double margin, qp_revenue_profile* out) {
  return guard([&] {
    require(out, "out");
    const auto p = qprio::max_revenue(get(params), to_policy(policy), margin);
    *out = {from_policy(p.policy),
            p.shape.kind == qprio::RevenueShape::Kind::Unimodal ? QP_REVENUE_UNIMODAL : QP_REVENUE_INCREASING,
            p.shape.threshold.value_or(kNaN),
            p.phi_star,
            p.fee_star,
            p.revenue_star,
            p.stable ? 1 : 0};
  });
}

int qp_revenue_profile_to_json(const qp_revenue_profile* profile, char* out, size_t* out_len) {
  return guard([&] {
    require(profile, "profile");
    write_text(qprio::to_json(to_profile(*profile)).dump(), out, out_len);
  });
}

int qp_compare_policies(qp_params_t params, qp_policy_comparison* out) {
  return guard([&] {
    require(out, "out");
    const auto c = qprio::compare_policies(get(params));
    *out = {c.revenue_np, c.revenue_pr, c.difference};
  });
}

int qp_policy_comparison_to_json(const qp_policy_comparison* comparison, char* out, size_t* out_len) {
  return guard([&] {
    require(comparison, "comparison");
    const qprio::PolicyComparison c{comparison->revenue_np, comparison->revenue_pr, comparison->difference};
    write_text(qprio::to_json(c).dump(), out, out_len);
  });
}

/* welfare */

int qp_welfare(qp_params_t params, int policy, double phi, double* out) {
  return guard([&] {
    require(out, "out");
    *out = qprio::welfare(get(params), to_policy(policy), phi);
  });
}

int qp_socially_optimal(qp_params_t params, int policy, int* kind, double* phi) {
  return guard([&] {
    const auto opt = qprio::socially_optimal(get(params), to_policy(policy));
    if (kind) *kind = from_social(opt.kind);
    if (phi) *phi = opt.phi.value_or(kNaN);
  });
}

int qp_welfare_at_revenue_max(qp_params_t params, int policy, qp_welfare_profile* out) {
  return guard([&] {
    require(out, "out");
    const auto p = qprio::welfare_at_revenue_max(get(params), to_policy(policy));
    *out = {from_policy(p.policy), p.revenue_phi, p.welfare_at_revenue_max, from_social(p.optimal.kind),
            p.optimal.phi.value_or(kNaN), p.optimal_welfare, p.worst_welfare};
  });
}

int qp_welfare_profile_to_json(const qp_welfare_profile* profile, char* out, size_t* out_len) {
  return guard([&] {
    require(profile, "profile");
    const qprio::WelfareProfile p{to_policy(profile->policy),
                                  profile->phi_revenue,
                                  profile->welfare_at_revenue_max,
                                  {to_social(profile->social_kind), optional_from_nan(profile->phi_social)},
                                  profile->optimal_welfare,
                                  profile->worst_welfare};
    write_text(qprio::to_json(p).dump(), out, out_len);
  });
}

/* simulation */

int qp_sim_config_create(qp_sim_config_t* out, qp_params_t params, int policy, double phi,
                         uint64_t horizon, unsigned replications, uint64_t seed) {
  return guard([&] {
    require(out, "out");
    auto config = qprio::make_sim_config(get(params), to_policy(policy), phi, horizon, replications, seed);
    qprio::check_config(config);
    *out = new qp_sim_config_struct(std::move(config));
  });
}

int qp_sim_config_from_json(qp_sim_config_t* out, const char* json) {
  return guard([&] {
    require(out, "out");
    require(json, "json");
    *out = new qp_sim_config_struct(qprio::sim_config_from_json(qprio::parse_json(json)));
  });
}

int qp_sim_config_destroy(qp_sim_config_t config) { return guard([&] { destroy(config); }); }

int qp_sim_config_set_warmup(qp_sim_config_t config, uint64_t warmup) {
  return guard([&] {
    auto updated = get(config);
    updated.warmup = warmup;
    qprio::check_config(updated);
    get(config) = updated;
  });
}

int qp_sim_config_set_fee(qp_sim_config_t config, double fee) {
  return guard([&] {
    auto updated = get(config);
    updated.fee = fee;
    qprio::check_config(updated);
    get(config) = updated;
  });
}

int qp_sim_config_to_json(qp_sim_config_t config, char* out, size_t* out_len) {
  return guard([&] { write_text(qprio::to_json(get(config)).dump(), out, out_len); });
}

int qp_simulate(qp_sim_result_t* out, qp_sim_config_t config, unsigned threads) {
  return guard([&] {
    require(out, "out");
    *out = new qp_sim_result_struct(qprio::run_sim(get(config), threads));
  });
}

int qp_sim_result_destroy(qp_sim_result_t result) { return guard([&] { destroy(result); }); }

int qp_sim_result_wait(qp_sim_result_t result, int premium, double* mean, double* half_width_95) {
  return guard([&] {
    const auto& r = get(result);
    const auto& est = premium ? r.wait_premium : r.wait_ordinary;
    if (!est) throw qprio::NoInteriorSolution("no customers of this class were simulated");
    if (mean) *mean = est->mean;
    if (half_width_95) *half_width_95 = est->half_width(0.95).value_or(kNaN);
  });
}

int qp_sim_result_welfare(qp_sim_result_t result, double* mean, double* half_width_95) {
  return guard([&] {
    const auto& r = get(result);
    if (mean) *mean = r.welfare.mean;
    if (half_width_95) *half_width_95 = r.welfare.half_width(0.95).value_or(kNaN);
  });
}

int qp_sim_result_to_json(qp_sim_result_t result, char* out, size_t* out_len) {
  return guard([&] { write_text(qprio::to_json(get(result)).dump(), out, out_len); });
}

int qp_validate(qp_validation_t* out, qp_sim_config_t config, unsigned threads) {
  return guard([&] {
    require(out, "out");
    *out = new qp_validation_struct(qprio::validate(get(config), threads));
  });
}

int qp_validation_destroy(qp_validation_t report) { return guard([&] { destroy(report); }); }

int qp_validation_passed(qp_validation_t report, int* passed) {
  return guard([&] {
    require(passed, "passed");
    *passed = get(report).passed ? 1 : 0;
  });
}

int qp_validation_check_count(qp_validation_t report, size_t* count) {
  return guard([&] {
    require(count, "count");
    *count = get(report).checks.size();
  });
}

int qp_validation_check(qp_validation_t report, size_t index, const char** quantity,
                        double* analytical, double* estimate, double* half_width, int* pass) {
  return guard([&] {
    const auto& checks = get(report).checks;
    if (index >= checks.size()) throw qprio::InvalidArgument("check index out of range");
    const auto& c = checks[index];
    if (quantity) *quantity = c.quantity.c_str();
    if (analytical) *analytical = c.analytical;
    if (estimate) *estimate = c.estimate;
    if (half_width) *half_width = c.half_width;
    if (pass) *pass = c.pass ? 1 : 0;
  });
}

int qp_validation_to_json(qp_validation_t report, char* out, size_t* out_len) {
  return guard([&] { write_text(qprio::to_json(get(report)).dump(), out, out_len); });
}

int qp_dynamics_run(qp_dynamics_t* out, qp_params_t params, int policy, double fee, double phi0,
                    unsigned rounds, double step, int mode, uint64_t sim_horizon, uint64_t seed) {
  return guard([&] {
    require(out, "out");
    if (mode != QP_DYNAMICS_ANALYTICAL && mode != QP_DYNAMICS_EMPIRICAL)
      throw qprio::InvalidArgument("unknown dynamics mode");
    qprio::DynamicsConfig config{get(params), to_policy(policy), fee, phi0, rounds, step,
                                 mode == QP_DYNAMICS_EMPIRICAL ? qprio::DynamicsMode::Empirical
                                                               : qprio::DynamicsMode::Analytical,
                                 sim_horizon, seed};
    *out = new qp_dynamics_struct(qprio::adaptive_dynamics(config));
  });
}

int qp_dynamics_destroy(qp_dynamics_t trace) { return guard([&] { destroy(trace); }); }

int qp_dynamics_length(qp_dynamics_t trace, size_t* length) {
  return guard([&] {
    require(length, "length");
    *length = get(trace).phi.size();
  });
}

int qp_dynamics_phi(qp_dynamics_t trace, size_t round, double* phi) {
  return guard([&] {
    require(phi, "phi");
    const auto& t = get(trace);
    if (round >= t.phi.size()) throw qprio::InvalidArgument("round out of range");
    *phi = t.phi[round];
  });
}

int qp_dynamics_result(qp_dynamics_t trace, int* converged, double* limit, int* verdict) {
  return guard([&] {
    const auto& t = get(trace);
    if (converged) *converged = t.converged ? 1 : 0;
    if (limit) *limit = t.limit;
    if (verdict) *verdict = from_kind(t.verdict);
  });
}

int qp_dynamics_to_json(qp_dynamics_t trace, char* out, size_t* out_len) {
  return guard([&] { write_text(qprio::to_json(get(trace)).dump(), out, out_len); });
}

/* sweeps */

int qp_sweep_header(int quantity, char* out, size_t* out_len) {
  return guard([&] {
    std::string line;
    for (const auto& column : qprio::sweep_header(to_quantity(quantity)))
      line += (line.empty() ? "" : ",") + column;
    write_text(line, out, out_len);
  });
}

int qp_sweep_to_csv(const qp_sweep_spec* spec, unsigned threads, char* out, size_t* out_len) {
  return guard([&] { write_text(sweep_csv(spec, threads), out, out_len); });
}

int qp_sweep_write_csv(const qp_sweep_spec* spec, unsigned threads, const char* path) {
  return guard([&] {
    require(path, "path");
    const auto csv = sweep_csv(spec, threads);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw IoError(std::string("cannot open '") + path + "' for writing");
    file << csv;
    file.flush();
    if (!file) throw IoError(std::string("failed writing '") + path + "'");
  });
}

}  // extern "C"
