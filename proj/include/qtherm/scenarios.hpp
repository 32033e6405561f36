// Scenario runners: each one turns a validated parameter set into a flat
// list of result records.
//
//   typicality            reduced states of random constrained global states
//                         against the canonical state, swept over
//                         environment sizes
//   bounce                entropy produced when the momentum mirror acts on
//                         one particle, with the unitary dilation cross-check
//   expansion_unitary     confined thermal state released into the full box
//                         and propagated unitarily: entropy stays put while
//                         the occupation spreads
//   expansion_entangling  gas qubits released into a degenerate shell shared
//                         with environment qubits; energy-conserving random
//                         couplings drive the gas marginal to ln(dim) entropy
//   relaxation_scan       entropy of the gas marginal versus time under
//                         random couplings, with relaxation time and plateau
//                         estimates
//
// Sample i of a run always derives child stream i of the scenario seed, so
// records are bit-identical for any worker count.
#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qtherm/dynamics.hpp"
#include "qtherm/errors.hpp"
#include "qtherm/parallel.hpp"
#include "qtherm/typicality.hpp"

namespace qtherm {

enum class ScenarioKind {
  typicality,
  bounce,
  expansion_unitary,
  expansion_entangling,
  relaxation_scan,
};

inline const std::vector<std::pair<ScenarioKind, std::string>>& scenario_names() {
  static const std::vector<std::pair<ScenarioKind, std::string>> names{
      {ScenarioKind::typicality, "typicality"},
      {ScenarioKind::bounce, "bounce"},
      {ScenarioKind::expansion_unitary, "expansion_unitary"},
      {ScenarioKind::expansion_entangling, "expansion_entangling"},
      {ScenarioKind::relaxation_scan, "relaxation_scan"},
  };
  return names;
}

inline std::string to_string(ScenarioKind kind) {
  for (const auto& [k, name] : scenario_names())
    if (k == kind) return name;
  throw ValidationError("unknown scenario kind");
}

inline ScenarioKind scenario_from_string(const std::string& name) {
  for (const auto& [k, n] : scenario_names())
    if (n == name) return k;
  throw ValidationError("unknown scenario '" + name + "'");
}

struct ScenarioConfig {
  ScenarioKind scenario = ScenarioKind::typicality;
  nlohmann::json parameters = nlohmann::json::object();
  std::string output_path = "out";
};

struct RunRecord {
  std::string scenario;
  nlohmann::json parameters = nlohmann::json::object();
  std::optional<std::int64_t> sample_index;
  std::optional<double> time;
  std::optional<double> entropy_nats;
  std::optional<double> trace_distance;
  std::optional<double> mean_energy;
  nlohmann::json extra = nlohmann::json::object();
  double wall_clock_seconds = 0.0;
};

namespace detail {

inline const nlohmann::json& require_param(const nlohmann::json& params, const char* key) {
  const auto it = params.find(key);
  if (it == params.end()) {
    throw ValidationError(std::string("missing scenario parameter '") + key + "'");
  }
  return *it;
}

inline std::int64_t param_int(const nlohmann::json& params, const char* key) {
  const auto& v = require_param(params, key);
  if (!v.is_number_integer()) {
    throw ValidationError(std::string("scenario parameter '") + key + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

inline double param_num(const nlohmann::json& params, const char* key) {
  const auto& v = require_param(params, key);
  if (!v.is_number()) {
    throw ValidationError(std::string("scenario parameter '") + key + "' must be a number");
  }
  return v.get<double>();
}

inline std::string param_str(const nlohmann::json& params, const char* key) {
  const auto& v = require_param(params, key);
  if (!v.is_string()) {
    throw ValidationError(std::string("scenario parameter '") + key + "' must be a string");
  }
  return v.get<std::string>();
}

inline SeedSpec scenario_root_seed(const nlohmann::json& params) {
  const auto& v = require_param(params, "seed");
  if (!v.is_number_unsigned() && !v.is_number_integer()) {
    throw ValidationError("scenario parameter 'seed' must be a nonnegative integer");
  }
  if (v.is_number_integer() && v.get<std::int64_t>() < 0 && !v.is_number_unsigned()) {
    throw ValidationError("scenario parameter 'seed' must be nonnegative");
  }
  return SeedSpec{v.get<std::uint64_t>(), 0};
}

inline RunRecord base_record(const ScenarioConfig& config) {
  RunRecord rec;
  rec.scenario = to_string(config.scenario);
  rec.parameters = config.parameters;
  return rec;
}

// Diagonal ladder 0, 1, ..., d-1: equally spaced levels used to give the
// window constraint a nontrivial spectrum.
inline Eigen::MatrixXcd ladder(Eigen::Index d) {
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = static_cast<double>(i);
  return v.asDiagonal().toDenseMatrix().cast<std::complex<double>>();
}

}  // namespace detail

// --- typicality ---------------------------------------------------------

inline std::vector<RunRecord> run_typicality(const ScenarioConfig& config, int workers = 1) {
  const auto& p = config.parameters;
  const Eigen::Index sys_dim = detail::param_int(p, "sys_dim");
  const std::int64_t n_samples = detail::param_int(p, "n_samples");
  const SeedSpec root = detail::scenario_root_seed(p);

  const auto& env_list = detail::require_param(p, "env_dims");
  if (!env_list.is_array() || env_list.empty()) {
    throw ValidationError("scenario parameter 'env_dims' must be a nonempty array");
  }

  const auto window = p.find("energy_window");
  const bool has_window = window != p.end() && !window->is_null();

  std::vector<RunRecord> records;
  for (std::size_t idx = 0; idx < env_list.size(); ++idx) {
    const Eigen::Index env_dim = env_list[idx].get<Eigen::Index>();
    const SpaceLayout layout({{"S", sys_dim}, {"E", env_dim}});
    const SeedSpec node = derive_stream(root, idx);
    const SeedSpec sweep_seed = derive_stream(node, 1);

    TypicalityStats stats;
    nlohmann::json window_info;
    if (has_window) {
      const double center = detail::param_num(*window, "center");
      const double width = detail::param_num(*window, "width");
      const double strength = detail::param_num(*window, "interaction_strength");
      // Equally spaced local levels plus a random Hermitian coupling; the
      // window is cut in the spectrum of this total operator.
      Eigen::MatrixXcd hm =
          kron(detail::ladder(sys_dim), Eigen::MatrixXcd::Identity(env_dim, env_dim)) +
          kron(Eigen::MatrixXcd::Identity(sys_dim, sys_dim), detail::ladder(env_dim));
      if (strength > 0.0) {
        hm += strength *
              gue_hermitian(layout, 1.0, derive_stream(node, 0)).matrix();
      }
      const HermitianOperator h_total(std::move(hm), layout);
      const auto subspace = energy_window_subspace(h_total, center, width);
      stats = typicality_sweep(subspace, {"S"}, n_samples, sweep_seed, workers);
      window_info = {{"window_center", center},
                     {"window_width", width},
                     {"interaction_strength", strength}};
    } else {
      stats = typicality_sweep(full_space_subspace(layout), {"S"}, n_samples, sweep_seed,
                               workers);
    }

    RunRecord rec = detail::base_record(config);
    rec.sample_index = static_cast<std::int64_t>(idx);
    rec.entropy_nats = stats.mean_entropy;
    rec.trace_distance = stats.mean_distance;
    rec.extra = {{"env_dim", env_dim},
                 {"sys_dim", sys_dim},
                 {"subspace_dim", stats.subspace_dim},
                 {"max_distance", stats.max_distance},
                 {"std_distance", stats.std_distance},
                 {"n_samples", stats.sample_count}};
    if (has_window) rec.extra.update(window_info);
    records.push_back(std::move(rec));
  }
  return records;
}

// --- bounce -------------------------------------------------------------

namespace detail {

inline PureState bounce_input_state(const std::string& text, Eigen::Index d,
                                    const SeedSpec& root) {
  const SpaceLayout layout = SpaceLayout::single("momentum", d);
  std::string kind = text;
  std::optional<double> arg;
  const auto open = text.find('(');
  if (open != std::string::npos) {
    if (text.back() != ')') {
      throw ValidationError("bounce input '" + text + "': missing closing parenthesis");
    }
    kind = text.substr(0, open);
    const std::string inner = text.substr(open + 1, text.size() - open - 2);
    try {
      std::size_t used = 0;
      arg = std::stod(inner, &used);
      if (used != inner.size()) throw std::invalid_argument(inner);
    } catch (const std::exception&) {
      throw ValidationError("bounce input '" + text + "': bad argument '" + inner + "'");
    }
  }

  if (kind == "eigenstate") {
    if (!arg || *arg < 0 || *arg >= static_cast<double>(d) || *arg != std::floor(*arg)) {
      throw ValidationError("bounce input 'eigenstate(k)' needs integer k in [0, " +
                            std::to_string(d) + ")");
    }
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    v(static_cast<Eigen::Index>(*arg)) = 1.0;
    return PureState(std::move(v), layout);
  }
  if (kind == "equal_superposition") {
    if (!arg || *arg < 1 || *arg > static_cast<double>(d) || *arg != std::floor(*arg)) {
      throw ValidationError("bounce input 'equal_superposition(k)' needs integer k in [1, " +
                            std::to_string(d) + "]");
    }
    const Eigen::Index k = static_cast<Eigen::Index>(*arg);
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
    for (Eigen::Index i = 0; i < k; ++i) v(i) = 1.0 / std::sqrt(static_cast<double>(k));
    return PureState(std::move(v), layout);
  }
  if (kind == "gaussian") {
    if (!arg || !(*arg > 0.0)) {
      throw ValidationError("bounce input 'gaussian(width)' needs width > 0");
    }
    const double c = 0.5 * static_cast<double>(d - 1);
    Eigen::VectorXcd v(d);
    for (Eigen::Index i = 0; i < d; ++i) {
      const double x = static_cast<double>(i) - c;
      v(i) = std::exp(-x * x / (4.0 * *arg * *arg));
    }
    v /= v.norm();
    return PureState(std::move(v), layout);
  }
  if (kind == "haar") {
    if (arg) throw ValidationError("bounce input 'haar' takes no argument");
    return haar_unit_vector(layout, derive_stream(root, 0));
  }
  throw ValidationError("bounce input '" + text +
                        "': expected eigenstate(k), equal_superposition(k), "
                        "gaussian(width), or haar");
}

}  // namespace detail

inline std::vector<RunRecord> run_bounce(const ScenarioConfig& config, int /*workers*/ = 1) {
  const auto& p = config.parameters;
  const Eigen::Index d = detail::param_int(p, "momentum_dim");
  const std::string input_text = detail::param_str(p, "input_state");
  const SeedSpec root = detail::scenario_root_seed(p);

  const PureState psi = detail::bounce_input_state(input_text, d, root);
  const DensityMatrix rho_in = dm_from_pure(psi);
  const double s_in = vn_entropy(rho_in);
  const double shannon = shannon_entropy(psi.amplitudes().cwiseAbs2());

  const Channel channel = bounce_channel(d);
  const DensityMatrix rho_out = apply_channel(channel, rho_in);
  const double s_out = vn_entropy(rho_out);

  // Cross-check through the unitary dilation: couple to the ready wall,
  // apply the permutation, reduce back to the particle.
  const Eigen::MatrixXcd u = dilate_bounce(d);
  Eigen::VectorXcd ready = Eigen::VectorXcd::Zero(d + 1);
  ready(0) = 1.0;
  const PureState joint(kron(psi.amplitudes(), ready), bounce_dilation_layout(d));
  Eigen::VectorXcd evolved = u * joint.amplitudes();
  const PureState joint_out(std::move(evolved), joint.layout());
  const DensityMatrix marginal = reduce_pure(joint_out, {"momentum"});
  const double discrepancy = (marginal.matrix() - rho_out.matrix()).cwiseAbs().maxCoeff();

  RunRecord rec = detail::base_record(config);
  rec.sample_index = 0;
  rec.entropy_nats = s_out;
  rec.extra = {{"input_entropy_nats", s_in},
               {"output_entropy_nats", s_out},
               {"delta_entropy_nats", s_out - s_in},
               {"momentum_shannon_nats", shannon},
               {"path_discrepancy", discrepancy},
               {"momentum_dim", d},
               {"input_state", input_text},
               {"wall_entropy_nats", vn_entropy(reduce_pure(joint_out, {"wall"}))}};
  return {std::move(rec)};
}

// --- expansion_unitary --------------------------------------------------

inline std::vector<RunRecord> run_expansion_unitary(const ScenarioConfig& config,
                                                    int /*workers*/ = 1) {
  const auto& p = config.parameters;
  const BoxSpec box{detail::param_int(p, "n_sites"), detail::param_num(p, "hopping"),
                    detail::param_num(p, "barrier")};
  const double beta = detail::param_num(p, "beta");
  const auto& times = detail::require_param(p, "times");
  if (!times.is_array() || times.empty()) {
    throw ValidationError("scenario parameter 'times' must be a nonempty array");
  }

  const HermitianOperator h_blocked = box_hamiltonian(box, true);
  const HermitianOperator h_free = box_hamiltonian(box, false);
  const DensityMatrix rho0 = gibbs_state(h_blocked, beta);

  std::vector<RunRecord> records;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double t = times[j].get<double>();
    const DensityMatrix rho_t = evolve(rho0, propagator(h_free, t));

    double right_occ = 0.0;
    for (Eigen::Index i = box.n_sites / 2; i < box.n_sites; ++i) {
      right_occ += rho_t.matrix()(i, i).real();
    }

    RunRecord rec = detail::base_record(config);
    rec.sample_index = static_cast<std::int64_t>(j);
    rec.time = t;
    rec.entropy_nats = vn_entropy(rho_t);
    rec.mean_energy = expectation(h_free, rho_t);
    rec.extra = {{"right_half_occupation", right_occ}, {"purity", purity(rho_t)}};
    records.push_back(std::move(rec));
  }
  return records;
}

// --- expansion_entangling -----------------------------------------------

namespace detail {

struct EntanglingCoupling {
  std::string kind;
  double strength = 1.0;
  double time = 1.0;
};

inline EntanglingCoupling parse_coupling(const nlohmann::json& params) {
  const auto& c = require_param(params, "coupling");
  if (!c.is_object()) throw ValidationError("scenario parameter 'coupling' must be an object");
  EntanglingCoupling out;
  out.kind = param_str(c, "kind");
  if (out.kind == "block_haar") return out;
  if (out.kind == "gue_evolution") {
    out.strength = param_num(c, "strength");
    out.time = param_num(c, "time");
    if (!(out.strength > 0.0) || !(out.time > 0.0)) {
      throw ValidationError("coupling 'gue_evolution' needs positive strength and time");
    }
    return out;
  }
  throw ValidationError("coupling kind '" + out.kind +
                        "': expected block_haar or gue_evolution");
}

// One post-coupling global state. The accessible shell is fully degenerate
// (free gas released into empty sites at fixed energy), so an
// energy-conserving Haar coupling acts as an unconstrained Haar unitary on
// the shell and its action on the fixed initial state is exactly a Haar
// vector. The gue_evolution variant instead integrates exp(-i H t) for a
// random Hermitian coupling of bandwidth ~ 4 * strength.
inline PureState entangled_global_state(const SpaceLayout& layout,
                                        const EntanglingCoupling& coupling,
                                        const SeedSpec& stream) {
  if (coupling.kind == "block_haar") {
    return haar_unit_vector(layout, stream);
  }
  const Eigen::Index dim = layout.total_dim();
  const double scale = coupling.strength / std::sqrt(static_cast<double>(dim));
  const HermitianOperator h = gue_hermitian(layout, scale, stream);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw NumericalError("entangling coupling: eigensolver failed");
  }
  Eigen::VectorXcd coeffs = es.eigenvectors().row(0).adjoint();
  for (Eigen::Index i = 0; i < dim; ++i) {
    coeffs(i) *= std::polar(1.0, -es.eigenvalues()(i) * coupling.time);
  }
  Eigen::VectorXcd amp = es.eigenvectors() * coeffs;
  amp /= amp.norm();
  return PureState(std::move(amp), layout);
}

}  // namespace detail

inline std::vector<RunRecord> run_expansion_entangling(const ScenarioConfig& config,
                                                       int workers = 1) {
  const auto& p = config.parameters;
  const std::int64_t n_gas = detail::param_int(p, "n_gas");
  const std::int64_t n_env = detail::param_int(p, "n_env");
  const std::int64_t n_real = detail::param_int(p, "n_realizations");
  const auto coupling = detail::parse_coupling(p);
  const SeedSpec root = detail::scenario_root_seed(p);

  const Eigen::Index gas_dim = Eigen::Index{1} << n_gas;
  const Eigen::Index env_dim = Eigen::Index{1} << n_env;
  const SpaceLayout layout({{"gas", gas_dim}, {"env", env_dim}});

  std::vector<RunRecord> records;

  // The released gas starts in a definite product configuration: zero
  // entropy, globally pure.
  {
    Eigen::VectorXcd e0 = Eigen::VectorXcd::Zero(layout.total_dim());
    e0(0) = 1.0;
    const PureState initial(std::move(e0), layout);
    RunRecord rec = detail::base_record(config);
    rec.entropy_nats = vn_entropy(reduce_pure(initial, {"gas"}));
    rec.extra = {{"kind", "initial"},
                 {"global_purity", std::pow(initial.amplitudes().squaredNorm(), 2.0)}};
    records.push_back(std::move(rec));
  }

  std::vector<double> entropies(static_cast<std::size_t>(n_real));
  std::vector<double> purities(static_cast<std::size_t>(n_real));
  parallel_for(n_real, workers, [&](std::int64_t r) {
    const PureState phi = detail::entangled_global_state(
        layout, coupling, derive_stream(root, static_cast<std::uint64_t>(r)));
    entropies[static_cast<std::size_t>(r)] = vn_entropy(reduce_pure(phi, {"gas"}));
    purities[static_cast<std::size_t>(r)] = std::pow(phi.amplitudes().squaredNorm(), 2);
  });

  double sum = 0.0;
  for (std::int64_t r = 0; r < n_real; ++r) {
    RunRecord rec = detail::base_record(config);
    rec.sample_index = r;
    rec.entropy_nats = entropies[static_cast<std::size_t>(r)];
    rec.extra = {{"kind", "realization"},
                 {"global_purity", purities[static_cast<std::size_t>(r)]}};
    records.push_back(std::move(rec));
    sum += entropies[static_cast<std::size_t>(r)];
  }

  RunRecord mean = detail::base_record(config);
  mean.entropy_nats = sum / static_cast<double>(n_real);
  mean.extra = {{"kind", "mean"},
                {"n_realizations", n_real},
                {"max_entropy_nats", static_cast<double>(n_gas) * std::log(2.0)}};
  records.push_back(std::move(mean));
  return records;
}

// --- relaxation_scan ----------------------------------------------------

inline std::vector<RunRecord> run_relaxation_scan(const ScenarioConfig& config,
                                                  int workers = 1) {
  const auto& p = config.parameters;
  const std::int64_t n_gas = detail::param_int(p, "n_gas");
  const std::int64_t n_env = detail::param_int(p, "n_env");
  const std::int64_t n_real = detail::param_int(p, "n_realizations");
  const double strength = detail::param_num(p, "coupling_strength");
  const SeedSpec root = detail::scenario_root_seed(p);

  const auto& times_json = detail::require_param(p, "times");
  if (!times_json.is_array() || times_json.size() < 8) {
    throw ValidationError(
        "scenario parameter 'times' needs at least 8 entries for a plateau estimate");
  }
  std::vector<double> times;
  for (const auto& t : times_json) times.push_back(t.get<double>());
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(times[j] > times[j - 1])) {
      throw ValidationError("scenario parameter 'times' must be strictly increasing");
    }
  }
  if (!(strength > 0.0)) {
    throw ValidationError("scenario parameter 'coupling_strength' must be positive");
  }

  const Eigen::Index gas_dim = Eigen::Index{1} << n_gas;
  const Eigen::Index env_dim = Eigen::Index{1} << n_env;
  const SpaceLayout layout({{"gas", gas_dim}, {"env", env_dim}});
  const Eigen::Index dim = layout.total_dim();
  const double scale = strength / std::sqrt(static_cast<double>(dim));
  const std::size_t nt = times.size();

  // entropy[r * nt + j] for realization r at time index j.
  std::vector<double> entropy(static_cast<std::size_t>(n_real) * nt);
  parallel_for(n_real, workers, [&](std::int64_t r) {
    const HermitianOperator h =
        gue_hermitian(layout, scale, derive_stream(root, static_cast<std::uint64_t>(r)));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
    if (es.info() != Eigen::Success) {
      throw NumericalError("relaxation scan: eigensolver failed");
    }
    const Eigen::VectorXcd c0 = es.eigenvectors().row(0).adjoint();
    for (std::size_t j = 0; j < nt; ++j) {
      Eigen::VectorXcd c = c0;
      for (Eigen::Index i = 0; i < dim; ++i) {
        c(i) *= std::polar(1.0, -es.eigenvalues()(i) * times[j]);
      }
      Eigen::VectorXcd amp = es.eigenvectors() * c;
      amp /= amp.norm();
      entropy[static_cast<std::size_t>(r) * nt + j] =
          vn_entropy(reduce_pure(PureState(std::move(amp), layout), {"gas"}));
    }
  });

  std::vector<RunRecord> records;
  for (std::int64_t r = 0; r < n_real; ++r) {
    for (std::size_t j = 0; j < nt; ++j) {
      RunRecord rec = detail::base_record(config);
      rec.sample_index = r;
      rec.time = times[j];
      rec.entropy_nats = entropy[static_cast<std::size_t>(r) * nt + j];
      rec.extra = {{"kind", "realization"}};
      records.push_back(std::move(rec));
    }
  }

  std::vector<double> mean_curve(nt, 0.0);
  for (std::size_t j = 0; j < nt; ++j) {
    for (std::int64_t r = 0; r < n_real; ++r) {
      mean_curve[j] += entropy[static_cast<std::size_t>(r) * nt + j];
    }
    mean_curve[j] /= static_cast<double>(n_real);
    RunRecord rec = detail::base_record(config);
    rec.time = times[j];
    rec.entropy_nats = mean_curve[j];
    rec.extra = {{"kind", "mean"}};
    records.push_back(std::move(rec));
  }

  // Plateau: mean of the last quarter of the mean curve. Relaxation time:
  // first time the mean curve reaches 90% of the plateau.
  const std::size_t q = std::max<std::size_t>(nt / 4, 1);
  double plateau = 0.0;
  for (std::size_t j = nt - q; j < nt; ++j) plateau += mean_curve[j];
  plateau /= static_cast<double>(q);

  double tau = times.back();
  for (std::size_t j = 0; j < nt; ++j) {
    if (mean_curve[j] >= 0.9 * plateau) {
      tau = times[j];
      break;
    }
  }

  RunRecord summary = detail::base_record(config);
  summary.extra = {{"kind", "summary"},
                   {"tau", tau},
                   {"plateau_nats", plateau},
                   {"max_entropy_nats", static_cast<double>(n_gas) * std::log(2.0)},
                   {"n_realizations", n_real},
                   {"n_times", static_cast<std::int64_t>(nt)}};
  records.push_back(std::move(summary));
  return records;
}

// --- dispatch -----------------------------------------------------------

inline std::vector<RunRecord> run_scenario(const ScenarioConfig& config, int workers = 1) {
  const auto start = std::chrono::steady_clock::now();
  std::vector<RunRecord> records;
  switch (config.scenario) {
    case ScenarioKind::typicality:
      records = run_typicality(config, workers);
      break;
    case ScenarioKind::bounce:
      records = run_bounce(config, workers);
      break;
    case ScenarioKind::expansion_unitary:
      records = run_expansion_unitary(config, workers);
      break;
    case ScenarioKind::expansion_entangling:
      records = run_expansion_entangling(config, workers);
      break;
    case ScenarioKind::relaxation_scan:
      records = run_relaxation_scan(config, workers);
      break;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  for (auto& rec : records) rec.wall_clock_seconds = elapsed;
  return records;
}

}  // namespace qtherm
