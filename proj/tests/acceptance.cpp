// Acceptance gate: eight end-to-end checks, one line of output each, exit
// code equal to the number of failures. Tolerances and time budgets are
// fixed here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qtherm/cli.hpp"
#include "qtherm/config.hpp"
#include "qtherm/results.hpp"
#include "qtherm/scenarios.hpp"

#include "test_util.hpp"

namespace {

using namespace qtherm;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

ScenarioConfig make_config(const std::string& scenario, nlohmann::json overrides) {
  nlohmann::json user{{"scenario", scenario}};
  if (overrides.is_object()) user.update(overrides);
  return parse_config(std::move(user));
}

const RunRecord& find_kind(const std::vector<RunRecord>& records, const std::string& kind) {
  for (const auto& rec : records) {
    if (rec.extra.value("kind", "") == kind) return rec;
  }
  throw std::runtime_error("no record of kind " + kind);
}

// 1. The momentum mirror agrees with its unitary dilation at every supported
//    dimension, and the whole sweep is fast.
Outcome bounce_dilation_fast() {
  double max_disc = 0.0;
  double max_entropy_gap = 0.0;
  for (const Eigen::Index d : {2, 8, 32, 64}) {
    const auto records = run_scenario(
        make_config("bounce", {{"momentum_dim", d}, {"input_state", "haar"}}), 1);
    const auto& x = records.at(0).extra;
    max_disc = std::max(max_disc, x.at("path_discrepancy").get<double>());
    max_entropy_gap =
        std::max(max_entropy_gap, std::abs(records.at(0).entropy_nats.value() -
                                           x.at("momentum_shannon_nats").get<double>()));
  }
  const bool pass = max_disc <= 1e-10 && max_entropy_gap <= 1e-9;
  return {pass, "max path discrepancy " + fmt(max_disc) + ", max entropy gap " +
                    fmt(max_entropy_gap) + " over dims {2,8,32,64}"};
}

// 2. Unitary expansion in a 12-site box: entropy and energy are invariant
//    while occupation actually spreads into the opened half.
Outcome expansion_entropy_invariance() {
  const auto records = run_scenario(make_config("expansion_unitary", {}), 1);
  const double s0 = records.at(0).entropy_nats.value();
  const double e0 = records.at(0).mean_energy.value();
  double max_s_drift = 0.0, max_e_drift = 0.0, max_occ = 0.0;
  for (const auto& rec : records) {
    max_s_drift = std::max(max_s_drift, std::abs(rec.entropy_nats.value() - s0));
    max_e_drift = std::max(max_e_drift, std::abs(rec.mean_energy.value() - e0));
    max_occ = std::max(max_occ, rec.extra.at("right_half_occupation").get<double>());
  }
  const double occ0 = records.at(0).extra.at("right_half_occupation").get<double>();
  const bool pass =
      max_s_drift <= 1e-9 && max_e_drift <= 1e-9 && occ0 < 1e-4 && max_occ > 0.25;
  return {pass, "entropy drift " + fmt(max_s_drift) + ", energy drift " +
                    fmt(max_e_drift) + ", occupation " + fmt(occ0) + " -> " +
                    fmt(max_occ)};
}

// 3. Three gas qubits released into ten environment qubits under
//    energy-conserving random couplings reach the maximal gas entropy 3 ln 2
//    to within 5% on average over 50 realizations.
Outcome entangling_near_max_entropy() {
  const auto records = run_scenario(make_config("expansion_entangling", {}), 1);
  const double target = 3.0 * std::log(2.0);
  const double mean = find_kind(records, "mean").entropy_nats.value();
  const double rel = std::abs(mean - target) / target;
  return {rel <= 0.05, "mean entropy " + fmt(mean) + " vs 3 ln 2 = " + fmt(target) +
                           " (relative gap " + fmt(rel) + ", tolerance 0.05)"};
}

// 4. Typicality concentration: the mean distance to the canonical state
//    falls monotonically as the environment grows, and with a 1024-level
//    environment the mean qubit entropy sits within 0.02 nats of ln 2.
Outcome typicality_concentration() {
  const auto sweep = run_scenario(
      make_config("typicality", {{"env_dims", {8, 32, 128}}, {"n_samples", 500}}), 1);
  const bool decreasing =
      sweep.at(0).trace_distance.value() > sweep.at(1).trace_distance.value() &&
      sweep.at(1).trace_distance.value() > sweep.at(2).trace_distance.value();

  const auto big = run_scenario(
      make_config("typicality", {{"env_dims", {1024}}, {"n_samples", 200}}), 1);
  const double gap = std::abs(big.at(0).entropy_nats.value() - std::log(2.0));
  const bool pass = decreasing && gap <= 0.02;
  return {pass, "distances " + fmt(sweep.at(0).trace_distance.value()) + " > " +
                    fmt(sweep.at(1).trace_distance.value()) + " > " +
                    fmt(sweep.at(2).trace_distance.value()) + "; entropy gap to ln 2 " +
                    fmt(gap) + " (tolerance 0.02)"};
}

// 5. Thermal states match closed forms: two-level populations and entropy
//    analytically, the inverse-temperature solver round-trips on the box
//    chain, and infinite temperature gives the uniform state.
Outcome gibbs_closed_forms() {
  double worst = 0.0;

  const SpaceLayout two = SpaceLayout::single("g", 2);
  Eigen::MatrixXcd hm = Eigen::MatrixXcd::Zero(2, 2);
  const double delta = 1.7;
  hm(1, 1) = delta;
  const HermitianOperator h(hm, two);
  const double beta = 1.3;
  const DensityMatrix rho = gibbs_state(h, beta);
  const double z = 1.0 + std::exp(-beta * delta);
  worst = std::max(worst, std::abs(rho.matrix()(0, 0).real() - 1.0 / z));
  worst = std::max(worst, std::abs(rho.matrix()(1, 1).real() -
                                   std::exp(-beta * delta) / z));
  worst = std::max(worst, std::abs(rho.matrix()(0, 1)));
  const double mean_e = delta * std::exp(-beta * delta) / z;
  worst = std::max(worst, std::abs(expectation(h, rho) - mean_e));
  worst = std::max(worst, std::abs(vn_entropy(rho) - (std::log(z) + beta * mean_e)));

  const DensityMatrix uniform = gibbs_state(h, 0.0);
  worst = std::max(worst, std::abs(uniform.matrix()(0, 0).real() - 0.5));

  const HermitianOperator box = box_hamiltonian({8, 1.0, 0.0}, false);
  const double beta_in = 0.7;
  const double energy = expectation(box, gibbs_state(box, beta_in));
  const double beta_out = solve_beta(box, energy);
  const double beta_err = std::abs(beta_out - beta_in);

  const bool pass = worst <= 1e-10 && beta_err <= 1e-8;
  return {pass, "closed-form residual " + fmt(worst) + ", inverse-temperature " +
                    "round-trip error " + fmt(beta_err)};
}

// 6. Relaxation: two gas qubits against eight environment qubits plateau
//    within 10% of the maximal entropy 2 ln 2.
Outcome relaxation_plateau() {
  const auto records = run_scenario(make_config("relaxation_scan", {}), 1);
  const auto& summary = find_kind(records, "summary");
  const double plateau = summary.extra.at("plateau_nats").get<double>();
  const double tau = summary.extra.at("tau").get<double>();
  const double target = 2.0 * std::log(2.0);
  const double rel = std::abs(plateau - target) / target;
  return {rel <= 0.10, "plateau " + fmt(plateau) + " vs 2 ln 2 = " + fmt(target) +
                           " (relative gap " + fmt(rel) + ", tolerance 0.10), tau = " +
                           fmt(tau)};
}

// 7. Full-stack determinism: the same config through the command line with
//    different worker counts produces byte-identical results.csv files.
Outcome worker_determinism() {
  namespace fs = std::filesystem;
  const fs::path base = fs::temp_directory_path() / "qtherm_acceptance_det";
  fs::remove_all(base);
  fs::create_directories(base);

  const fs::path cfg = base / "config.json";
  {
    std::ofstream out(cfg);
    out << R"({"scenario": "expansion_entangling", "n_gas": 2, "n_env": 6,
               "n_realizations": 16})";
  }
  auto run_with = [&](const std::string& tag, const std::string& workers) {
    std::ostringstream out, err;
    const int code = cli_main({"run", "-c", cfg.string(), "-o", (base / tag).string(),
                               "--format", "csv", "--workers", workers},
                              out, err);
    if (code != 0) throw std::runtime_error("cli failed: " + err.str());
    std::ifstream in(base / tag / "results.csv", std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  const std::string w1 = run_with("w1", "1");
  const std::string w7 = run_with("w7", "7");
  const std::string again = run_with("w1_again", "1");
  fs::remove_all(base);

  const bool pass = !w1.empty() && w1 == w7 && w1 == again;
  return {pass, std::string("results.csv across workers {1,7} and rerun: ") +
                    (pass ? "byte-identical" : "MISMATCH") + " (" +
                    std::to_string(w1.size()) + " bytes)"};
}

// 8. The offset-table reduction agrees with an elementwise digit-decoding
//    oracle on every marginal of systems up to four qubits.
Outcome reduction_oracle_agreement() {
  std::mt19937_64 rng(20260822);
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    std::vector<Factor> factors;
    std::vector<Eigen::Index> dims;
    for (int q = 0; q < n; ++q) {
      factors.push_back({"q" + std::to_string(q), 2});
      dims.push_back(2);
    }
    const SpaceLayout layout(factors);
    const DensityMatrix rho(test_util::rand_density(layout.total_dim(), rng), layout);

    // Check every nonempty proper subset of kept factors, in layout order.
    for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
      std::vector<std::string> keep_labels;
      std::vector<bool> keep_flags(n);
      for (int q = 0; q < n; ++q) {
        if (mask & (1u << q)) {
          keep_labels.push_back(factors[q].label);
          keep_flags[q] = true;
        }
      }
      const DensityMatrix reduced = partial_trace(rho, keep_labels);
      const Eigen::MatrixXcd expected =
          test_util::oracle_partial_trace(rho.matrix(), dims, keep_flags);
      worst = std::max(worst, test_util::max_abs_diff(reduced.matrix(), expected));
    }

    // Pure-state reduction must agree with reducing the outer product.
    const PureState psi(test_util::rand_unit_vector(layout.total_dim(), rng), layout);
    if (n >= 2) {
      const DensityMatrix direct = reduce_pure(psi, {factors[0].label});
      const DensityMatrix via_dm = partial_trace(dm_from_pure(psi), {factors[0].label});
      worst = std::max(worst, test_util::max_abs_diff(direct.matrix(), via_dm.matrix()));
    }
  }
  return {worst <= 1e-12, "max deviation from digit-decoding oracle " + fmt(worst) +
                              " over all marginals up to 4 qubits (tolerance 1e-12)"};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  const std::vector<Entry> entries{
      {"bounce_dilation_fast", 1.0, bounce_dilation_fast},
      {"expansion_entropy_invariance", 10.0, expansion_entropy_invariance},
      {"entangling_near_max_entropy", 120.0, entangling_near_max_entropy},
      {"typicality_concentration", 120.0, typicality_concentration},
      {"gibbs_closed_forms", 5.0, gibbs_closed_forms},
      {"relaxation_plateau", 180.0, relaxation_plateau},
      {"worker_determinism", 60.0, worker_determinism},
      {"reduction_oracle_agreement", 30.0, reduction_oracle_agreement},
  };

  int failures = 0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& entry = entries[i];
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = entry.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = elapsed <= entry.budget_seconds;
    const bool pass = outcome.pass && in_budget;
    if (!pass) ++failures;

    std::printf("%s  %zu  %-30s  %7.2fs of %gs  %s%s\n", pass ? "PASS" : "FAIL", i + 1,
                entry.name, elapsed, entry.budget_seconds, outcome.detail.c_str(),
                in_budget ? "" : "  [over budget]");
    std::fflush(stdout);
  }

  std::printf("%zu criteria: %zu passed, %d failed\n", entries.size(),
              entries.size() - static_cast<std::size_t>(failures), failures);
  return failures;
}
