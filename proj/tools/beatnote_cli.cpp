// Copyright 2026 The Beatnote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// beatnote: command-line front end for fringe models, simulated measurement
// campaigns, robustness sweeps, film scans, oracle checks and state metrics.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "CLI11.hpp"
#include "beatnote.hpp"

namespace {

using beatnote::Table;
using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitCheck = 4;

struct Output {
  std::string stem;
  std::variant<Table, json> body;
};

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
  std::optional<int> threads;
};

/// Failure that maps to the configuration exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

beatnote::RunConfig load_config(const Globals& g) {
  beatnote::RunConfig c;
  if (g.config.empty()) {
    std::istringstream empty;
    c = beatnote::parse_run_config(empty);
  } else {
    std::ifstream in(g.config);
    if (!in) throw UsageError("cannot open config '" + g.config + "'");
    c = beatnote::parse_run_config(in);
  }
  if (g.seed) c.seed = *g.seed;
  const int threads = g.threads ? *g.threads : beatnote::default_thread_count();
  if (threads < 1) throw UsageError("--threads must be >= 1");
  c.measure.campaign.threads = threads;
  c.measure.paired.threads = threads;
  c.scan_sample.scan.threads = threads;
  return c;
}

void emit(const std::vector<Output>& outs, const Globals& g) {
  const bool as_json = g.format == "json";
  if (!g.out.empty()) std::filesystem::create_directories(g.out);
  for (const Output& o : outs) {
    const bool is_table = std::holds_alternative<Table>(o.body);
    const bool json_file = !is_table || as_json;
    std::string text;
    if (is_table && !as_json) {
      std::ostringstream os;
      beatnote::write_csv(os, std::get<Table>(o.body));
      text = os.str();
    } else {
      text = (is_table ? beatnote::to_json(std::get<Table>(o.body)) : std::get<json>(o.body)).dump(2) + "\n";
    }
    if (g.out.empty()) {
      std::cout << text;
    } else {
      const auto path = std::filesystem::path(g.out) / (o.stem + (json_file ? ".json" : ".csv"));
      std::ofstream f(path, std::ios::binary);
      f << text;
      if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    }
  }
}

// --- fringe ------------------------------------------------------------------

/// Two-outcome Fisher information p'^2 / (p (1 - p)) by central differences;
/// at p = 0 or 1 the neighbouring delay is used.
double numeric_cfi(const std::function<double(double)>& p, double tau, double h) {
  for (double t : {tau, tau + h, tau - h}) {
    const double v = p(t);
    const double den = v * (1.0 - v);
    if (den > 1e-12) {
      const double d = (p(t + 0.5 * h) - p(t - 0.5 * h)) / h;
      return d * d / den;
    }
  }
  return 0.0;
}

std::vector<Output> cmd_fringe(const beatnote::RunConfig& c) {
  using namespace beatnote;
  const auto pair = c.pair.spec();
  const std::string& mode = c.fringe.mode;
  const double eps = c.fringe.epsilon;
  check_epsilon(eps);
  PbsSpec pbs{c.fringe.pbs_er_t, c.fringe.pbs_er_r, c.fringe.pbs_double_filter};
  pbs.validate();
  const bool classical = mode == "classical-beat" || mode == "classical-beat-printed";
  const auto form = mode == "classical-beat-printed" ? ClassicalBeatForm::kPrinted : ClassicalBeatForm::kDerived;

  std::function<double(double)> pc;
  double period = pair.beat_period();
  double fastest = pair.detuning();
  if (mode == "beat") {
    pc = [&](double t) { return mixed_coincidence_probability(pair, eps, t); };
  } else if (mode == "beat-beta") {
    pc = [&](double t) { return coincidence_probability(pair, t, true); };
  } else if (mode == "sum") {
    pc = [&](double t) { return sum_frequency_coincidence(pair, t); };
    period = pair.sum_period();
    fastest = pair.omega_sum();
  } else if (mode == "pbs") {
    pc = [&](double t) { return pbs_leakage_fringe(pair, pbs, t); };
    fastest = pair.omega_sum();
  } else {
    pc = [&](double t) { return classical_beat_coincidence(pair, t, form); };
    fastest = 2.0 * pair.omega1();
  }
  const double h = 1e-3 / fastest;

  Table t{"fringe-" + mode, 1, {"x_m", "tau_s", "p_aa", "p_ab", "p_ba", "p_bb", "p_c", "cfi_per_s2", "period_m"}, {}};
  for (double x : c.fringe.grid.points()) {
    const double tau = delay_from_path(x);
    std::array<double, 4> ch{};
    double cfi = 0.0;
    if (mode == "beat") {
      ch = channel_probabilities(pair, eps, tau);
      if (eps == 1.0) {
        cfi = classical_fisher_information(pair, tau);
      } else if (eps > 0.0) {
        try {
          cfi = std::pow(mixed_state_sigma_tau(pair, eps, tau), -2);
        } catch (const SingularityError&) {
          cfi = 0.0;
        }
      }
    } else if (classical) {
      const auto p = classical_dual_frequency_probs(pair, tau);
      ch = {p.p_aa, p.p_ab, p.p_ba, p.p_bb};
      cfi = numeric_cfi(pc, tau, h);
    } else {
      const double p = pc(tau);
      ch = {0.5 * (1.0 - p), 0.5 * p, 0.5 * p, 0.5 * (1.0 - p)};
      cfi = numeric_cfi(pc, tau, h);
    }
    const double p = mode == "beat" ? ch[kAB] + ch[kBA] : pc(tau);
    t.add_row({x, tau, ch[0], ch[1], ch[2], ch[3], p, cfi, period});
  }
  return {{"fringe", t}};
}

// --- measure -----------------------------------------------------------------

std::vector<Output> cmd_measure(const beatnote::RunConfig& c) {
  using namespace beatnote;
  const auto pair = c.pair.spec();
  const auto ref = run_reference_scan(c.instrument, pair, c.reference.grid, c.reference.integration_time,
                                      derive_seed(c.seed, kStreamReference, 0));
  const auto sp = find_setpoint(c.instrument, pair, -0.5 * pair.beat_period(), c.reference.integration_time,
                                derive_seed(c.seed, kStreamSetpoint, 0));
  json refs_json = to_json(ref.refs);
  if (c.measure.mode == "paired") {
    const auto rows = run_paired_campaign(c.instrument, pair, ref.refs, sp.x, c.measure.paired, c.seed);
    Table t{"paired", 1, {"t_int_s", "n_ok", "mean_measured_m", "empirical_sigma_m", "predicted_sigma_m"}, {}};
    for (const auto& r : rows) {
      t.add_row({r.integration_time, static_cast<double>(r.n_ok), r.mean_measured, r.empirical_sigma,
                 r.predicted_sigma});
    }
    json summary = {{"schema", "beatnote paired-summary v1"},
                    {"seed", c.seed},
                    {"setpoint_m", sp.x},
                    {"drift", c.instrument.drift.enabled()},
                    {"references", refs_json}};
    return {{"paired", t}, {"summary", summary}};
  }
  const auto rep = run_displacement_campaign(c.instrument, pair, ref.refs, sp.x, c.measure.campaign, c.seed);
  Table trials{"measure-trials", 1,
               {"set_displacement_m", "n_aa", "n_ab", "n_ba", "n_bb", "ok", "x_star_m", "measured_m", "sigma_theory_m"},
               {}};
  for (const auto& t : rep.trials) {
    const auto& n = t.record.counts;
    trials.add_row({t.set_displacement, double(n[0]), double(n[1]), double(n[2]), double(n[3]), t.ok ? 1.0 : 0.0,
                    t.ok ? t.x_star : 0.0, t.ok ? t.measured : 0.0, t.ok ? t.sigma_theory : 0.0});
  }
  json rows = json::array();
  for (const auto& s : rep.summary) {
    rows.push_back({{"set_displacement_m", s.set_displacement},
                    {"n_ok", s.n_ok},
                    {"n_failed", s.n_failed},
                    {"mean_measured_m", s.mean_measured},
                    {"mean_error_m", s.mean_error},
                    {"empirical_sigma_m", s.empirical_sigma},
                    {"theoretical_sigma_m", s.theoretical_sigma}});
  }
  json summary = {{"schema", "beatnote measure-summary v1"},
                  {"seed", c.seed},
                  {"setpoint_m", sp.x},
                  {"setpoint_p_c", sp.p_c},
                  {"search_m", {rep.search.lo, rep.search.hi}},
                  {"displacements", rows},
                  {"references", refs_json}};
  return {{"trials", trials}, {"summary", summary}};
}

// --- sweep -------------------------------------------------------------------

std::vector<Output> cmd_sweep(const beatnote::RunConfig& c, const std::string& kind) {
  using namespace beatnote;
  const auto pair = c.pair.spec();
  const bool loss = kind == "loss";
  const auto pts = loss ? run_loss_sweep(c.instrument, pair, c.loss, c.seed)
                        : run_background_sweep(c.instrument, pair, c.background, c.seed);
  Table t{"sweep-" + kind, 1,
          {loss ? "eta" : "b_fraction", "quantum_model", "classical_model", "quantum_mc", "quantum_mc_sigma", "t_int_s"},
          {}};
  for (const auto& p : pts) {
    t.add_row({p.parameter, p.quantum_model, p.classical_model, p.quantum_mc, p.quantum_mc_sigma, p.integration_time});
  }
  return {{"sweep-" + kind, t}};
}

// --- scan-sample ---------------------------------------------------------------

json probe_json(const beatnote::ProbeScanResult& r) {
  using beatnote::ScanParam;
  json j = {{"n_film", r.n_film}, {"failures", r.failures}, {"probe_width_fixed", r.probe_width_fixed}};
  if (r.fit) {
    const auto& p = r.fit->params;
    j["fit"] = {{"step_m", p.a},
                {"step_sigma_m", r.fit->sigma(beatnote::kStep)},
                {"wedge", p.b},
                {"curvature_per_m", p.c_quad},
                {"edge_m", p.y0},
                {"edge_sigma_m", r.fit->sigma(beatnote::kEdge)},
                {"probe_sigma_m", p.sigma_probe},
                {"offset_m", p.d},
                {"residual_rms_m", r.fit->residual_rms}};
  }
  if (r.thickness) j["thickness_m"] = {{"value", r.thickness->value}, {"uncertainty", r.thickness->uncertainty}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

std::vector<Output> cmd_scan_sample(const beatnote::RunConfig& c, int& status) {
  using namespace beatnote;
  const auto pair = c.pair.spec();
  const auto& s = c.scan_sample;
  if (s.mode == "calibration") {
    const auto rep = run_calibration_scan(c.instrument, pair, s.film, s.scan, c.seed, s.n_substrate);
    Table t{"scan-calibration", 1, {"y_m", "mean_displacement_m", "sigma_mean_m"}, {}};
    for (std::size_t i = 0; i < rep.scan.y.size(); ++i) {
      t.add_row({rep.scan.y[i], rep.scan.mean_displacement[i], rep.scan.sigma_mean[i]});
    }
    json j = {{"schema", "beatnote calibration-fit v1"},
              {"seed", c.seed},
              {"thickness_m", s.film.thickness},
              {"n_substrate", s.n_substrate},
              {"wavenumber_per_m", beat_wavenumber()}};
    if (rep.index) {
      j["n_film"] = {{"value", rep.index->n_film}, {"uncertainty", rep.index->uncertainty}};
    } else {
      j["error"] = rep.error;
      status = kExitNumeric;
    }
    return {{"scan", t}, {"fit", j}};
  }
  const auto rep = run_film_scan(c.instrument, pair, s.film, s.scan, c.seed);
  std::vector<std::string> cols = {"y_m", "quantum_mean_m", "quantum_sigma_mean_m"};
  if (rep.classical) {
    cols.push_back("classical_mean_m");
    cols.push_back("classical_sigma_mean_m");
  }
  Table t{"scan-film", 1, cols, {}};
  for (std::size_t i = 0; i < rep.quantum.y.size(); ++i) {
    std::vector<double> row = {rep.quantum.y[i], rep.quantum.mean_displacement[i], rep.quantum.sigma_mean[i]};
    if (rep.classical) {
      row.push_back(rep.classical->mean_displacement[i]);
      row.push_back(rep.classical->sigma_mean[i]);
    }
    t.add_row(row);
  }
  json j = {{"schema", "beatnote film-fit v1"},
            {"seed", c.seed},
            {"true_thickness_m", s.film.thickness},
            {"quantum", probe_json(rep.quantum)}};
  if (rep.classical) j["classical"] = probe_json(*rep.classical);
  if (!rep.quantum.thickness) status = kExitNumeric;
  return {{"scan", t}, {"fit", j}};
}

// --- oracle-check ----------------------------------------------------------------

std::vector<Output> cmd_oracle_check(const beatnote::RunConfig& c, int& status) {
  const auto checks = beatnote::oracle_checks(c.pair.spec(), c.oracle.specs, c.oracle.tau_points, c.seed,
                                             c.oracle.qfi_step);
  json rows = json::array();
  for (const auto& k : checks) {
    rows.push_back({{"check", k.name}, {"value", k.value}, {"tolerance", k.tolerance}, {"pass", k.pass}});
    std::cerr << (k.pass ? "PASS " : "FAIL ") << k.name << " value=" << beatnote::format_double(k.value)
              << " tolerance=" << beatnote::format_double(k.tolerance) << '\n';
    if (!k.pass) status = kExitCheck;
  }
  return {{"oracle-check", json{{"schema", "beatnote oracle-check v1"}, {"checks", rows}}}};
}

// --- state-metrics ---------------------------------------------------------------

std::vector<Output> cmd_state_metrics(const beatnote::RunConfig& c) {
  using namespace beatnote;
  std::optional<DensityMatrix> rho;
  std::string source;
  if (c.state.werner_p) {
    rho = werner_state(*c.state.werner_p);
    source = "werner";
  } else if (!c.state.input.empty()) {
    std::ifstream in(c.state.input);
    if (!in) throw UsageError("cannot open density matrix '" + c.state.input + "'");
    rho = parse_density_matrix(in);
    source = c.state.input;
  } else {
    throw UsageError("state-metrics needs --input FILE or --werner P");
  }
  const double pur = purity(*rho);
  Table t{"state-metrics", 1, {"purity", "concurrence", "max_bell_fidelity", "singlet_fraction", "epsilon"}, {}};
  const double eps = pur >= 0.5 ? epsilon_from_purity(std::min(pur, 1.0)) : 0.0;
  t.add_row({pur, concurrence(*rho), max_bell_fidelity(*rho),
             singlet_fraction(*rho, c.state.restarts, derive_seed(c.seed, kStreamOptimizer, 0)), eps});
  return {{"state-metrics", t}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy-entangled two-photon interferometry simulator"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "INI run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", g.seed, "Master seed (overrides [run] seed)");
  app.add_option("--out", g.out, "Output directory (default: standard output)");
  app.add_option("--format", g.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads (default: $BEATNOTE_THREADS or all cores)");

  auto* fringe = app.add_subcommand("fringe", "Coincidence fringe and Fisher information over a delay scan");
  std::string fringe_mode;
  fringe->add_option("--mode", fringe_mode, "Fringe model")
      ->check(CLI::IsMember({"beat", "beat-beta", "sum", "classical-beat", "classical-beat-printed", "pbs"}));
  auto* measure = app.add_subcommand("measure", "Reference scan, setpoint and repeated displacement trials");
  std::string measure_mode;
  measure->add_option("--mode", measure_mode, "Campaign")->check(CLI::IsMember({"displacement", "paired"}));
  auto* sweep = app.add_subcommand("sweep", "Visibility against loss or background");
  std::string sweep_kind;
  sweep->add_option("kind", sweep_kind, "loss or background")->required()->check(CLI::IsMember({"loss", "background"}));
  auto* scan = app.add_subcommand("scan-sample", "Probe scan across a thin-film edge");
  std::string scan_mode;
  scan->add_option("--mode", scan_mode, "Scan")->check(CLI::IsMember({"film", "calibration"}));
  auto* oracle = app.add_subcommand("oracle-check", "Closed forms against spectral quadrature");
  auto* state = app.add_subcommand("state-metrics", "Purity, concurrence and singlet fraction");
  std::string state_input;
  std::optional<double> werner;
  state->add_option("--input", state_input, "Density matrix text file");
  state->add_option("--werner", werner, "Werner-state weight p");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  int status = kExitOk;
  try {
    auto c = load_config(g);
    if (!fringe_mode.empty()) c.fringe.mode = fringe_mode;
    if (!measure_mode.empty()) c.measure.mode = measure_mode;
    if (!scan_mode.empty()) c.scan_sample.mode = scan_mode;
    if (!state_input.empty()) c.state.input = state_input;
    if (werner) c.state.werner_p = werner;

    std::vector<Output> outs;
    if (*fringe) outs = cmd_fringe(c);
    else if (*measure) outs = cmd_measure(c);
    else if (*sweep) outs = cmd_sweep(c, sweep_kind);
    else if (*scan) outs = cmd_scan_sample(c, status);
    else if (*oracle) outs = cmd_oracle_check(c, status);
    else if (*state) outs = cmd_state_metrics(c);
    emit(outs, g);
  } catch (const UsageError& e) {
    std::cerr << "beatnote: " << e.what() << '\n';
    return kExitConfig;
  } catch (const beatnote::ParseError& e) {
    std::cerr << "beatnote: " << e.what() << '\n';
    return kExitConfig;
  } catch (const beatnote::MatrixError& e) {
    std::cerr << "beatnote: invalid density matrix: " << e.what() << '\n';
    return kExitConfig;
  } catch (const beatnote::Error& e) {
    std::cerr << "beatnote: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "beatnote: " << e.what() << '\n';
    return kExitNumeric;
  }
  return status;
}
