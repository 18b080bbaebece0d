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

#ifndef BEATNOTE_CONFIG_HPP_
#define BEATNOTE_CONFIG_HPP_

// Run configuration read from an INI file.  Every physical key carries its
// unit as a suffix and is converted to SI here; unknown sections and keys are
// rejected.

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "beatnote/errors.hpp"
#include "beatnote/fringe_models.hpp"
#include "beatnote/instrument_sim.hpp"
#include "beatnote/scenarios.hpp"
#include "beatnote/units.hpp"

namespace beatnote {

struct PairSettings {
  double lambda_a = 810.504 * units::nm;
  double lambda_b = 1547.484 * units::nm;
  /// Bandwidth FWHM, quoted at lambda_a.
  double bandwidth = 0.495 * units::nm;

  PhotonPairSpec spec() const { return PhotonPairSpec::from_wavelengths(lambda_a, lambda_b, bandwidth, lambda_a); }
};

struct FringeSettings {
  std::string mode = "beat";
  ScanGrid grid{-2.0e-6, 2.0e-6, 10.0e-9};
  double epsilon = 1.0;
  double pbs_er_t = 1e4;
  double pbs_er_r = 100.0;
  bool pbs_double_filter = false;
};

struct ReferenceSettings {
  ScanGrid grid{-2.0e-6, 2.0e-6, 0.1e-6};
  double integration_time = 1.0;
};

struct MeasureSettings {
  std::string mode = "displacement";
  CampaignSettings campaign{};
  PairedSettings paired{};
};

struct ScanSampleSettings {
  std::string mode = "film";
  FilmSample film{};
  FilmScanSettings scan{};
  double n_substrate = 1.0;
};

struct OracleSettings {
  int specs = 50;
  int tau_points = 201;
  /// Finite-difference delay step of the numerical QFI; 0 picks the default.
  double qfi_step = 0.0;
};

struct StateSettings {
  std::string input;
  std::optional<double> werner_p;
  int restarts = 32;
};

struct RunConfig {
  PairSettings pair;
  InstrumentConfig instrument;
  FringeSettings fringe;
  ReferenceSettings reference;
  MeasureSettings measure;
  LossSweepSettings loss;
  BackgroundSweepSettings background;
  ScanSampleSettings scan_sample;
  OracleSettings oracle;
  StateSettings state;
  std::uint64_t seed = 1;
};

namespace detail {

/// Typed access to one INI section that records which keys were read.
class SectionReader {
 public:
  SectionReader(const boost::property_tree::ptree* tree, std::string name) : tree_(tree), name_(std::move(name)) {}

  void number(const std::string& key, double& out, double scale = 1.0) {
    if (auto v = raw(key)) out = parse_number(key, *v) * scale;
  }
  void integer(const std::string& key, int& out) {
    if (auto v = raw(key)) {
      const double d = parse_number(key, *v);
      if (d != std::floor(d) || d < 0 || d > 1e9) fail(key, "expected a non-negative integer");
      out = static_cast<int>(d);
    }
  }
  void u64(const std::string& key, std::uint64_t& out) {
    if (auto v = raw(key)) {
      std::size_t pos = 0;
      try {
        out = std::stoull(*v, &pos, 0);
      } catch (const std::exception&) {
        pos = 0;
      }
      if (pos == 0 || pos != v->size() || (*v)[0] == '-') fail(key, "expected an unsigned integer");
    }
  }
  void flag(const std::string& key, bool& out) {
    if (auto v = raw(key)) {
      if (*v == "true" || *v == "on" || *v == "1") out = true;
      else if (*v == "false" || *v == "off" || *v == "0") out = false;
      else fail(key, "expected true/false");
    }
  }
  void text(const std::string& key, std::string& out, const std::set<std::string>& allowed = {}) {
    if (auto v = raw(key)) {
      if (!allowed.empty() && !allowed.count(*v)) fail(key, "unsupported value '" + *v + "'");
      out = *v;
    }
  }
  void list(const std::string& key, std::vector<double>& out, double scale = 1.0) {
    if (auto v = raw(key)) {
      out.clear();
      std::stringstream ss(*v);
      std::string item;
      while (std::getline(ss, item, ',')) out.push_back(parse_number(key, trim(item)) * scale);
      if (out.empty()) fail(key, "empty list");
    }
  }
  template <std::size_t N>
  void array(const std::string& key, std::array<double, N>& out, double scale = 1.0) {
    std::vector<double> v;
    list(key, v, scale);
    if (v.empty()) return;
    if (v.size() != N) fail(key, "expected " + std::to_string(N) + " values");
    std::copy(v.begin(), v.end(), out.begin());
  }
  /// Grid from <prefix>_start/_stop/_step with a unit suffix.
  void grid(const std::string& prefix, const std::string& unit, ScanGrid& g, double scale) {
    number(prefix + "start_" + unit, g.start, scale);
    number(prefix + "stop_" + unit, g.stop, scale);
    number(prefix + "step_" + unit, g.step, scale);
  }

  void check_all_used() const {
    if (tree_ == nullptr) return;
    for (const auto& [k, v] : *tree_) {
      if (!used_.count(k)) throw ParseError("[" + name_ + "] unknown key '" + k + "'");
    }
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  }
  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ParseError("[" + name_ + "] " + key + ": " + what);
  }
  double parse_number(const std::string& key, const std::string& s) const {
    std::size_t pos = 0;
    double d = 0.0;
    try {
      d = std::stod(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size() || !std::isfinite(d)) fail(key, "expected a number, got '" + s + "'");
    return d;
  }
  std::optional<std::string> raw(const std::string& key) {
    used_.insert(key);
    if (tree_ == nullptr) return std::nullopt;
    const auto it = tree_->find(key);
    if (it == tree_->not_found()) return std::nullopt;
    return trim(it->second.data());
  }

  const boost::property_tree::ptree* tree_;
  std::string name_;
  std::set<std::string> used_;
};

}  // namespace detail

/// Checks that the configuration builds valid module-level types.
inline void validate(const RunConfig& c) {
  try {
    c.pair.spec();
    c.instrument.validate();
    c.reference.grid.points();
    c.fringe.grid.points();
    if (c.measure.campaign.trials < 2) throw DomainError("measure trials must be >= 2");
    if (c.scan_sample.scan.trials < 2) throw DomainError("scan trials must be >= 2");
    if (c.oracle.specs < 1 || c.oracle.tau_points < 2) throw DomainError("oracle needs specs >= 1 and tau_points >= 2");
    if (!(c.oracle.qfi_step >= 0.0)) throw DomainError("qfi step must be >= 0");
    check_epsilon(c.fringe.epsilon);
    PbsSpec{c.fringe.pbs_er_t, c.fringe.pbs_er_r, c.fringe.pbs_double_filter}.validate();
    for (double e : c.loss.eta) {
      if (!(e > 0.0 && e <= 1.0)) throw DomainError("loss must be >= 0 dB");
    }
    for (double b : c.background.b_fraction) {
      if (!(b >= 0.0 && b < 1.0)) throw DomainError("background fraction must lie in [0,1)");
    }
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

/// Parses an INI run configuration.  Missing keys keep their defaults.
/// Throws ParseError on syntax errors, unknown keys or invalid values.
inline RunConfig parse_run_config(std::istream& is) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(is, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
  static const std::set<std::string> kSections = {"run", "pair", "instrument", "fringe", "reference", "measure",
                                                  "sweep", "scan", "oracle", "state"};
  for (const auto& [name, sub] : tree) {
    if (!kSections.count(name)) throw ParseError("unknown section [" + name + "]");
    if (sub.empty() && !sub.data().empty()) throw ParseError("key '" + name + "' outside a section");
  }
  auto section = [&](const std::string& name) {
    const auto it = tree.find(name);
    return detail::SectionReader(it == tree.not_found() ? nullptr : &it->second, name);
  };
  using namespace units;
  RunConfig c;
  std::vector<detail::SectionReader> readers;

  auto run = section("run");
  run.u64("seed", c.seed);
  readers.push_back(run);

  auto pair = section("pair");
  pair.number("lambda_a_nm", c.pair.lambda_a, nm);
  pair.number("lambda_b_nm", c.pair.lambda_b, nm);
  pair.number("bandwidth_fwhm_nm", c.pair.bandwidth, nm);
  readers.push_back(pair);

  auto ins = section("instrument");
  InstrumentConfig& i = c.instrument;
  ins.number("pair_rate_hz", i.pair_rate);
  ins.number("visibility", i.visibility);
  ins.array("channel_efficiencies", i.channel_efficiencies);
  ins.number("coincidence_window_ps", i.coincidence_window, ps);
  ins.array("singles_hz", i.singles_rates);
  ins.number("flat_noise_hz", i.flat_noise_rate);
  bool drift = false;
  DriftModel dm;
  ins.flag("drift", drift);
  ins.number("drift_rate_deg_per_min", dm.linear_rate, degree / minute);
  ins.number("drift_walk_rad_per_sqrt_s", dm.walk_sigma);
  ins.number("drift_step_s", i.drift_step);
  ins.array("channel_visibility", i.channel_visibility);
  ins.array("channel_phase_rad", i.channel_phase);
  i.drift = drift ? dm : DriftModel::none();
  readers.push_back(ins);

  auto fr = section("fringe");
  fr.text("mode", c.fringe.mode, {"beat", "beat-beta", "sum", "classical-beat", "classical-beat-printed", "pbs"});
  fr.grid("", "nm", c.fringe.grid, nm);
  fr.number("epsilon", c.fringe.epsilon);
  fr.number("pbs_er_t", c.fringe.pbs_er_t);
  fr.number("pbs_er_r", c.fringe.pbs_er_r);
  fr.flag("pbs_double_filter", c.fringe.pbs_double_filter);
  readers.push_back(fr);

  auto ref = section("reference");
  ref.grid("", "nm", c.reference.grid, nm);
  ref.number("t_int_s", c.reference.integration_time);
  readers.push_back(ref);

  auto me = section("measure");
  me.text("mode", c.measure.mode, {"displacement", "paired"});
  me.list("displacements_nm", c.measure.campaign.displacements, nm);
  me.integer("trials", c.measure.campaign.trials);
  c.measure.paired.trials = c.measure.campaign.trials;
  me.number("t_int_s", c.measure.campaign.integration_time);
  me.list("integration_times_s", c.measure.paired.integration_times);
  me.number("rate_first_hz", c.measure.paired.rate_first);
  me.number("rate_second_hz", c.measure.paired.rate_second);
  me.number("paired_displacement_nm", c.measure.paired.displacement, nm);
  me.number("move_time_s", c.measure.paired.move_time);
  readers.push_back(me);

  auto sw = section("sweep");
  std::vector<double> loss_db;
  sw.list("loss_db", loss_db);
  if (!loss_db.empty()) {
    c.loss.eta.clear();
    for (double db : loss_db) c.loss.eta.push_back(transmission_from_db(db));
  }
  sw.number("c_li_hz", c.loss.c_li_rate);
  sw.number("t_int_s", c.loss.integration_time);
  c.background.integration_time = c.loss.integration_time;
  sw.number("max_t_int_s", c.loss.max_integration_time);
  sw.list("background_fraction", c.background.b_fraction);
  sw.grid("", "nm", c.loss.grid, nm);
  c.background.grid = c.loss.grid;
  readers.push_back(sw);

  auto sc = section("scan");
  FilmSample& f = c.scan_sample.film;
  sc.text("mode", c.scan_sample.mode, {"film", "calibration"});
  sc.number("thickness_nm", f.thickness, nm);
  sc.number("n_quantum", f.n_quantum);
  sc.number("n_classical", f.n_classical);
  sc.number("n_substrate", c.scan_sample.n_substrate);
  sc.number("wedge_nm_per_mm", f.wedge, nm / mm);
  sc.number("curvature_nm_per_mm2", f.curvature, nm / (mm * mm));
  sc.number("edge_mm", f.edge, mm);
  sc.number("probe_diameter_mm", f.probe_diameter, mm);
  sc.number("rate_uncoated_hz", f.rate_uncoated);
  sc.number("rate_coated_hz", f.rate_coated);
  sc.number("visibility_uncoated", f.eps_uncoated);
  sc.number("visibility_coated", f.eps_coated);
  sc.number("classical_visibility_uncoated", f.classical_v_uncoated);
  sc.number("classical_visibility_coated", f.classical_v_coated);
  sc.grid("y_", "mm", c.scan_sample.scan.y, mm);
  sc.integer("trials", c.scan_sample.scan.trials);
  sc.number("t_int_s", c.scan_sample.scan.integration_time);
  sc.flag("classical", c.scan_sample.scan.classical);
  readers.push_back(sc);

  auto orc = section("oracle");
  orc.integer("specs", c.oracle.specs);
  orc.integer("tau_points", c.oracle.tau_points);
  orc.number("qfi_step_as", c.oracle.qfi_step, as);
  readers.push_back(orc);

  auto st = section("state");
  st.text("input", c.state.input);
  double wp = NAN;
  st.number("werner_p", wp);
  if (!std::isnan(wp)) c.state.werner_p = wp;
  st.integer("restarts", c.state.restarts);
  readers.push_back(st);

  for (const auto& r : readers) r.check_all_used();
  validate(c);
  return c;
}

}  // namespace beatnote

#endif  // BEATNOTE_CONFIG_HPP_
