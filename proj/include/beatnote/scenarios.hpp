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

#ifndef BEATNOTE_SCENARIOS_HPP_
#define BEATNOTE_SCENARIOS_HPP_

// End-to-end simulated experiments built from the library pieces: reference
// scans, displacement campaigns, robustness sweeps and thin-film scans.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "beatnote/estimation.hpp"
#include "beatnote/fisher.hpp"
#include "beatnote/fringe_models.hpp"
#include "beatnote/instrument_sim.hpp"
#include "beatnote/parallel.hpp"
#include "beatnote/reference_fringes.hpp"
#include "beatnote/rng.hpp"
#include "beatnote/sample_scan.hpp"

namespace beatnote {

/// Uniform grid [start, stop] with spacing `step` (inclusive of both ends
/// when the span is a whole number of steps).
struct ScanGrid {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> points() const {
    if (!(step > 0.0) || stop < start) throw DomainError("scan grid needs step > 0 and stop >= start");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = start + step * static_cast<double>(i);
    return v;
  }
};

/// Mean and sample standard deviation.
struct Moments {
  double mean = 0.0;
  double sd = 0.0;
  std::size_t n = 0;
};

inline Moments moments(const std::vector<double>& v) {
  Moments m;
  m.n = v.size();
  if (v.empty()) return m;
  m.mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.sd = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

// --- reference scan and setpoint -------------------------------------------

struct ReferenceScan {
  std::vector<double> x;
  std::vector<TrialRecord> records;
  ReferenceFringeSet refs;
};

/// Steps the delay across `grid` (path length, m), records one window per
/// point and fits the four channel fringes.  The scan is taken without drift.
inline ReferenceScan run_reference_scan(InstrumentConfig cfg, const PhotonPairSpec& pair,
                                        const ScanGrid& grid, double integration_time,
                                        std::uint64_t seed) {
  cfg.drift = DriftModel::none();
  cfg.validate();
  ReferenceScan out;
  out.x = grid.points();
  std::vector<std::array<std::uint64_t, 4>> counts;
  for (std::size_t i = 0; i < out.x.size(); ++i) {
    const auto s = derive_seed(seed, kStreamReference, i);
    out.records.push_back(simulate_trial(cfg, pair, delay_from_path(out.x[i]), integration_time, s));
    counts.push_back(out.records.back().counts);
  }
  out.refs = fit_reference_fringes(out.x, counts, {grid.start, grid.stop, grid.step, integration_time});
  return out;
}

/// Instrument callback measuring P_C at path delay x with fresh noise on each
/// call (one window of `integration_time`).
struct SimulatedInstrument {
  InstrumentConfig cfg;
  PhotonPairSpec pair;
  double integration_time;
  std::uint64_t seed;
  std::uint64_t calls = 0;

  double operator()(double x) {
    InstrumentConfig c = cfg;
    c.drift = DriftModel::none();
    const TrialRecord r =
        simulate_trial(c, pair, delay_from_path(x), integration_time, derive_seed(seed, kStreamSetpoint, calls++));
    return r.coincidence_fraction();
  }
};

/// Rising mid-fringe setpoint near x_start found on the simulated instrument.
inline SetpointResult find_setpoint(const InstrumentConfig& cfg, const PhotonPairSpec& pair,
                                    double x_start, double integration_time, std::uint64_t seed,
                                    double tolerance = 0.01) {
  SimulatedInstrument inst{cfg, pair, integration_time, seed};
  SetpointOptions opt;
  opt.x_start = x_start;
  opt.period = pair.beat_period();
  opt.tolerance = tolerance;
  opt.slope = 1;
  return phase_setpoint_search(std::ref(inst), opt);
}

// --- displacement campaign ---------------------------------------------------

struct CampaignTrial {
  double set_displacement = 0.0;
  TrialRecord record;
  bool ok = false;
  double x_star = 0.0;
  double measured = 0.0;  // x_star minus the mean zero-displacement x_star
  double sigma_theory = 0.0;
};

struct DisplacementSummary {
  double set_displacement = 0.0;
  std::size_t n_ok = 0;
  std::size_t n_failed = 0;
  double mean_measured = 0.0;
  double mean_error = 0.0;
  double empirical_sigma = 0.0;
  double theoretical_sigma = 0.0;
};

struct CampaignSettings {
  std::vector<double> displacements{0.0};
  int trials = 100;
  double integration_time = 1.0;
  int threads = 1;
};

struct CampaignReport {
  double setpoint = 0.0;
  Interval search{};
  std::vector<CampaignTrial> trials;
  std::vector<DisplacementSummary> summary;
};

/// Repeated MLE displacement measurements from a fixed setpoint.  Zero
/// displacement is always measured and anchors the reported displacements.
inline CampaignReport run_displacement_campaign(const InstrumentConfig& cfg, const PhotonPairSpec& pair,
                                                const ReferenceFringeSet& refs, double setpoint,
                                                const CampaignSettings& set, std::uint64_t seed) {
  cfg.validate();
  std::vector<double> disp = set.displacements;
  if (std::find(disp.begin(), disp.end(), 0.0) == disp.end()) disp.insert(disp.begin(), 0.0);
  CampaignReport rep;
  rep.setpoint = setpoint;
  rep.search = half_fringe_interval(refs, setpoint);
  const std::size_t nt = static_cast<std::size_t>(set.trials);
  rep.trials.resize(disp.size() * nt);
  parallel_for(rep.trials.size(), set.threads, [&](std::size_t i) {
    CampaignTrial& t = rep.trials[i];
    t.set_displacement = disp[i / nt];
    const double x = setpoint + t.set_displacement;
    t.record = simulate_trial(cfg, pair, delay_from_path(x), set.integration_time,
                              derive_seed(seed, kStreamTrial, i));
    try {
      const auto est = extract_displacement_mle(refs, t.record, rep.search);
      t.ok = true;
      t.x_star = est.x_star;
      t.sigma_theory = est.sigma_theory;
    } catch (const OutOfRangeError&) {
      t.ok = false;
    }
  });
  std::vector<double> zero;
  for (const auto& t : rep.trials) {
    if (t.ok && t.set_displacement == 0.0) zero.push_back(t.x_star);
  }
  const double x0 = moments(zero).mean;
  for (std::size_t k = 0; k < disp.size(); ++k) {
    std::vector<double> m;
    std::vector<double> th;
    DisplacementSummary s;
    s.set_displacement = disp[k];
    for (std::size_t j = 0; j < nt; ++j) {
      CampaignTrial& t = rep.trials[k * nt + j];
      if (!t.ok) {
        ++s.n_failed;
        continue;
      }
      t.measured = t.x_star - x0;
      m.push_back(t.measured);
      th.push_back(t.sigma_theory);
    }
    const Moments mm = moments(m);
    s.n_ok = mm.n;
    s.mean_measured = mm.mean;
    s.mean_error = mm.mean - disp[k];
    s.empirical_sigma = mm.sd;
    s.theoretical_sigma = moments(th).mean;
    rep.summary.push_back(s);
  }
  return rep;
}

// --- paired measurements vs integration time ---------------------------------

struct PairedSettings {
  std::vector<double> integration_times{0.1, 1.0, 10.0};
  int trials = 100;
  double rate_first = 128000.0;
  double rate_second = 68000.0;
  double displacement = 0.0;
  double move_time = 1.0;
  int threads = 1;
};

struct PairedSummary {
  double integration_time = 0.0;
  std::size_t n_ok = 0;
  double mean_measured = 0.0;
  double empirical_sigma = 0.0;
  /// Shot-noise prediction sqrt(s1^2 + s2^2) from the reference fringes.
  double predicted_sigma = 0.0;
};

/// Two measurements per trial, the second displaced by `displacement`, with
/// the drift process (if any) running through both and the move between.
/// Drift restarts at zero phase each trial, as after a recentering.
inline std::vector<PairedSummary> run_paired_campaign(const InstrumentConfig& cfg,
                                                      const PhotonPairSpec& pair,
                                                      const ReferenceFringeSet& refs,
                                                      double setpoint, const PairedSettings& set,
                                                      std::uint64_t seed) {
  cfg.validate();
  const Interval search = half_fringe_interval(refs, setpoint);
  std::vector<PairedSummary> out;
  for (std::size_t k = 0; k < set.integration_times.size(); ++k) {
    const double t_int = set.integration_times[k];
    std::vector<double> diff(static_cast<std::size_t>(set.trials), NAN);
    parallel_for(diff.size(), set.threads, [&](std::size_t j) {
      const std::uint64_t s = derive_seed(seed, kStreamTrial, k * 1000003ull + j);
      Philox4x32 rng(s);
      DriftProcess drift(cfg.drift, s);
      InstrumentConfig c1 = cfg;
      c1.pair_rate = set.rate_first;
      InstrumentConfig c2 = cfg;
      c2.pair_rate = set.rate_second;
      DriftProcess* dp = cfg.drift.enabled() ? &drift : nullptr;
      const auto r1 = simulate_counts(c1, pair, delay_from_path(setpoint), t_int, rng, dp);
      if (dp) dp->advance(set.move_time);
      const auto r2 = simulate_counts(c2, pair, delay_from_path(setpoint + set.displacement), t_int, rng, dp);
      try {
        diff[j] = extract_displacement_mle(refs, r2, search).x_star -
                  extract_displacement_mle(refs, r1, search).x_star;
      } catch (const OutOfRangeError&) {
      }
    });
    std::vector<double> ok;
    for (double d : diff) {
      if (std::isfinite(d)) ok.push_back(d);
    }
    const Moments m = moments(ok);
    const double s1 = theoretical_resolution(refs, set.rate_first * t_int, setpoint);
    const double s2 = theoretical_resolution(refs, set.rate_second * t_int, setpoint + set.displacement);
    out.push_back({t_int, m.n, m.mean, m.sd, std::hypot(s1, s2)});
  }
  return out;
}

// --- robustness sweeps --------------------------------------------------------

/// Visibility of the coincidence fraction across a delay scan, from a
/// sinusoid fit with binomial weights.
inline Visibility scan_visibility(const InstrumentConfig& cfg, const PhotonPairSpec& pair,
                                  const ScanGrid& grid, double integration_time, std::uint64_t seed) {
  std::vector<FringeSample> s;
  const auto xs = grid.points();
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const auto r = simulate_trial(cfg, pair, delay_from_path(xs[i]), integration_time,
                                  derive_seed(seed, kStreamSweep, i));
    const double n = static_cast<double>(r.total());
    if (n <= 0.0) throw InsufficientDataError("sweep point with zero counts");
    const double p = r.coincidence_fraction();
    s.push_back({xs[i], p, n / std::max(p * (1.0 - p), 1.0 / n)});
  }
  SinusoidFitOptions opt;
  opt.fixed_period = pair.beat_period();
  return visibility_from_fit(fit_sinusoid(s, opt));
}

struct SweepPoint {
  double parameter = 0.0;  // eta or B
  double quantum_model = 0.0;
  double classical_model = 0.0;
  double quantum_mc = 0.0;
  double quantum_mc_sigma = 0.0;
  double integration_time = 0.0;
};

struct LossSweepSettings {
  std::vector<double> eta{1.0, 0.1, 0.01};
  /// Loss-independent coincidences per second.
  double c_li_rate = 0.0;
  ScanGrid grid{0.0, 3.4e-6, 0.1e-6};
  double integration_time = 1.0;
  /// Integration time grows as integration_time/eta up to this cap.
  double max_integration_time = 100.0;
};

/// Balanced arm loss: the detected pair rate scales with eta while the
/// loss-independent noise does not.
inline std::vector<SweepPoint> run_loss_sweep(InstrumentConfig cfg, const PhotonPairSpec& pair,
                                              const LossSweepSettings& set, std::uint64_t seed) {
  cfg.drift = DriftModel::none();
  cfg.singles_rates = {0.0, 0.0, 0.0, 0.0};
  cfg.flat_noise_rate = 0.0;
  const double signal = cfg.pair_rate;
  const double c0 = signal + set.c_li_rate;
  const double v0 = cfg.visibility * signal / c0;
  std::vector<SweepPoint> out;
  for (std::size_t i = 0; i < set.eta.size(); ++i) {
    const double eta = set.eta[i];
    const InstrumentConfig c = apply_loss(cfg, {eta, eta, set.c_li_rate});
    SweepPoint p;
    p.parameter = eta;
    p.quantum_model = quantum_visibility_under_loss(v0, c0, set.c_li_rate, eta);
    p.classical_model = classical_visibility_under_loss(cfg.visibility, eta);
    p.integration_time = std::min(set.max_integration_time, set.integration_time / eta);
    const Visibility v = scan_visibility(c, pair, set.grid, p.integration_time, derive_seed(seed, kStreamSweep, i));
    p.quantum_mc = v.value;
    p.quantum_mc_sigma = v.sigma;
    out.push_back(p);
  }
  return out;
}

struct BackgroundSweepSettings {
  std::vector<double> b_fraction{0.0, 0.5, 0.9, 0.99};
  ScanGrid grid{0.0, 3.4e-6, 0.1e-6};
  double integration_time = 1.0;
};

/// Optical background: singles grow as 1/(1 - B), so accidentals grow as
/// 1/(1 - B)^2.  The model columns use the closed forms with A0/C0 taken
/// from the baseline configuration.
inline std::vector<SweepPoint> run_background_sweep(InstrumentConfig cfg, const PhotonPairSpec& pair,
                                                    const BackgroundSweepSettings& set,
                                                    std::uint64_t seed) {
  cfg.drift = DriftModel::none();
  const auto& s = cfg.singles_rates;
  const double a0 = (s[0] + s[1]) * (s[2] + s[3]) * cfg.coincidence_window;
  const double c0 = cfg.pair_rate;
  const double v0 = cfg.visibility * c0 / (c0 + a0 + cfg.flat_noise_rate);
  std::vector<SweepPoint> out;
  for (std::size_t i = 0; i < set.b_fraction.size(); ++i) {
    const double b = set.b_fraction[i];
    const InstrumentConfig c = apply_background(cfg, {b});
    SweepPoint p;
    p.parameter = b;
    p.quantum_model = quantum_visibility_under_background(v0, a0, c0, b);
    p.classical_model = classical_visibility_under_background(v0, b);
    p.integration_time = set.integration_time;
    const Visibility v = scan_visibility(c, pair, set.grid, set.integration_time, derive_seed(seed, kStreamSweep, i));
    p.quantum_mc = v.value;
    p.quantum_mc_sigma = v.sigma;
    out.push_back(p);
  }
  return out;
}

// --- thin-film scan -------------------------------------------------------------

/// Synthetic film sample and the probe response across its edge.
struct FilmSample {
  double thickness = 7.0 * units::nm;
  double n_quantum = 3.3;
  double n_classical = 3.07;
  double wedge = 0.5 * units::nm / units::mm;
  double curvature = -0.05 * units::nm / (units::mm * units::mm);
  double edge = 4.0 * units::mm;
  double probe_diameter = 1.21 * units::mm;  // 1/e^2
  double rate_uncoated = 128000.0;
  double rate_coated = 68000.0;
  double eps_uncoated = 0.889;
  double eps_coated = 0.882;
  double classical_v_uncoated = 0.96;
  double classical_v_coated = 0.166;

  double probe_sigma() const { return probe_sigma_from_diameter(probe_diameter); }
  ScanModelParams profile(double n_film) const {
    return {thickness * (n_film - 1.0), wedge, curvature, edge, probe_sigma(), 0.0};
  }
};

struct FilmScanSettings {
  ScanGrid y{0.0, 8.0 * units::mm, 0.1 * units::mm};
  int trials = 100;
  double integration_time = 1.0;
  bool classical = true;
  /// Quantum references corrected point by point for the visibility change
  /// across the edge (calibration films).
  bool correct_visibility = false;
  int threads = 1;
};

struct ProbeScanResult {
  std::vector<double> y;
  std::vector<double> mean_displacement;
  std::vector<double> sigma_mean;
  std::size_t failures = 0;
  std::optional<ScanFit> fit;
  double n_film = 0.0;
  std::optional<Thickness> thickness;
  /// True when the free fit failed and the probe width was held at its
  /// known value.
  bool probe_width_fixed = false;
  std::string error;
};

struct FilmScanReport {
  ProbeScanResult quantum;
  std::optional<ProbeScanResult> classical;
};

namespace detail {

inline void finish_probe_scan(ProbeScanResult& r, const std::vector<std::vector<double>>& per_y,
                              double n_film, double probe_sigma) {
  std::vector<FringeSample> data;
  for (std::size_t i = 0; i < per_y.size(); ++i) {
    std::vector<double> ok;
    for (double v : per_y[i]) {
      if (std::isfinite(v)) ok.push_back(v);
      else ++r.failures;
    }
    const Moments m = moments(ok);
    const double sem = m.n > 1 ? m.sd / std::sqrt(static_cast<double>(m.n)) : NAN;
    r.mean_displacement.push_back(m.mean);
    r.sigma_mean.push_back(sem);
    if (m.n > 1 && sem > 0.0) data.push_back({r.y[i], m.mean, 1.0 / (sem * sem)});
  }
  r.n_film = n_film;
  try {
    try {
      r.fit = fit_scan(data);
    } catch (const Error&) {
      ScanFitOptions opt;
      opt.fixed[kProbeSigma] = true;
      opt.values.sigma_probe = probe_sigma;
      r.fit = fit_scan(data, opt);
      r.probe_width_fixed = true;
    }
    r.thickness = thickness_from_effective(r.fit->params.a, {n_film, 0.0}, r.fit->sigma(kStep));
  } catch (const Error& e) {
    r.error = e.what();
  }
}

}  // namespace detail

/// Scans the probe across a film edge.  Each trial is one pass over all
/// positions with drift restarting at zero; at each position the MLE
/// displacement relative to the setpoint is recorded, and the trial means are
/// fitted with the scan model.
inline FilmScanReport run_film_scan(const InstrumentConfig& cfg, const PhotonPairSpec& pair,
                                    const FilmSample& film, const FilmScanSettings& set,
                                    std::uint64_t seed) {
  cfg.validate();
  FilmScanReport rep;
  const auto ys = set.y.points();
  const double sg = film.probe_sigma();

  // Quantum probe: references on the bare substrate, rising mid-fringe setpoint.
  InstrumentConfig qcfg = cfg;
  qcfg.pair_rate = film.rate_uncoated;
  qcfg.visibility = film.eps_uncoated;
  const auto ref = run_reference_scan(qcfg, pair, {-2.0e-6, 2.0e-6, 0.1e-6}, set.integration_time,
                                      derive_seed(seed, kStreamReference, 0));
  const double xs = find_setpoint(qcfg, pair, -0.5 * pair.beat_period(), set.integration_time,
                                  derive_seed(seed, kStreamSetpoint, 0))
                        .x;
  const Interval search = half_fringe_interval(ref.refs, xs);
  const ScanModelParams qprof = film.profile(film.n_quantum);

  const std::size_t nt = static_cast<std::size_t>(set.trials);
  std::vector<std::vector<double>> per_y(ys.size(), std::vector<double>(nt, NAN));
  parallel_for(nt, set.threads, [&](std::size_t j) {
    const std::uint64_t s = derive_seed(seed, kStreamScan, j);
    Philox4x32 rng(s);
    DriftProcess drift(cfg.drift, s);
    DriftProcess* dp = cfg.drift.enabled() ? &drift : nullptr;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      InstrumentConfig c = qcfg;
      c.pair_rate = edge_transition(ys[i], film.edge, sg, film.rate_uncoated, film.rate_coated);
      c.visibility = edge_transition(ys[i], film.edge, sg, film.eps_uncoated, film.eps_coated);
      const double x = xs + scan_model(qprof, ys[i]);
      const auto r = simulate_counts(c, pair, delay_from_path(x), set.integration_time, rng, dp);
      const ReferenceFringeSet& refs = ref.refs;
      try {
        if (set.correct_visibility) {
          const auto corr = visibility_corrected_references(refs, c.visibility / film.eps_uncoated);
          per_y[i][j] = extract_displacement_mle(corr, r, search).x_star - xs;
        } else {
          per_y[i][j] = extract_displacement_mle(refs, r, search).x_star - xs;
        }
      } catch (const OutOfRangeError&) {
      }
    }
  });
  rep.quantum.y = ys;
  detail::finish_probe_scan(rep.quantum, per_y, film.n_quantum, sg);

  if (!set.classical) return rep;

  // Classical probe: one wavelength in a Mach-Zehnder, outputs A and B,
  // references fitted on the bare substrate and never corrected.
  const double omega = pair.omega2();
  const double period = fringe_period(omega);
  auto prob_a = [&](double v, double x, double phase) {
    return 0.5 * (1.0 - v * std::cos(omega * x / kSpeedOfLight + phase - kPi / 2.0));
  };
  std::vector<FringeSample> sa;
  std::vector<FringeSample> sb;
  const auto xr = ScanGrid{-2.0e-6, 2.0e-6, 0.1e-6}.points();
  for (std::size_t i = 0; i < xr.size(); ++i) {
    Philox4x32 rng(derive_seed(seed, kStreamReference, 1000 + i));
    const auto n = detail::poisson(rng, film.rate_uncoated * set.integration_time);
    const double p = prob_a(film.classical_v_uncoated, xr[i], 0.0);
    const auto na = detail::binomial(rng, n, p);
    const double fa = static_cast<double>(na) / static_cast<double>(n);
    const double w = static_cast<double>(n) / std::max(fa * (1.0 - fa), 1.0 / static_cast<double>(n));
    sa.push_back({xr[i], fa, w});
    sb.push_back({xr[i], 1.0 - fa, w});
  }
  const std::array<SinusoidFit, 2> cref = {fit_sinusoid(sa), fit_sinusoid(sb)};
  // Rising mid-fringe of output A on the fitted model, nearest x = 0.
  SetpointOptions so;
  so.x_start = -0.5 * period;
  so.period = period;
  so.tolerance = 1e-9;
  so.slope = 1;
  so.scan_points = 16;
  const double xc = phase_setpoint_search([&](double x) { return cref[0](x); }, so).x;
  const Interval csearch = half_fringe_interval(cref[0], xc);
  const ScanModelParams cprof = film.profile(film.n_classical);
  const double drift_scale = omega / pair.detuning();

  std::vector<std::vector<double>> cper_y(ys.size(), std::vector<double>(nt, NAN));
  parallel_for(nt, set.threads, [&](std::size_t j) {
    const std::uint64_t s = derive_seed(seed, kStreamScan, 1000000ull + j);
    Philox4x32 rng(s);
    DriftProcess drift(cfg.drift, s);
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double rate = edge_transition(ys[i], film.edge, sg, film.rate_uncoated, film.rate_coated);
      const double v = edge_transition(ys[i], film.edge, sg, film.classical_v_uncoated, film.classical_v_coated);
      const double x = xc + scan_model(cprof, ys[i]);
      const double phase = drift_scale * drift.phase();
      const auto n = detail::poisson(rng, rate * set.integration_time);
      const auto na = detail::binomial(rng, n, prob_a(v, x, phase));
      if (cfg.drift.enabled()) drift.advance(set.integration_time);
      const std::array<double, 2> counts = {static_cast<double>(na), static_cast<double>(n - na)};
      try {
        cper_y[i][j] = extract_displacement_mle(cref, counts, csearch).x_star - xc;
      } catch (const OutOfRangeError&) {
      }
    }
  });
  ProbeScanResult cl;
  cl.y = ys;
  detail::finish_probe_scan(cl, cper_y, film.n_classical, sg);
  rep.classical = std::move(cl);
  return rep;
}

struct CalibrationReport {
  ProbeScanResult scan;
  std::vector<FringeSample> phase_data;
  std::optional<FilmIndex> index;
  std::string error;
};

/// Film of known thickness scanned with visibility-corrected references; the
/// displacement profile is converted to beat phase with wavenumber `k` and
/// the film index is fitted.
inline CalibrationReport run_calibration_scan(const InstrumentConfig& cfg, const PhotonPairSpec& pair,
                                              const FilmSample& film, FilmScanSettings set,
                                              std::uint64_t seed, double n_substrate = 1.0,
                                              double k = beat_wavenumber()) {
  set.classical = false;
  set.correct_visibility = true;
  CalibrationReport rep;
  rep.scan = run_film_scan(cfg, pair, film, set, seed).quantum;
  for (std::size_t i = 0; i < rep.scan.y.size(); ++i) {
    const double sem = rep.scan.sigma_mean[i];
    if (std::isfinite(sem) && sem > 0.0) {
      rep.phase_data.push_back({rep.scan.y[i], k * rep.scan.mean_displacement[i], 1.0 / std::pow(k * sem, 2)});
    }
  }
  try {
    rep.index = calibrated_index_fit(rep.phase_data, film.thickness, n_substrate, k);
  } catch (const Error& e) {
    rep.error = e.what();
  }
  return rep;
}

}  // namespace beatnote

#endif  // BEATNOTE_SCENARIOS_HPP_
