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

#ifndef BEATNOTE_INSTRUMENT_SIM_HPP_
#define BEATNOTE_INSTRUMENT_SIM_HPP_

#include <array>
#include <boost/random/binomial_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/poisson_distribution.hpp>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "beatnote/errors.hpp"
#include "beatnote/fringe_models.hpp"
#include "beatnote/rng.hpp"
#include "beatnote/trial.hpp"
#include "beatnote/units.hpp"

namespace beatnote {

/// Interferometer phase drift: a linear ramp plus a Gaussian random walk on
/// the beat-note phase.  The default walk gives a 10-s normalized noise near
/// 1.3 at ~6e4 detected pairs per second on the fringe midpoint.
struct DriftModel {
  double linear_rate = 1.0 * units::degree / units::minute;  // rad/s
  double walk_sigma = 1.8e-3;                                // rad/sqrt(s)

  static DriftModel none() { return {0.0, 0.0}; }
  bool enabled() const { return linear_rate != 0.0 || walk_sigma != 0.0; }
  void validate() const {
    if (!(linear_rate >= 0.0) || !(walk_sigma >= 0.0)) throw DomainError("drift rates must be >= 0");
  }
};

/// Stateful realisation of a DriftModel.
class DriftProcess {
 public:
  DriftProcess(DriftModel model, std::uint64_t seed, std::uint64_t stream = 0)
      : model_(model), rng_(seed, derive_stream(kStreamDrift, stream)) {
    model_.validate();
  }

  double phase() const { return phase_; }
  double time() const { return time_; }

  /// Moves the process forward by dt seconds and returns the new phase.
  double advance(double dt) {
    if (!(dt >= 0.0)) throw DomainError("drift step must be non-negative");
    phase_ += model_.linear_rate * dt;
    if (model_.walk_sigma > 0.0 && dt > 0.0) {
      boost::random::normal_distribution<double> n(0.0, model_.walk_sigma * std::sqrt(dt));
      phase_ += n(rng_);
    }
    time_ += dt;
    return phase_;
  }

 private:
  DriftModel model_;
  Philox4x32 rng_;
  double phase_ = 0.0;
  double time_ = 0.0;
};

/// Phase samples at t = 0, dt, ..., covering `duration`.
inline std::vector<double> simulate_drift_series(const DriftModel& drift, double duration, double dt,
                                                 std::uint64_t seed) {
  if (!(dt > 0.0)) throw DomainError("drift series needs dt > 0");
  DriftProcess p(drift, seed);
  const auto n = static_cast<std::size_t>(std::floor(duration / dt + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(n);
  out.push_back(p.phase());
  for (std::size_t i = 1; i < n; ++i) out.push_back(p.advance(dt));
  return out;
}

/// Variance of P_C over each `window` consecutive samples divided by the mean
/// binomial variance P(1-P)/N in that window.  One value per full window
/// position (rolling, stride 1).
inline std::vector<double> rolling_normalized_noise(std::span<const double> pc,
                                                    std::span<const double> n_total, int window) {
  if (pc.size() != n_total.size()) throw DomainError("trace lengths differ");
  if (window < 2) throw DomainError("noise window needs at least 2 samples");
  std::vector<double> out;
  for (std::size_t s = 0; s + window <= pc.size(); ++s) {
    double mean = 0.0;
    double shot = 0.0;
    for (int i = 0; i < window; ++i) {
      mean += pc[s + i];
      shot += pc[s + i] * (1.0 - pc[s + i]) / n_total[s + i];
    }
    mean /= window;
    shot /= window;
    double var = 0.0;
    for (int i = 0; i < window; ++i) var += (pc[s + i] - mean) * (pc[s + i] - mean);
    var /= window - 1;
    out.push_back(var / shot);
  }
  return out;
}

/// Detection chain.  Singles are per detector, ordered omega2-A, omega2-B,
/// omega1-A, omega1-B; accidentals in channel XY occur at S_X S_Y dT.
struct InstrumentConfig {
  double pair_rate = 59000.0;  // detected pairs per second
  double visibility = 0.889;   // epsilon
  std::array<double, 4> channel_efficiencies{1.0, 1.0, 1.0, 1.0};
  double coincidence_window = 100.0 * units::ps;
  std::array<double, 4> singles_rates{0.0, 0.0, 0.0, 0.0};
  /// Extra flat coincidences per second, split evenly (loss-independent noise).
  double flat_noise_rate = 0.0;
  DriftModel drift = DriftModel::none();
  /// Time slice over which the drift phase is held constant.
  double drift_step = 0.1;
  /// Per-channel visibility factors and phase offsets (rad).
  std::array<double, 4> channel_visibility{1.0, 1.0, 1.0, 1.0};
  std::array<double, 4> channel_phase{0.0, 0.0, 0.0, 0.0};

  void validate() const {
    if (!(pair_rate >= 0.0)) throw DomainError("pair rate must be >= 0");
    check_epsilon(visibility);
    for (double e : channel_efficiencies) {
      if (!(e > 0.0 && e <= 1.0)) throw DomainError("channel efficiency must lie in (0,1]");
    }
    if (!(coincidence_window > 0.0)) throw DomainError("coincidence window must be positive");
    for (double s : singles_rates) {
      if (!(s >= 0.0)) throw DomainError("singles rates must be >= 0");
    }
    if (!(flat_noise_rate >= 0.0)) throw DomainError("flat noise rate must be >= 0");
    if (!(drift_step > 0.0)) throw DomainError("drift step must be positive");
    drift.validate();
    for (double v : channel_visibility) {
      if (!(v >= 0.0) || v * visibility > 1.0) throw DomainError("channel visibility out of range");
    }
  }
};

/// Expected accidentals S^2 dT t for total singles rate S.
inline double accidentals_count(double total_singles_rate, double window, double integration_time) {
  if (total_singles_rate < 0.0 || window < 0.0 || integration_time < 0.0) {
    throw DomainError("accidentals inputs must be >= 0");
  }
  return total_singles_rate * total_singles_rate * window * integration_time;
}

/// Routing probabilities of a detected pair, after per-channel visibility,
/// phase and efficiency.
inline ChannelProbabilities routing_probabilities(const InstrumentConfig& cfg,
                                                  const PhotonPairSpec& pair, double tau,
                                                  double phase) {
  const double env = visibility_envelope(pair, tau);
  const double base = pair.detuning() * tau + phase;
  ChannelProbabilities p;
  double sum = 0.0;
  for (int ch = 0; ch < 4; ++ch) {
    const double sign = (ch == kAB || ch == kBA) ? -1.0 : 1.0;
    const double f =
        cfg.visibility * cfg.channel_visibility[ch] * std::cos(base + cfg.channel_phase[ch]) * env;
    p[ch] = 0.25 * (1.0 + sign * f) * cfg.channel_efficiencies[ch];
    sum += p[ch];
  }
  for (double& v : p) v /= sum;
  return p;
}

namespace detail {

inline std::uint64_t poisson(Philox4x32& rng, double mean) {
  if (!(mean > 0.0)) return 0;
  boost::random::poisson_distribution<std::uint64_t, double> d(mean);
  return d(rng);
}

inline std::uint64_t binomial(Philox4x32& rng, std::uint64_t n, double p) {
  if (n == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return n;
  boost::random::binomial_distribution<std::int64_t, double> d(static_cast<std::int64_t>(n), p);
  return static_cast<std::uint64_t>(d(rng));
}

/// Multinomial split of n over four probabilities summing to one.
inline std::array<std::uint64_t, 4> multinomial(Philox4x32& rng, std::uint64_t n,
                                                const ChannelProbabilities& p) {
  std::array<std::uint64_t, 4> k{};
  double rest = 1.0;
  for (int ch = 0; ch < 3; ++ch) {
    k[ch] = binomial(rng, n, rest > 0.0 ? std::min(1.0, p[ch] / rest) : 0.0);
    n -= k[ch];
    rest -= p[ch];
  }
  k[3] = n;
  return k;
}

}  // namespace detail

/// Draws one integration window with an explicit generator.  With `drift`
/// non-null the window is sliced into cfg.drift_step pieces and the drift
/// phase advances through them; `phase` is a fixed extra beat-note phase.
inline TrialRecord simulate_counts(const InstrumentConfig& cfg, const PhotonPairSpec& pair,
                                   double tau, double integration_time, Philox4x32& rng,
                                   DriftProcess* drift = nullptr, double phase = 0.0) {
  if (!(integration_time >= 0.0)) throw DomainError("integration time must be >= 0");
  TrialRecord rec;
  rec.tau = tau;
  rec.integration_time = integration_time;
  if (drift == nullptr) {
    const auto p = routing_probabilities(cfg, pair, tau, phase);
    rec.counts = detail::multinomial(rng, detail::poisson(rng, cfg.pair_rate * integration_time), p);
  } else {
    const int slices = std::max(1, static_cast<int>(std::ceil(integration_time / cfg.drift_step - 1e-9)));
    const double dt = integration_time / slices;
    for (int s = 0; s < slices; ++s) {
      const auto p = routing_probabilities(cfg, pair, tau, phase + drift->phase());
      const auto k = detail::multinomial(rng, detail::poisson(rng, cfg.pair_rate * dt), p);
      for (int ch = 0; ch < 4; ++ch) rec.counts[ch] += k[ch];
      drift->advance(dt);
    }
  }
  const auto& s = cfg.singles_rates;
  const std::array<double, 4> acc_rate = {s[0] * s[2], s[0] * s[3], s[1] * s[2], s[1] * s[3]};
  for (int ch = 0; ch < 4; ++ch) {
    const double mean = (acc_rate[ch] * cfg.coincidence_window + 0.25 * cfg.flat_noise_rate) *
                        integration_time;
    const std::uint64_t a = detail::poisson(rng, mean);
    rec.counts[ch] += a;
    rec.accidentals += a;
  }
  return rec;
}

/// One trial, fully determined by `seed`.  Drift, if configured, starts at
/// zero phase at the beginning of the window.
inline TrialRecord simulate_trial(const InstrumentConfig& cfg, const PhotonPairSpec& pair,
                                  double tau, double integration_time, std::uint64_t seed) {
  cfg.validate();
  Philox4x32 rng(seed, derive_stream(kStreamTrial, 0));
  TrialRecord rec;
  if (cfg.drift.enabled()) {
    DriftProcess drift(cfg.drift, seed);
    rec = simulate_counts(cfg, pair, tau, integration_time, rng, &drift);
  } else {
    rec = simulate_counts(cfg, pair, tau, integration_time, rng);
  }
  rec.seed = seed;
  return rec;
}

/// V = c0 eta / ((c0 - c_li) eta + c_li) v0 under arm loss eta with
/// loss-independent noise c_li.
inline double quantum_visibility_under_loss(double v0, double c0, double c_li, double eta) {
  if (!(c_li >= 0.0) || !(c0 > c_li)) throw DomainError("need c0 > c_li >= 0");
  if (!(eta > 0.0 && eta <= 1.0)) throw DomainError("transmission must lie in (0,1]");
  return c0 * eta / ((c0 - c_li) * eta + c_li) * v0;
}

/// Single-photon interferometer with arm transmission eta.
inline double classical_visibility_under_loss(double v0, double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmission must lie in [0,1]");
  return 2.0 * std::sqrt(eta) / (1.0 + eta) * v0;
}

/// Quantum visibility when a fraction B of all singles is background.
inline double quantum_visibility_under_background(double v0, double a0, double c0, double b) {
  if (!(c0 > 0.0)) throw DomainError("c0 must be positive");
  if (b == 1.0) throw SingularityError("background fraction of 1 leaves no signal");
  if (!(b >= 0.0 && b < 1.0)) throw DomainError("background fraction must lie in [0,1)");
  const double k = (3.0 * b - 2.0) * b / ((b - 1.0) * (b - 1.0));
  return v0 / (1.0 + k * (a0 / c0));
}

/// Classical visibility with background fraction B.
inline double classical_visibility_under_background(double v0, double b) {
  if (!(b >= 0.0 && b <= 1.0)) throw DomainError("background fraction must lie in [0,1]");
  return (1.0 - b) * v0;
}

/// Transmission of interferometer arm b at each wavelength, plus
/// loss-independent noise coincidences (per second) that the loss does not
/// touch.
struct LossSpec {
  double eta_w1 = 1.0;
  double eta_w2 = 1.0;
  double c_li = 0.0;

  void validate() const {
    if (!(eta_w1 >= 0.0 && eta_w1 <= 1.0) || !(eta_w2 >= 0.0 && eta_w2 <= 1.0)) {
      throw DomainError("arm transmissions must lie in [0,1]");
    }
    if (!(eta_w1 + eta_w2 > 0.0)) throw DomainError("arm b passes no light");
    if (!(c_li >= 0.0)) throw DomainError("loss-independent noise must be >= 0");
  }
};

/// Instrument behind arm-b loss.  Each term of the entangled state has one
/// photon in arm b, so the pair rate scales by the mean transmission and the
/// fringe keeps the visibility 2 sqrt(eta1 eta2)/(eta1 + eta2).  The
/// loss-independent noise joins the flat noise.
inline InstrumentConfig apply_loss(InstrumentConfig cfg, const LossSpec& loss) {
  loss.validate();
  const double mean = 0.5 * (loss.eta_w1 + loss.eta_w2);
  cfg.pair_rate *= mean;
  cfg.visibility *= std::sqrt(loss.eta_w1 * loss.eta_w2) / mean;
  cfg.flat_noise_rate += loss.c_li;
  return cfg;
}

/// Optical background as a fraction of all singles.
struct BackgroundSetting {
  double b_fraction = 0.0;

  void validate() const {
    if (b_fraction == 1.0) throw SingularityError("background fraction of 1 leaves no signal");
    if (!(b_fraction >= 0.0 && b_fraction < 1.0)) throw DomainError("background fraction must lie in [0,1)");
  }
};

/// Instrument with background added on top of the existing singles so that
/// it makes up `b_fraction` of each detector's clicks.
inline InstrumentConfig apply_background(InstrumentConfig cfg, const BackgroundSetting& bg) {
  bg.validate();
  for (double& s : cfg.singles_rates) s /= (1.0 - bg.b_fraction);
  return cfg;
}

/// Coincidence-to-accidental ratio (C - A)/A.  A = 0 is reported as an error
/// since the ratio is unbounded.
inline double car(double coincidences, double accidentals) {
  if (!(accidentals > 0.0)) throw SingularityError("infinite CAR: no accidentals");
  return (coincidences - accidentals) / accidentals;
}

}  // namespace beatnote

#endif  // BEATNOTE_INSTRUMENT_SIM_HPP_
