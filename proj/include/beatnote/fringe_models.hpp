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

#ifndef BEATNOTE_FRINGE_MODELS_HPP_
#define BEATNOTE_FRINGE_MODELS_HPP_

#include <array>
#include <cmath>
#include <string>

#include "beatnote/errors.hpp"
#include "beatnote/units.hpp"

namespace beatnote {

/// Frequency-entangled photon pair: two centre frequencies and the Gaussian
/// half-bandwidth sigma entering the envelope exp(-2 sigma^2 tau^2).
/// omega1 is always the higher frequency (the shorter wavelength).
class PhotonPairSpec {
 public:
  PhotonPairSpec(double omega1, double omega2, double sigma)
      : omega1_(omega1), omega2_(omega2), sigma_(sigma) {
    if (!(omega2 > 0.0) || !(omega1 >= omega2) || !(sigma > 0.0) || !std::isfinite(omega1) ||
        !std::isfinite(sigma)) {
      throw DomainError("PhotonPairSpec requires omega1 >= omega2 > 0 and sigma > 0");
    }
  }

  /// Builds a pair from two vacuum wavelengths (any order) and a wavelength
  /// FWHM measured at `fwhm_reference`.
  static PhotonPairSpec from_wavelengths(double lambda_a, double lambda_b, double dlambda_fwhm,
                                         double fwhm_reference) {
    const double wa = angular_frequency(lambda_a);
    const double wb = angular_frequency(lambda_b);
    return {std::max(wa, wb), std::min(wa, wb),
            sigma_from_wavelength_fwhm(fwhm_reference, dlambda_fwhm)};
  }

  /// Pair with a given detuning placed above a reference frequency omega2.
  static PhotonPairSpec from_detuning(double omega2, double detuning, double sigma) {
    return {omega2 + detuning, omega2, sigma};
  }

  double omega1() const { return omega1_; }
  double omega2() const { return omega2_; }
  double sigma() const { return sigma_; }
  double detuning() const { return omega1_ - omega2_; }
  double omega_sum() const { return omega1_ + omega2_; }

  /// Overlap of the exchanged spectral amplitudes, exp(-detuning^2 / 8 sigma^2).
  double beta() const {
    const double r = detuning() / sigma_;
    return std::exp(-r * r / 8.0);
  }

  /// Path-length period of the beat-note fringe.
  double beat_period() const { return fringe_period(detuning()); }
  /// Path-length period of the sum-frequency fringe.
  double sum_period() const { return fringe_period(omega_sum()); }

 private:
  double omega1_;
  double omega2_;
  double sigma_;
};

/// Power transmission/reflection of a non-polarizing beamsplitter, per
/// wavelength.  Index 1 refers to omega1, index 2 to omega2.
struct BeamsplitterSpec {
  double t_w1 = 0.5;
  double r_w1 = 0.5;
  double t_w2 = 0.5;
  double r_w2 = 0.5;

  void validate() const {
    for (double v : {t_w1, r_w1, t_w2, r_w2}) {
      if (!(v >= 0.0 && v <= 1.0)) throw DomainError("beamsplitter coefficient outside [0,1]");
    }
    if (t_w1 + r_w1 > 1.0 + 1e-12 || t_w2 + r_w2 > 1.0 + 1e-12) {
      throw DomainError("beamsplitter t + r exceeds 1");
    }
  }
};

/// Polarizing beamsplitter with finite extinction ratios in each port.
struct PbsSpec {
  double er_t = INFINITY;
  double er_r = INFINITY;
  bool double_filter = false;

  void validate() const {
    if (!(er_t >= 1.0) || !(er_r >= 1.0)) throw DomainError("extinction ratios must be >= 1");
  }
};

/// Coincidence probability of the pure entangled state.  With `include_beta`
/// the exchange overlap beta is kept and the result is normalized by 1 + beta,
/// which reproduces the exact spectral integral.
inline double coincidence_probability(const PhotonPairSpec& pair, double tau,
                                      bool include_beta = false) {
  const double s = pair.sigma();
  const double env = std::exp(-2.0 * s * s * tau * tau);
  const double c = std::cos(pair.detuning() * tau);
  if (!include_beta) return 0.5 * (1.0 - c * env);
  const double b = pair.beta();
  return 0.5 * (1.0 - (c + b) * env / (1.0 + b));
}

/// Interference envelope exp(-2 sigma^2 tau^2).
inline double visibility_envelope(const PhotonPairSpec& pair, double tau) {
  const double s = pair.sigma();
  return std::exp(-2.0 * s * s * tau * tau);
}

/// Path-length FWHM of the interference envelope.
inline double envelope_fwhm_path(double sigma) {
  return kSpeedOfLight * std::sqrt(2.0 * std::numbers::ln2) / sigma;
}

inline void check_epsilon(double epsilon) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in [0,1]");
}

/// Coincidence probability of the entangled state mixed with white noise;
/// epsilon is the surviving coherence.
inline double mixed_coincidence_probability(const PhotonPairSpec& pair, double epsilon,
                                            double tau) {
  check_epsilon(epsilon);
  return 0.5 * (1.0 - epsilon * std::cos(pair.detuning() * tau) * visibility_envelope(pair, tau));
}

/// Probabilities of the four detector pairings, ordered AA, AB, BA, BB.  The
/// first letter is the port of the omega2 photon, the second that of omega1.
/// AB and BA are coincidences, AA and BB anti-coincidences.
using ChannelProbabilities = std::array<double, 4>;

enum Channel : int { kAA = 0, kAB = 1, kBA = 2, kBB = 3 };

inline constexpr std::array<const char*, 4> kChannelNames = {"AA", "AB", "BA", "BB"};

/// Even four-way split of the mixed-state fringe, 1/4 (1 -/+ eps cos(phase) env).
/// `extra_phase` shifts the beat-note phase (drift, setpoint offsets).
inline ChannelProbabilities channel_probabilities(const PhotonPairSpec& pair, double epsilon,
                                                  double tau, double extra_phase = 0.0) {
  check_epsilon(epsilon);
  const double f =
      epsilon * std::cos(pair.detuning() * tau + extra_phase) * visibility_envelope(pair, tau);
  const double coinc = 0.25 * (1.0 - f);
  const double anti = 0.25 * (1.0 + f);
  return {anti, coinc, coinc, anti};
}

/// Coincidence fringe behind a beamsplitter with unequal splitting ratios.
inline double imbalanced_bs_coincidence(const PhotonPairSpec& pair, const BeamsplitterSpec& bs,
                                        double tau) {
  bs.validate();
  const double n1 = bs.t_w1 + bs.r_w1;
  const double n2 = bs.t_w2 + bs.r_w2;
  if (n1 <= 0.0 || n2 <= 0.0) {
    throw DegenerateInputError("beamsplitter passes no light at one wavelength");
  }
  const double cross = 2.0 * std::sqrt(bs.t_w1 * bs.t_w2 * bs.r_w1 * bs.r_w2);
  const double num = bs.t_w1 * bs.t_w2 + bs.r_w1 * bs.r_w2 -
                     cross * std::cos(pair.detuning() * tau) * visibility_envelope(pair, tau);
  return num / (n1 * n2);
}

/// Fringe visibility behind an imbalanced beamsplitter.
inline double imbalanced_bs_visibility(const BeamsplitterSpec& bs) {
  bs.validate();
  const double mean = bs.t_w1 * bs.t_w2 + bs.r_w1 * bs.r_w2;
  if (mean <= 0.0) return 0.0;
  return 2.0 * std::sqrt(bs.t_w1 * bs.t_w2 * bs.r_w1 * bs.r_w2) / mean;
}

/// Power coefficients of a PBS with extinction ratios er_t (transmitted port,
/// T_p/T_s) and er_r (reflected port, R_s/R_p), closed by T + R = 1 per
/// polarization.  Both ratios equal to one is the non-polarizing limit.
struct PbsCoefficients {
  double t_p;
  double t_s;
  double r_p;
  double r_s;
};

inline PbsCoefficients pbs_coefficients(double er_t, double er_r) {
  if (!(er_t >= 1.0) || !(er_r >= 1.0)) throw DomainError("extinction ratios must be >= 1");
  // Written in u = 1/er_t, v = 1/er_r so that infinite ratios are exact.
  const double u = 1.0 / er_t;
  const double v = 1.0 / er_r;
  const double den = 1.0 - u * v;
  double r_p = 0.5;
  double t_s = 0.5;
  if (den > 0.0) {
    r_p = v * (1.0 - u) / den;
    t_s = u * (1.0 - v) / den;
  }
  return {1.0 - r_p, t_s, r_p, 1.0 - t_s};
}

/// Weights of the interference processes through the PBS interferometer.  The
/// two beat-note processes pair amplitudes that differ by exchanging the
/// photons, as do the two sum-frequency processes; weights of a pair are
/// (w, w').  Probabilities are normalized by `total`.
struct PbsProcessWeights {
  std::array<std::array<double, 2>, 2> beat;
  std::array<std::array<double, 2>, 2> sum;
  double total;
};

inline PbsProcessWeights pbs_process_weights(const PbsSpec& pbs) {
  pbs.validate();
  const PbsCoefficients k = pbs_coefficients(pbs.er_t, pbs.er_r);
  // The second filter sits in the reflected arm and repeats its extinction.
  const double rp = pbs.double_filter ? k.r_p * k.r_p : k.r_p;
  const double rs = pbs.double_filter ? k.r_s * k.r_s : k.r_s;
  PbsProcessWeights w{};
  w.beat[0] = {0.5 * k.t_p * rs, 0.5 * rs * k.t_p};
  w.beat[1] = {0.5 * rp * k.t_s, 0.5 * k.t_s * rp};
  w.sum[0] = {0.5 * k.t_p * k.t_s, 0.5 * rs * rp};
  w.sum[1] = {0.5 * rp * rs, 0.5 * k.t_s * k.t_p};
  w.total = (k.t_p + rp) * (k.t_s + rs);
  return w;
}

/// Coincidence fringe through a PBS interferometer with finite extinction:
/// the incoherent sum of two beat-note fringes and two sum-frequency fringes
/// from leaked polarization components.
inline double pbs_leakage_fringe(const PhotonPairSpec& pair, const PbsSpec& pbs, double tau) {
  const PbsProcessWeights w = pbs_process_weights(pbs);
  const double beat = std::cos(pair.detuning() * tau) * visibility_envelope(pair, tau);
  const double sum = std::cos(pair.omega_sum() * tau);
  double p = 0.0;
  for (const auto& [a, b] : w.beat) p += 0.5 * (a + b) - std::sqrt(a * b) * beat;
  for (const auto& [a, b] : w.sum) p += 0.5 * (a + b) + std::sqrt(a * b) * sum;
  return p / w.total;
}

/// Beat-note visibility of the PBS leakage fringe.
inline double pbs_leakage_visibility(const PbsSpec& pbs) {
  const PbsProcessWeights w = pbs_process_weights(pbs);
  double amp = 0.0;
  for (const auto& [a, b] : w.beat) amp += std::sqrt(a * b);
  return 2.0 * amp / w.total;
}

/// Outcome probabilities for two classical frequencies sharing one
/// Mach-Zehnder interferometer.
struct DualFrequencyProbs {
  double p_aa;
  double p_bb;
  double p_ab;
  double p_ba;
};

inline DualFrequencyProbs classical_dual_frequency_probs(const PhotonPairSpec& pair, double tau) {
  const double h1 = 0.5 * pair.omega1() * tau;
  const double h2 = 0.5 * pair.omega2() * tau;
  const double s1 = std::sin(h1) * std::sin(h1);
  const double s2 = std::sin(h2) * std::sin(h2);
  const double c1 = std::cos(h1) * std::cos(h1);
  const double c2 = std::cos(h2) * std::cos(h2);
  return {s1 * s2, c1 * c2, s1 * c2, c1 * s2};
}

/// Which closed form the classical beat coincidence uses.  kPrinted keeps the
/// doubled phases cos(2 phi1) cos(2 phi2) found in some write-ups; it does
/// not follow from the four outcome probabilities and is kept for comparison.
enum class ClassicalBeatForm { kDerived, kPrinted };

inline double classical_beat_coincidence(const PhotonPairSpec& pair, double tau,
                                         ClassicalBeatForm form = ClassicalBeatForm::kDerived) {
  if (form == ClassicalBeatForm::kPrinted) {
    return 0.5 * (1.0 - std::cos(2.0 * pair.omega1() * tau) * std::cos(2.0 * pair.omega2() * tau));
  }
  const DualFrequencyProbs p = classical_dual_frequency_probs(pair, tau);
  return (p.p_ab + p.p_ba) / (p.p_aa + p.p_bb + p.p_ab + p.p_ba);
}

/// Coincidence fringe at the sum frequency (both photons share a mode).
inline double sum_frequency_coincidence(const PhotonPairSpec& pair, double tau) {
  return 0.5 * (1.0 + std::cos(pair.omega_sum() * tau));
}

}  // namespace beatnote

#endif  // BEATNOTE_FRINGE_MODELS_HPP_
