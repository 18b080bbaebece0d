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

#ifndef BEATNOTE_CHECKS_HPP_
#define BEATNOTE_CHECKS_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "beatnote/fisher.hpp"
#include "beatnote/fringe_models.hpp"
#include "beatnote/rng.hpp"
#include "beatnote/spectral_oracle.hpp"

namespace beatnote {

/// Outcome of one numerical cross-check: `value` must not exceed `tolerance`.
struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

inline CheckResult make_check(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, std::isfinite(value) && value <= tolerance};
}

/// Largest |quadrature - closed form (with beta)| over `specs` random pairs
/// and `tau_points` delays spanning +/- 5 coherence times.  The first spec is
/// `pair` itself; the rest draw sigma in [1e11, 2e12] rad/s and detuning in
/// [0, 100] sigma.
inline CheckResult check_jsa_closed_form(const PhotonPairSpec& pair, int specs, int tau_points,
                                         std::uint64_t seed) {
  if (specs < 1 || tau_points < 2) throw DomainError("need specs >= 1 and tau_points >= 2");
  Philox4x32 rng(derive_seed(seed, kStreamOracle, 0));
  std::uniform_real_distribution<double> ratio(0.0, 100.0);
  std::uniform_real_distribution<double> sig(1e11, 2e12);
  double worst = 0.0;
  for (int k = 0; k < specs; ++k) {
    PhotonPairSpec p = pair;
    if (k > 0) {
      const double s = sig(rng);
      p = PhotonPairSpec::from_detuning(1.2e15, ratio(rng) * s, s);
    }
    const auto jsa = JointSpectralAmplitude::entangled(p);
    const double span = 5.0 / p.sigma();
    for (int i = 0; i < tau_points; ++i) {
      const double tau = -span + 2.0 * span * i / (tau_points - 1);
      worst = std::max(worst, std::abs(coincidence_from_jsa(jsa, tau) - coincidence_probability(p, tau, true)));
    }
  }
  return make_check("jsa_vs_closed_form", worst, 1e-6);
}

/// Relative error of the numerical QFI against detuning^2 + 4 sigma^2.
/// `step` is the finite-difference delay step (0 picks the default).
inline CheckResult check_qfi(const PhotonPairSpec& pair, double step = 0.0) {
  const double q = quantum_fisher_information(pair);
  return make_check("qfi_numerical", std::abs(qfi_numerical(pair, 0.0, step) / q - 1.0), 1e-4);
}

/// Relative gap between the two-outcome CFI close to zero delay and the QFI.
inline CheckResult check_cfi_limit(const PhotonPairSpec& pair) {
  const double q = quantum_fisher_information(pair);
  double worst = 0.0;
  for (double tau : {1e-24, -1e-24, 1e-22}) {
    worst = std::max(worst, std::abs(classical_fisher_information(pair, tau) / q - 1.0));
  }
  return make_check("cfi_to_qfi_limit", worst, 1e-9);
}

/// Degenerate pair: quadrature and closed form both give a full dip at zero delay.
inline CheckResult check_hom_dip(const PhotonPairSpec& pair) {
  const PhotonPairSpec hom(pair.omega2(), pair.omega2(), pair.sigma());
  const double quad = coincidence_from_jsa(JointSpectralAmplitude::entangled(hom), 0.0);
  const double closed = coincidence_probability(hom, 0.0, true);
  return make_check("hom_degenerate_dip", std::max(std::abs(quad), std::abs(closed)), 1e-12);
}

inline std::vector<CheckResult> oracle_checks(const PhotonPairSpec& pair, int specs, int tau_points,
                                              std::uint64_t seed, double qfi_step = 0.0) {
  return {check_jsa_closed_form(pair, specs, tau_points, seed), check_qfi(pair, qfi_step), check_cfi_limit(pair),
          check_hom_dip(pair)};
}

}  // namespace beatnote

#endif  // BEATNOTE_CHECKS_HPP_
