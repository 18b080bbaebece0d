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

#ifndef BEATNOTE_FISHER_HPP_
#define BEATNOTE_FISHER_HPP_

#include <cmath>
#include <cstdint>

#include "beatnote/errors.hpp"
#include "beatnote/fringe_models.hpp"
#include "beatnote/reference_fringes.hpp"
#include "beatnote/units.hpp"

namespace beatnote {

/// Delay and path-length standard deviations for a number of detected events,
/// plus how close an achieved value comes to the bound (bound / achieved).
struct ResolutionEstimate {
  double sigma_tau = 0.0;
  double sigma_x = 0.0;
  std::uint64_t n_events = 0;
  double saturation = 1.0;
};

/// Q = detuning^2 + 4 sigma^2 for the Gaussian entangled probe.
inline double quantum_fisher_information(const PhotonPairSpec& pair) {
  const double dw = pair.detuning();
  const double s = pair.sigma();
  return dw * dw + 4.0 * s * s;
}

/// Single-event classical Fisher information of the two-outcome measurement
/// (coincidence / anti-coincidence) at delay tau.  tau = 0 returns the limit,
/// which equals the quantum Fisher information.
inline double classical_fisher_information(const PhotonPairSpec& pair, double tau) {
  if (tau == 0.0) return quantum_fisher_information(pair);
  const double dw = pair.detuning();
  const double s2 = pair.sigma() * pair.sigma();
  const double ph = dw * tau;
  const double num = dw * std::sin(ph) + 4.0 * s2 * tau * std::cos(ph);
  // exp(4 s^2 tau^2) - cos^2 written without cancellation near tau = 0.
  const double den = std::expm1(4.0 * s2 * tau * tau) + std::sin(ph) * std::sin(ph);
  return num * num / den;
}

/// Fisher information per event (1/m^2) of the four fitted channel fringes.
inline double cfi_from_reference_fringes(const ReferenceFringeSet& refs, double x) {
  const auto p = refs.probabilities(x);
  const auto dp = refs.derivatives(x);
  double info = 0.0;
  for (int ch = 0; ch < 4; ++ch) {
    if (!(p[ch] > 0.0)) throw ModelError("reference probability is not positive at x");
    info += dp[ch] * dp[ch] / p[ch];
  }
  return info;
}

/// Cramer-Rao limit 1/sqrt(N Q).
inline ResolutionEstimate cramer_rao_sigma(double q, std::uint64_t n_events) {
  if (!(q > 0.0)) throw DomainError("Fisher information must be positive");
  if (n_events < 1) throw DomainError("need at least one event");
  const double st = 1.0 / std::sqrt(static_cast<double>(n_events) * q);
  return {st, path_from_delay(st), n_events, 1.0};
}

/// Fills `saturation` from an achieved path-length resolution.
inline ResolutionEstimate with_achieved(ResolutionEstimate bound, double achieved_sigma_x) {
  if (!(achieved_sigma_x > 0.0)) throw DomainError("achieved resolution must be positive");
  const double s = bound.sigma_x / achieved_sigma_x;
  if (s > 1.0) throw DomainError("achieved resolution is below the Cramer-Rao bound");
  bound.saturation = s;
  return bound;
}

/// Single-measurement delay uncertainty of the mixed state with coherence
/// epsilon (visibility) at delay tau.
inline double mixed_state_sigma_tau(const PhotonPairSpec& pair, double epsilon, double tau) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw DomainError("epsilon must lie in (0,1]");
  if (tau == 0.0 && epsilon == 1.0) return 1.0 / std::sqrt(quantum_fisher_information(pair));
  const double dw = pair.detuning();
  const double s2 = pair.sigma() * pair.sigma();
  const double ph = dw * tau;
  const double den = dw * std::sin(ph) + 4.0 * s2 * tau * std::cos(ph);
  if (std::abs(den) <= 1e-9 * std::sqrt(quantum_fisher_information(pair))) {
    throw SingularityError("zero fringe slope: delay sits on a fringe extremum");
  }
  const double e2 = epsilon * epsilon;
  const double sn = std::sin(ph);
  const double rad = std::expm1(4.0 * s2 * tau * tau) + (1.0 - e2) + e2 * sn * sn;
  return std::sqrt(rad) / (epsilon * std::abs(den));
}

/// Coherence epsilon of the white-noise-mixed Bell state with given purity.
inline double epsilon_from_purity(double purity) {
  if (!(purity >= 0.5 && purity <= 1.0)) throw DomainError("purity must lie in [0.5, 1]");
  return std::sqrt(2.0 * purity - 1.0);
}

}  // namespace beatnote

#endif  // BEATNOTE_FISHER_HPP_
