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

#ifndef BEATNOTE_UNITS_HPP_
#define BEATNOTE_UNITS_HPP_

#include <cmath>
#include <numbers>

// Everything inside the library is SI: metres, seconds, rad/s.  These helpers
// exist for the boundary (config files, reports, tests).

namespace beatnote {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

namespace units {

inline constexpr double nm = 1e-9;
inline constexpr double um = 1e-6;
inline constexpr double mm = 1e-3;
inline constexpr double ps = 1e-12;
inline constexpr double fs = 1e-15;
inline constexpr double as = 1e-18;
inline constexpr double thz = 1e12;
inline constexpr double degree = std::numbers::pi / 180.0;
inline constexpr double minute = 60.0;

}  // namespace units

/// Angular frequency of light with vacuum wavelength `lambda` (m).
constexpr double angular_frequency(double lambda) {
  return kTwoPi * kSpeedOfLight / lambda;
}

/// Vacuum wavelength for angular frequency `omega` (rad/s).
constexpr double wavelength(double omega) {
  return kTwoPi * kSpeedOfLight / omega;
}

/// Path-length delay to time delay.
constexpr double delay_from_path(double x) { return x / kSpeedOfLight; }

/// Time delay to path-length delay.
constexpr double path_from_delay(double tau) { return tau * kSpeedOfLight; }

/// Gaussian half-bandwidth sigma (rad/s) of the envelope exp(-2 sigma^2 tau^2)
/// from a wavelength FWHM `dlambda_fwhm` measured at centre `lambda`.
inline double sigma_from_wavelength_fwhm(double lambda, double dlambda_fwhm) {
  const double domega_fwhm = kTwoPi * kSpeedOfLight / (lambda * lambda) * dlambda_fwhm;
  return domega_fwhm / (2.0 * std::sqrt(2.0 * std::numbers::ln2));
}

/// Path-length period of a fringe oscillating at angular frequency `omega`.
constexpr double fringe_period(double omega) { return kTwoPi * kSpeedOfLight / omega; }

/// Power ratio in dB to linear transmission.
inline double transmission_from_db(double loss_db) { return std::pow(10.0, -loss_db / 10.0); }

}  // namespace beatnote

#endif  // BEATNOTE_UNITS_HPP_
