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

#ifndef BEATNOTE_SPECTRAL_ORACLE_HPP_
#define BEATNOTE_SPECTRAL_ORACLE_HPP_

// Brute-force quadrature of the two-photon spectral integrals.  Pump energy
// conservation puts the joint amplitude on the line
//   omega1 = omega1_0 + W,  omega2 = omega2_0 - W,
// so the delta function is integrated analytically and every integral below
// is one-dimensional in the offset W.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "beatnote/errors.hpp"
#include "beatnote/fringe_models.hpp"

namespace beatnote {

/// Quadrature window and resolution.  Each spectral lobe gets a window of
/// +/- half_width sigma sampled with `points` nodes; overlapping windows merge.
struct IntegrationGrid {
  double half_width = 8.0;
  int points = 4097;

  void validate() const {
    if (points < 257 || points % 2 == 0) throw DomainError("grid points must be odd and >= 257");
    if (!(half_width >= 5.0)) throw DomainError("grid half-width must be >= 5 sigma");
  }
};

/// Joint spectral amplitude restricted to the energy-conservation line.
class JointSpectralAmplitude {
 public:
  using LineAmplitude = std::function<std::complex<double>(double)>;

  /// `amplitude(W)` is the line density; `lobe_centers` are offsets W where
  /// it is concentrated, each of Gaussian width ~sigma.
  JointSpectralAmplitude(double omega1_0, double omega2_0, double sigma, LineAmplitude amplitude,
                         std::vector<double> lobe_centers)
      : omega1_0_(omega1_0),
        omega2_0_(omega2_0),
        sigma_(sigma),
        amplitude_(std::move(amplitude)),
        lobes_(std::move(lobe_centers)) {}

  /// Photon 1 near omega1_0 and photon 2 near omega2_0, no exchange symmetry.
  static JointSpectralAmplitude spdc(const PhotonPairSpec& pair) {
    const double s = pair.sigma();
    return {pair.omega1(), pair.omega2(), s, [s](double w) { return gauss(w, s); }, {0.0}};
  }

  /// Exchange-symmetrized pair: either photon may carry either frequency.
  static JointSpectralAmplitude entangled(const PhotonPairSpec& pair) {
    const double s = pair.sigma();
    const double dw = pair.detuning();
    const double n = 1.0 / std::sqrt(2.0 * (1.0 + pair.beta()));
    return {pair.omega1(), pair.omega2(), s,
            [s, dw, n](double w) { return n * (gauss(w, s) + gauss(w + dw, s)); },
            {0.0, -dw}};
  }

  std::complex<double> operator()(double w) const { return amplitude_(w); }
  /// Amplitude of the photon-exchanged configuration at the same line point.
  std::complex<double> swapped(double w) const { return amplitude_(-w - detuning()); }

  double omega1_0() const { return omega1_0_; }
  double omega2_0() const { return omega2_0_; }
  double detuning() const { return omega1_0_ - omega2_0_; }
  double sigma() const { return sigma_; }
  const std::vector<double>& lobes() const { return lobes_; }

 private:
  static double gauss(double w, double s) {
    return std::exp(-w * w / (4.0 * s * s)) / std::pow(2.0 * std::numbers::pi * s * s, 0.25);
  }

  double omega1_0_;
  double omega2_0_;
  double sigma_;
  LineAmplitude amplitude_;
  std::vector<double> lobes_;
};

namespace detail {

struct Window {
  double lo;
  double hi;
};

/// Lobe windows, including the mirror images seen by the swapped amplitude,
/// merged where they overlap.
inline std::vector<Window> windows_for(const JointSpectralAmplitude& jsa,
                                       const IntegrationGrid& grid) {
  std::vector<double> centers = jsa.lobes();
  for (double c : jsa.lobes()) centers.push_back(-c - jsa.detuning());
  std::sort(centers.begin(), centers.end());
  const double hw = grid.half_width * jsa.sigma();
  std::vector<Window> out;
  for (double c : centers) {
    if (!out.empty() && c - hw <= out.back().hi) {
      out.back().hi = std::max(out.back().hi, c + hw);
    } else {
      out.push_back({c - hw, c + hw});
    }
  }
  return out;
}

/// Composite Simpson over each window of f(W).
template <typename T, typename F>
T simpson(const std::vector<Window>& windows, int points, F&& f) {
  T total{};
  for (const Window& win : windows) {
    const int n = points - 1;
    const double h = (win.hi - win.lo) / n;
    T acc = f(win.lo) + f(win.hi);
    for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(win.lo + i * h);
    total += acc * (h / 3.0);
  }
  return total;
}

inline double max_step(const std::vector<Window>& windows, int points) {
  double h = 0.0;
  for (const Window& w : windows) h = std::max(h, (w.hi - w.lo) / (points - 1));
  return h;
}

}  // namespace detail

/// Integral of |f|^2 along the line.
inline double jsa_norm(const JointSpectralAmplitude& jsa, const IntegrationGrid& grid = {}) {
  grid.validate();
  return detail::simpson<double>(detail::windows_for(jsa, grid), grid.points,
                                 [&](double w) { return std::norm(jsa(w)); });
}

/// Coincidence probability by direct quadrature:
///   P_C = 1/2 - 1/2 Re Int f(W) f*(swapped W) exp(i (omega1 - omega2) tau) dW.
inline double coincidence_from_jsa(const JointSpectralAmplitude& jsa, double tau,
                                   const IntegrationGrid& grid = {}) {
  grid.validate();
  const auto windows = detail::windows_for(jsa, grid);
  const double norm = detail::simpson<double>(windows, grid.points,
                                              [&](double w) { return std::norm(jsa(w)); });
  if (std::abs(norm - 1.0) > 1e-4) {
    throw NormalizationError("spectral amplitude norm " + std::to_string(norm) + " differs from 1");
  }
  // The exponent advances by 2 tau per unit of W.
  if (2.0 * detail::max_step(windows, grid.points) * std::abs(tau) > std::numbers::pi / 4.0) {
    throw ResolutionError("quadrature grid too coarse for the requested delay");
  }
  const double dw = jsa.detuning();
  const double overlap = detail::simpson<double>(windows, grid.points, [&](double w) {
    const std::complex<double> v = jsa(w) * std::conj(jsa.swapped(w));
    const double ph = (dw + 2.0 * w) * tau;
    return v.real() * std::cos(ph) - v.imag() * std::sin(ph);
  });
  return 0.5 - 0.5 * overlap;
}

/// Quantum Fisher information of the delayed entangled state,
///   Q = 4 (<d psi|d psi> - |<psi|d psi>|^2),
/// with the tau-derivative of the state taken by central differences.
/// `step` defaults to 1e-3 / omega1.
inline double qfi_numerical(const PhotonPairSpec& pair, double tau, double step = 0.0,
                            const IntegrationGrid& grid = {}) {
  grid.validate();
  const JointSpectralAmplitude jsa = JointSpectralAmplitude::entangled(pair);
  const double h = step > 0.0 ? step : 1e-3 / pair.omega1();
  const auto windows = detail::windows_for(jsa, grid);
  double nu_max = 0.0;
  for (const auto& w : windows) {
    nu_max = std::max({nu_max, std::abs(jsa.omega1_0() + w.lo), std::abs(jsa.omega1_0() + w.hi)});
  }
  if (nu_max * h > 0.1) throw ResolutionError("finite-difference step too large for the spectrum");

  // Photon 1 carries the delay: psi(W; tau) = f(W) exp(i omega1(W) tau).
  auto psi = [&](double w, double t) {
    const double nu = jsa.omega1_0() + w;
    return jsa(w) * std::polar(1.0, nu * t);
  };
  auto dpsi = [&](double w) { return (psi(w, tau + h) - psi(w, tau - h)) / (2.0 * h); };

  const double dd = detail::simpson<double>(windows, grid.points,
                                            [&](double w) { return std::norm(dpsi(w)); });
  const std::complex<double> pd = detail::simpson<std::complex<double>>(
      windows, grid.points, [&](double w) { return std::conj(psi(w, tau)) * dpsi(w); });
  return 4.0 * (dd - std::norm(pd));
}

}  // namespace beatnote

#endif  // BEATNOTE_SPECTRAL_ORACLE_HPP_
