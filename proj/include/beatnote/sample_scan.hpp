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

#ifndef BEATNOTE_SAMPLE_SCAN_HPP_
#define BEATNOTE_SAMPLE_SCAN_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "beatnote/errors.hpp"
#include "beatnote/estimation.hpp"
#include "beatnote/least_squares.hpp"
#include "beatnote/reference_fringes.hpp"
#include "beatnote/units.hpp"

namespace beatnote {

/// Step of height a at y0 on a substrate with wedge b and curvature c_quad,
/// seen through a Gaussian probe of standard deviation sigma_probe.
struct ScanModelParams {
  double a = 0.0;
  double b = 0.0;
  double c_quad = 0.0;
  double y0 = 0.0;
  double sigma_probe = 1.0 * units::mm;
  double d = 0.0;

  std::array<double, 6> as_array() const { return {a, b, c_quad, y0, sigma_probe, d}; }
  static ScanModelParams from_array(const std::array<double, 6>& v) {
    return {v[0], v[1], v[2], v[3], v[4], v[5]};
  }
};

enum ScanParam : int { kStep = 0, kWedge, kCurvature, kEdge, kProbeSigma, kOffset };

/// Gaussian probe standard deviation from a 1/e^2 intensity diameter.
constexpr double probe_sigma_from_diameter(double d_1e2) { return d_1e2 / 4.0; }

/// Probe-averaged displacement at scan position y.
inline double scan_model(const ScanModelParams& p, double y) {
  if (!(p.sigma_probe > 0.0)) throw DomainError("probe sigma must be positive");
  const double u = y - p.y0;
  return p.a + p.b * u + p.c_quad * (u * u + p.sigma_probe * p.sigma_probe) -
         0.5 * p.a * std::erfc(u / (p.sigma_probe * std::numbers::sqrt2)) + p.d;
}

/// Smooth step from `left` to `right` across y0, the probe-averaged version
/// of a sharp change in transmission or visibility.
inline double edge_transition(double y, double y0, double sigma, double left, double right) {
  const double s = 0.5 * std::erfc(-(y - y0) / (sigma * std::numbers::sqrt2));
  return left + (right - left) * s;
}

struct ScanFit {
  ScanModelParams params;
  Eigen::Matrix<double, 6, 6> covariance = Eigen::Matrix<double, 6, 6>::Zero();
  double residual_rms = 0.0;
  int iterations = 0;

  double sigma(ScanParam i) const { return std::sqrt(std::max(0.0, covariance(i, i))); }
};

struct ScanFitOptions {
  /// Parameters held at the value in `values`.
  std::array<bool, 6> fixed{};
  ScanModelParams values{};
  /// Starting point; estimated from the data when absent.
  std::optional<ScanModelParams> initial;
};

namespace detail {

struct Sorted {
  std::vector<FringeSample> s;
  double span;
};

inline Sorted sorted_samples(std::span<const FringeSample> data, std::size_t min_points) {
  if (data.size() < min_points) throw InsufficientDataError("too few scan points");
  Sorted out{{data.begin(), data.end()}, 0.0};
  std::sort(out.s.begin(), out.s.end(), [](auto& u, auto& v) { return u.x < v.x; });
  for (const auto& p : out.s) {
    if (!(p.weight > 0.0) || !std::isfinite(p.value)) {
      throw DomainError("scan samples need finite values and positive weights");
    }
  }
  out.span = out.s.back().x - out.s.front().x;
  if (!(out.span > 0.0)) throw InsufficientDataError("scan spans zero length");
  return out;
}

/// Step size, edge position and left level from the outer quarters of a
/// sorted scan.
inline ScanModelParams guess_step(const std::vector<FringeSample>& s, double span) {
  const std::size_t q = std::max<std::size_t>(2, s.size() / 4);
  double left = 0.0;
  double right = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    left += s[i].value;
    right += s[s.size() - 1 - i].value;
  }
  left /= q;
  right /= q;
  const double mid = 0.5 * (left + right);
  double y0 = 0.5 * (s.front().x + s.back().x);
  double best = INFINITY;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    const double v = (s[i - 1].value + s[i].value + s[i + 1].value) / 3.0;
    if (std::abs(v - mid) < best) {
      best = std::abs(v - mid);
      y0 = s[i].x;
    }
  }
  ScanModelParams p;
  p.a = right - left;
  p.y0 = y0;
  p.sigma_probe = span / 20.0;
  p.d = left;
  return p;
}

}  // namespace detail

/// Weighted least squares of the scan model over the free parameters.
inline ScanFit fit_scan(std::span<const FringeSample> data, const ScanFitOptions& opt = {}) {
  const auto [s, span] = detail::sorted_samples(data, 10);
  ScanModelParams init = opt.initial ? *opt.initial : detail::guess_step(s, span);
  auto start = init.as_array();
  const auto fixed_vals = opt.values.as_array();
  for (int i = 0; i < 6; ++i) {
    if (opt.fixed[i]) start[i] = fixed_vals[i];
  }
  const double amp = std::max({std::abs(start[kStep]), std::abs(start[kOffset]), 1e-12});
  const std::array<double, 6> scales = {amp, amp / span, amp / (span * span), span,
                                        std::max(std::abs(start[kProbeSigma]), span / 100.0), amp};
  std::vector<int> free;
  for (int i = 0; i < 6; ++i) {
    if (!opt.fixed[i]) free.push_back(i);
  }
  if (free.empty()) throw DomainError("no free scan parameters");
  const int nf = static_cast<int>(free.size());
  Eigen::VectorXd p0(nf);
  Eigen::VectorXd scale(nf);
  for (int k = 0; k < nf; ++k) {
    p0(k) = start[free[k]];
    scale(k) = scales[free[k]];
  }
  auto unpack = [&](const Eigen::VectorXd& p) {
    auto v = start;
    for (int k = 0; k < nf; ++k) v[free[k]] = p(k);
    v[kProbeSigma] = std::abs(v[kProbeSigma]);
    return ScanModelParams::from_array(v);
  };
  const int n = static_cast<int>(s.size());
  ResidualFunction res = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    const ScanModelParams m = unpack(p);
    for (int i = 0; i < n; ++i) r(i) = std::sqrt(s[i].weight) * (s[i].value - scan_model(m, s[i].x));
  };
  const auto lsq = weighted_least_squares(res, n, p0, scale);

  ScanFit fit;
  fit.params = unpack(lsq.params);
  fit.iterations = lsq.iterations;
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j) fit.covariance(free[i], free[j]) = lsq.covariance(i, j);
  double ss = 0.0;
  for (const auto& p : s) ss += std::pow(p.value - scan_model(fit.params, p.x), 2);
  fit.residual_rms = std::sqrt(ss / n);
  const double sg = fit.params.sigma_probe;
  if (s.front().x > fit.params.y0 - 2.0 * sg || s.back().x < fit.params.y0 + 2.0 * sg) {
    throw InsufficientDataError("scan does not bracket the edge by two probe widths");
  }
  return fit;
}

struct FilmIndex {
  double n_film;
  double uncertainty = 0.0;
};

struct Thickness {
  double value;
  double uncertainty;
};

/// Physical thickness x0/(n - 1) from the effective (optical) thickness x0.
inline Thickness thickness_from_effective(double x0, const FilmIndex& n, double x0_sigma = 0.0) {
  if (!(n.n_film > 1.0)) throw DomainError("film index must exceed 1");
  const double m = n.n_film - 1.0;
  const double v = x0 / m;
  const double var = std::pow(x0_sigma / m, 2) + std::pow(x0 * n.uncertainty / (m * m), 2);
  return {v, std::sqrt(var)};
}

/// Beat-note wavenumber from nominal wavelengths, 2 pi/lambda1 - 2 pi/lambda2.
inline double beat_wavenumber(double lambda_short = 810.0 * units::nm,
                              double lambda_long = 1550.0 * units::nm) {
  return kTwoPi / lambda_short - kTwoPi / lambda_long;
}

/// Film index from a phase scan of a film of known thickness `a_fixed`.  The
/// film contributes (n_film - 1) a of optical path; the substrate terms are
/// scaled by `n_substrate`; the phase is k times the optical path.
inline FilmIndex calibrated_index_fit(std::span<const FringeSample> phase_data, double a_fixed,
                                      double n_substrate, double k = beat_wavenumber()) {
  if (!(a_fixed > 0.0)) throw DomainError("calibration thickness must be positive");
  const auto [s, span] = detail::sorted_samples(phase_data, 10);
  const ScanModelParams g = detail::guess_step(s, span);
  // Parameters: n_f, b, c, y0, sigma, d.
  const double nf0 = g.a / (k * a_fixed);
  const double phase_amp = std::max(std::abs(g.a), 1e-6);
  Eigen::VectorXd p0(6);
  Eigen::VectorXd scale(6);
  p0 << nf0, 0.0, 0.0, g.y0, g.sigma_probe, g.d / (k * n_substrate);
  const double len = phase_amp / k;
  scale << std::max(std::abs(nf0), 0.1), len / span, len / (span * span), span, span / 20.0,
      std::max(std::abs(p0(5)), len);
  auto model = [&](const Eigen::VectorXd& p, double y) {
    const double u = y - p(3);
    const double sg = std::abs(p(4));
    return k * (p(0) * a_fixed + n_substrate * (p(1) * u + p(2) * (u * u + sg * sg)) -
                p(0) * 0.5 * a_fixed * std::erfc(u / (sg * std::numbers::sqrt2)) +
                n_substrate * p(5));
  };
  const int n = static_cast<int>(s.size());
  ResidualFunction res = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    for (int i = 0; i < n; ++i) r(i) = std::sqrt(s[i].weight) * (s[i].value - model(p, s[i].x));
  };
  const auto lsq = weighted_least_squares(res, n, p0, scale);
  const double sg = std::abs(lsq.params(4));
  if (s.front().x > lsq.params(3) - 2.0 * sg || s.back().x < lsq.params(3) + 2.0 * sg) {
    throw InsufficientDataError("calibration scan does not bracket the edge");
  }
  const FilmIndex out{lsq.params(0) + 1.0, std::sqrt(std::max(0.0, lsq.covariance(0, 0)))};
  if (!(out.n_film > 1.0)) throw FitError("fitted film index does not exceed 1");
  return out;
}

/// Knife-edge power P0/2 [1 + direction erf(sqrt2 (delta - delta0)/w)].
struct KnifeEdgeFit {
  double p0;
  double delta0;
  double w;  // 1/e^2 intensity radius
  int direction;
  Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();

  double operator()(double delta) const { return knife_edge_model(p0, delta0, w, direction, delta); }
  static double knife_edge_model(double p0, double delta0, double w, int dir, double delta) {
    return 0.5 * p0 * (1.0 + dir * std::erf(std::numbers::sqrt2 * (delta - delta0) / w));
  }
};

/// Fits a knife-edge scan.  The data must rise or fall overall; a reversal
/// larger than 20% of the total swing is rejected as non-monotonic.
inline KnifeEdgeFit fit_knife_edge(std::span<const FringeSample> data) {
  const auto [s, span] = detail::sorted_samples(data, 8);
  const int n = static_cast<int>(s.size());
  const int q = std::max(1, n / 8);
  double head = 0.0;
  double tail = 0.0;
  for (int i = 0; i < q; ++i) {
    head += s[i].value;
    tail += s[n - 1 - i].value;
  }
  const int dir = tail >= head ? 1 : -1;
  double vmin = INFINITY;
  double vmax = -INFINITY;
  for (const auto& p : s) {
    vmin = std::min(vmin, p.value);
    vmax = std::max(vmax, p.value);
  }
  const double swing = vmax - vmin;
  if (!(swing > 0.0)) throw DataError("knife-edge scan is flat");
  double run = dir * s[0].value;
  double worst = 0.0;
  for (const auto& p : s) {
    run = std::max(run, dir * p.value);
    worst = std::max(worst, run - dir * p.value);
  }
  if (worst > 0.2 * swing) throw DataError("knife-edge scan is not monotonic");

  // Start: 16% and 84% crossings sit at -w/2 and +w/2.
  auto crossing = [&](double level) {
    for (int i = 1; i < n; ++i) {
      const double a = s[i - 1].value - level;
      const double b = s[i].value - level;
      if (a * b <= 0.0 && a != b) return s[i - 1].x + (s[i].x - s[i - 1].x) * a / (a - b);
    }
    return 0.5 * (s.front().x + s.back().x);
  };
  const double lo = crossing(vmin + 0.16 * swing);
  const double hi = crossing(vmin + 0.84 * swing);
  const double mid = crossing(vmin + 0.5 * swing);
  const double w0 = std::max(std::abs(hi - lo), span / (4.0 * n));
  Eigen::VectorXd p0(3);
  Eigen::VectorXd scale(3);
  p0 << vmax, mid, w0;
  scale << std::max(vmax, 1e-12), span, w0;
  ResidualFunction res = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    for (int i = 0; i < n; ++i) {
      r(i) = std::sqrt(s[i].weight) *
             (s[i].value - KnifeEdgeFit::knife_edge_model(p(0), p(1), std::abs(p(2)), dir, s[i].x));
    }
  };
  const auto lsq = weighted_least_squares(res, n, p0, scale);
  KnifeEdgeFit fit{lsq.params(0), lsq.params(1), std::abs(lsq.params(2)), dir, lsq.covariance};
  if (!(fit.p0 > 0.0 && fit.p0 <= 1.05)) throw DataError("knife-edge power outside (0, 1.05]");
  return fit;
}

/// References with each amplitude b scaled by `v_ratio`, the visibility at the
/// current position relative to the position where they were measured.
inline ReferenceFringeSet visibility_corrected_references(const ReferenceFringeSet& refs,
                                                          double v_ratio) {
  if (!(v_ratio > 0.0 && v_ratio <= 1.2)) throw ValidityError("visibility ratio outside (0, 1.2]");
  ReferenceFringeSet out = refs;
  for (int ch = 0; ch < 4; ++ch) {
    out[ch].b *= v_ratio;
    if (std::abs(out[ch].b) > out[ch].a) throw ValidityError("corrected fringe has |b| > a");
  }
  return out;
}

}  // namespace beatnote

#endif  // BEATNOTE_SAMPLE_SCAN_HPP_
