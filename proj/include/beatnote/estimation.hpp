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

#ifndef BEATNOTE_ESTIMATION_HPP_
#define BEATNOTE_ESTIMATION_HPP_

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "beatnote/errors.hpp"
#include "beatnote/fisher.hpp"
#include "beatnote/least_squares.hpp"
#include "beatnote/reference_fringes.hpp"
#include "beatnote/trial.hpp"
#include "beatnote/units.hpp"

namespace beatnote {

/// One sample of a fringe scan: position (m), value and least-squares weight.
struct FringeSample {
  double x;
  double value;
  double weight = 1.0;
};

struct SinusoidFitOptions {
  /// Hold the period at this value instead of fitting it.
  std::optional<double> fixed_period;
  LeastSquaresOptions solver{};
};

namespace detail {

/// Frequency of the strongest component of the mean-subtracted samples,
/// searched on a 16x oversampled Fourier grid between one cycle per span and
/// the mean-spacing Nyquist limit, then refined by a parabola through the
/// peak and its neighbours.
inline double dominant_frequency(std::span<const FringeSample> s, double mean) {
  const double lo = std::min_element(s.begin(), s.end(), [](auto& u, auto& v) { return u.x < v.x; })->x;
  const double hi = std::max_element(s.begin(), s.end(), [](auto& u, auto& v) { return u.x < v.x; })->x;
  const double span = hi - lo;
  const double f_min = 1.0 / span;
  const double f_max = 0.5 * static_cast<double>(s.size() - 1) / span;
  const double df = 1.0 / (16.0 * span);
  auto power = [&](double f) {
    double c = 0.0;
    double sn = 0.0;
    for (const auto& p : s) {
      const double ph = kTwoPi * f * (p.x - lo);
      c += (p.value - mean) * std::cos(ph);
      sn += (p.value - mean) * std::sin(ph);
    }
    return c * c + sn * sn;
  };
  const int n = std::max(1, static_cast<int>(std::floor((f_max - f_min) / df)));
  int best = 0;
  double best_p = -1.0;
  std::vector<double> pw(n + 1);
  for (int i = 0; i <= n; ++i) {
    pw[i] = power(f_min + i * df);
    if (pw[i] > best_p) {
      best_p = pw[i];
      best = i;
    }
  }
  double f = f_min + best * df;
  if (best > 0 && best < n) {
    const double den = pw[best - 1] - 2.0 * pw[best] + pw[best + 1];
    if (den < 0.0) f += 0.5 * df * (pw[best - 1] - pw[best + 1]) / den;
  }
  return f;
}

inline double wrap_phase(double d) {
  d = std::remainder(d, kTwoPi);  // (-pi, pi]
  return d;
}

}  // namespace detail

/// Weighted least-squares fit of a + b cos(2 pi x / c - d).  The returned
/// phase lies in (-pi/2, pi/2] and the sign of b carries the rest, so a
/// coincidence fringe (dip at x = 0) comes back with b < 0 and d ~ 0.
inline SinusoidFit fit_sinusoid(std::span<const FringeSample> samples,
                                const SinusoidFitOptions& opt = {}) {
  const int n = static_cast<int>(samples.size());
  if (n < 8) throw InsufficientDataError("sinusoid fit needs at least 8 samples");
  double lo = samples[0].x;
  double hi = samples[0].x;
  double vmin = samples[0].value;
  double vmax = samples[0].value;
  double mean = 0.0;
  for (const auto& s : samples) {
    if (!(s.weight > 0.0) || !std::isfinite(s.value) || !std::isfinite(s.x)) {
      throw DomainError("sinusoid samples need finite values and positive weights");
    }
    lo = std::min(lo, s.x);
    hi = std::max(hi, s.x);
    vmin = std::min(vmin, s.value);
    vmax = std::max(vmax, s.value);
    mean += s.value;
  }
  mean /= n;
  const double span = hi - lo;
  if (!(span > 0.0)) throw InsufficientDataError("sinusoid samples span zero length");

  const double c0 = opt.fixed_period ? *opt.fixed_period : 1.0 / detail::dominant_frequency(samples, mean);
  if (opt.fixed_period && *opt.fixed_period > span) {
    throw InsufficientDataError("samples span less than one period");
  }
  double cs = 0.0;
  double sn = 0.0;
  for (const auto& s : samples) {
    const double ph = kTwoPi * s.x / c0;
    cs += (s.value - mean) * std::cos(ph);
    sn += (s.value - mean) * std::sin(ph);
  }
  const double b0 = 0.5 * (vmax - vmin);
  const double d0 = std::atan2(sn, cs);

  const bool free_period = !opt.fixed_period;
  const double amp_scale = std::max({std::abs(mean), b0, 1e-300});
  Eigen::VectorXd p0(free_period ? 4 : 3);
  Eigen::VectorXd scale(p0.size());
  p0 << mean, b0, d0, Eigen::VectorXd::Constant(p0.size() - 3, c0);
  scale << amp_scale, amp_scale, 1.0, Eigen::VectorXd::Constant(p0.size() - 3, c0);
  ResidualFunction res = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    const double c = free_period ? p(3) : c0;
    for (int i = 0; i < n; ++i) {
      const auto& s = samples[i];
      r(i) = std::sqrt(s.weight) * (s.value - (p(0) + p(1) * std::cos(kTwoPi * s.x / c - p(2))));
    }
  };
  const LeastSquaresResult lsq = weighted_least_squares(res, n, p0, scale, opt.solver);

  SinusoidFit fit;
  fit.a = lsq.params(0);
  fit.b = lsq.params(1);
  fit.d = detail::wrap_phase(lsq.params(2));
  fit.c = free_period ? lsq.params(3) : c0;
  if (!(fit.c > 0.0)) throw FitError("fitted period is not positive");
  if (fit.c > span * (1.0 + 1e-9)) throw InsufficientDataError("samples span less than one period");
  if (fit.d > kPi / 2.0 || fit.d <= -kPi / 2.0) {
    fit.b = -fit.b;
    fit.d = detail::wrap_phase(fit.d - kPi);
    if (fit.d <= -kPi / 2.0) fit.d += kPi;
  }
  // Covariance in (a, b, c, d) order; the sign flip of b does not change it
  // except for the b-row/column sign.
  const double sign = (fit.b * lsq.params(1) < 0.0) ? -1.0 : 1.0;
  Eigen::Matrix4d cov = Eigen::Matrix4d::Zero();
  const std::array<int, 4> src = {0, 1, free_period ? 3 : -1, 2};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      if (src[i] < 0 || src[j] < 0) continue;
      const double si = (i == 1 ? sign : 1.0);
      const double sj = (j == 1 ? sign : 1.0);
      cov(i, j) = si * sj * lsq.covariance(src[i], src[j]);
    }
  }
  fit.covariance = cov;
  fit.iterations = lsq.iterations;
  double ss = 0.0;
  for (const auto& s : samples) ss += std::pow(s.value - fit(s.x), 2);
  fit.residual_rms = std::sqrt(ss / n);
  return fit;
}

/// Visibility |b/a| with its propagated uncertainty.
struct Visibility {
  double value;
  double sigma;
};

inline Visibility visibility_from_fit(const SinusoidFit& fit) {
  if (fit.a == 0.0) throw DegenerateInputError("fit offset a is zero");
  const double v = std::abs(fit.b / fit.a);
  const double da = fit.b / (fit.a * fit.a);
  const double db = 1.0 / fit.a;
  const double var = db * db * fit.covariance(1, 1) + da * da * fit.covariance(0, 0);
  return {v, std::sqrt(std::max(0.0, var))};
}

/// Fits the four channel fringes of a reference scan.  `counts[i]` holds the
/// channel counts recorded at `x[i]`; each channel's fraction of the total is
/// fitted with binomial weights.
inline ReferenceFringeSet fit_reference_fringes(std::span<const double> x,
                                                std::span<const std::array<std::uint64_t, 4>> counts,
                                                ScanMetadata meta,
                                                const SinusoidFitOptions& opt = {}) {
  if (x.size() != counts.size()) throw DomainError("positions and counts differ in length");
  std::array<SinusoidFit, 4> fits;
  for (int ch = 0; ch < 4; ++ch) {
    std::vector<FringeSample> s;
    s.reserve(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto& c = counts[i];
      const double n = static_cast<double>(c[0] + c[1] + c[2] + c[3]);
      if (n <= 0.0) throw InsufficientDataError("reference point with zero counts");
      const double p = c[ch] / n;
      // Floor the variance at one count so empty bins keep a finite weight.
      const double var = std::max(p * (1.0 - p), 1.0 / n) / n;
      s.push_back({x[i], p, 1.0 / var});
    }
    fits[ch] = fit_sinusoid(s, opt);
  }
  if (meta.start == meta.stop && !x.empty()) {
    meta.start = *std::min_element(x.begin(), x.end());
    meta.stop = *std::max_element(x.begin(), x.end());
  }
  return {fits, meta};
}

/// Closed search interval on the path-length axis.
struct Interval {
  double lo;
  double hi;
};

/// The monotonic half-fringe of the fitted coincidence probability that
/// contains `x`, shrunk by `margin` (fraction of a period) at both ends.
inline Interval half_fringe_interval(const ReferenceFringeSet& refs, double x,
                                     double margin = 0.01) {
  const double period = refs.mean_period();
  const double h = period * 1e-4;
  auto slope = [&](double u) {
    return refs[kAB].derivative(u) + refs[kBA].derivative(u);
  };
  const double s0 = slope(x);
  if (s0 == 0.0) throw SingularityError("fringe extremum at the requested position");
  double lo = x;
  double hi = x;
  while (slope(lo - h) * s0 > 0.0 && x - lo < period) lo -= h;
  while (slope(hi + h) * s0 > 0.0 && hi - x < period) hi += h;
  return {lo + margin * period, hi - margin * period};
}

/// The monotonic half-fringe of a single fitted fringe around `x`.
inline Interval half_fringe_interval(const SinusoidFit& f, double x, double margin = 0.01) {
  // Extrema of a + b cos(2 pi x/c - d) sit where 2 pi x/c - d is a multiple of pi.
  const double u = (kTwoPi * x / f.c - f.d) / kPi;
  const double k = std::floor(u);
  if (u == k) throw SingularityError("fringe extremum at the requested position");
  const double lo = (k * kPi + f.d) * f.c / kTwoPi;
  const double hi = ((k + 1.0) * kPi + f.d) * f.c / kTwoPi;
  return {lo + margin * f.c, hi - margin * f.c};
}

/// Result of a maximum-likelihood displacement extraction.
struct DisplacementEstimate {
  double x_star;
  double sigma_theory;
  double n_total;
};

enum class Likelihood {
  kGaussian,     // -sum (P_i - n_i/N)^2 / P_i, the high-count approximation
  kMultinomial,  // sum n_i log P_i
};

/// Fisher information per event (1/m^2) of any set of fitted channel
/// fringes whose probabilities sum to one.
inline double fisher_information(std::span<const SinusoidFit> fits, double x) {
  double info = 0.0;
  for (const SinusoidFit& f : fits) {
    const double p = f(x);
    if (!(p > 0.0)) throw ModelError("reference probability is not positive at x");
    const double dp = f.derivative(x);
    info += dp * dp / p;
  }
  return info;
}

/// Resolution 1/sqrt(N I(x)) for N detected events.
inline double theoretical_resolution(std::span<const SinusoidFit> fits, double n_total, double x) {
  if (!(n_total >= 1.0)) throw DomainError("need at least one event");
  const double info = fisher_information(fits, x);
  if (!(info > 0.0)) throw SingularityError("zero Fisher information at x");
  return 1.0 / std::sqrt(n_total * info);
}

inline double theoretical_resolution(const ReferenceFringeSet& refs, double n_total, double x) {
  return theoretical_resolution(std::span<const SinusoidFit>(refs.fits()), n_total, x);
}

/// Log-likelihood of channel counts at position x.
inline double log_likelihood(std::span<const SinusoidFit> fits, std::span<const double> counts,
                             double x, Likelihood kind = Likelihood::kGaussian) {
  if (fits.size() != counts.size()) throw DomainError("channel count mismatch");
  double n = 0.0;
  for (double c : counts) n += c;
  double l = 0.0;
  for (std::size_t ch = 0; ch < fits.size(); ++ch) {
    const double p = fits[ch](x);
    if (!(p > 0.0)) throw ModelError("reference probability is not positive in the interval");
    if (kind == Likelihood::kGaussian) {
      const double r = p - counts[ch] / n;
      l -= r * r / p;
    } else {
      l += counts[ch] * std::log(p);
    }
  }
  return l;
}

/// Maximizes the log-likelihood over `search` on a 201-point grid (ties go to
/// the smaller x), then refines by golden-section search to 1e-12 m.
inline DisplacementEstimate extract_displacement_mle(std::span<const SinusoidFit> fits,
                                                     std::span<const double> counts,
                                                     Interval search,
                                                     Likelihood kind = Likelihood::kGaussian) {
  double n = 0.0;
  for (double c : counts) n += c;
  if (!(n > 0.0)) throw DomainError("no counts in trial");
  if (!(search.hi > search.lo)) throw DomainError("empty search interval");
  auto ll = [&](double x) { return log_likelihood(fits, counts, x, kind); };
  constexpr int kGrid = 201;
  const double step = (search.hi - search.lo) / (kGrid - 1);
  int best = 0;
  double best_l = -INFINITY;
  for (int i = 0; i < kGrid; ++i) {
    const double l = ll(search.lo + i * step);
    if (l > best_l) {
      best_l = l;
      best = i;
    }
  }
  double a = search.lo + std::max(0, best - 1) * step;
  double b = search.lo + std::min(kGrid - 1, best + 1) * step;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = ll(c);
  double fd = ll(d);
  while (b - a > 1e-12) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = ll(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = ll(d);
    }
  }
  const double x = 0.5 * (a + b);
  if (x - search.lo < 1e-10 || search.hi - x < 1e-10) {
    throw OutOfRangeError("likelihood maximum on the search boundary; fringe wrap suspected");
  }
  return {x, theoretical_resolution(fits, n, x), n};
}

inline DisplacementEstimate extract_displacement_mle(const ReferenceFringeSet& refs,
                                                     const TrialRecord& trial, Interval search,
                                                     Likelihood kind = Likelihood::kGaussian) {
  const std::array<double, 4> c = {static_cast<double>(trial.counts[0]),
                                   static_cast<double>(trial.counts[1]),
                                   static_cast<double>(trial.counts[2]),
                                   static_cast<double>(trial.counts[3])};
  return extract_displacement_mle(std::span<const SinusoidFit>(refs.fits()), c, search, kind);
}

/// Fitted interference envelope V0 exp(-2 sigma^2 ((x - x0)/c)^2).
struct EnvelopeFit {
  double v0;
  double x0;
  double sigma;
  Eigen::Matrix3d covariance;

  double operator()(double x) const {
    const double t = (x - x0) / kSpeedOfLight;
    return v0 * std::exp(-2.0 * sigma * sigma * t * t);
  }
  /// Path-length FWHM of the fitted envelope.
  double fwhm() const { return envelope_fwhm_path(sigma); }
};

/// Least-squares envelope fit on (coarse delay, visibility) points.  The
/// maximum must have data on both sides.
inline EnvelopeFit fit_envelope(std::span<const FringeSample> pts) {
  const int n = static_cast<int>(pts.size());
  if (n < 5) throw InsufficientDataError("envelope fit needs at least 5 points");
  std::vector<FringeSample> s(pts.begin(), pts.end());
  std::sort(s.begin(), s.end(), [](auto& u, auto& v) { return u.x < v.x; });
  const auto peak = std::max_element(s.begin(), s.end(), [](auto& u, auto& v) { return u.value < v.value; });
  const long ip = peak - s.begin();
  if (ip == 0 || ip == n - 1) throw InsufficientDataError("envelope peak is not bracketed");
  const double v0 = peak->value;
  double lo = peak->x;
  double hi = peak->x;
  for (const auto& p : s) {
    if (p.value >= 0.5 * v0) {
      lo = std::min(lo, p.x);
      hi = std::max(hi, p.x);
    }
  }
  double width = hi - lo;
  if (width <= 0.0) width = 0.5 * (s.back().x - s.front().x);
  const double sigma0 = kSpeedOfLight * std::sqrt(2.0 * std::numbers::ln2) / width;

  Eigen::VectorXd p0(3);
  Eigen::VectorXd scale(3);
  p0 << v0, peak->x, sigma0;
  scale << std::max(std::abs(v0), 1e-12), width, sigma0;
  ResidualFunction res = [&](const Eigen::VectorXd& p, Eigen::VectorXd& r) {
    for (int i = 0; i < n; ++i) {
      const double t = (s[i].x - p(1)) / kSpeedOfLight;
      r(i) = std::sqrt(s[i].weight) * (s[i].value - p(0) * std::exp(-2.0 * p(2) * p(2) * t * t));
    }
  };
  const auto lsq = weighted_least_squares(res, n, p0, scale);
  return {lsq.params(0), lsq.params(1), std::abs(lsq.params(2)), lsq.covariance};
}

struct SetpointOptions {
  double x_start = 0.0;
  /// Span of the initial coarse scan; one fringe period.
  double period = 0.0;
  double target = 0.5;
  double tolerance = 0.01;
  int scan_points = 8;
  int max_iterations = 50;
  /// +1 keeps a rising crossing of P_C, -1 a falling one, 0 the first found.
  int slope = 0;
};

struct SetpointResult {
  double x;
  double p_c;
  int iterations;    // refinement steps after the coarse scan
  int measurements;  // including the coarse scan
};

/// Finds a delay where the measured coincidence fraction equals `target`:
/// a coarse scan over one period brackets a crossing, then Illinois-style
/// false position refines it.  `measure(x)` returns the measured P_C.
inline SetpointResult phase_setpoint_search(const std::function<double(double)>& measure,
                                            const SetpointOptions& opt) {
  if (!(opt.tolerance > 0.0)) throw DomainError("setpoint tolerance must be positive");
  if (!(opt.period > 0.0)) throw DomainError("setpoint search needs a scan period");
  const int m = std::max(4, opt.scan_points);
  std::vector<double> xs(m + 1);
  std::vector<double> fs(m + 1);
  int measurements = 0;
  double pmin = INFINITY;
  double pmax = -INFINITY;
  for (int i = 0; i <= m; ++i) {
    xs[i] = opt.x_start + opt.period * i / m;
    const double p = i < m ? measure(xs[i]) : fs[0] + opt.target;
    if (i < m) ++measurements;
    fs[i] = p - opt.target;
    pmin = std::min(pmin, p);
    pmax = std::max(pmax, p);
    if (std::abs(fs[i]) <= opt.tolerance && i < m && opt.slope == 0) {
      return {xs[i], p, 0, measurements};
    }
  }
  if (pmax - pmin < 4.0 * opt.tolerance) throw SearchError("fringe is flat; no setpoint to find");
  int k = -1;
  for (int i = 0; i < m && k < 0; ++i) {
    const bool cross = fs[i] * fs[i + 1] <= 0.0 && fs[i] != fs[i + 1];
    const int dir = fs[i + 1] > fs[i] ? 1 : -1;
    if (cross && (opt.slope == 0 || opt.slope == dir)) k = i;
  }
  if (k < 0) throw SearchError("coarse scan found no crossing of the target");
  double a = xs[k];
  double b = xs[k + 1];
  double fa = fs[k];
  double fb = fs[k + 1];
  int side = 0;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const double x = (a * fb - b * fa) / (fb - fa);
    const double f = measure(x) - opt.target;
    ++measurements;
    if (std::abs(f) <= opt.tolerance) return {x, f + opt.target, it, measurements};
    if (f * fb > 0.0) {
      b = x;
      fb = f;
      if (side == 1) fa *= 0.5;
      side = 1;
    } else {
      a = x;
      fa = f;
      if (side == -1) fb *= 0.5;
      side = -1;
    }
  }
  throw SearchError("setpoint search did not converge");
}

}  // namespace beatnote

#endif  // BEATNOTE_ESTIMATION_HPP_
