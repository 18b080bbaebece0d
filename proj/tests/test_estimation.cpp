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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "beatnote/estimation.hpp"
#include "beatnote/instrument_sim.hpp"
#include "beatnote/rng.hpp"
#include "beatnote/scenarios.hpp"

namespace beatnote {
namespace {

PhotonPairSpec paper_pair() {
  return PhotonPairSpec::from_wavelengths(810.504e-9, 1547.484e-9, 0.495e-9, 810.504e-9);
}

std::vector<FringeSample> sampled(double a, double b, double c, double d, double lo, double hi, int n) {
  std::vector<FringeSample> s;
  for (int i = 0; i < n; ++i) {
    const double x = lo + (hi - lo) * i / (n - 1);
    s.push_back({x, a + b * std::cos(kTwoPi * x / c - d), 1.0});
  }
  return s;
}

TEST(FitSinusoid, RecoversNoiselessParameters) {
  const auto s = sampled(0.25, -0.2, 1.7e-6, 0.3, -2e-6, 2e-6, 401);
  const auto f = fit_sinusoid(s);
  EXPECT_NEAR(f.a, 0.25, 1e-10);
  EXPECT_NEAR(f.b, -0.2, 1e-10);
  EXPECT_NEAR(f.c, 1.7e-6, 1e-15);
  EXPECT_NEAR(f.d, 0.3, 1e-9);
  SinusoidFitOptions fixed;
  fixed.fixed_period = 1.7e-6;
  const auto g = fit_sinusoid(s, fixed);
  EXPECT_DOUBLE_EQ(g.c, 1.7e-6);
  EXPECT_NEAR(g.d, 0.3, 1e-9);
}

TEST(FitSinusoid, PhaseConvention) {
  // A dip at x = 0 comes back as b < 0 with d near zero.
  const auto f = fit_sinusoid(sampled(0.5, -0.4, 1e-6, 0.0, -1.5e-6, 1.5e-6, 300));
  EXPECT_LT(f.b, 0.0);
  EXPECT_NEAR(f.d, 0.0, 1e-9);
  // A peak shifted by more than a quarter period flips sign to keep |d| <= pi/2.
  const auto g = fit_sinusoid(sampled(0.5, 0.4, 1e-6, 2.5, -1.5e-6, 1.5e-6, 300));
  EXPECT_LE(std::abs(g.d), kPi / 2 + 1e-12);
  EXPECT_NEAR(g.b, -0.4, 1e-9);
  EXPECT_NEAR(g(0.123e-6), 0.5 + 0.4 * std::cos(kTwoPi * 0.123 - 2.5), 1e-9);
}

TEST(FitSinusoid, CovarianceIsCalibrated) {
  Philox4x32 rng(21);
  std::normal_distribution<double> noise(0.0, 0.01);
  std::vector<double> pulls_c;
  std::vector<double> pulls_d;
  for (int k = 0; k < 300; ++k) {
    auto s = sampled(0.5, 0.3, 1.7e-6, 0.4, -2e-6, 2e-6, 81);
    for (auto& p : s) {
      p.value += noise(rng);
      p.weight = 1e4;
    }
    const auto f = fit_sinusoid(s);
    pulls_c.push_back((f.c - 1.7e-6) / f.sigma(2));
    pulls_d.push_back((f.d - 0.4) / f.sigma(3));
  }
  const auto mc = moments(pulls_c);
  const auto md = moments(pulls_d);
  EXPECT_NEAR(mc.sd, 1.0, 0.15);
  EXPECT_NEAR(md.sd, 1.0, 0.15);
  EXPECT_NEAR(mc.mean, 0.0, 0.2);
}

TEST(FitSinusoid, RejectsBadInput) {
  auto s = sampled(0.5, 0.3, 1e-6, 0.0, 0.0, 2e-6, 7);
  EXPECT_THROW(fit_sinusoid(s), InsufficientDataError);
  s = sampled(0.5, 0.3, 1e-6, 0.0, 0.0, 2e-6, 20);
  s[3].weight = 0.0;
  EXPECT_THROW(fit_sinusoid(s), DomainError);
  s = sampled(0.5, 0.3, 1e-6, 0.0, 0.0, 0.5e-6, 20);
  SinusoidFitOptions o;
  o.fixed_period = 1e-6;
  EXPECT_THROW(fit_sinusoid(s, o), InsufficientDataError);
}

TEST(Visibility, FromFit) {
  SinusoidFit f;
  f.a = 0.5;
  f.b = -0.4;
  f.covariance(0, 0) = 1e-6;
  f.covariance(1, 1) = 4e-6;
  const auto v = visibility_from_fit(f);
  EXPECT_DOUBLE_EQ(v.value, 0.8);
  EXPECT_NEAR(v.sigma, std::sqrt(4e-6 / 0.25 + 0.64 * 1e-6 / 0.25), 1e-15);
  f.a = 0.0;
  EXPECT_THROW(visibility_from_fit(f), DegenerateInputError);
}

TEST(ReferenceFringes, FittedFromSimulatedScan) {
  const auto pair = paper_pair();
  const auto scan = run_reference_scan(InstrumentConfig{}, pair, {-2e-6, 2e-6, 10e-9}, 1.0, 4);
  EXPECT_NO_THROW(scan.refs.validate());
  for (int ch = 0; ch < 4; ++ch) {
    const auto& f = scan.refs[ch];
    EXPECT_NEAR(f.c, pair.beat_period(), 4 * f.sigma(2));
    EXPECT_NEAR(f.a, 0.25, 0.01);
  }
  EXPECT_LT(scan.refs[kAB].b, 0.0);
  EXPECT_GT(scan.refs[kAA].b, 0.0);
  const auto v = visibility_from_fit(scan.refs[kAB]);
  EXPECT_NEAR(v.value, 0.889, 4 * v.sigma);
  EXPECT_DOUBLE_EQ(scan.refs.metadata().step, 10e-9);
}

TEST(ReferenceFringes, CenteredAndIdeal) {
  const auto r = ReferenceFringeSet::ideal(0.8, 1e-6, {0, 2e-6, 1e-8, 1});
  EXPECT_NO_THROW(r.validate());
  EXPECT_NEAR(r.coincidence(0.0), 0.5 * (1 - 0.8), 1e-15);
  auto s = r;
  s[kAB].a = 0.5;
  s[kAB].b = -0.4;
  const auto c = s.centered();
  EXPECT_DOUBLE_EQ(c[kAB].a, 0.25);
  EXPECT_DOUBLE_EQ(c[kAB].b, -0.2);
  s[kAB].b = -0.6;
  EXPECT_THROW(s.validate(), ValidityError);
}

TEST(HalfFringe, IntervalBracketsSetpoint) {
  const double P = 1.7e-6;
  const auto r = ReferenceFringeSet::ideal(0.9, P);
  const auto iv = half_fringe_interval(r, 0.25 * P);
  EXPECT_LT(iv.lo, 0.25 * P);
  EXPECT_GT(iv.hi, 0.25 * P);
  EXPECT_NEAR(iv.lo, 0.01 * P, 2e-4 * P);
  EXPECT_NEAR(iv.hi, 0.49 * P, 2e-4 * P);
  const auto single = half_fringe_interval(r[kAB], 0.3 * P);
  EXPECT_NEAR(single.lo, 0.01 * P, 1e-18);
  EXPECT_NEAR(single.hi, 0.49 * P, 1e-18);
}

TEST(Fisher, IdealReferencesMatchClosedForm) {
  const double P = 1701.867e-9;
  const double eps = 0.889;
  const auto r = ReferenceFringeSet::ideal(eps, P);
  const double k = kTwoPi / P;
  // At mid-fringe every channel sits at 1/4 with slope eps k / 4.
  EXPECT_NEAR(fisher_information(r.fits(), 0.25 * P) / (eps * eps * k * k), 1.0, 1e-12);
  EXPECT_NEAR(theoretical_resolution(r, 59000, 0.25 * P), 1.0 / (eps * k * std::sqrt(59000.0)), 1e-21);
  // Everywhere: I = eps^2 k^2 sin^2 / (1 - eps^2 cos^2).
  for (double x : {0.05 * P, 0.13 * P, 0.4 * P}) {
    const double ph = k * x;
    const double expect = eps * eps * k * k * std::pow(std::sin(ph), 2) / (1 - eps * eps * std::pow(std::cos(ph), 2));
    EXPECT_NEAR(fisher_information(r.fits(), x) / expect, 1.0, 1e-12);
  }
  EXPECT_THROW(theoretical_resolution(r, 0.5, 0.25 * P), DomainError);
}

TEST(Mle, ExpectedCountsReturnTruePosition) {
  const double P = 1.7e-6;
  const auto r = ReferenceFringeSet::ideal(0.85, P);
  const auto iv = half_fringe_interval(r, 0.25 * P);
  for (double x0 : {0.1 * P, 0.25 * P, 0.41 * P}) {
    const auto p = r.probabilities(x0);
    const std::array<double, 4> n = {1e5 * p[0], 1e5 * p[1], 1e5 * p[2], 1e5 * p[3]};
    for (auto kind : {Likelihood::kGaussian, Likelihood::kMultinomial}) {
      const auto e = extract_displacement_mle(std::span<const SinusoidFit>(r.fits()), n, iv, kind);
      EXPECT_NEAR(e.x_star, x0, 2e-12);
      EXPECT_DOUBLE_EQ(e.n_total, 1e5);
    }
  }
}

TEST(Mle, BoundaryMaximumIsReported) {
  const double P = 1.7e-6;
  const auto r = ReferenceFringeSet::ideal(0.85, P);
  const auto p = r.probabilities(0.6 * P);
  const std::array<double, 4> n = {1e5 * p[0], 1e5 * p[1], 1e5 * p[2], 1e5 * p[3]};
  EXPECT_THROW(extract_displacement_mle(std::span<const SinusoidFit>(r.fits()), n, {0.1 * P, 0.4 * P}),
               OutOfRangeError);
  const std::array<double, 4> zero{};
  EXPECT_THROW(extract_displacement_mle(std::span<const SinusoidFit>(r.fits()), zero, {0.1 * P, 0.4 * P}),
               DomainError);
}

TEST(Mle, UnbiasedAndEfficientOnSimulatedTrials) {
  const auto pair = paper_pair();
  const double P = pair.beat_period();
  const auto r = ReferenceFringeSet::ideal(0.889, P);
  const auto iv = half_fringe_interval(r, 0.25 * P);
  std::vector<double> xs;
  for (int i = 0; i < 500; ++i) {
    const auto t = simulate_trial(InstrumentConfig{}, pair, delay_from_path(0.25 * P), 1.0, 500 + i);
    xs.push_back(extract_displacement_mle(r, t, iv).x_star);
  }
  const auto m = moments(xs);
  const double theory = theoretical_resolution(r, 59000, 0.25 * P);
  EXPECT_NEAR(m.mean, 0.25 * P, 5 * theory / std::sqrt(500.0));
  EXPECT_NEAR(m.sd / theory, 1.0, 0.1);
}

TEST(Envelope, RecoversGaussian) {
  const double sigma = 1.2e12;
  std::vector<FringeSample> pts;
  for (int i = -20; i <= 20; ++i) {
    const double x = i * 20e-6;
    const double t = (x - 13e-6) / kSpeedOfLight;
    pts.push_back({x, 0.9 * std::exp(-2 * sigma * sigma * t * t), 1.0});
  }
  const auto e = fit_envelope(pts);
  EXPECT_NEAR(e.v0, 0.9, 1e-9);
  EXPECT_NEAR(e.x0, 13e-6, 1e-12);
  EXPECT_NEAR(e.sigma / sigma, 1.0, 1e-9);
  EXPECT_NEAR(e.fwhm(), envelope_fwhm_path(sigma), 1e-12);
  pts.resize(15);
  EXPECT_THROW(fit_envelope(pts), InsufficientDataError);
}

TEST(Setpoint, AnalyticFringe) {
  const double P = 1.7e-6;
  auto f = [&](double x) { return 0.5 - 0.4 * std::cos(kTwoPi * x / P); };
  SetpointOptions o;
  o.period = P;
  o.tolerance = 1e-6;
  o.slope = 1;
  o.x_start = -0.3 * P;
  const auto s = phase_setpoint_search(f, o);
  EXPECT_NEAR(s.p_c, 0.5, 1e-6);
  EXPECT_NEAR(std::remainder(s.x - 0.25 * P, P), 0.0, 1e-6 * P);
  o.slope = -1;
  const auto d = phase_setpoint_search(f, o);
  EXPECT_NEAR(std::remainder(d.x + 0.25 * P, P), 0.0, 1e-6 * P);
  EXPECT_THROW(phase_setpoint_search([](double) { return 0.5; }, o), SearchError);
  o.period = 0.0;
  EXPECT_THROW(phase_setpoint_search(f, o), DomainError);
}

TEST(Setpoint, SimulatedInstrument) {
  const auto pair = paper_pair();
  const auto s = find_setpoint(InstrumentConfig{}, pair, -0.5 * pair.beat_period(), 1.0, 6);
  EXPECT_NEAR(s.p_c, 0.5, 0.01);
  const double model = mixed_coincidence_probability(pair, 0.889, delay_from_path(s.x));
  EXPECT_NEAR(model, 0.5, 0.02);
}

TEST(Campaign, MeasuresSetDisplacement) {
  const auto pair = paper_pair();
  const auto refs = ReferenceFringeSet::ideal(0.889, pair.beat_period());
  CampaignSettings set;
  set.displacements = {0.0, 100e-9};
  set.trials = 60;
  const auto rep = run_displacement_campaign(InstrumentConfig{}, pair, refs, 0.2 * pair.beat_period(), set, 3);
  ASSERT_EQ(rep.summary.size(), 2u);
  EXPECT_EQ(rep.trials.size(), 120u);
  EXPECT_NEAR(rep.summary[0].mean_measured, 0.0, 1e-15);
  const auto& s = rep.summary[1];
  EXPECT_EQ(s.n_ok, 60u);
  EXPECT_NEAR(s.mean_measured, 100e-9, 5 * 1.5 * s.theoretical_sigma / std::sqrt(30.0));
  EXPECT_NEAR(s.empirical_sigma / s.theoretical_sigma, 1.0, 0.35);
}

TEST(Campaign, ThreadCountDoesNotChangeResults) {
  const auto pair = paper_pair();
  const auto refs = ReferenceFringeSet::ideal(0.889, pair.beat_period());
  CampaignSettings set;
  set.trials = 20;
  const auto a = run_displacement_campaign(InstrumentConfig{}, pair, refs, 0.25 * pair.beat_period(), set, 9);
  set.threads = 3;
  const auto b = run_displacement_campaign(InstrumentConfig{}, pair, refs, 0.25 * pair.beat_period(), set, 9);
  for (std::size_t i = 0; i < a.trials.size(); ++i) EXPECT_EQ(a.trials[i].x_star, b.trials[i].x_star);
}

}  // namespace
}  // namespace beatnote
