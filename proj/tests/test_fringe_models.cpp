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
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "beatnote/fringe_models.hpp"
#include "beatnote/units.hpp"

namespace beatnote {
namespace {

constexpr double kC = 299792458.0;

PhotonPairSpec paper_pair() {
  return PhotonPairSpec::from_wavelengths(810.504e-9, 1547.484e-9, 0.495e-9, 810.504e-9);
}

TEST(PhotonPairSpec, FrequenciesFromWavelengths) {
  const auto p = paper_pair();
  EXPECT_NEAR(p.omega1(), 2 * std::numbers::pi * kC / 810.504e-9, 1e-3);
  EXPECT_NEAR(p.omega2(), 2 * std::numbers::pi * kC / 1547.484e-9, 1e-3);
  const double fwhm_omega = 2 * std::numbers::pi * kC * 0.495e-9 / (810.504e-9 * 810.504e-9);
  EXPECT_NEAR(p.sigma() / (fwhm_omega / std::sqrt(8 * std::log(2.0))), 1.0, 1e-12);
  EXPECT_NEAR(p.sigma(), 6.0275e11, 1e8);
}

TEST(PhotonPairSpec, Periods) {
  const auto p = paper_pair();
  const double beat = 810.504e-9 * 1547.484e-9 / (1547.484e-9 - 810.504e-9);
  const double sum = 810.504e-9 * 1547.484e-9 / (1547.484e-9 + 810.504e-9);
  EXPECT_NEAR(p.beat_period(), beat, 1e-15);
  EXPECT_NEAR(p.sum_period(), sum, 1e-15);
  EXPECT_NEAR(p.beat_period() / units::nm, 1701.87, 0.01);
  EXPECT_NEAR(p.sum_period() / units::nm, 531.91, 0.01);
}

TEST(PhotonPairSpec, BetaVanishesForPaperPair) {
  EXPECT_LT(paper_pair().beta(), 1e-300);
  const PhotonPairSpec p(2.0e15, 2.0e15, 1e12);
  EXPECT_DOUBLE_EQ(p.beta(), 1.0);
}

TEST(PhotonPairSpec, RejectsInvalid) {
  EXPECT_THROW(PhotonPairSpec(1e15, 0.0, 1e12), DomainError);
  EXPECT_THROW(PhotonPairSpec(1e15, 2e15, 1e12), DomainError);
  EXPECT_THROW(PhotonPairSpec(2e15, 1e15, 0.0), DomainError);
  EXPECT_THROW(PhotonPairSpec(2e15, 1e15, -1.0), DomainError);
  EXPECT_THROW(PhotonPairSpec(NAN, 1e15, 1e12), DomainError);
}

TEST(CoincidenceProbability, ZeroDelayIsZero) {
  EXPECT_DOUBLE_EQ(coincidence_probability(paper_pair(), 0.0), 0.0);
  EXPECT_NEAR(coincidence_probability(paper_pair(), 0.0, true), 0.0, 1e-15);
}

TEST(CoincidenceProbability, HongOuMandelLimit) {
  const PhotonPairSpec hom(2e15, 2e15, 5e11);
  for (double tau : {0.0, 1e-13, 1e-12, 3e-12}) {
    EXPECT_NEAR(coincidence_probability(hom, tau), 0.5 * (1 - std::exp(-2 * 25e22 * tau * tau)), 1e-15);
  }
}

TEST(CoincidenceProbability, PeriodicInPathLength) {
  const auto p = paper_pair();
  const double l = p.beat_period();
  EXPECT_NEAR(l / units::nm, 1701.87, 0.01);
  auto fringe = [&](double x) {
    const double tau = x / kC;
    return (1 - 2 * coincidence_probability(p, tau)) / visibility_envelope(p, tau);
  };
  for (double x : {100e-9, 333e-9, 800e-9}) EXPECT_NEAR(fringe(x + l), fringe(x), 1e-9);
  // Near zero delay the envelope is flat enough to see the period directly.
  EXPECT_NEAR(coincidence_probability(p, 1701.87e-9 / kC), 0.0, 2e-5);
}

TEST(CoincidenceProbability, BetaTermSubtractsEnvelope) {
  // Delta omega comparable to sigma so that beta is finite.
  const PhotonPairSpec p(2.0e15 + 1e12, 2.0e15, 6e11);
  const double b = std::exp(-1e24 / (8 * 36e22));
  EXPECT_NEAR(p.beta(), b, 1e-15);
  for (double tau : {0.0, 2e-13, 7e-13, 2e-12}) {
    const double env = std::exp(-2 * 36e22 * tau * tau);
    EXPECT_NEAR(coincidence_probability(p, tau, true), 0.5 * (1 - (std::cos(1e12 * tau) + b) * env / (1 + b)),
                1e-15);
  }
}

TEST(CoincidenceProbability, BoundedEvenAndComplementary) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> tau(-3e-12, 3e-12);
  const auto p = paper_pair();
  for (int i = 0; i < 2000; ++i) {
    const double t = tau(gen);
    for (bool beta : {false, true}) {
      const double pc = coincidence_probability(p, t, beta);
      EXPECT_GE(pc, 0.0);
      EXPECT_LE(pc, 1.0);
      EXPECT_DOUBLE_EQ(pc, coincidence_probability(p, -t, beta));
    }
    const auto ch = channel_probabilities(p, 1.0, t);
    EXPECT_NEAR(ch[kAB] + ch[kBA], coincidence_probability(p, t), 1e-15);
    EXPECT_NEAR(ch[kAA] + ch[kBB], 1 - coincidence_probability(p, t), 1e-15);
  }
}

TEST(MixedCoincidence, Limits) {
  const auto p = paper_pair();
  for (double tau : {0.0, 1e-16, 7e-16, 1e-13}) {
    EXPECT_DOUBLE_EQ(mixed_coincidence_probability(p, 1.0, tau), coincidence_probability(p, tau));
    EXPECT_DOUBLE_EQ(mixed_coincidence_probability(p, 0.0, tau), 0.5);
  }
  EXPECT_NEAR(mixed_coincidence_probability(p, 0.889, 0.0), 0.0555, 1e-12);
  EXPECT_THROW(mixed_coincidence_probability(p, 1.01, 0.0), DomainError);
  EXPECT_THROW(mixed_coincidence_probability(p, -0.1, 0.0), DomainError);
}

TEST(MixedCoincidence, VisibilityEqualsEpsilon) {
  const auto p = paper_pair();
  const double period = p.beat_period() / kC;
  for (double eps : {0.2, 0.889, 1.0}) {
    double lo = 1.0;
    double hi = 0.0;
    double lo_n = INFINITY;
    double hi_n = -INFINITY;
    for (int i = 0; i <= 2000; ++i) {
      const double tau = (i / 2000.0 - 0.5) * period;
      const double pc = mixed_coincidence_probability(p, eps, tau);
      lo = std::min(lo, pc);
      hi = std::max(hi, pc);
      // Fringe term with the envelope divided out.
      const double f = (1 - 2 * pc) / std::exp(-2 * p.sigma() * p.sigma() * tau * tau);
      lo_n = std::min(lo_n, f);
      hi_n = std::max(hi_n, f);
    }
    EXPECT_NEAR(0.5 * (hi_n - lo_n), eps, 1e-9);
    const double env = std::exp(-2 * p.sigma() * p.sigma() * 0.25 * period * period);
    EXPECT_NEAR((hi - lo) / (hi + lo), eps * (1 + env) / (2 - eps * (1 - env)), 1e-12);
  }
}

TEST(ChannelProbabilities, SumToOne) {
  const auto p = paper_pair();
  for (double tau : {0.0, 1e-16, 3e-15}) {
    for (double phase : {0.0, 1.0}) {
      const auto ch = channel_probabilities(p, 0.889, tau, phase);
      EXPECT_NEAR(ch[0] + ch[1] + ch[2] + ch[3], 1.0, 1e-15);
      EXPECT_DOUBLE_EQ(ch[kAB], ch[kBA]);
      EXPECT_DOUBLE_EQ(ch[kAA], ch[kBB]);
    }
  }
}

TEST(ImbalancedBeamsplitter, BalancedLimit) {
  const auto p = paper_pair();
  const BeamsplitterSpec bs{};
  for (int i = 0; i < 200; ++i) {
    const double tau = i * 3e-17;
    EXPECT_NEAR(imbalanced_bs_coincidence(p, bs, tau), coincidence_probability(p, tau), 1e-12);
  }
  EXPECT_DOUBLE_EQ(imbalanced_bs_visibility(bs), 1.0);
}

TEST(ImbalancedBeamsplitter, PaperSplitter) {
  const BeamsplitterSpec bs{0.5, 0.5, 0.61, 0.36};
  const double v = 2 * std::sqrt(0.5 * 0.5 * 0.61 * 0.36) / (0.5 * 0.61 + 0.5 * 0.36);
  EXPECT_NEAR(imbalanced_bs_visibility(bs), v, 1e-15);
  EXPECT_NEAR(imbalanced_bs_visibility(bs), 0.97, 0.005);
  // Visibility read off the fringe itself.
  const auto p = paper_pair();
  const double period = p.beat_period() / kC;
  const double lo = imbalanced_bs_coincidence(p, bs, 0.0);
  const double hi = imbalanced_bs_coincidence(p, bs, 0.5 * period);
  EXPECT_NEAR((hi - lo) / (hi + lo), v, 1e-5);
}

TEST(ImbalancedBeamsplitter, DegenerateCases) {
  EXPECT_DOUBLE_EQ(imbalanced_bs_visibility({1.0, 0.0, 0.5, 0.5}), 0.0);
  EXPECT_THROW(imbalanced_bs_coincidence(paper_pair(), {0.0, 0.0, 0.5, 0.5}, 0.0), DegenerateInputError);
  EXPECT_THROW(imbalanced_bs_visibility({0.7, 0.7, 0.5, 0.5}), DomainError);
}

TEST(PbsLeakage, IdealLimitIsEntangledFringe) {
  const auto p = paper_pair();
  const PbsSpec ideal{};
  for (int i = 0; i < 100; ++i) {
    const double tau = i * 7e-17;
    EXPECT_NEAR(pbs_leakage_fringe(p, ideal, tau), coincidence_probability(p, tau), 1e-15);
  }
  EXPECT_DOUBLE_EQ(pbs_leakage_visibility(ideal), 1.0);
}

TEST(PbsLeakage, NonPolarizingLimit) {
  const auto k = pbs_coefficients(1.0, 1.0);
  for (double prod : {k.t_p * k.r_s, k.r_p * k.t_s, k.t_p * k.t_s, k.r_p * k.r_s}) EXPECT_DOUBLE_EQ(prod, 0.25);
}

TEST(PbsLeakage, CoefficientsReproduceExtinctionRatios) {
  for (double er_t : {2.0, 100.0, 1e4}) {
    for (double er_r : {1.5, 20.0, 1e3}) {
      const auto k = pbs_coefficients(er_t, er_r);
      EXPECT_NEAR(k.t_p / k.t_s, er_t, 1e-9 * er_t);
      EXPECT_NEAR(k.r_s / k.r_p, er_r, 1e-9 * er_r);
      EXPECT_NEAR(k.t_p + k.r_p, 1.0, 1e-15);
      EXPECT_NEAR(k.t_s + k.r_s, 1.0, 1e-15);
    }
  }
  EXPECT_THROW(pbs_coefficients(0.5, 2.0), DomainError);
}

TEST(PbsLeakage, HighExtinctionVisibilityLoss) {
  // A single PBS loses about 1/er_r; the double-filtered arm squares it.
  for (double er_r : {100.0, 300.0, 1000.0}) {
    const double single = 1 - pbs_leakage_visibility({1e4, er_r, false});
    const double dbl = 1 - pbs_leakage_visibility({1e4, er_r, true});
    EXPECT_LT(single, 1.1 / er_r + 1e-4);
    EXPECT_LT(dbl, 0.01);
    EXPECT_LT(dbl, single);
  }
}

TEST(PbsLeakage, VisibilityMonotoneInReflectedExtinction) {
  for (double er_t : {10.0, 1e3, 1e4}) {
    double prev = -1.0;
    for (double er_r = 1.0; er_r < 1e8; er_r *= 1.3) {
      const double v = pbs_leakage_visibility({er_t, er_r, false});
      EXPECT_GE(v, prev - 1e-15) << er_t << " " << er_r;
      prev = v;
    }
    // The double-filtered arm is monotone up to the transmitted-port ratio.
    prev = -1.0;
    for (double er_r = 1.0; er_r <= er_t; er_r *= 1.3) {
      const double v = pbs_leakage_visibility({er_t, er_r, true});
      EXPECT_GE(v, prev - 1e-15) << er_t << " " << er_r;
      prev = v;
    }
  }
}

TEST(PbsLeakage, FringeIsProbability) {
  const auto p = paper_pair();
  for (double er : {1.0, 3.0, 50.0}) {
    for (int i = 0; i < 500; ++i) {
      const double pc = pbs_leakage_fringe(p, {er, er, false}, i * 1.3e-17);
      EXPECT_GE(pc, -1e-15);
      EXPECT_LE(pc, 1.0 + 1e-15);
    }
  }
}

TEST(ClassicalBeat, FourOutcomes) {
  const auto p = paper_pair();
  const auto z = classical_dual_frequency_probs(p, 0.0);
  EXPECT_DOUBLE_EQ(z.p_aa, 0.0);
  EXPECT_DOUBLE_EQ(z.p_bb, 1.0);
  EXPECT_DOUBLE_EQ(z.p_ab, 0.0);
  EXPECT_DOUBLE_EQ(z.p_ba, 0.0);
  const PhotonPairSpec same(1e15, 1e15, 1e11);
  const auto pi = classical_dual_frequency_probs(same, std::numbers::pi / 1e15);
  EXPECT_NEAR(pi.p_aa, 1.0, 1e-15);
  EXPECT_NEAR(pi.p_bb, 0.0, 1e-15);
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> w(1e14, 5e15);
  std::uniform_real_distribution<double> t(-1e-12, 1e-12);
  for (int i = 0; i < 10000; ++i) {
    const double a = w(gen);
    const double b = w(gen);
    const PhotonPairSpec q(std::max(a, b), std::min(a, b), 1e12);
    const auto r = classical_dual_frequency_probs(q, t(gen));
    EXPECT_NEAR(r.p_aa + r.p_bb + r.p_ab + r.p_ba, 1.0, 1e-12);
  }
}

TEST(ClassicalBeat, ProductOfCosines) {
  const auto p = paper_pair();
  EXPECT_DOUBLE_EQ(classical_beat_coincidence(p, 0.0), 0.0);
  for (int i = 0; i < 1000; ++i) {
    const double tau = i * 2.1e-17;
    const auto r = classical_dual_frequency_probs(p, tau);
    const double pc = classical_beat_coincidence(p, tau);
    EXPECT_NEAR(pc, r.p_ab + r.p_ba, 1e-12);
    EXPECT_NEAR(pc, 0.5 * (1 - std::cos(p.omega1() * tau) * std::cos(p.omega2() * tau)), 1e-12);
  }
  const double tau = 1.234e-15;
  EXPECT_NEAR(classical_beat_coincidence(p, tau, ClassicalBeatForm::kPrinted),
              0.5 * (1 - std::cos(2 * p.omega1() * tau) * std::cos(2 * p.omega2() * tau)), 1e-15);
}

TEST(SumFrequency, Fringe) {
  const auto p = paper_pair();
  EXPECT_DOUBLE_EQ(sum_frequency_coincidence(p, 0.0), 1.0);
  const double period = 2 * std::numbers::pi / p.omega_sum();
  EXPECT_NEAR(sum_frequency_coincidence(p, 0.5 * period), 0.0, 1e-15);
  EXPECT_NEAR(sum_frequency_coincidence(p, period), 1.0, 1e-15);
  EXPECT_NEAR(period * kC / units::nm, 531.91, 0.01);
}

TEST(Envelope, Definition) {
  const auto p = paper_pair();
  EXPECT_DOUBLE_EQ(visibility_envelope(p, 0.0), 1.0);
  const double fwhm = envelope_fwhm_path(p.sigma());
  EXPECT_NEAR(visibility_envelope(p, 0.5 * fwhm / kC), 0.5, 1e-14);
  EXPECT_NEAR(fwhm, kC * std::sqrt(2 * std::log(2.0)) / p.sigma(), 1e-15);
}

}  // namespace
}  // namespace beatnote
