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

#ifndef BEATNOTE_REFERENCE_FRINGES_HPP_
#define BEATNOTE_REFERENCE_FRINGES_HPP_

#include <Eigen/Core>
#include <array>
#include <cmath>
#include <string>

#include "beatnote/errors.hpp"
#include "beatnote/fringe_models.hpp"
#include "beatnote/units.hpp"

namespace beatnote {

/// p(x) = a + b cos(2 pi x / c - d), x in metres of path length.
struct SinusoidFit {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double d = 0.0;
  Eigen::Matrix4d covariance = Eigen::Matrix4d::Zero();
  double residual_rms = 0.0;
  int iterations = 0;

  double operator()(double x) const { return a + b * std::cos(kTwoPi * x / c - d); }
  double derivative(double x) const { return -b * (kTwoPi / c) * std::sin(kTwoPi * x / c - d); }
  double sigma(int i) const { return std::sqrt(std::max(0.0, covariance(i, i))); }
};

/// Metadata of the scan the references were fitted from.
struct ScanMetadata {
  double start = 0.0;
  double stop = 0.0;
  double step = 0.0;
  double integration_time = 0.0;
};

/// One fitted fringe per detector pairing, in channel order AA, AB, BA, BB.
class ReferenceFringeSet {
 public:
  ReferenceFringeSet() = default;
  ReferenceFringeSet(std::array<SinusoidFit, 4> fits, ScanMetadata meta)
      : fits_(fits), meta_(meta) {}

  const SinusoidFit& operator[](int ch) const { return fits_[ch]; }
  SinusoidFit& operator[](int ch) { return fits_[ch]; }
  const std::array<SinusoidFit, 4>& fits() const { return fits_; }
  const ScanMetadata& metadata() const { return meta_; }

  ChannelProbabilities probabilities(double x) const {
    return {fits_[0](x), fits_[1](x), fits_[2](x), fits_[3](x)};
  }
  ChannelProbabilities derivatives(double x) const {
    return {fits_[0].derivative(x), fits_[1].derivative(x), fits_[2].derivative(x),
            fits_[3].derivative(x)};
  }
  /// Coincidence probability AB + BA of the fitted model.
  double coincidence(double x) const { return fits_[kAB](x) + fits_[kBA](x); }

  double mean_period() const {
    return 0.25 * (fits_[0].c + fits_[1].c + fits_[2].c + fits_[3].c);
  }

  /// Checks |b| <= a per channel and that the four channels sum to one within
  /// 2% over the scan range (sampled on 256 points).
  void validate() const {
    for (const SinusoidFit& f : fits_) {
      if (!(f.c > 0.0)) throw ValidityError("reference fringe period must be positive");
      if (std::abs(f.b) > f.a) throw ValidityError("reference fringe has |b| > a");
    }
    if (meta_.stop > meta_.start) {
      for (int i = 0; i <= 256; ++i) {
        const double x = meta_.start + (meta_.stop - meta_.start) * i / 256.0;
        const auto p = probabilities(x);
        const double s = p[0] + p[1] + p[2] + p[3];
        if (s < 0.98 || s > 1.02) {
          throw ValidityError("reference fringes do not sum to one (sum " + std::to_string(s) +
                              ")");
        }
      }
    }
  }

  /// Copy with every offset rescaled to 1/4, amplitudes scaled alike so the
  /// per-channel visibility is kept.
  ReferenceFringeSet centered() const {
    ReferenceFringeSet out = *this;
    for (SinusoidFit& f : out.fits_) {
      if (f.a <= 0.0) throw DegenerateInputError("reference offset must be positive");
      const double k = 0.25 / f.a;
      f.a = 0.25;
      f.b *= k;
    }
    return out;
  }

  /// Noise-free references of the mixed-state model, split evenly over the
  /// four channels.  Useful as a ground truth and in tests.
  static ReferenceFringeSet ideal(double epsilon, double period, ScanMetadata meta = {}) {
    check_epsilon(epsilon);
    std::array<SinusoidFit, 4> f;
    for (int ch = 0; ch < 4; ++ch) {
      const bool coinc = ch == kAB || ch == kBA;
      f[ch].a = 0.25;
      f[ch].b = (coinc ? -0.25 : 0.25) * epsilon;
      f[ch].c = period;
      f[ch].d = 0.0;
    }
    return {f, meta};
  }

 private:
  std::array<SinusoidFit, 4> fits_{};
  ScanMetadata meta_{};
};

}  // namespace beatnote

#endif  // BEATNOTE_REFERENCE_FRINGES_HPP_
