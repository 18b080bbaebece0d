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
#include <complex>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "beatnote/state_metrics.hpp"

namespace beatnote {
namespace {

using cd = std::complex<double>;

// Werner state built entry by entry in the computational basis.
Matrix4c werner_by_hand(double p) {
  Matrix4c m = Matrix4c::Identity() * ((1 - p) / 4);
  m(1, 1) += p / 2;
  m(2, 2) += p / 2;
  m(1, 2) += p / 2;
  m(2, 1) += p / 2;
  return m;
}

// Haar-random SU(2) from a uniform unit quaternion.
Matrix2c random_su2(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  double q[4];
  double norm = 0;
  for (double& v : q) {
    v = n(g);
    norm += v * v;
  }
  norm = std::sqrt(norm);
  const cd a(q[0] / norm, q[1] / norm);
  const cd b(q[2] / norm, q[3] / norm);
  Matrix2c u;
  u << a, -std::conj(b), b, std::conj(a);
  return u;
}

Matrix4c kron2(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) k(2 * i + r, 2 * j + c) = a(i, j) * b(r, c);
  return k;
}

Matrix4c random_state(std::mt19937_64& g) {
  std::normal_distribution<double> n;
  Matrix4c a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = cd(n(g), n(g));
  Matrix4c r = a * a.adjoint();
  r /= r.trace();
  return 0.5 * (r + Matrix4c(r.adjoint()));
}

TEST(DensityMatrix, Validation) {
  EXPECT_NO_THROW(DensityMatrix(Matrix4c::Identity() / 4.0));
  Matrix4c m = Matrix4c::Identity() / 4.0;
  m(0, 1) = 0.1;
  EXPECT_THROW(DensityMatrix{m}, MatrixError);
  EXPECT_THROW(DensityMatrix(Matrix4c::Identity() / 2.0), MatrixError);
  Matrix4c neg = Matrix4c::Zero();
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  EXPECT_THROW(DensityMatrix{neg}, MatrixError);
  Matrix4c bad = Matrix4c::Identity() / 4.0;
  bad(3, 3) = NAN;
  EXPECT_THROW(DensityMatrix{bad}, MatrixError);
}

TEST(WernerState, MatchesHandConstruction) {
  for (double p : {0.0, 0.3, 0.9, 1.0}) {
    EXPECT_LT((werner_state(p).matrix() - werner_by_hand(p)).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(Purity, KnownStates) {
  for (const auto& b : bell_states()) EXPECT_NEAR(purity(DensityMatrix::pure(b)), 1.0, 1e-12);
  EXPECT_NEAR(purity(DensityMatrix(Matrix4c::Identity() / 4.0)), 0.25, 1e-15);
  for (double p : {0.0, 1.0 / 3.0, 0.9, 1.0}) {
    const Matrix4c m = werner_by_hand(p);
    const double direct = (m * m).trace().real();
    EXPECT_NEAR(purity(werner_state(p)), direct, 1e-12);
    EXPECT_NEAR(purity(werner_state(p)), p * p + p * (1 - p) / 2 + (1 - p) * (1 - p) / 4, 1e-12);
  }
  EXPECT_NEAR(purity(werner_state(0.9)), 0.8575, 1e-12);
}

TEST(Concurrence, KnownStates) {
  for (const auto& b : bell_states()) EXPECT_NEAR(concurrence(DensityMatrix::pure(b)), 1.0, 1e-9);
  Vector4c hh = Vector4c::Zero();
  hh(0) = 1.0;
  EXPECT_NEAR(concurrence(DensityMatrix::pure(hh)), 0.0, 1e-9);
  for (double p : {0.0, 1.0 / 3.0, 0.9, 1.0}) {
    EXPECT_NEAR(concurrence(werner_state(p)), std::max(0.0, (3 * p - 1) / 2), 1e-9) << p;
  }
}

TEST(Concurrence, PureStateFormula) {
  // |C| = 2 |ad - bc| for a|00> + b|01> + c|10> + d|11>.
  std::mt19937_64 g(11);
  std::normal_distribution<double> n;
  for (int k = 0; k < 50; ++k) {
    Vector4c v;
    for (int i = 0; i < 4; ++i) v(i) = cd(n(g), n(g));
    v.normalize();
    EXPECT_NEAR(concurrence(DensityMatrix::pure(v)), 2 * std::abs(v(0) * v(3) - v(1) * v(2)), 1e-7);
  }
}

TEST(Concurrence, SeparableMixturesVanish) {
  std::mt19937_64 g(5);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 50; ++k) {
    Matrix4c rho = Matrix4c::Zero();
    double wsum = 0;
    for (int t = 0; t < 4; ++t) {
      const Matrix2c ua = random_su2(g);
      const Matrix2c ub = random_su2(g);
      Eigen::Vector2cd a = ua.col(0);
      Eigen::Vector2cd b = ub.col(0);
      Eigen::Vector4cd ab;
      ab << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
      const double w = u(g);
      wsum += w;
      rho += w * ab * ab.adjoint();
    }
    rho /= wsum;
    EXPECT_NEAR(concurrence(DensityMatrix(0.5 * (rho + Matrix4c(rho.adjoint())))), 0.0, 1e-9);
  }
}

TEST(StateMetrics, LocalUnitaryInvariance) {
  std::mt19937_64 g(17);
  for (int k = 0; k < 30; ++k) {
    const Matrix4c r = random_state(g);
    const Matrix4c u = kron2(random_su2(g), random_su2(g));
    const Matrix4c t = u * r * u.adjoint();
    const DensityMatrix a(r);
    const DensityMatrix b(0.5 * (t + Matrix4c(t.adjoint())));
    EXPECT_NEAR(purity(a), purity(b), 1e-9);
    EXPECT_NEAR(concurrence(a), concurrence(b), 1e-9);
  }
}

TEST(SingletFraction, KnownStates) {
  for (const auto& b : bell_states()) EXPECT_NEAR(singlet_fraction(DensityMatrix::pure(b)), 1.0, 1e-6);
  EXPECT_NEAR(singlet_fraction(DensityMatrix(Matrix4c::Identity() / 4.0)), 0.25, 1e-6);
  for (double p : {0.0, 1.0 / 3.0, 0.9, 1.0}) {
    EXPECT_NEAR(singlet_fraction(werner_state(p)), (1 + 3 * p) / 4, 1e-4) << p;
  }
  EXPECT_THROW(singlet_fraction(werner_state(0.5), 4), DomainError);
}

TEST(SingletFraction, DominatesSampledUnitaries) {
  // Dense random sampling of local unitaries never beats the optimizer.
  std::mt19937_64 g(23);
  const DensityMatrix w = werner_state(0.9);
  const Vector4c singlet = bell_states()[3];
  double sampled = 0;
  for (int k = 0; k < 20000; ++k) {
    const Vector4c v = kron2(random_su2(g), random_su2(g)) * singlet;
    sampled = std::max(sampled, (v.adjoint() * w.matrix() * v)(0).real());
  }
  const double sf = singlet_fraction(w);
  EXPECT_LE(sampled, sf + 1e-9);
  EXPECT_NEAR(sampled, 0.925, 5e-3);
}

TEST(SingletFraction, AtLeastBellFidelity) {
  std::mt19937_64 g(29);
  for (int k = 0; k < 100; ++k) {
    const DensityMatrix r(random_state(g));
    EXPECT_GE(singlet_fraction(r, 8), max_bell_fidelity(r) - 1e-12);
  }
}

TEST(ParseDensityMatrix, TextFormat) {
  std::istringstream in(
      "# Psi- singlet\n"
      "0 0 0 0\n"
      "\n"
      "0 0.5+0i -0.5+0i 0\n"
      "0 -0.5-0i 0.5 0\n"
      "0+0i 0 0 0-0i\n");
  const auto rho = parse_density_matrix(in);
  EXPECT_NEAR(concurrence(rho), 1.0, 1e-9);
  std::istringstream cplx("0.25 0+0.1i 0 0\n0-0.1i 0.25 0 0\n0 0 0.25 0\n0 0 0 0.25\n");
  EXPECT_DOUBLE_EQ(parse_density_matrix(cplx).matrix()(0, 1).imag(), 0.1);
}

TEST(ParseDensityMatrix, Errors) {
  auto parse = [](const std::string& s) {
    std::istringstream in(s);
    return parse_density_matrix(in);
  };
  EXPECT_THROW(parse("1 0 0 0\n0 0 0 0\n0 0 0 0\n"), ParseError);
  EXPECT_THROW(parse("1 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n"), ParseError);
  EXPECT_THROW(parse("1 0 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n"), ParseError);
  EXPECT_THROW(parse("1 0 0 x\n0 0 0 0\n0 0 0 0\n0 0 0 0\n"), ParseError);
  EXPECT_THROW(parse("1 0 0 0+1j\n0 0 0 0\n0 0 0 0\n0 0 0 0\n"), ParseError);
  EXPECT_THROW(parse("0.5 0 0 0\n0 0 0 0\n0 0 0 0\n0 0 0 0\n"), MatrixError);
}

}  // namespace
}  // namespace beatnote
