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

#ifndef BEATNOTE_STATE_METRICS_HPP_
#define BEATNOTE_STATE_METRICS_HPP_

#include <gsl/gsl_multimin.h>

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "beatnote/errors.hpp"
#include "beatnote/rng.hpp"
#include "beatnote/units.hpp"

namespace beatnote {

using Matrix4c = Eigen::Matrix<std::complex<double>, 4, 4>;
using Vector4c = Eigen::Matrix<std::complex<double>, 4, 1>;
using Matrix2c = Eigen::Matrix<std::complex<double>, 2, 2>;

/// Validated two-qubit density matrix in the basis |00>, |01>, |10>, |11>.
class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit DensityMatrix(const Matrix4c& m) : m_(m) {
    if (!m.allFinite()) throw MatrixError("density matrix has non-finite entries");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kTolerance) {
      throw MatrixError("density matrix is not Hermitian");
    }
    if (std::abs(m.trace() - std::complex<double>(1.0)) > kTolerance) {
      throw MatrixError("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Matrix4c> es(hermitian());
    if (es.eigenvalues().minCoeff() < -kTolerance) {
      throw MatrixError("density matrix has a negative eigenvalue");
    }
  }

  /// Projector onto a normalized pure state.
  static DensityMatrix pure(const Vector4c& psi) { return DensityMatrix(psi * psi.adjoint()); }

  const Matrix4c& matrix() const { return m_; }
  /// Exactly Hermitian copy (mean of the matrix and its adjoint).
  Matrix4c hermitian() const { return 0.5 * (m_ + m_.adjoint()); }

 private:
  Matrix4c m_;
};

/// Bell states Phi+, Phi-, Psi+, Psi-.
inline std::array<Vector4c, 4> bell_states() {
  const double r = 1.0 / std::sqrt(2.0);
  std::array<Vector4c, 4> b;
  for (auto& v : b) v.setZero();
  b[0](0) = r;
  b[0](3) = r;
  b[1](0) = r;
  b[1](3) = -r;
  b[2](1) = r;
  b[2](2) = r;
  b[3](1) = r;
  b[3](2) = -r;
  return b;
}

/// p |Psi+><Psi+| + (1 - p) I/4.
inline DensityMatrix werner_state(double p) {
  const Vector4c psi = bell_states()[2];
  return DensityMatrix(p * psi * psi.adjoint() + (1.0 - p) * Matrix4c::Identity() / 4.0);
}

namespace detail {

/// Hermitian PSD square root with eigenvalues in [-tol, 0) clamped to zero.
inline Matrix4c psd_sqrt(const Matrix4c& h) {
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(h);
  Eigen::Vector4d ev = es.eigenvalues();
  for (int i = 0; i < 4; ++i) ev(i) = std::sqrt(std::max(0.0, ev(i)));
  return es.eigenvectors() * ev.cast<std::complex<double>>().asDiagonal() *
         es.eigenvectors().adjoint();
}

/// Rz(a) Ry(b) Rz(g).
inline Matrix2c su2(double a, double b, double g) {
  using C = std::complex<double>;
  const C ea = std::polar(1.0, -0.5 * a);
  const C eg = std::polar(1.0, -0.5 * g);
  const double cb = std::cos(0.5 * b);
  const double sb = std::sin(0.5 * b);
  Matrix2c u;
  u << ea * eg * cb, -ea * std::conj(eg) * sb, std::conj(ea) * eg * sb,
      std::conj(ea) * std::conj(eg) * cb;
  return u;
}

inline Matrix4c kron(const Matrix2c& a, const Matrix2c& b) {
  Matrix4c k;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return k;
}

}  // namespace detail

/// tr(rho^2).
inline double purity(const DensityMatrix& rho) {
  const Matrix4c h = rho.hermitian();
  return (h * h).trace().real();
}

/// Wootters concurrence.
inline double concurrence(const DensityMatrix& rho) {
  const Matrix4c r = rho.hermitian();
  Matrix2c sy;
  sy << 0.0, std::complex<double>(0.0, -1.0), std::complex<double>(0.0, 1.0), 0.0;
  const Matrix4c yy = detail::kron(sy, sy);
  const Matrix4c tilde = yy * r.conjugate() * yy;
  const Matrix4c sq = detail::psd_sqrt(r);
  const Matrix4c m = sq * tilde * sq;
  Eigen::SelfAdjointEigenSolver<Matrix4c> es(0.5 * (m + m.adjoint()));
  std::array<double, 4> lam;
  for (int i = 0; i < 4; ++i) lam[i] = std::sqrt(std::max(0.0, es.eigenvalues()(i)));
  std::sort(lam.begin(), lam.end(), std::greater<>());
  return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

/// Largest fidelity with one of the four Bell states.
inline double max_bell_fidelity(const DensityMatrix& rho) {
  const Matrix4c h = rho.hermitian();
  double best = 0.0;
  for (const Vector4c& b : bell_states()) best = std::max(best, (b.adjoint() * h * b)(0).real());
  return best;
}

/// Fidelity <Psi-| U^dag rho U |Psi-> for U = U_A(angles[0..2]) x U_B(angles[3..5]).
inline double local_singlet_fidelity(const Matrix4c& rho, const std::array<double, 6>& t) {
  const Matrix4c u =
      detail::kron(detail::su2(t[0], t[1], t[2]), detail::su2(t[3], t[4], t[5]));
  const Vector4c v = u * bell_states()[3];
  return (v.adjoint() * rho * v)(0).real();
}

/// Singlet fraction: the largest singlet fidelity reachable with local
/// unitaries.  Multi-start simplex search over the six Euler angles; the
/// first four starts map the singlet onto each Bell state, so the result is
/// never below max_bell_fidelity.
inline double singlet_fraction(const DensityMatrix& rho, int restarts = 32,
                               std::uint64_t seed = 0x5eed) {
  if (restarts < 8) throw DomainError("singlet fraction needs at least 8 restarts");
  const Matrix4c h = rho.hermitian();

  struct Ctx {
    const Matrix4c* rho;
  } ctx{&h};
  gsl_multimin_function fn;
  fn.n = 6;
  fn.params = &ctx;
  fn.f = [](const gsl_vector* x, void* p) {
    std::array<double, 6> t;
    for (int i = 0; i < 6; ++i) t[i] = gsl_vector_get(x, i);
    return -local_singlet_fidelity(*static_cast<Ctx*>(p)->rho, t);
  };

  // Rz(pi) and Ry(pi) on qubit A take Psi- to Psi+, Phi+ and Phi-.
  const std::array<std::array<double, 6>, 4> bell_starts = {{{0, 0, 0, 0, 0, 0},
                                                             {kPi, 0, 0, 0, 0, 0},
                                                             {0, kPi, 0, 0, 0, 0},
                                                             {kPi, kPi, 0, 0, 0, 0}}};
  Philox4x32 rng(seed, derive_stream(kStreamOptimizer, 0));
  gsl_vector* x = gsl_vector_alloc(6);
  gsl_vector* step = gsl_vector_alloc(6);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 6);
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    for (int i = 0; i < 6; ++i) {
      const double v = r < 4 ? bell_starts[r][i] : kTwoPi * rng.uniform();
      gsl_vector_set(x, i, v);
      gsl_vector_set(step, i, 0.4);
    }
    gsl_multimin_fminimizer_set(s, &fn, x, step);
    for (int it = 0; it < 4000; ++it) {
      if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-9) == GSL_SUCCESS) break;
    }
    best = std::max(best, -gsl_multimin_fminimizer_minimum(s));
    if (r < 4) best = std::max(best, -fn.f(x, &ctx));
  }
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(step);
  gsl_vector_free(x);
  return best;
}

/// Reads a density matrix written as four lines of four complex entries
/// "re+imi" (e.g. "0.5+0i  0-0.25i ...").  Blank lines and lines starting
/// with '#' are skipped.  A bare real number is accepted as re+0i.
inline DensityMatrix parse_density_matrix(std::istream& in) {
  Matrix4c m;
  int row = 0;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    if (row == 4) throw ParseError("density matrix has more than four rows");
    std::istringstream ls(line);
    std::string tok;
    int col = 0;
    while (ls >> tok) {
      if (col == 4) throw ParseError("density matrix row has more than four entries");
      std::istringstream ts(tok);
      double re = 0.0;
      double im = 0.0;
      if (!(ts >> re)) throw ParseError("bad matrix entry '" + tok + "'");
      if (ts.peek() != std::char_traits<char>::eof()) {
        char i = 0;
        if (!(ts >> im >> i) || i != 'i' || ts.peek() != std::char_traits<char>::eof()) {
          throw ParseError("bad matrix entry '" + tok + "'");
        }
      }
      m(row, col++) = {re, im};
    }
    if (col != 4) throw ParseError("density matrix row needs four entries");
    ++row;
  }
  if (row != 4) throw ParseError("density matrix needs four rows");
  return DensityMatrix(m);
}

}  // namespace beatnote

#endif  // BEATNOTE_STATE_METRICS_HPP_
