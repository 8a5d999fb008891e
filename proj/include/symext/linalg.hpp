// Copyright 2026 The symext Authors
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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "symext/error.hpp"

namespace symext {

using Cplx = std::complex<double>;

template <std::size_t N>
using Vec = std::array<Cplx, N>;

// Dense N x N complex matrix, row-major.
template <std::size_t N>
class Mat {
 public:
  static constexpr std::size_t kDim = N;

  Mat() { a_.fill(Cplx{}); }

  static Mat identity() {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static Mat diag(const std::array<double, N>& d) {
    Mat m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
    return m;
  }

  // |u><v|
  static Mat outer(const Vec<N>& u, const Vec<N>& v) {
    Mat m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = u[i] * std::conj(v[j]);
    return m;
  }

  static Mat projector(const Vec<N>& u) { return outer(u, u); }

  Cplx& operator()(std::size_t r, std::size_t c) { return a_[r * N + c]; }
  const Cplx& operator()(std::size_t r, std::size_t c) const {
    return a_[r * N + c];
  }

  Mat adjoint() const {
    Mat m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = std::conj((*this)(j, i));
    return m;
  }

  Mat transpose() const {
    Mat m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) m(i, j) = (*this)(j, i);
    return m;
  }

  Mat conj() const {
    Mat m;
    for (std::size_t k = 0; k < N * N; ++k) m.a_[k] = std::conj(a_[k]);
    return m;
  }

  Cplx trace() const {
    Cplx t{};
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const auto& z : a_) s += std::norm(z);
    return std::sqrt(s);
  }

  double max_abs() const {
    double s = 0.0;
    for (const auto& z : a_) s = std::max(s, std::abs(z));
    return s;
  }

  bool all_finite() const {
    return std::all_of(a_.begin(), a_.end(), [](const Cplx& z) {
      return std::isfinite(z.real()) && std::isfinite(z.imag());
    });
  }

  Vec<N> column(std::size_t c) const {
    Vec<N> v;
    for (std::size_t i = 0; i < N; ++i) v[i] = (*this)(i, c);
    return v;
  }

  void set_column(std::size_t c, const Vec<N>& v) {
    for (std::size_t i = 0; i < N; ++i) (*this)(i, c) = v[i];
  }

  Mat& operator+=(const Mat& o) {
    for (std::size_t k = 0; k < N * N; ++k) a_[k] += o.a_[k];
    return *this;
  }
  Mat& operator-=(const Mat& o) {
    for (std::size_t k = 0; k < N * N; ++k) a_[k] -= o.a_[k];
    return *this;
  }
  Mat& operator*=(Cplx s) {
    for (auto& z : a_) z *= s;
    return *this;
  }
  Mat& operator/=(Cplx s) {
    for (auto& z : a_) z /= s;
    return *this;
  }

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator-(Mat a) { return a *= -1.0; }
  friend Mat operator*(Mat a, Cplx s) { return a *= s; }
  friend Mat operator*(Cplx s, Mat a) { return a *= s; }
  friend Mat operator*(Mat a, double s) { return a *= s; }
  friend Mat operator*(double s, Mat a) { return a *= s; }
  friend Mat operator/(Mat a, Cplx s) { return a /= s; }
  friend Mat operator/(Mat a, double s) { return a /= s; }

  friend Mat operator*(const Mat& a, const Mat& b) {
    Mat m;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const Cplx aik = a(i, k);
        if (aik == Cplx{}) continue;
        for (std::size_t j = 0; j < N; ++j) m(i, j) += aik * b(k, j);
      }
    return m;
  }

  friend Vec<N> operator*(const Mat& a, const Vec<N>& v) {
    Vec<N> w{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) w[i] += a(i, j) * v[j];
    return w;
  }

  friend bool operator==(const Mat& a, const Mat& b) { return a.a_ == b.a_; }

 private:
  std::array<Cplx, N * N> a_;
};

using Mat2 = Mat<2>;
using Mat4 = Mat<4>;
using Mat8 = Mat<8>;

template <std::size_t N>
Cplx inner(const Vec<N>& u, const Vec<N>& v) {
  Cplx s{};
  for (std::size_t i = 0; i < N; ++i) s += std::conj(u[i]) * v[i];
  return s;
}

template <std::size_t N>
double norm(const Vec<N>& v) {
  return std::sqrt(std::real(inner(v, v)));
}

// Real part of tr(A B), the Hilbert-Schmidt pairing for Hermitian A, B.
template <std::size_t N>
double hs_inner(const Mat<N>& a, const Mat<N>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) s += std::real(a(i, j) * b(j, i));
  return s;
}

template <std::size_t M, std::size_t N>
Mat<M * N> kron(const Mat<M>& a, const Mat<N>& b) {
  Mat<M * N> m;
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j)
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < N; ++l)
          m(i * N + k, j * N + l) = a(i, j) * b(k, l);
  return m;
}

template <std::size_t M, std::size_t N>
Vec<M * N> kron(const Vec<M>& a, const Vec<N>& b) {
  Vec<M * N> v;
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t k = 0; k < N; ++k) v[i * N + k] = a[i] * b[k];
  return v;
}

// Hermitian matrix. Construction symmetrizes (M + M^dag)/2 and rejects inputs
// whose max-entry asymmetry exceeds 1e-8.
template <std::size_t N>
class HermMat {
 public:
  static constexpr double kAsymmetryTol = 1e-8;

  HermMat() = default;

  explicit HermMat(const Mat<N>& m) {
    if (!m.all_finite())
      throw Error(ErrorCode::HermiticityInvalid, "matrix has non-finite entries");
    const double asym = (m - m.adjoint()).max_abs();
    if (asym > kAsymmetryTol)
      throw Error(ErrorCode::HermiticityInvalid,
                  "matrix is not Hermitian (asymmetry " + std::to_string(asym) + ")",
                  asym);
    m_ = (m + m.adjoint()) * 0.5;
    for (std::size_t i = 0; i < N; ++i) m_(i, i) = m_(i, i).real();
  }

  static HermMat identity() { return HermMat(Mat<N>::identity()); }

  const Mat<N>& mat() const { return m_; }
  const Cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  double trace() const { return m_.trace().real(); }

 private:
  Mat<N> m_;
};

// Descending eigenvalues; eigenvector i is column i of `vectors`.
template <std::size_t N>
struct EigDecomp {
  std::array<double, N> values{};
  Mat<N> vectors;

  Vec<N> vector(std::size_t i) const { return vectors.column(i); }
  double min() const { return values[N - 1]; }
  double max() const { return values[0]; }
};

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiRelTol = 1e-14;
inline constexpr double kDegeneracyGap = 1e-10;
inline constexpr double kPhaseThreshold = 1e-10;
inline constexpr double kPsdTol = 1e-9;

// Full spectral decomposition. 2x2 uses the closed-form quadratic, larger
// sizes use cyclic Jacobi. Output is deterministic: eigenvalues descending,
// degenerate clusters re-orthonormalized in index order, first significant
// component of each eigenvector real positive.
template <std::size_t N>
EigDecomp<N> herm_eig(const HermMat<N>& m);

template <std::size_t N>
std::array<double, N> eigenvalues(const HermMat<N>& m) {
  return herm_eig(m).values;
}

template <std::size_t N>
double min_eigenvalue(const HermMat<N>& m) {
  return herm_eig(m).min();
}

// V diag(fn(lambda)) V^dag
template <std::size_t N, class Fn>
Mat<N> spectral_apply(const EigDecomp<N>& e, Fn fn) {
  Mat<N> out;
  for (std::size_t k = 0; k < N; ++k) {
    const double w = fn(e.values[k]);
    if (w == 0.0) continue;
    const Vec<N> v = e.vector(k);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) out(i, j) += w * v[i] * std::conj(v[j]);
  }
  return out;
}

// LU with partial pivoting.
template <std::size_t N>
Cplx det(const Mat<N>& m);

inline Cplx det4(const Mat4& m) { return det(m); }

// Gauss-Jordan; throws Singular when |det M| <= 1e-12 ||M||_F^N.
template <std::size_t N>
Mat<N> mat_inv(const Mat<N>& m);

// Throws NotPSD when the minimum eigenvalue is below -1e-9; eigenvalues in
// [-1e-9, 0) are clipped.
template <std::size_t N>
HermMat<N> psd_sqrt(const HermMat<N>& m);

// Sum of singular values via (s1 + s2)^2 = ||M||_F^2 + 2 |det M|.
double trace_norm2(const Mat2& m);

// Gram-Schmidt on the given vectors in order; drops vectors whose residual
// norm falls below `drop_tol`. Returns the number kept (written to the front).
template <std::size_t N, std::size_t K>
std::size_t gram_schmidt(std::array<Vec<N>, K>& vs, std::size_t count,
                         double drop_tol = 1e-10) {
  std::size_t kept = 0;
  for (std::size_t i = 0; i < count; ++i) {
    Vec<N> v = vs[i];
    for (int pass = 0; pass < 2; ++pass)
      for (std::size_t j = 0; j < kept; ++j) {
        const Cplx c = inner(vs[j], v);
        for (std::size_t k = 0; k < N; ++k) v[k] -= c * vs[j][k];
      }
    const double nv = norm(v);
    if (nv < drop_tol) continue;
    for (auto& z : v) z /= nv;
    vs[kept++] = v;
  }
  return kept;
}

}  // namespace symext
