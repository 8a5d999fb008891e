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

#include "symext/linalg.hpp"

#include <numeric>

namespace symext {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::Singular: return "Singular";
    case ErrorCode::HermiticityInvalid: return "HermiticityInvalid";
    case ErrorCode::TraceInvalid: return "TraceInvalid";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::RangeError: return "RangeError";
    case ErrorCode::NegativeDeterminant: return "NegativeDeterminant";
    case ErrorCode::FullRank: return "FullRank";
    case ErrorCode::NotFullRank: return "NotFullRank";
    case ErrorCode::NotBoundary: return "NotBoundary";
    case ErrorCode::BisectionFailed: return "BisectionFailed";
    case ErrorCode::InadmissibleParameters: return "InadmissibleParameters";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::DegenerateDirection: return "DegenerateDirection";
    case ErrorCode::SearchFailed: return "SearchFailed";
    case ErrorCode::NotInA: return "NotInA";
    case ErrorCode::OptimizationFailed: return "OptimizationFailed";
    case ErrorCode::NotExtendible: return "NotExtendible";
    case ErrorCode::NotTracePreserving: return "NotTracePreserving";
    case ErrorCode::RecursionLimit: return "RecursionLimit";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, double residual)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      residual_(residual) {}

namespace {

template <std::size_t N>
double offdiag_norm(const Mat<N>& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// Cyclic Jacobi. On return `a` is diagonal (to tolerance) and A0 = Z a Z^dag.
template <std::size_t N>
void jacobi(Mat<N>& a, Mat<N>& z) {
  z = Mat<N>::identity();
  const double scale = a.frobenius_norm();
  if (scale == 0.0) return;
  const double tol = kJacobiRelTol * scale;
  const double skip = 1e-300;
  double off = offdiag_norm(a);
  for (int sweep = 0; sweep < kJacobiMaxSweeps && off > tol; ++sweep) {
    for (std::size_t p = 0; p + 1 < N; ++p) {
      for (std::size_t q = p + 1; q < N; ++q) {
        const Cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= skip) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const Cplx ph = apq / mag;
        // V = [[c, s ph], [-s conj(ph), c]] in the (p, q) plane; A <- V^dag A V.
        const Cplx vpp = c, vpq = s * ph, vqp = -s * std::conj(ph), vqq = c;
        for (std::size_t k = 0; k < N; ++k) {
          const Cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = akp * vpp + akq * vqp;
          a(k, q) = akp * vpq + akq * vqq;
        }
        for (std::size_t k = 0; k < N; ++k) {
          const Cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
          a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (std::size_t k = 0; k < N; ++k) {
          const Cplx zkp = z(k, p), zkq = z(k, q);
          z(k, p) = zkp * vpp + zkq * vqp;
          z(k, q) = zkp * vpq + zkq * vqq;
        }
      }
    }
    off = offdiag_norm(a);
  }
  if (off > tol)
    throw Error(ErrorCode::NotConverged,
                "Jacobi eigensolver did not converge (off-diagonal " +
                    std::to_string(off) + ")",
                off);
}

void eig2(const Mat2& m, std::array<double, 2>& w, Mat2& v) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const Cplx b = m(0, 1);
  const double mean = 0.5 * (a + d);
  const double half = 0.5 * (a - d);
  const double r = std::hypot(half, std::abs(b));
  w = {mean + r, mean - r};
  if (std::abs(b) == 0.0) {
    if (a >= d) {
      v = Mat2::identity();
    } else {
      v = Mat2();
      v(1, 0) = 1.0;
      v(0, 1) = 1.0;
    }
    return;
  }
  Vec<2> top;
  if (a >= d) {
    top = {Cplx(w[0] - d), std::conj(b)};
  } else {
    top = {b, Cplx(w[0] - a)};
  }
  const double n = norm(top);
  top[0] /= n;
  top[1] /= n;
  v.set_column(0, top);
  v.set_column(1, Vec<2>{-std::conj(top[1]), std::conj(top[0])});
}

template <std::size_t N>
void fix_phase(Vec<N>& v) {
  for (std::size_t k = 0; k < N; ++k) {
    const double mag = std::abs(v[k]);
    if (mag > kPhaseThreshold) {
      const Cplx ph = std::conj(v[k]) / mag;
      for (auto& z : v) z *= ph;
      v[k] = mag;
      return;
    }
  }
}

}  // namespace

template <std::size_t N>
EigDecomp<N> herm_eig(const HermMat<N>& m) {
  std::array<double, N> raw{};
  Mat<N> vecs;
  if constexpr (N == 2) {
    eig2(m.mat(), raw, vecs);
  } else {
    Mat<N> a = m.mat();
    jacobi(a, vecs);
    for (std::size_t i = 0; i < N; ++i) raw[i] = a(i, i).real();
  }

  std::array<std::size_t, N> order;
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return raw[i] > raw[j]; });

  EigDecomp<N> out;
  std::array<Vec<N>, N> cols;
  for (std::size_t k = 0; k < N; ++k) {
    out.values[k] = raw[order[k]];
    cols[k] = vecs.column(order[k]);
  }

  // Re-orthonormalize degenerate clusters in index order.
  std::size_t start = 0;
  while (start < N) {
    std::size_t end = start + 1;
    while (end < N && out.values[end - 1] - out.values[end] < kDegeneracyGap) ++end;
    if (end - start > 1) {
      std::array<Vec<N>, N> cluster;
      const std::size_t len = end - start;
      for (std::size_t k = 0; k < len; ++k) cluster[k] = cols[start + k];
      const std::size_t kept = gram_schmidt(cluster, len, 0.0);
      for (std::size_t k = 0; k < kept; ++k) cols[start + k] = cluster[k];
    }
    start = end;
  }

  for (std::size_t k = 0; k < N; ++k) {
    fix_phase(cols[k]);
    out.vectors.set_column(k, cols[k]);
  }
  return out;
}

template <std::size_t N>
Cplx det(const Mat<N>& m) {
  Mat<N> a = m;
  Cplx d = 1.0;
  for (std::size_t c = 0; c < N; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < N; ++r)
      if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
    if (a(piv, c) == Cplx{}) return 0.0;
    if (piv != c) {
      for (std::size_t k = 0; k < N; ++k) std::swap(a(c, k), a(piv, k));
      d = -d;
    }
    d *= a(c, c);
    for (std::size_t r = c + 1; r < N; ++r) {
      const Cplx f = a(r, c) / a(c, c);
      for (std::size_t k = c; k < N; ++k) a(r, k) -= f * a(c, k);
    }
  }
  return d;
}

template <std::size_t N>
Mat<N> mat_inv(const Mat<N>& m) {
  const double scale = std::pow(m.frobenius_norm(), static_cast<double>(N));
  const double d = std::abs(det(m));
  if (!(d > 1e-12 * scale))
    throw Error(ErrorCode::Singular, "matrix is singular to working precision", d);
  if constexpr (N == 2) {
    const Cplx dd = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    Mat2 inv;
    inv(0, 0) = m(1, 1) / dd;
    inv(0, 1) = -m(0, 1) / dd;
    inv(1, 0) = -m(1, 0) / dd;
    inv(1, 1) = m(0, 0) / dd;
    return inv;
  } else {
    Mat<N> a = m;
    Mat<N> inv = Mat<N>::identity();
    for (std::size_t c = 0; c < N; ++c) {
      std::size_t piv = c;
      for (std::size_t r = c + 1; r < N; ++r)
        if (std::abs(a(r, c)) > std::abs(a(piv, c))) piv = r;
      if (piv != c)
        for (std::size_t k = 0; k < N; ++k) {
          std::swap(a(c, k), a(piv, k));
          std::swap(inv(c, k), inv(piv, k));
        }
      const Cplx p = a(c, c);
      for (std::size_t k = 0; k < N; ++k) {
        a(c, k) /= p;
        inv(c, k) /= p;
      }
      for (std::size_t r = 0; r < N; ++r) {
        if (r == c) continue;
        const Cplx f = a(r, c);
        if (f == Cplx{}) continue;
        for (std::size_t k = 0; k < N; ++k) {
          a(r, k) -= f * a(c, k);
          inv(r, k) -= f * inv(c, k);
        }
      }
    }
    return inv;
  }
}

template <std::size_t N>
HermMat<N> psd_sqrt(const HermMat<N>& m) {
  const EigDecomp<N> e = herm_eig(m);
  if (e.min() < -kPsdTol)
    throw Error(ErrorCode::NotPSD,
                "matrix has eigenvalue " + std::to_string(e.min()), e.min());
  return HermMat<N>(spectral_apply(e, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; }));
}

double trace_norm2(const Mat2& m) {
  const double f2 = std::pow(m.frobenius_norm(), 2);
  const double d = std::abs(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0));
  return std::sqrt(f2 + 2.0 * d);
}

template EigDecomp<2> herm_eig(const HermMat<2>&);
template EigDecomp<4> herm_eig(const HermMat<4>&);
template EigDecomp<8> herm_eig(const HermMat<8>&);
template Cplx det(const Mat<2>&);
template Cplx det(const Mat<3>&);
template Cplx det(const Mat<4>&);
template Cplx det(const Mat<8>&);
template Mat<2> mat_inv(const Mat<2>&);
template Mat<4> mat_inv(const Mat<4>&);
template HermMat<2> psd_sqrt(const HermMat<2>&);
template HermMat<4> psd_sqrt(const HermMat<4>&);
template HermMat<8> psd_sqrt(const HermMat<8>&);

}  // namespace symext
