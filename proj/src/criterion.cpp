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

#include "symext/criterion.hpp"

#include <vector>

namespace symext {

namespace {

constexpr int kBisectMaxIter = 200;
constexpr double kBisectWidth = 1e-14;
constexpr double kSingularBlock = 1e-10;

double trace_sq(const Mat4& m) { return hs_inner(m, m); }
double trace_sq(const Mat2& m) { return hs_inner(m, m); }

Mat2 block(const Mat4& m, std::size_t r, std::size_t c) {
  Mat2 b;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) b(i, j) = m(2 * r + i, 2 * c + j);
  return b;
}

template <std::size_t K>
Cplx principal_minor(const Mat4& m, const std::array<std::size_t, K>& idx) {
  Mat<K> s;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) s(i, j) = m(idx[i], idx[j]);
  return det(s);
}

}  // namespace

Mat4 ray_point(const Mat4& rho, double t) {
  const Mat4 quarter = Mat4::identity() * 0.25;
  return quarter + (rho - quarter) * t;
}

double purity_gap(const Mat4& m) {
  return trace_sq(partial_trace(m, Party::B)) - trace_sq(m);
}

double f_value(const Mat4& m) {
  double d = det4(m).real();
  if (d < -1e-12)
    throw Error(ErrorCode::NegativeDeterminant, "determinant " + std::to_string(d), d);
  if (d < 0.0) d = 0.0;
  return purity_gap(m) + 4.0 * std::sqrt(d);
}

int numerical_rank(const HermMat<4>& m, double threshold) {
  int r = 0;
  for (double v : eigenvalues(m))
    if (v > threshold) ++r;
  return r;
}

std::string_view to_string(ExtClass c) {
  switch (c) {
    case ExtClass::InteriorExtendible: return "InteriorExtendible";
    case ExtClass::BoundaryExtendible: return "BoundaryExtendible";
    case ExtClass::NonExtendible: return "NonExtendible";
  }
  return "Unknown";
}

Verdict classify(const DensityOp4& rho, double tol_f) {
  Verdict v;
  v.f_value = f_value(rho);
  v.rank = numerical_rank(rho);
  if (v.f_value < -tol_f) {
    v.cls = ExtClass::NonExtendible;
    v.witness = witness_search(rho, tol_f).witness;
  } else if (std::abs(v.f_value) <= tol_f || v.rank < 4) {
    v.cls = ExtClass::BoundaryExtendible;
  } else {
    v.cls = ExtClass::InteriorExtendible;
  }
  return v;
}

bool in_set_a(const DensityOp4& rho) {
  std::vector<double> a, b;
  for (double x : eigenvalues(rho.herm()))
    if (x > kRankThreshold) a.push_back(x);
  for (double x : eigenvalues(HermMat<2>(partial_trace(rho.mat(), Party::B))))
    if (x > kRankThreshold) b.push_back(x);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > 1e-8) return false;
  return true;
}

HermMat<4> hyperplane_operator(const DensityOp4& sigma) {
  const EigDecomp<4> e = herm_eig(sigma.herm());
  if (e.min() <= kRankThreshold)
    throw Error(ErrorCode::Singular, "hyperplane operator needs a full-rank state", e.min());
  const Mat4& s = sigma.mat();
  const double d = std::max(det4(s).real(), 0.0);
  const Mat4 inv = spectral_apply(e, [](double x) { return 1.0 / x; });
  const Mat4 sb = kron(Mat2::identity(), partial_trace(s, Party::B));
  return HermMat<4>(inv * std::sqrt(d) - s + sb);
}

HermMat<4> rank_deficient_hyperplane(const DensityOp4& sigma) {
  const EigDecomp<4> e = herm_eig(sigma.herm());
  Mat4 w;
  int kernel = 0;
  for (std::size_t k = 0; k < 4; ++k)
    if (e.values[k] <= kRankThreshold) {
      w += Mat4::projector(e.vector(k));
      ++kernel;
    }
  if (kernel == 0) throw Error(ErrorCode::FullRank, "state has full rank", e.min());
  return HermMat<4>(w);
}

double bisect_f_on_ray(const Mat4& rho, double t_in, double t_out, double f_tol) {
  for (int it = 0; it < kBisectMaxIter && std::abs(t_out - t_in) > kBisectWidth; ++it) {
    const double mid = 0.5 * (t_in + t_out);
    const double fm = f_value(ray_point(rho, mid));
    if (fm >= 0.0) {
      t_in = mid;
      if (fm <= f_tol) break;
    } else {
      t_out = mid;
    }
  }
  return t_in;
}

WitnessResult witness_search(const DensityOp4& rho, double tol_f) {
  const double f1 = f_value(rho);
  if (!(f1 < -tol_f))
    throw Error(ErrorCode::BisectionFailed, "witness search needs f(rho) < -tol_f", f1);
  const double t = bisect_f_on_ray(rho.mat(), 0.0, 1.0);
  const DensityOp4 sigma(ray_point(rho.mat(), t));
  const HermMat<4> h = hyperplane_operator(sigma);
  const double value = hs_inner(h.mat(), rho.mat());
  if (!(value < 0.0))
    throw Error(ErrorCode::BisectionFailed, "supporting operator does not separate the state",
                value);
  return {h, sigma, t, value};
}

PqrTriple factor_pqr(const DensityOp4& rho) {
  const Mat4& m = rho.mat();
  const Mat2 a = block(m, 0, 0);
  const Mat2 c = block(m, 0, 1);
  const HermMat<2> b(block(m, 1, 1));
  const EigDecomp<2> eb = herm_eig(b);
  PqrTriple t;
  if (eb.min() >= kSingularBlock) {
    t.p = psd_sqrt(b).mat();
    t.q = c * spectral_apply(eb, [](double x) { return 1.0 / std::sqrt(x); });
    const Mat2 d = a - c * spectral_apply(eb, [](double x) { return 1.0 / x; }) * c.adjoint();
    t.r = psd_sqrt(HermMat<2>(d)).mat();
    return t;
  }
  const double beta = eb.max();
  if (beta < kSingularBlock) {
    t.r = psd_sqrt(HermMat<2>(a)).mat();
    return t;
  }
  // B = beta |u><u|, C = |w><u|.
  const Vec<2> u = eb.vector(0);
  const Vec<2> w = c * u;
  const double sb = std::sqrt(beta);
  t.p = Mat2::projector(u) * sb;
  t.q = Mat2::outer(w, u) / sb;
  t.r = psd_sqrt(HermMat<2>(a - Mat2::projector(w) / beta)).mat();
  return t;
}

Mat4 assemble_pqr(const PqrTriple& t) {
  const Mat2 tl = t.q * t.q.adjoint() + t.r * t.r;
  const Mat2 tr = t.q * t.p;
  const Mat2 bl = t.p * t.q.adjoint();
  const Mat2 br = t.p * t.p;
  Mat4 m;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      m(i, j) = tl(i, j);
      m(i, j + 2) = tr(i, j);
      m(i + 2, j) = bl(i, j);
      m(i + 2, j + 2) = br(i, j);
    }
  return m;
}

double pqr_slack(const PqrTriple& t) {
  const double pr = trace_norm2(t.p * t.r);
  const double pqd = trace_norm2(t.p * t.q.adjoint());
  const double pq = trace_norm2(t.p * t.q);
  return pr * pr - pqd * pqd + pq * pq;
}

IdentityResiduals hyperplane_identity_residuals(const HermMat<4>& h) {
  const Mat4& m = h.mat();
  IdentityResiduals r;
  r.minors2 = std::abs(principal_minor<2>(m, {0, 2}) - principal_minor<2>(m, {1, 3}));
  r.minors3 = std::abs(principal_minor<3>(m, {0, 1, 2}) + principal_minor<3>(m, {0, 1, 3}));
  const Mat2 a = block(m, 0, 0);
  const Mat2 b = block(m, 1, 0) * -1.0;
  const Mat2 c = block(m, 1, 1);
  r.schur_trace = std::abs((c - b * mat_inv(a) * b.adjoint()).trace());
  return r;
}

IdentityResiduals boundary_identity_residuals(const DensityOp4& sigma, double tol_f) {
  const double f = f_value(sigma);
  if (std::abs(f) > tol_f) throw Error(ErrorCode::NotBoundary, "state is not on the boundary", f);
  if (numerical_rank(sigma) < 4) throw Error(ErrorCode::NotFullRank, "state is rank deficient");
  return hyperplane_identity_residuals(hyperplane_operator(sigma));
}

}  // namespace symext
