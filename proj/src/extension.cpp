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

#include "symext/extension.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numbers>
#include <tuple>

#include "symext/oracle.hpp"

namespace symext {

namespace {

constexpr double kCoefTol = 1e-12;
constexpr int kMaxDepth = 3;

Mat2 block(const Mat4& m, std::size_t r, std::size_t c) {
  Mat2 b;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) b(i, j) = m(2 * r + i, 2 * c + j);
  return b;
}

void require_full_rank_boundary(const DensityOp4& sigma, double tol_f) {
  if (numerical_rank(sigma) < 4) throw Error(ErrorCode::NotFullRank, "state is rank deficient");
  const double f = f_value(sigma);
  if (std::abs(f) > tol_f) throw Error(ErrorCode::NotBoundary, "state is not on the boundary", f);
}

struct FaceBlocks {
  double a11, a22;
  Cplx a12, a21;
  Cplx b11, b12, b21, b22;
};

FaceBlocks face_blocks(const HermMat<4>& h, const Mat2& u) {
  const Mat2 a = u.adjoint() * block(h.mat(), 0, 0) * u;
  const Mat2 b = u.adjoint() * (block(h.mat(), 1, 0) * -1.0) * u;
  return {a(0, 0).real(), a(1, 1).real(), a(0, 1), a(1, 0), b(0, 0), b(0, 1), b(1, 0), b(1, 1)};
}

FaceCoefficients coefficients(const FaceBlocks& k) {
  return {k.a12 * k.b11 - k.b12 * k.a11, k.a21 * k.b22 - k.a22 * k.b21};
}

void check_unitary(const Mat2& u) {
  const double dev = (u.adjoint() * u - Mat2::identity()).frobenius_norm();
  if (dev > 1e-10)
    throw Error(ErrorCode::InadmissibleParameters, "face unitary is not unitary", dev);
}

// Unnormalized face state from the blocks of H(sigma). The k/x and k/y
// quotients are taken as 0 when k vanishes, which is their limit on the face.
Mat4 face_matrix(const FaceBlocks& b, const Mat2& u, double x, double y) {
  const FaceCoefficients k = coefficients(b);
  const double n1 = std::abs(k.k1), n2 = std::abs(k.k2);
  if (n1 <= kCoefTol && n2 <= kCoefTol)
    throw Error(ErrorCode::DegenerateFace, "both face coefficients vanish", std::max(n1, n2));
  if (!(x >= 0.0 && y >= 0.0) || (x == 0.0 && y == 0.0))
    throw Error(ErrorCode::InadmissibleParameters, "x, y must be non-negative and not both 0");
  if (!face_admissible(k, x, y))
    throw Error(ErrorCode::InadmissibleParameters, "(x, y) violates the face constraint");
  if ((x == 0.0 && n1 > kCoefTol) || (y == 0.0 && n2 > kCoefTol))
    throw Error(ErrorCode::InadmissibleParameters, "zero parameter with nonzero coefficient");

  const Cplx kx = n1 <= kCoefTol ? Cplx{} : k.k1 / x;
  const Cplx ky = n2 <= kCoefTol ? Cplx{} : k.k2 / y;
  const double a11 = b.a11, a22 = b.a22;
  const Cplx a12 = b.a12, a21 = b.a21;
  const double det_a = a11 * a22 - std::norm(a12);
  const double tr_a = a11 + a22;
  const double scale = det_a * tr_a;
  if (std::abs(scale) <= kCoefTol)
    throw Error(ErrorCode::DegenerateFace, "top-left block of H is singular", scale);

  const double x2 = x * x, y2 = y * y;
  const double s2 = a11 * y2 + a22 * x2;
  const Cplx alpha = (a11 * a22 + a22 * a22 - a12 * a21) * std::conj(b.b11) -
                     a12 * a22 * std::conj(b.b12);
  const Cplx gamma = (a11 * a22 + a11 * a11 - a12 * a21) * std::conj(b.b22) -
                     a21 * a11 * std::conj(b.b21);

  Mat2 qd;
  qd(0, 0) = alpha * x + a12 * std::conj(kx) * y2;
  qd(0, 1) = -s2 * std::conj(ky);
  qd(1, 0) = -s2 * std::conj(kx);
  qd(1, 1) = a21 * std::conj(ky) * x2 + gamma * y;

  PqrTriple t;
  t.p = u * Mat2::diag({x, y}) * u.adjoint();
  t.q = u * qd * u.adjoint() / scale;

  const double pre = (x2 - y2) * (std::norm(kx) - std::norm(ky));
  Mat2 m;
  m(0, 0) = a22 * a22 * x2 + std::norm(a12) * y2;
  m(0, 1) = -a12 * s2;
  m(1, 0) = -a21 * s2;
  m(1, 1) = std::norm(a21) * x2 + a11 * a11 * y2;
  const Mat2 sq = psd_sqrt(HermMat<2>(m)).mat();
  t.r = u * sq * u.adjoint() * (std::sqrt(std::max(pre, 0.0)) / scale);
  return assemble_pqr(t);
}

std::array<double, 3> bloch(const Mat2& b, bool imag_part) {
  const Cplx mx = 0.5 * (b(0, 1) + b(1, 0));
  const Cplx my = Cplx(0.0, 0.5) * (b(0, 1) - b(1, 0));
  const Cplx mz = 0.5 * (b(0, 0) - b(1, 1));
  if (imag_part) return {mx.imag(), my.imag(), mz.imag()};
  return {mx.real(), my.real(), mz.real()};
}

Mat2 su2_from_quaternion(double w, double x, double y, double z, double sign) {
  Mat2 m;
  const Cplx i(0.0, 1.0);
  m(0, 0) = w - sign * i * z;
  m(0, 1) = -sign * (i * x + y);
  m(1, 0) = -sign * (i * x - y);
  m(1, 1) = w + sign * i * z;
  return m;
}

Mat2 su2_from_euler(double a, double b, double g) {
  const Cplx i(0.0, 1.0);
  auto rz = [&](double t) {
    Mat2 r;
    r(0, 0) = std::exp(-i * (t / 2));
    r(1, 1) = std::exp(i * (t / 2));
    return r;
  };
  Mat2 ry;
  ry(0, 0) = std::cos(b / 2);
  ry(0, 1) = -std::sin(b / 2);
  ry(1, 0) = std::sin(b / 2);
  ry(1, 1) = std::cos(b / 2);
  return rz(a) * ry * rz(g);
}

Vec<8> apply_bprime(const Vec<8>& psi, const Mat2& w) {
  Vec<8> out{};
  for (std::size_t ab = 0; ab < 4; ++ab)
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t d = 0; d < 2; ++d) out[2 * ab + c] += w(c, d) * psi[2 * ab + d];
  return out;
}

double pure_residual(const Vec<8>& psi, const Mat4& a) {
  const Mat8 p = Mat8::projector(psi);
  const double r1 = (partial_trace3(p, Pair::AB) - a).frobenius_norm();
  const double r2 = (partial_trace3(p, Pair::ABprime) - a).frobenius_norm();
  return std::max(r1, r2);
}

// Minimal Nelder-Mead on R^3.
std::array<double, 3> nelder_mead(const std::function<double(const std::array<double, 3>&)>& fn,
                                  std::array<double, 3> start, double step, int max_eval,
                                  double ftol) {
  using P = std::array<double, 3>;
  std::array<P, 4> s;
  std::array<double, 4> v;
  s[0] = start;
  for (int k = 0; k < 3; ++k) {
    s[k + 1] = start;
    s[k + 1][k] += step;
  }
  for (int k = 0; k < 4; ++k) v[k] = fn(s[k]);
  int evals = 4;
  auto lerp = [](const P& a, const P& b, double t) {
    P r;
    for (int k = 0; k < 3; ++k) r[k] = a[k] + t * (b[k] - a[k]);
    return r;
  };
  while (evals < max_eval) {
    std::array<int, 4> idx = {0, 1, 2, 3};
    std::sort(idx.begin(), idx.end(), [&](int i, int j) { return v[i] < v[j]; });
    std::array<P, 4> s2;
    std::array<double, 4> v2;
    for (int k = 0; k < 4; ++k) {
      s2[k] = s[idx[k]];
      v2[k] = v[idx[k]];
    }
    s = s2;
    v = v2;
    if (v[3] - v[0] <= ftol * (std::abs(v[0]) + 1e-300) || v[0] <= ftol) break;
    P c{};
    for (int k = 0; k < 3; ++k)
      for (int d = 0; d < 3; ++d) c[d] += s[k][d] / 3.0;
    const P xr = lerp(c, s[3], -1.0);
    const double fr = fn(xr);
    ++evals;
    if (fr < v[0]) {
      const P xe = lerp(c, s[3], -2.0);
      const double fe = fn(xe);
      ++evals;
      if (fe < fr) {
        s[3] = xe;
        v[3] = fe;
      } else {
        s[3] = xr;
        v[3] = fr;
      }
    } else if (fr < v[2]) {
      s[3] = xr;
      v[3] = fr;
    } else {
      const P xc = fr < v[3] ? lerp(c, xr, 0.5) : lerp(c, s[3], 0.5);
      const double fc = fn(xc);
      ++evals;
      if (fc < std::min(fr, v[3])) {
        s[3] = xc;
        v[3] = fc;
      } else {
        for (int k = 1; k < 4; ++k) {
          s[k] = lerp(s[0], s[k], 0.5);
          v[k] = fn(s[k]);
          ++evals;
        }
      }
    }
  }
  int best = 0;
  for (int k = 1; k < 4; ++k)
    if (v[k] < v[best]) best = k;
  return s[best];
}

Decomposition scale(const Decomposition& parts, double w) {
  Decomposition out;
  for (const auto& p : parts) out.push_back({p.weight * w, p.state});
  return out;
}

void append(Decomposition& dst, const Decomposition& src) {
  dst.insert(dst.end(), src.begin(), src.end());
}

// Point of the ray I/4 + t (rho - I/4) where the PSD cone is left, with the
// vanishing eigenvalue set to exactly zero.
DensityOp4 psd_exit_point(const EigDecomp<4>& dir, double t) {
  return DensityOp4::normalized(spectral_apply(dir, [&](double mu) {
    const double v = 0.25 + t * mu;
    return v > 1e-15 ? v : 0.0;
  }));
}

Decomposition decompose_rec(const DensityOp4& rho, double tol_f, int depth);

Decomposition decompose_interior(const DensityOp4& rho, double tol_f, int depth) {
  Mat4 d = rho.mat() - Mat4::identity() * 0.25;
  Mat4 base = rho.mat();
  double t_rho = 1.0;
  if (d.frobenius_norm() < 1e-12) {
    // I/4 itself: split along Z (x) Z.
    Mat4 zz = Mat4::diag({1.0, -1.0, -1.0, 1.0});
    base = Mat4::identity() * 0.25 + zz * 0.125;
    d = zz * 0.125;
    t_rho = 0.0;
  }
  const EigDecomp<4> e = herm_eig(HermMat<4>(d));
  const double t_plus_psd = -0.25 / e.min();
  const double t_minus_psd = -0.25 / e.max();
  // Points are I/4 + t d; rho sits at t_rho.
  auto hit = [&](double t_edge, double t_inside) -> std::pair<double, DensityOp4> {
    DensityOp4 edge = psd_exit_point(e, t_edge);
    if (f_value(edge) >= -tol_f) return {t_edge, edge};
    const double t = bisect_f_on_ray(base, t_inside, t_edge, 0.0);
    return {t, DensityOp4::normalized(ray_point(base, t))};
  };
  auto [tp, sp] = hit(t_plus_psd, t_rho);
  auto [tm, sm] = hit(t_minus_psd, t_rho);
  const double wp = (t_rho - tm) / (tp - tm);
  Decomposition out = scale(decompose_rec(sp, tol_f, depth + 1), wp);
  append(out, scale(decompose_rec(sm, tol_f, depth + 1), 1.0 - wp));
  return out;
}

Decomposition decompose_rec(const DensityOp4& rho, double tol_f, int depth) {
  if (depth > kMaxDepth)
    throw Error(ErrorCode::RecursionLimit, "decomposition exceeded depth " +
                                               std::to_string(kMaxDepth));
  const int rank = numerical_rank(rho);
  if (rank <= 2) return decompose_rank2(rho, tol_f);
  if (rank == 3) {
    Decomposition out;
    for (const auto& p : decompose_rank3(rho, tol_f).parts)
      append(out, scale(decompose_rec(p.state, tol_f, depth + 1), p.weight));
    return out;
  }
  if (std::abs(f_value(rho)) <= tol_f) {
    Decomposition out;
    for (const auto& p : decompose_full_rank_boundary(rho, tol_f))
      append(out, scale(decompose_rec(p.state, tol_f, depth + 1), p.weight));
    return out;
  }
  return decompose_interior(rho, tol_f, depth);
}

}  // namespace

HermMat<8> three_qubit_hamiltonian(const DensityOp4& sigma, double tol_f) {
  require_full_rank_boundary(sigma, tol_f);
  const Mat8 hab = kron(hyperplane_operator(sigma).mat(), Mat2::identity());
  return HermMat<8>(hab + swap_bbprime(hab));
}

std::vector<Vec<8>> ground_space(const HermMat<8>& h, double tol) {
  const EigDecomp<8> e = herm_eig(h);
  std::vector<Vec<8>> raw;
  for (std::size_t k = 0; k < 8; ++k)
    if (e.values[k] <= e.min() + tol) raw.push_back(e.vector(k));

  std::array<Vec<8>, 8> sym{}, anti{};
  for (std::size_t k = 0; k < raw.size(); ++k) {
    const Vec<8> s = swap_bbprime(raw[k]);
    for (std::size_t i = 0; i < 8; ++i) {
      sym[k][i] = 0.5 * (raw[k][i] + s[i]);
      anti[k][i] = 0.5 * (raw[k][i] - s[i]);
    }
  }
  const std::size_t ns = gram_schmidt(sym, raw.size(), 1e-6);
  const std::size_t na = gram_schmidt(anti, raw.size(), 1e-6);
  if (ns + na != raw.size()) return raw;
  std::vector<Vec<8>> out(sym.begin(), sym.begin() + ns);
  out.insert(out.end(), anti.begin(), anti.begin() + na);
  return out;
}

FaceCoefficients face_coefficients(const DensityOp4& sigma, const Mat2& u) {
  return coefficients(face_blocks(hyperplane_operator(sigma), u));
}

bool face_admissible(const FaceCoefficients& k, double x, double y, double tol) {
  const double m = std::max(x, y);
  if (!(m > 0.0)) return false;
  const double xs = x / m, ys = y / m;
  return (xs - ys) * (std::abs(k.k2) * xs - std::abs(k.k1) * ys) <= tol;
}

Mat4 face_state_unnormalized(const DensityOp4& sigma, const FacePoint& fp) {
  check_unitary(fp.u);
  return face_matrix(face_blocks(hyperplane_operator(sigma), fp.u), fp.u, fp.x, fp.y);
}

DensityOp4 face_state(const DensityOp4& sigma, const FacePoint& fp, double tol_f) {
  require_full_rank_boundary(sigma, tol_f);
  return DensityOp4::normalized(face_state_unnormalized(sigma, fp));
}

std::pair<DensityOp4, DensityOp4> face_rank2_endpoints(const DensityOp4& sigma, const Mat2& u,
                                                       double tol_f) {
  require_full_rank_boundary(sigma, tol_f);
  check_unitary(u);
  const FaceBlocks b = face_blocks(hyperplane_operator(sigma), u);
  const FaceCoefficients k = coefficients(b);
  return {DensityOp4::normalized(face_matrix(b, u, 1.0, 1.0)),
          DensityOp4::normalized(face_matrix(b, u, std::abs(k.k1), std::abs(k.k2)))};
}

FacePoint face_point_of(const DensityOp4& sigma) {
  const PqrTriple t = factor_pqr(sigma);
  const EigDecomp<2> e = herm_eig(HermMat<2>(t.p));
  return {e.vectors, std::max(e.values[0], 0.0), std::max(e.values[1], 0.0)};
}

Mat4 recombine(const Decomposition& parts) {
  Mat4 m;
  for (const auto& p : parts) m += p.state.mat() * p.weight;
  return m;
}

DensityOp4 truncate_rank(const Mat4& m, int rank) {
  const EigDecomp<4> e = herm_eig(HermMat<4>(m));
  return DensityOp4::normalized(spectral_apply(e, [&, k = 0](double v) mutable {
    return (k++ < rank && v > 0.0) ? v : 0.0;
  }));
}

Decomposition decompose_full_rank_boundary(const DensityOp4& sigma, double tol_f) {
  require_full_rank_boundary(sigma, tol_f);
  const FacePoint fp = face_point_of(sigma);
  const FaceBlocks b = face_blocks(hyperplane_operator(sigma), fp.u);
  const FaceCoefficients k = coefficients(b);
  const double n1 = std::abs(k.k1), n2 = std::abs(k.k2);
  const double denom = n1 * n1 - n2 * n2;
  if (std::abs(denom) <= kCoefTol)
    throw Error(ErrorCode::DegenerateFace, "face endpoints coincide", denom);
  // Entries of the face state are linear in (x^2, y^2): sigma = al E1 + be E2
  // with E1 at (1, 1) and E2 at (|k1|, |k2|).
  const double be = (fp.x * fp.x - fp.y * fp.y) / denom;
  const double al = fp.x * fp.x - be * n1 * n1;
  const Mat4 e1 = face_matrix(b, fp.u, 1.0, 1.0);
  const Mat4 e2 = face_matrix(b, fp.u, n1, n2);
  double w1 = al * e1.trace().real();
  double w2 = be * e2.trace().real();
  if (w1 < -1e-9 || w2 < -1e-9)
    throw Error(ErrorCode::DegenerateFace, "negative mixing weight", std::min(w1, w2));
  w1 = std::max(w1, 0.0);
  w2 = std::max(w2, 0.0);
  const double tot = w1 + w2;
  Decomposition out;
  if (w1 > 0.0) out.push_back({w1 / tot, truncate_rank(e1, 2)});
  if (w2 > 0.0) out.push_back({w2 / tot, truncate_rank(e2, 2)});
  const double res = (recombine(out) - sigma.mat()).frobenius_norm();
  if (res > 1e-8)
    throw Error(ErrorCode::DegenerateFace, "face decomposition does not reproduce the state", res);
  return out;
}

Rank3Decomposition decompose_rank3(const DensityOp4& sigma, double tol_f) {
  const EigDecomp<4> e = herm_eig(sigma.herm());
  if (numerical_rank(sigma) != 3)
    throw Error(ErrorCode::NotFullRank, "expected a rank-3 state", e.min());
  const double f = f_value(sigma);
  if (f < -tol_f) throw Error(ErrorCode::NotExtendible, "state violates the criterion", f);

  const Mat4 s = truncate_rank(sigma.mat(), 3).mat();
  const Vec<4> kvec = e.vector(3);

  // Schmidt form of the kernel vector: K = W S V^dag, UA = W^dag, UB = V^T.
  Mat2 kmat;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) kmat(i, j) = kvec[2 * i + j];
  const EigDecomp<2> ek = herm_eig(HermMat<2>(kmat.adjoint() * kmat));
  Mat2 v = ek.vectors;
  Mat2 w;
  {
    Vec<2> w0 = kmat * v.column(0);
    const double n0 = norm(w0);
    for (auto& z : w0) z /= n0;
    Vec<2> w1 = kmat * v.column(1);
    const double n1 = norm(w1);
    if (n1 > 1e-12) {
      for (auto& z : w1) z /= n1;
    } else {
      w1 = {-std::conj(w0[1]), std::conj(w0[0])};
    }
    w.set_column(0, w0);
    w.set_column(1, w1);
  }
  const Mat4 l = kron(w.adjoint(), v.transpose());
  const Vec<4> kp = l * kvec;
  const Cplx a = kp[0], b = kp[3];
  const double n = std::sqrt(std::norm(a) + std::norm(b));
  const Cplx p = std::conj(b) / n, q = -std::conj(a) / n;

  Mat4 mp;
  mp(0, 1) = std::conj(b) * std::conj(p);
  mp(0, 2) = std::conj(b) * std::conj(q);
  mp(1, 0) = b * p;
  mp(1, 3) = -a * p;
  mp(2, 0) = b * q;
  mp(2, 3) = -a * q;
  mp(3, 1) = -std::conj(a) * std::conj(p);
  mp(3, 2) = -std::conj(a) * std::conj(q);
  const Mat4 m = HermMat<4>(l.adjoint() * mp * l).mat();
  if (m.frobenius_norm() < 1e-12)
    throw Error(ErrorCode::DegenerateDirection, "perturbation direction vanishes");

  const Mat4 kproj = Mat4::projector(kvec);
  auto support_min = [&](double eps) {
    return min_eigenvalue(HermMat<4>(s + m * eps + kproj));
  };
  auto edge = [&](double sign) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 64 && support_min(sign * hi) > 0.0; ++it) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (support_min(sign * mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
    return sign * lo;
  };

  Rank3Decomposition out;
  out.quadratic_coefficient = std::norm(a * p + std::conj(b) * std::conj(q));
  out.direction = m;
  out.eps_plus = edge(1.0);
  out.eps_minus = edge(-1.0);
  const double wp = -out.eps_minus / (out.eps_plus - out.eps_minus);
  out.parts.push_back({wp, truncate_rank(s + m * out.eps_plus, 2)});
  out.parts.push_back({1.0 - wp, truncate_rank(s + m * out.eps_minus, 2)});
  return out;
}

Decomposition decompose_rank2(const DensityOp4& rho, double tol_f) {
  if (numerical_rank(rho) > 2) throw Error(ErrorCode::NotFullRank, "expected rank <= 2");
  const double f = f_value(rho);
  if (f < -tol_f) throw Error(ErrorCode::NotExtendible, "state violates the criterion", f);
  if (in_set_a(rho)) return {{1.0, rho}};

  const EigDecomp<4> e = herm_eig(rho.herm());
  const Vec<4> v1 = e.vector(0), v2 = e.vector(1);
  const double l1 = std::clamp(e.values[0], 0.0, 1.0);
  const double l2 = std::clamp(e.values[1], 0.0, 1.0);
  const double r0 = (l1 - l2) / (l1 + l2);

  // States on the support are V (I + r.sigma) V^dag / 2 with V = [v1 v2]; rho
  // sits at r0 e_z. The purity gap g vanishes exactly on the set A, is >= 0 at
  // rho and <= 0 on the sphere, so every chord through rho brackets two roots.
  auto state_at = [&](const std::array<double, 3>& r) {
    const Cplx c01(r[0], -r[1]);
    return (Mat4::projector(v1) * (1.0 + r[2]) + Mat4::projector(v2) * (1.0 - r[2]) +
            Mat4::outer(v1, v2) * c01 + Mat4::outer(v2, v1) * std::conj(c01)) *
           0.5;
  };
  auto point = [&](const std::array<double, 3>& d, double t) {
    return std::array<double, 3>{t * d[0], t * d[1], r0 + t * d[2]};
  };
  auto root = [&](const std::array<double, 3>& d, double t_in, double t_out) {
    for (int it = 0; it < 200 && std::abs(t_out - t_in) > 1e-16; ++it) {
      const double mid = 0.5 * (t_in + t_out);
      if (purity_gap(state_at(point(d, mid))) >= 0.0)
        t_in = mid;
      else
        t_out = mid;
    }
    return 0.5 * (t_in + t_out);
  };

  double best = std::numeric_limits<double>::infinity();
  // Eigenbasis chord first, then a fixed sweep of tilted directions.
  for (int dir = 0; dir < 13; ++dir) {
    std::array<double, 3> d{0.0, 0.0, 1.0};
    if (dir > 0) {
      const double th = std::numbers::pi / 2 * ((dir - 1) / 4 + 1) / 4;
      const double ph = std::numbers::pi / 2 * ((dir - 1) % 4);
      d = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
    }
    // |r0 e_z + t d| = 1
    const double bd = r0 * d[2];
    const double disc = std::sqrt(bd * bd - r0 * r0 + 1.0);
    const double tp = root(d, 0.0, -bd + disc);
    const double tm = root(d, 0.0, -bd - disc);
    if (!(tp > tm)) continue;
    const double wp = -tm / (tp - tm);
    try {
      const DensityOp4 ap = truncate_rank(state_at(point(d, tp)), 2);
      const DensityOp4 am = truncate_rank(state_at(point(d, tm)), 2);
      Decomposition out{{wp, ap}, {1.0 - wp, am}};
      const double res = (recombine(out) - rho.mat()).frobenius_norm();
      best = std::min(best, res);
      if (in_set_a(ap) && in_set_a(am) && res <= 1e-9) return out;
    } catch (const Error&) {
    }
  }
  throw Error(ErrorCode::SearchFailed, "no chord split the state into members of A", best);
}

PureExtension pure_extension(const DensityOp4& a) {
  if (!in_set_a(a)) throw Error(ErrorCode::NotInA, "state is not in the set A");
  const EigDecomp<4> e = herm_eig(a.herm());
  if (e.values[2] > kRankThreshold) throw Error(ErrorCode::NotInA, "rank exceeds 2");

  Vec<8> psi0{};
  for (std::size_t i = 0; i < 2; ++i) {
    const double l = std::max(e.values[i], 0.0);
    if (l == 0.0) continue;
    Vec<2> basis{};
    basis[i] = 1.0;
    const Vec<8> term = kron(e.vector(i), basis);
    for (std::size_t k = 0; k < 8; ++k) psi0[k] += std::sqrt(l) * term[k];
  }

  // Rotate B' so the A-B' marginal matches: align the Bloch vectors of the
  // A-indexed 2x2 blocks with a quaternion fit.
  const Mat4 cur = partial_trace3(Mat8::projector(psi0), Pair::ABprime);
  std::vector<std::array<double, 3>> src, dst;
  for (auto [j, k, im] : {std::tuple{0, 0, false}, {1, 1, false}, {0, 1, false}, {0, 1, true}}) {
    src.push_back(bloch(block(cur, j, k), im));
    dst.push_back(bloch(block(a.mat(), j, k), im));
  }
  Mat4 s3;
  double sxy[3][3] = {};
  for (std::size_t n = 0; n < src.size(); ++n)
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) sxy[i][j] += src[n][i] * dst[n][j];
  const auto& S = sxy;
  const double nm[4][4] = {
      {S[0][0] + S[1][1] + S[2][2], S[1][2] - S[2][1], S[2][0] - S[0][2], S[0][1] - S[1][0]},
      {S[1][2] - S[2][1], S[0][0] - S[1][1] - S[2][2], S[0][1] + S[1][0], S[2][0] + S[0][2]},
      {S[2][0] - S[0][2], S[0][1] + S[1][0], -S[0][0] + S[1][1] - S[2][2], S[1][2] + S[2][1]},
      {S[0][1] - S[1][0], S[2][0] + S[0][2], S[1][2] + S[2][1], -S[0][0] - S[1][1] + S[2][2]}};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) s3(i, j) = nm[i][j];
  const Vec<4> qv = herm_eig(HermMat<4>(s3)).vector(0);

  PureExtension best{psi0, pure_residual(psi0, a.mat())};
  for (double sign : {1.0, -1.0}) {
    const Mat2 w = su2_from_quaternion(qv[0].real(), qv[1].real(), qv[2].real(), qv[3].real(), sign);
    const Vec<8> psi = apply_bprime(psi0, w);
    const double r = pure_residual(psi, a.mat());
    if (r < best.residual) best = {psi, r};
  }

  if (best.residual > 1e-9) {
    // Grid seed over Euler angles, then simplex refinement.
    auto cost = [&](const std::array<double, 3>& p) {
      return pure_residual(apply_bprime(psi0, su2_from_euler(p[0], p[1], p[2])), a.mat());
    };
    std::array<double, 3> seed{};
    double seed_val = std::numeric_limits<double>::infinity();
    constexpr int kGrid = 16;
    for (int i = 0; i < kGrid; ++i)
      for (int j = 0; j < kGrid; ++j)
        for (int k = 0; k < kGrid; ++k) {
          const std::array<double, 3> p = {2 * std::numbers::pi * i / kGrid,
                                           std::numbers::pi * j / (kGrid - 1),
                                           2 * std::numbers::pi * k / kGrid};
          const double c = cost(p);
          if (c < seed_val) {
            seed_val = c;
            seed = p;
          }
        }
    const auto opt = nelder_mead(cost, seed, 0.2, 4000, 1e-14);
    const Vec<8> psi = apply_bprime(psi0, su2_from_euler(opt[0], opt[1], opt[2]));
    const double r = pure_residual(psi, a.mat());
    if (r < best.residual) best = {psi, r};
  }
  if (best.residual > 1e-7)
    throw Error(ErrorCode::OptimizationFailed, "no B' frame reproduces both marginals",
                best.residual);
  return best;
}

std::string_view to_string(ExtensionPath p) {
  return p == ExtensionPath::Analytic ? "analytic" : "oracle-fallback";
}

ExtensionCertificate certify(const DensityOp8& ext, const DensityOp4& rho) {
  ExtensionCertificate c{.ext = ext, .fallback_reason = {}};
  const double r1 = (partial_trace3(ext.mat(), Pair::AB) - rho.mat()).frobenius_norm();
  const double r2 = (partial_trace3(ext.mat(), Pair::ABprime) - rho.mat()).frobenius_norm();
  c.marginal_residual = std::max(r1, r2);
  c.min_eig = min_eigenvalue(ext.herm());
  c.swap_residual = (ext.mat() - swap_bbprime(ext.mat())).frobenius_norm();
  return c;
}

Decomposition decompose_into_a(const DensityOp4& rho, double tol_f) {
  const double f = f_value(rho);
  if (f < -tol_f) throw Error(ErrorCode::NotExtendible, "state violates the criterion", f);
  return decompose_rec(rho, tol_f, 0);
}

ExtensionCertificate extend(const DensityOp4& rho, double tol_f) {
  const double f = f_value(rho);
  if (f < -tol_f) throw Error(ErrorCode::NotExtendible, "state violates the criterion", f);
  std::string reason;
  try {
    const Decomposition parts = decompose_rec(rho, tol_f, 0);
    Mat8 ext;
    for (const auto& p : parts) ext += pure_extension(p.state).state().mat() * p.weight;
    ExtensionCertificate c = certify(DensityOp8::normalized(swap_symmetrize(ext)), rho);
    c.terms = parts.size();
    if (c.marginal_residual <= 1e-7 && c.min_eig >= -1e-8 && c.swap_residual <= 1e-7) return c;
    reason = "analytic certificate residual " + std::to_string(c.marginal_residual);
  } catch (const Error& e) {
    reason = e.what();
  }
  const OracleReport rep = dykstra_extend(rho);
  if (rep.status != OracleStatus::Feasible || !rep.ext)
    throw Error(ErrorCode::SearchFailed,
                "analytic path failed (" + reason + ") and the oracle did not converge",
                rep.final_gap);
  ExtensionCertificate c = certify(*rep.ext, rho);
  c.path = ExtensionPath::OracleFallback;
  c.fallback_reason = reason;
  return c;
}

}  // namespace symext
