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

#include <optional>
#include <string_view>

#include "symext/states.hpp"

namespace symext {

inline constexpr double kTolF = 1e-9;
inline constexpr double kRankThreshold = 1e-9;

// f = tr(rho_B^2) - tr(rho^2) + 4 sqrt(det rho). Non-negative exactly on the
// symmetric-extendible states. Works on any Hermitian 4x4 matrix; throws
// NegativeDeterminant when det < -1e-12.
double f_value(const Mat4& m);
inline double f_value(const DensityOp4& rho) { return f_value(rho.mat()); }

// tr(rho_B^2) - tr(rho^2): zero on rank <= 2 states of the set A.
double purity_gap(const Mat4& m);

int numerical_rank(const HermMat<4>& m, double threshold = kRankThreshold);
inline int numerical_rank(const DensityOp4& rho) { return numerical_rank(rho.herm()); }

enum class ExtClass { InteriorExtendible, BoundaryExtendible, NonExtendible };
std::string_view to_string(ExtClass c);

struct Verdict {
  double f_value = 0.0;
  ExtClass cls = ExtClass::InteriorExtendible;
  std::optional<HermMat<4>> witness;
  int rank = 4;

  bool extendible() const { return cls != ExtClass::NonExtendible; }
};

Verdict classify(const DensityOp4& rho, double tol_f = kTolF);

// Nonzero spectra of rho and rho_B agree (threshold 1e-9, match 1e-8).
bool in_set_a(const DensityOp4& rho);

// H(s) = sqrt(det s) s^-1 - s + I (x) s_B. Requires full rank.
HermMat<4> hyperplane_operator(const DensityOp4& sigma);

// Supporting operator at a rank-deficient point: projector onto ker(sigma).
HermMat<4> rank_deficient_hyperplane(const DensityOp4& sigma);

struct WitnessResult {
  HermMat<4> witness;       // H(sigma*)
  DensityOp4 boundary;      // sigma* on the segment from I/4 to rho
  double t = 0.0;           // sigma* = I/4 + t (rho - I/4)
  double value = 0.0;       // tr(H(sigma*) rho) < 0
};

WitnessResult witness_search(const DensityOp4& rho, double tol_f = kTolF);

// Bisects f along I/4 + t (rho - I/4) between t_in (f >= 0) and t_out (f < 0),
// stopping once f <= f_tol on the inside or the bracket is below 1e-14.
// Returns the inside end.
double bisect_f_on_ray(const Mat4& rho, double t_in, double t_out, double f_tol = 1e-10);

Mat4 ray_point(const Mat4& rho, double t);

// rho = [[QQ^dag + R^2, QP], [PQ^dag, P^2]] with blocks indexed by qubit A.
struct PqrTriple {
  Mat2 p, q, r;
};

PqrTriple factor_pqr(const DensityOp4& rho);
Mat4 assemble_pqr(const PqrTriple& t);

// ||PR||_tr^2 - ||PQ^dag||_tr^2 + ||PQ||_tr^2; equals f/2.
double pqr_slack(const PqrTriple& t);

struct IdentityResiduals {
  double minors2 = 0.0;     // |det H[{0,2}] - det H[{1,3}]|
  double minors3 = 0.0;     // |det H[{0,1,2}] + det H[{0,1,3}]|
  double schur_trace = 0.0; // |tr(C - B A^-1 B^dag)|
};

// Residuals evaluated on an arbitrary Hermitian H (no boundary check).
IdentityResiduals hyperplane_identity_residuals(const HermMat<4>& h);

// Same, for H(sigma) at a full-rank boundary point; throws NotBoundary or
// NotFullRank otherwise.
IdentityResiduals boundary_identity_residuals(const DensityOp4& sigma, double tol_f = kTolF);

}  // namespace symext
