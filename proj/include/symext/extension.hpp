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

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symext/criterion.hpp"

namespace symext {

// H(sigma) (x) I_B' plus the same operator acting on A, B'. Positive with a
// ground space that carries every extension of the face through sigma.
HermMat<8> three_qubit_hamiltonian(const DensityOp4& sigma, double tol_f = kTolF);

// Orthonormal basis of the eigenspace within `tol` of the lowest eigenvalue,
// split into B<->B' symmetric vectors followed by antisymmetric ones when the
// space allows it.
std::vector<Vec<8>> ground_space(const HermMat<8>& h, double tol = 1e-8);

// Point (x, y, U) on the face of the boundary state sigma.
struct FacePoint {
  Mat2 u = Mat2::identity();
  double x = 1.0;
  double y = 1.0;
};

// k1 = a12 b11 - b12 a11 and k2 = a21 b22 - a22 b21 for A(U) = U^dag H_00 U and
// B(U) = -U^dag H_10 U, the 2x2 blocks of H(sigma).
struct FaceCoefficients {
  Cplx k1;
  Cplx k2;
};

FaceCoefficients face_coefficients(const DensityOp4& sigma, const Mat2& u);

// (x - y)(|k2| x - |k1| y) <= 0, on (x, y) scaled to max(x, y) = 1.
bool face_admissible(const FaceCoefficients& k, double x, double y, double tol = 1e-12);

// Unnormalized face state; entries are quadratic forms in (x, y).
Mat4 face_state_unnormalized(const DensityOp4& sigma, const FacePoint& fp);

DensityOp4 face_state(const DensityOp4& sigma, const FacePoint& fp, double tol_f = kTolF);

// The rank-2 endpoints at (1, 1) and (|k1|, |k2|).
std::pair<DensityOp4, DensityOp4> face_rank2_endpoints(const DensityOp4& sigma, const Mat2& u,
                                                       double tol_f = kTolF);

// The face point reproducing sigma itself: P = U diag(x, y) U^dag.
FacePoint face_point_of(const DensityOp4& sigma);

struct WeightedState {
  double weight;
  DensityOp4 state;
};
using Decomposition = std::vector<WeightedState>;

Mat4 recombine(const Decomposition& parts);

// Keeps the `rank` largest eigenpairs (negatives clipped) and renormalizes.
DensityOp4 truncate_rank(const Mat4& m, int rank);

Decomposition decompose_full_rank_boundary(const DensityOp4& sigma, double tol_f = kTolF);

struct Rank3Decomposition {
  Decomposition parts;
  double quadratic_coefficient = 0.0;  // |a p + b* q*|^2
  double eps_plus = 0.0;
  double eps_minus = 0.0;
  Mat4 direction;                      // M, traceless and annihilating the kernel
};

Rank3Decomposition decompose_rank3(const DensityOp4& sigma, double tol_f = kTolF);

// Splits a rank <= 2 state into at most two members of the set A.
Decomposition decompose_rank2(const DensityOp4& rho, double tol_f = kTolF);

struct PureExtension {
  Vec<8> psi;
  double residual = 0.0;  // max Frobenius error of the two marginals

  DensityOp8 state() const { return DensityOp8(Mat8::projector(psi)); }
};

PureExtension pure_extension(const DensityOp4& a);

enum class ExtensionPath { Analytic, OracleFallback };
std::string_view to_string(ExtensionPath p);

struct ExtensionCertificate {
  DensityOp8 ext;
  double marginal_residual = 0.0;
  double min_eig = 0.0;
  double swap_residual = 0.0;
  ExtensionPath path = ExtensionPath::Analytic;
  std::size_t terms = 0;     // pure extensions mixed on the analytic path
  std::string fallback_reason;
};

// Marginal, PSD and swap residuals of a candidate extension of rho.
ExtensionCertificate certify(const DensityOp8& ext, const DensityOp4& rho);

// Decomposes rho into members of A and mixes their pure extensions; any
// failure on that path falls back to the projection oracle.
ExtensionCertificate extend(const DensityOp4& rho, double tol_f = kTolF);

// The analytic path alone, as weighted members of A (no fallback).
Decomposition decompose_into_a(const DensityOp4& rho, double tol_f = kTolF);

}  // namespace symext
