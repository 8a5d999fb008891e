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

// Feasibility oracle for symmetric extensions that does not use the spectral
// criterion: projections between the PSD cone and the affine set of
// swap-symmetric operators with the prescribed AB marginal.

namespace symext {

enum class OracleStatus { Feasible, InfeasibleHeuristic, MaxIter };
std::string_view to_string(OracleStatus s);

struct OracleReport {
  OracleStatus status = OracleStatus::MaxIter;
  int iterations = 0;
  double final_gap = 0.0;  // Frobenius distance between PSD and affine iterates
  std::optional<DensityOp8> ext;
};

struct OracleOptions {
  int max_iter = 20000;
  double tol = 1e-9;
  // Dykstra sweeps before switching to Douglas-Rachford splitting.
  int dykstra_iters = 200;
  // Infeasible once the gap changes by less than stall_rel (relative) over
  // stall_window iterations while staying above 10 tol.
  int stall_window = 500;
  double stall_rel = 1e-6;
};

// Frobenius-nearest point of {X = S X S, tr_B' X = rho}. Exact.
Mat8 project_affine(const Mat8& x, const Mat4& rho);
HermMat<8> project_affine(const HermMat<8>& x, const DensityOp4& rho);

// Clips negative eigenvalues.
HermMat<8> project_psd(const HermMat<8>& x);

OracleReport dykstra_extend(const DensityOp4& rho, const OracleOptions& opts = {});

}  // namespace symext
