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

#include "symext/oracle.hpp"

#include <deque>

namespace symext {

std::string_view to_string(OracleStatus s) {
  switch (s) {
    case OracleStatus::Feasible: return "Feasible";
    case OracleStatus::InfeasibleHeuristic: return "InfeasibleHeuristic";
    case OracleStatus::MaxIter: return "MaxIter";
  }
  return "Unknown";
}

Mat8 project_affine(const Mat8& x, const Mat4& rho) {
  // After symmetrizing, correct the AB marginal with Z (x) I_B' symmetrized,
  // where Z = R - tr_B(R) (x) I / 4 absorbs the doubled A-marginal term.
  const Mat8 xs = swap_symmetrize(x);
  const Mat4 r = rho - partial_trace3(xs, Pair::AB);
  const Mat4 z = r - kron(partial_trace(r, Party::A), Mat2::identity()) * 0.25;
  return xs + swap_symmetrize(kron(z, Mat2::identity()));
}

HermMat<8> project_affine(const HermMat<8>& x, const DensityOp4& rho) {
  return HermMat<8>(project_affine(x.mat(), rho.mat()));
}

HermMat<8> project_psd(const HermMat<8>& x) {
  return HermMat<8>(spectral_apply(herm_eig(x), [](double v) { return v > 0.0 ? v : 0.0; }));
}

namespace {

Mat8 psd_part(const Mat8& x) {
  return spectral_apply(herm_eig(HermMat<8>(x)), [](double v) { return v > 0.0 ? v : 0.0; });
}

bool is_psd(const Mat8& x) { return min_eigenvalue(HermMat<8>(x)) >= 0.0; }

// Prefers the affine point (exact marginals); the PSD point is the backup
// when the affine one dips below the state tolerance.
OracleReport feasible(const Mat8& affine, const Mat8& psd, int it, double gap) {
  OracleReport r;
  r.status = OracleStatus::Feasible;
  r.iterations = it;
  r.final_gap = gap;
  try {
    r.ext = DensityOp8::normalized(affine);
  } catch (const Error&) {
    r.ext = DensityOp8::normalized(psd);
  }
  return r;
}

}  // namespace

OracleReport dykstra_extend(const DensityOp4& rho, const OracleOptions& opts) {
  const Mat4& r = rho.mat();
  Mat8 x = swap_symmetrize(kron(r, Mat2::identity() * 0.5));
  Mat8 p, q;
  double gap = 0.0;
  int it = 0;

  // Dykstra phase: converges to the projection, quickly certifies interior
  // points.
  for (; it < std::min(opts.dykstra_iters, opts.max_iter); ++it) {
    const Mat8 y = project_affine(x + p, r);
    p = x + p - y;
    if (is_psd(y)) return feasible(y, y, it + 1, 0.0);
    const Mat8 xn = psd_part(y + q);
    q = y + q - xn;
    gap = (xn - y).frobenius_norm();
    x = xn;
    if (gap < opts.tol) return feasible(project_affine(x, r), x, it + 1, gap);
  }

  // Douglas-Rachford phase: does not stall on nearly singular feasible sets.
  Mat8 z = x;
  std::deque<double> history;
  for (; it < opts.max_iter; ++it) {
    const Mat8 xa = project_affine(z, r);
    if (is_psd(xa)) return feasible(xa, xa, it + 1, gap);
    const Mat8 y = psd_part(xa * 2.0 - z);
    z += y - xa;
    gap = (y - xa).frobenius_norm();
    if (gap < opts.tol) return feasible(project_affine(y, r), y, it + 1, gap);
    history.push_back(gap);
    if (static_cast<int>(history.size()) > opts.stall_window) {
      const double old = history.front();
      history.pop_front();
      if (gap > 10.0 * opts.tol && std::abs(gap - old) < opts.stall_rel * gap) {
        OracleReport rep;
        rep.status = OracleStatus::InfeasibleHeuristic;
        rep.iterations = it + 1;
        rep.final_gap = gap;
        return rep;
      }
    }
  }
  OracleReport rep;
  rep.iterations = it;
  rep.final_gap = gap;
  return rep;
}

}  // namespace symext
