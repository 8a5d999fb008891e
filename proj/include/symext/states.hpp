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

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "json.hpp"
#include "symext/linalg.hpp"

// Qubit order is A (x) B for two qubits and A (x) B (x) B' for three, with A
// the slowest index: |00>, |01>, |10>, |11>.

namespace symext {

inline constexpr double kTraceTol = 1e-10;

// Unit-trace PSD Hermitian operator on N = 2, 4 or 8 dimensions.
template <std::size_t N>
class DensityOp {
 public:
  explicit DensityOp(const HermMat<N>& m) : m_(m) {
    const double tr = m_.trace();
    if (std::abs(tr - 1.0) > kTraceTol)
      throw Error(ErrorCode::TraceInvalid,
                  "trace residual " + std::to_string(std::abs(tr - 1.0)),
                  std::abs(tr - 1.0));
    const double lo = min_eigenvalue(m_);
    if (lo < -kPsdTol)
      throw Error(ErrorCode::NotPSD, "minimum eigenvalue " + std::to_string(lo), lo);
  }
  explicit DensityOp(const Mat<N>& m) : DensityOp(HermMat<N>(m)) {}

  // Hermitizes and rescales to unit trace before validating.
  static DensityOp normalized(const Mat<N>& m) {
    HermMat<N> h(m);
    const double tr = h.trace();
    if (!(tr > 0.0))
      throw Error(ErrorCode::TraceInvalid, "cannot normalize non-positive trace", tr);
    return DensityOp(HermMat<N>(h.mat() / tr));
  }

  const HermMat<N>& herm() const { return m_; }
  const Mat<N>& mat() const { return m_.mat(); }
  const Cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

 private:
  HermMat<N> m_;
};

using DensityOp2 = DensityOp<2>;
using DensityOp4 = DensityOp<4>;
using DensityOp8 = DensityOp<8>;

enum class Party { A, B };
enum class Pair { AB, ABprime, BBprime };

// Raw partial traces on 4x4 matrices; `keep` names the surviving qubit.
Mat2 partial_trace(const Mat4& m, Party keep);
DensityOp2 partial_trace(const DensityOp4& rho, Party keep);

// Marginal on the kept pair. Pair::ABprime is reported in A (x) B' order.
Mat4 partial_trace3(const Mat8& m, Pair keep);
DensityOp4 partial_trace3(const DensityOp8& rho, Pair keep);

// Permutation exchanging the B and B' tensor slots.
const Mat8& swap_bbprime_matrix();
Mat8 swap_bbprime(const Mat8& m);
DensityOp8 swap_bbprime(const DensityOp8& rho);
Vec<8> swap_bbprime(const Vec<8>& v);

// (X + S X S) / 2
Mat8 swap_symmetrize(const Mat8& m);

// Bell states in the order Phi+, Phi-, Psi+, Psi-.
Vec<4> bell_state(int index);

DensityOp4 werner(double p);
DensityOp4 bell_diagonal(const std::array<double, 4>& probs);

// Seeded mt19937_64 with a hand-rolled uniform and Box-Muller transform, so
// streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1) with 53 random bits
  double normal();
  Cplx complex_normal() { return {normal(), normal()}; }

  static constexpr const char* kName = "mt19937_64+box-muller";

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// G G^dag / tr(G G^dag) with G an N x rank complex Gaussian matrix.
template <std::size_t N>
DensityOp<N> random_density(std::uint64_t seed, std::size_t rank);
template <std::size_t N>
DensityOp<N> random_density(Rng& rng, std::size_t rank);

// Haar-random 2x2 unitary from a Gram-Schmidt'd Ginibre matrix.
Mat2 random_unitary2(Rng& rng);

// Local unitary conjugation (UA (x) UB) rho (UA (x) UB)^dag.
Mat4 local_conjugate(const Mat4& m, const Mat2& ua, const Mat2& ub);

// JSON state format: {"dim": n, "re": [[...]], "im": [[...]]}.
template <std::size_t N>
nlohmann::json matrix_to_json(const Mat<N>& m);
template <std::size_t N>
Mat<N> matrix_from_json(const nlohmann::json& j);

DensityOp4 state_from_json(const nlohmann::json& j);
DensityOp4 read_state(const std::filesystem::path& path);
void write_state(const DensityOp4& rho, const std::filesystem::path& path);

}  // namespace symext
