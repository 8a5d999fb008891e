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

#include "doctest.h"
#include "symext/extension.hpp"

using namespace symext;

namespace {

DensityOp4 boundary_point(Rng& rng) {
  for (;;) {
    const DensityOp4 pure = random_density<4>(rng, 1);
    const DensityOp4 noise = random_density<4>(rng, 4);
    const DensityOp4 rho(pure.mat() * 0.7 + noise.mat() * 0.3);
    if (f_value(rho) >= -1e-6) continue;
    return DensityOp4(ray_point(rho.mat(), bisect_f_on_ray(rho.mat(), 0.0, 1.0)));
  }
}

}  // namespace

TEST_CASE("three-qubit Hamiltonian of the Werner boundary state") {
  const HermMat<8> h = three_qubit_hamiltonian(werner(2.0 / 3.0));
  CHECK(min_eigenvalue(h) > -1e-12);
  const auto g = ground_space(h);
  CHECK(g.size() == 2);
  for (const auto& v : g) {
    CHECK(std::real(inner(v, h.mat() * v)) < 1e-12);
    const Vec<8> s = swap_bbprime(v);
    double asym = 0.0;
    for (std::size_t i = 0; i < 8; ++i) asym = std::max(asym, std::abs(s[i] - v[i]));
    CHECK(asym < 1e-12);
  }
  CHECK_THROWS_AS(three_qubit_hamiltonian(werner(0.5)), Error);
}

TEST_CASE("face states lie on the supporting hyperplane") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityOp4 sigma = boundary_point(rng);
    const HermMat<4> h = hyperplane_operator(sigma);
    const FacePoint own = face_point_of(sigma);
    CHECK((face_state(sigma, own).mat() - sigma.mat()).max_abs() < 1e-8);
    const Mat2 u = random_unitary2(rng);
    const auto [e1, e2] = face_rank2_endpoints(sigma, u);
    for (const DensityOp4* e : {&e1, &e2}) {
      CHECK(std::abs(hs_inner(h.mat(), e->mat())) < 1e-9);
      CHECK(eigenvalues(e->herm())[2] < 1e-8);
      CHECK(f_value(*e) > -1e-8);
    }
    const FaceCoefficients k = face_coefficients(sigma, u);
    CHECK(face_admissible(k, 1.0, 1.0));
    CHECK(face_admissible(k, std::abs(k.k1), std::abs(k.k2)));
  }
}

TEST_CASE("full-rank boundary states split into two rank-2 pieces") {
  Rng rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const DensityOp4 sigma = boundary_point(rng);
    const Decomposition d = decompose_full_rank_boundary(sigma);
    CHECK(d.size() == 2);
    CHECK((recombine(d) - sigma.mat()).max_abs() < 1e-8);
    for (const auto& p : d) {
      CHECK(eigenvalues(p.state.herm())[2] < 1e-8);
      CHECK(f_value(p.state) > -1e-8);
    }
  }
}

TEST_CASE("rank-3 states split along a kernel-preserving direction") {
  Rng rng(43);
  int done = 0;
  while (done < 10) {
    const DensityOp4 rho = random_density<4>(rng, 3);
    if (f_value(rho) < 0.0) continue;
    ++done;
    const Rank3Decomposition d = decompose_rank3(rho);
    CHECK(d.quadratic_coefficient < 1e-12);
    CHECK(std::abs(d.direction.trace()) < 1e-12);
    CHECK((recombine(d.parts) - rho.mat()).max_abs() < 1e-8);
    for (const auto& p : d.parts) CHECK(numerical_rank(p.state.herm(), 1e-8) <= 2);
  }
}

TEST_CASE("rank-2 states split into members of A") {
  Rng rng(44);
  int done = 0;
  while (done < 10) {
    const DensityOp4 rho = random_density<4>(rng, 2);
    if (f_value(rho) < 0.0) continue;
    ++done;
    const Decomposition d = decompose_rank2(rho);
    CHECK((recombine(d) - rho.mat()).max_abs() < 1e-8);
    for (const auto& p : d) CHECK(in_set_a(p.state));
  }
}

TEST_CASE("pure extensions reproduce both marginals") {
  Vec<8> psi{};
  psi[0] = 2.0 / std::sqrt(6.0);
  psi[5] = psi[6] = 1.0 / std::sqrt(6.0);
  const DensityOp4 a(partial_trace3(Mat8::projector(psi), Pair::AB));
  const PureExtension e = pure_extension(a);
  CHECK(e.residual < 1e-7);
  const ExtensionCertificate c = certify(e.state(), a);
  CHECK(c.marginal_residual < 1e-7);
}

TEST_CASE("extend certifies extendible states and refuses others") {
  for (double p : {0.0, 0.4, 2.0 / 3.0}) {
    const ExtensionCertificate c = extend(werner(p));
    CHECK(c.path == ExtensionPath::Analytic);
    CHECK(c.marginal_residual < 1e-7);
    CHECK(c.min_eig > -1e-8);
    CHECK(c.swap_residual < 1e-7);
  }
  CHECK_THROWS_AS(decompose_into_a(werner(0.9)), Error);
}
