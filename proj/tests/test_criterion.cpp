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
#include "oracles.hpp"
#include "symext/criterion.hpp"

using namespace symext;

TEST_CASE("f matches the reference formula") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const DensityOp4 rho = random_density<4>(rng, 4);
    CHECK(f_value(rho) == doctest::Approx(oracle::f_value(rho.mat())).epsilon(1e-12));
  }
  CHECK(std::abs(f_value(DensityOp4(Mat4::identity() * 0.25)) - 0.5) < 1e-12);
  CHECK(std::abs(f_value(werner(2.0 / 3.0))) < 1e-12);
}

TEST_CASE("f is invariant under local unitaries") {
  Rng rng(32);
  const DensityOp4 rho = random_density<4>(rng, 4);
  const Mat2 ua = random_unitary2(rng), ub = random_unitary2(rng);
  CHECK(f_value(local_conjugate(rho.mat(), ua, ub)) == doctest::Approx(f_value(rho)).epsilon(1e-12));
}

TEST_CASE("classification of Werner states") {
  CHECK(classify(werner(0.5)).cls == ExtClass::InteriorExtendible);
  CHECK(classify(werner(2.0 / 3.0)).cls == ExtClass::BoundaryExtendible);
  const Verdict v = classify(werner(0.9));
  CHECK(v.cls == ExtClass::NonExtendible);
  REQUIRE(v.witness);
  CHECK(hs_inner(v.witness->mat(), werner(0.9).mat()) < 0.0);
  // Pure product states are rank deficient hence on the boundary.
  const DensityOp4 prod(Mat4::diag({1.0, 0.0, 0.0, 0.0}));
  CHECK(classify(prod).cls == ExtClass::BoundaryExtendible);
}

TEST_CASE("hyperplane operator of the Werner boundary state") {
  const HermMat<4> h = hyperplane_operator(werner(2.0 / 3.0));
  CHECK((h.mat() * 9.0 - oracle::werner_boundary_h_times9()).max_abs() < 1e-12);
  const auto ev = eigenvalues(h);
  CHECK(ev[0] == doctest::Approx(2.0 / 3.0));
  CHECK(ev[3] == doctest::Approx(-2.0 / 9.0));
  CHECK_THROWS_AS(hyperplane_operator(DensityOp4(Mat4::diag({1.0, 0.0, 0.0, 0.0}))), Error);
}

TEST_CASE("witness separates entangled states") {
  Rng rng(33);
  int found = 0;
  for (int trial = 0; trial < 400 && found < 10; ++trial) {
    const DensityOp4 pure = random_density<4>(rng, 1);
    const DensityOp4 rho(pure.mat() * 0.8 + Mat4::identity() * 0.05);
    if (f_value(rho) >= -1e-6) continue;
    ++found;
    const WitnessResult w = witness_search(rho);
    CHECK(w.value < 0.0);
    CHECK(std::abs(f_value(w.boundary)) < 1e-9);
    CHECK(std::abs(hs_inner(w.witness.mat(), w.boundary.mat())) < 1e-9);
  }
  CHECK(found == 10);
  CHECK_THROWS_AS(witness_search(werner(0.5)), Error);
}

TEST_CASE("kernel projector supports rank-deficient states") {
  const DensityOp4 rho = random_density<4>(34, 3);
  const HermMat<4> w = rank_deficient_hyperplane(rho);
  CHECK(std::abs(hs_inner(w.mat(), rho.mat())) < 1e-12);
  CHECK(min_eigenvalue(w) > -1e-12);
  CHECK_THROWS_AS(rank_deficient_hyperplane(werner(0.5)), Error);
}

TEST_CASE("membership in the set of pure-extendible states") {
  CHECK(in_set_a(werner(1.0)) == false);
  CHECK(in_set_a(DensityOp4(Mat4::diag({1.0, 0.0, 0.0, 0.0}))));
  // tr_B' of a swap-symmetric pure state on ABB'.
  Vec<8> psi{};
  psi[0] = 2.0 / std::sqrt(6.0);
  psi[5] = psi[6] = 1.0 / std::sqrt(6.0);
  CHECK(in_set_a(DensityOp4(partial_trace3(Mat8::projector(psi), Pair::AB))));
}

TEST_CASE("PQR factorization round trip and slack") {
  Rng rng(35);
  for (int trial = 0; trial < 100; ++trial) {
    const DensityOp4 rho = random_density<4>(rng, 1 + trial % 4);
    const PqrTriple t = factor_pqr(rho);
    CHECK((assemble_pqr(t) - rho.mat()).max_abs() < 1e-10);
    if (numerical_rank(rho) == 4) CHECK(pqr_slack(t) == doctest::Approx(f_value(rho) / 2).epsilon(1e-8));
  }
}

TEST_CASE("hyperplane identities") {
  Rng rng(36);
  for (int trial = 0; trial < 20; ++trial) {
    const DensityOp4 rho = random_density<4>(rng, 4);
    CHECK(hyperplane_identity_residuals(hyperplane_operator(rho)).minors2 < 1e-10);
  }
  const IdentityResiduals r = boundary_identity_residuals(werner(2.0 / 3.0));
  CHECK(r.minors2 < 1e-12);
  CHECK(r.minors3 < 1e-12);
  CHECK(r.schur_trace < 1e-12);
  CHECK_THROWS_AS(boundary_identity_residuals(werner(0.5)), Error);
}
