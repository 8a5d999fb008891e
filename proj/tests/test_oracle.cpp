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
#include "symext/oracle.hpp"

using namespace symext;

TEST_CASE("affine projection lands on the affine set and is idempotent") {
  Rng rng(51);
  const DensityOp4 rho = random_density<4>(rng, 4);
  const Mat8 x = random_density<8>(rng, 8).mat() * 3.0;
  const Mat8 y = project_affine(x, rho.mat());
  CHECK((oracle::trace_out_bprime(y) - rho.mat()).max_abs() < 1e-14);
  CHECK((swap_bbprime(y) - y).max_abs() < 1e-15);
  CHECK((project_affine(y, rho.mat()) - y).max_abs() < 1e-14);
}

TEST_CASE("affine projection is orthogonal") {
  // x - P(x) is orthogonal to any difference of affine points.
  Rng rng(52);
  const DensityOp4 rho = random_density<4>(rng, 4);
  const Mat8 x = random_density<8>(rng, 8).mat();
  const Mat8 px = project_affine(x, rho.mat());
  const Mat8 a = project_affine(random_density<8>(rng, 8).mat(), rho.mat());
  CHECK(std::abs(hs_inner(x - px, a - px)) < 1e-13);
}

TEST_CASE("PSD projection clips negative eigenvalues") {
  Mat8 m = Mat8::diag({1.0, -1.0, 0.5, 0.0, 0.0, 0.0, -0.25, 0.0});
  const HermMat<8> p = project_psd(HermMat<8>(m));
  CHECK((p.mat() - Mat8::diag({1.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0, 0.0})).max_abs() < 1e-15);
}

TEST_CASE("oracle verdicts on Werner states") {
  const OracleReport in = dykstra_extend(werner(0.5));
  CHECK(in.status == OracleStatus::Feasible);
  REQUIRE(in.ext);
  CHECK((partial_trace3(in.ext->mat(), Pair::AB) - werner(0.5).mat()).max_abs() < 1e-8);
  CHECK(dykstra_extend(werner(0.8)).status == OracleStatus::InfeasibleHeuristic);
  OracleOptions quick;
  quick.max_iter = 5;
  quick.dykstra_iters = 5;
  CHECK(dykstra_extend(werner(0.8), quick).status == OracleStatus::MaxIter);
}

TEST_CASE("oracle agrees with the criterion on random states") {
  int checked = 0;
  for (std::uint64_t seed = 500; seed < 560; ++seed) {
    const DensityOp4 rho = random_density<4>(seed, 1 + seed % 4);
    const double f = f_value(rho);
    if (std::abs(f) <= 1e-4) continue;
    ++checked;
    CHECK((dykstra_extend(rho).status == OracleStatus::Feasible) == (f > 0.0));
  }
  CHECK(checked > 30);
}
