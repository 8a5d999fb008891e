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

#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "symext/channels.hpp"

using namespace symext;

TEST_CASE("amplitude damping Choi state matches the hand-derived entries") {
  std::ifstream in(SYMEXT_FIXTURES "/amplitude_damping_choi.json");
  REQUIRE(in);
  const nlohmann::json fx = nlohmann::json::parse(in);
  for (const auto& [key, m] : fx["choi"].items()) {
    const double gamma = std::stod(key);
    const Mat4 golden = matrix_from_json<4>(m);
    CHECK((kraus_to_choi(amplitude_damping(gamma)).state().mat() - golden).max_abs() < 1e-15);
    CHECK((oracle::amplitude_damping_choi(gamma) - golden).max_abs() < 1e-15);
  }
}

TEST_CASE("closed-form f along channel families") {
  for (double g : {0.1, 0.3, 0.5, 0.8})
    CHECK(f_value(kraus_to_choi(amplitude_damping(g)).state()) == doctest::Approx(g - 0.5));
  for (double l : {0.0, 0.4, 1.0})
    CHECK(f_value(kraus_to_choi(phase_damping(l)).state()) == doctest::Approx(-(1.0 - l) / 2));
  for (double p : {0.0, 0.2, 0.7})
    CHECK((kraus_to_choi(depolarizing(p)).state().mat() - werner(1.0 - p).mat()).max_abs() < 1e-15);
}

TEST_CASE("anti-degradability thresholds") {
  const auto ad = antidegradability_crossings(amplitude_damping, 0.0, 1.0, 10);
  REQUIRE(ad.size() == 1);
  CHECK(std::abs(ad[0] - 0.5) < 1e-9);
  const auto dep = antidegradability_crossings(depolarizing, 0.0, 1.0, 10);
  REQUIRE(dep.size() == 1);
  CHECK(std::abs(dep[0] - 1.0 / 3.0) < 1e-9);
  CHECK(is_antidegradable(amplitude_damping(0.7)).extendible());
  CHECK_FALSE(is_antidegradable(KrausSet({Mat2::identity()})).extendible());
}

TEST_CASE("Kraus validation") {
  CHECK_THROWS_AS(KrausSet({Mat2::identity() * 0.5}), Error);
  CHECK_THROWS_AS(KrausSet({}), Error);
  CHECK_THROWS_AS(amplitude_damping(1.2), Error);
  CHECK_THROWS_AS(pauli_channel(0.5, 0.5, 0.5), Error);
}

TEST_CASE("channel specs from JSON") {
  const KrausSet fam = channel_from_json({{"family", "amplitude_damping"}, {"params", {{"gamma", 0.3}}}});
  CHECK(f_value(kraus_to_choi(fam).state()) == doctest::Approx(-0.2));
  const nlohmann::json raw = {{"kraus", {{{"re", {{1, 0}, {0, 1}}}, {"im", {{0, 0}, {0, 0}}}}}}};
  CHECK(channel_from_json(raw).ops().size() == 1);
  const KrausSet swept = channel_with_param({{"family", "depolarizing"}, {"params", {{"p", 0.1}}}}, "p", 0.5);
  CHECK((kraus_to_choi(swept).state().mat() - werner(0.5).mat()).max_abs() < 1e-15);
  CHECK_THROWS_AS(channel_from_json({{"family", "unknown"}}), Error);
}
