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

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symext/criterion.hpp"

// Qubit channels. The Choi state puts the reference on A and the channel
// output on B, so anti-degradability is extendibility on the output side.

namespace symext {

class KrausSet {
 public:
  // Throws NotTracePreserving when sum K^dag K deviates from I by > 1e-9.
  explicit KrausSet(std::vector<Mat2> ops);

  const std::vector<Mat2>& ops() const { return ops_; }

 private:
  std::vector<Mat2> ops_;
};

class ChoiState {
 public:
  // Throws NotTracePreserving unless tr_B = I/2 within 1e-9.
  explicit ChoiState(const DensityOp4& m);

  const DensityOp4& state() const { return m_; }

 private:
  DensityOp4 m_;
};

ChoiState kraus_to_choi(const KrausSet& k);
Verdict is_antidegradable(const KrausSet& k, double tol_f = kTolF);

KrausSet amplitude_damping(double gamma);
KrausSet depolarizing(double p);
KrausSet phase_damping(double lambda);
KrausSet pauli_channel(double px, double py, double pz);

// {"family": name, "params": {...}} or {"kraus": [{"re": .., "im": ..}, ...]}.
KrausSet channel_from_json(const nlohmann::json& spec);

// The family named in `spec` with parameter `param` overridden by `value`.
KrausSet channel_with_param(const nlohmann::json& spec, const std::string& param, double value);

// Parameter values in [lo, hi] where f of the Choi state changes sign, each
// refined by bisection to 1e-14. The grid has `steps` intervals.
std::vector<double> antidegradability_crossings(const std::function<KrausSet(double)>& family,
                                                double lo, double hi, int steps);

}  // namespace symext
