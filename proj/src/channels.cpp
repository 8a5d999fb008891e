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

#include "symext/channels.hpp"

namespace symext {

namespace {

void check_unit(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0))
    throw Error(ErrorCode::RangeError, std::string(name) + " must lie in [0, 1]", v);
}

Mat2 pauli(int k) {
  Mat2 m;
  switch (k) {
    case 0: m = Mat2::identity(); break;
    case 1: m(0, 1) = 1.0; m(1, 0) = 1.0; break;
    case 2: m(0, 1) = Cplx(0.0, -1.0); m(1, 0) = Cplx(0.0, 1.0); break;
    case 3: m(0, 0) = 1.0; m(1, 1) = -1.0; break;
  }
  return m;
}

double param(const nlohmann::json& params, const char* name) {
  if (!params.is_object() || !params.contains(name) || !params[name].is_number())
    throw Error(ErrorCode::ParseError, std::string("missing numeric parameter '") + name + "'");
  return params[name].get<double>();
}

}  // namespace

KrausSet::KrausSet(std::vector<Mat2> ops) : ops_(std::move(ops)) {
  if (ops_.empty() || ops_.size() > 4)
    throw Error(ErrorCode::RangeError, "a qubit channel needs 1 to 4 Kraus operators",
                static_cast<double>(ops_.size()));
  Mat2 sum;
  for (const auto& k : ops_) sum += k.adjoint() * k;
  const double res = (sum - Mat2::identity()).frobenius_norm();
  if (!(res <= 1e-9))
    throw Error(ErrorCode::NotTracePreserving,
                "Kraus completeness residual " + std::to_string(res), res);
}

ChoiState::ChoiState(const DensityOp4& m) : m_(m) {
  const double res =
      (partial_trace(m.mat(), Party::A) - Mat2::identity() * 0.5).frobenius_norm();
  if (!(res <= 1e-9))
    throw Error(ErrorCode::NotTracePreserving,
                "reference marginal differs from I/2 by " + std::to_string(res), res);
}

ChoiState kraus_to_choi(const KrausSet& k) {
  const Mat4 phi = Mat4::projector(bell_state(0));
  Mat4 out;
  for (const auto& op : k.ops()) {
    const Mat4 l = kron(Mat2::identity(), op);
    out += l * phi * l.adjoint();
  }
  return ChoiState(DensityOp4(out));
}

Verdict is_antidegradable(const KrausSet& k, double tol_f) {
  return classify(kraus_to_choi(k).state(), tol_f);
}

KrausSet amplitude_damping(double gamma) {
  check_unit(gamma, "gamma");
  Mat2 k0, k1;
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return KrausSet({k0, k1});
}

KrausSet depolarizing(double p) {
  check_unit(p, "p");
  std::vector<Mat2> ops{pauli(0) * std::sqrt(1.0 - 0.75 * p)};
  for (int k = 1; k <= 3; ++k) ops.push_back(pauli(k) * std::sqrt(0.25 * p));
  return KrausSet(ops);
}

KrausSet phase_damping(double lambda) {
  check_unit(lambda, "lambda");
  Mat2 k0, k1;
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - lambda);
  k1(1, 1) = std::sqrt(lambda);
  return KrausSet({k0, k1});
}

KrausSet pauli_channel(double px, double py, double pz) {
  check_unit(px, "px");
  check_unit(py, "py");
  check_unit(pz, "pz");
  const double p0 = 1.0 - px - py - pz;
  if (p0 < -1e-12) throw Error(ErrorCode::RangeError, "Pauli probabilities exceed 1", -p0);
  return KrausSet({pauli(0) * std::sqrt(std::max(p0, 0.0)), pauli(1) * std::sqrt(px),
                   pauli(2) * std::sqrt(py), pauli(3) * std::sqrt(pz)});
}

KrausSet channel_from_json(const nlohmann::json& spec) {
  if (!spec.is_object()) throw Error(ErrorCode::ParseError, "channel spec must be an object");
  if (spec.contains("kraus")) {
    const auto& list = spec["kraus"];
    if (!list.is_array()) throw Error(ErrorCode::ParseError, "'kraus' must be an array");
    std::vector<Mat2> ops;
    for (const auto& m : list) {
      nlohmann::json with_dim = m;
      if (with_dim.is_object() && !with_dim.contains("dim")) with_dim["dim"] = 2;
      ops.push_back(matrix_from_json<2>(with_dim));
    }
    return KrausSet(ops);
  }
  if (!spec.contains("family") || !spec["family"].is_string())
    throw Error(ErrorCode::ParseError, "channel spec needs 'family' or 'kraus'");
  const std::string fam = spec["family"].get<std::string>();
  const nlohmann::json params = spec.value("params", nlohmann::json::object());
  if (fam == "identity") return KrausSet({Mat2::identity()});
  if (fam == "amplitude_damping") return amplitude_damping(param(params, "gamma"));
  if (fam == "depolarizing") return depolarizing(param(params, "p"));
  if (fam == "phase_damping") return phase_damping(param(params, "lambda"));
  if (fam == "pauli")
    return pauli_channel(param(params, "px"), param(params, "py"), param(params, "pz"));
  throw Error(ErrorCode::ParseError, "unknown channel family '" + fam + "'");
}

KrausSet channel_with_param(const nlohmann::json& spec, const std::string& name, double value) {
  if (!spec.is_object() || !spec.contains("family"))
    throw Error(ErrorCode::ParseError, "sweeps need a channel family");
  nlohmann::json s = spec;
  if (!s.contains("params") || !s["params"].is_object()) s["params"] = nlohmann::json::object();
  s["params"][name] = value;
  return channel_from_json(s);
}

std::vector<double> antidegradability_crossings(const std::function<KrausSet(double)>& family,
                                                double lo, double hi, int steps) {
  if (!(hi > lo) || steps < 1) throw Error(ErrorCode::RangeError, "bad sweep range");
  auto ok = [&](double v) { return f_value(kraus_to_choi(family(v)).state()) >= 0.0; };
  std::vector<double> out;
  double prev = lo;
  bool prev_ok = ok(lo);
  for (int i = 1; i <= steps; ++i) {
    const double cur = i == steps ? hi : lo + (hi - lo) * i / steps;
    const bool cur_ok = ok(cur);
    if (cur_ok != prev_ok) {
      double a = prev, b = cur;  // ok(a) == prev_ok
      for (int it = 0; it < 200 && b - a > 1e-14; ++it) {
        const double mid = 0.5 * (a + b);
        if (ok(mid) == prev_ok)
          a = mid;
        else
          b = mid;
      }
      out.push_back(0.5 * (a + b));
    }
    prev = cur;
    prev_ok = cur_ok;
  }
  return out;
}

}  // namespace symext
