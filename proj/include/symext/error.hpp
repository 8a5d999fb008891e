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

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symext {

enum class ErrorCode {
  NotConverged,
  NotPSD,
  Singular,
  HermiticityInvalid,
  TraceInvalid,
  ParseError,
  RangeError,
  NegativeDeterminant,
  FullRank,
  NotFullRank,
  NotBoundary,
  BisectionFailed,
  InadmissibleParameters,
  DegenerateFace,
  DegenerateDirection,
  SearchFailed,
  NotInA,
  OptimizationFailed,
  NotExtendible,
  NotTracePreserving,
  RecursionLimit,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure the library reports. `residual` carries the measured quantity
// that tripped the check (NaN when there is none).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double residual = kNoResidual);

  ErrorCode code() const noexcept { return code_; }
  double residual() const noexcept { return residual_; }

  static constexpr double kNoResidual = std::numeric_limits<double>::quiet_NaN();

 private:
  ErrorCode code_;
  double residual_;
};

}  // namespace symext
