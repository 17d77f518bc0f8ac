// Copyright 2026 The poptransfer Authors
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

#include <stdexcept>
#include <string>
#include <string_view>

namespace poptransfer {

enum class Errc {
  AsymmetricMatrix,
  StructuredRequiresN3,
  InvalidSystem,
  InvalidPulse,
  Unreachable,
  NoConvergence,
  DegenerateRoots,
  EvenN0,
  NTooSmall,
  NotDegenerate,
  InvalidConfig,
  NormDrift,
  StepCountOverflow,
  OutOfRange,
  InsufficientPoints,
  NonPositiveValue,
  RatioOutOfRange,
  UnknownKey,
  NonIncreasingKicks,
};

/// Stable identifier used in `error=<Name>` diagnostics.
std::string_view error_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  Errc code_;
};

}  // namespace poptransfer
