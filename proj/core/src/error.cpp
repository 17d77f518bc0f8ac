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

#include "poptransfer/error.hpp"

namespace poptransfer {

std::string_view error_name(Errc code) noexcept {
  switch (code) {
    case Errc::AsymmetricMatrix: return "AsymmetricMatrix";
    case Errc::StructuredRequiresN3: return "StructuredRequiresN3";
    case Errc::InvalidSystem: return "InvalidSystem";
    case Errc::InvalidPulse: return "InvalidPulse";
    case Errc::Unreachable: return "Unreachable";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::DegenerateRoots: return "DegenerateRoots";
    case Errc::EvenN0: return "EvenN0";
    case Errc::NTooSmall: return "NTooSmall";
    case Errc::NotDegenerate: return "NotDegenerate";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::NormDrift: return "NormDrift";
    case Errc::StepCountOverflow: return "StepCountOverflow";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::InsufficientPoints: return "InsufficientPoints";
    case Errc::NonPositiveValue: return "NonPositiveValue";
    case Errc::RatioOutOfRange: return "RatioOutOfRange";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::NonIncreasingKicks: return "NonIncreasingKicks";
  }
  return "Unknown";
}

}  // namespace poptransfer
