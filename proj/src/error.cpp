// SPDX-License-Identifier: Apache-2.0
#include "sien/error.hpp"

namespace sien {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::DanglingEndpoint: return "DanglingEndpoint";
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::InvalidNode: return "InvalidNode";
    case Errc::Unreachable: return "Unreachable";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::UnitMismatch: return "UnitMismatch";
    case Errc::InvalidTargets: return "InvalidTargets";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::NonFiniteLoss: return "NonFiniteLoss";
    case Errc::InvalidSpec: return "InvalidSpec";
    case Errc::EmptyHrn: return "EmptyHrn";
    case Errc::CollisionDetected: return "CollisionDetected";
    case Errc::LocatorLimitExceeded: return "LocatorLimitExceeded";
    case Errc::NotFound: return "NotFound";
    case Errc::IndirectLoop: return "IndirectLoop";
    case Errc::NamespaceExhausted: return "NamespaceExhausted";
    case Errc::Unresolvable: return "Unresolvable";
    case Errc::NoRoute: return "NoRoute";
    case Errc::DegenerateDistribution: return "DegenerateDistribution";
    case Errc::EmptyLog: return "EmptyLog";
    case Errc::ZeroDenominator: return "ZeroDenominator";
    case Errc::InvalidRecord: return "InvalidRecord";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace sien
