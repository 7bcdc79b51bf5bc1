// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sien {

enum class Errc {
  // topology
  DanglingEndpoint,
  DuplicateEdge,
  NegativeWeight,
  SelfLoop,
  InvalidNode,
  Unreachable,
  InvalidParams,
  // containment
  UnitMismatch,
  InvalidTargets,
  // congruity
  DimensionMismatch,
  EmptyDataset,
  NonFiniteLoss,
  InvalidSpec,
  // ilm
  EmptyHrn,
  CollisionDetected,
  LocatorLimitExceeded,
  NotFound,
  IndirectLoop,
  NamespaceExhausted,
  // userplane
  Unresolvable,
  NoRoute,
  DegenerateDistribution,
  // evaluation
  EmptyLog,
  ZeroDenominator,
  InvalidRecord,
  // io / config
  ParseError,
  IoError,
  ConfigError,
};

std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace sien
