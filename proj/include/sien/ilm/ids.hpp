// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sien/topology/graph.hpp"

namespace sien::ilm {

// 160-bit flat identifier.
struct GlobalId {
  std::array<std::uint8_t, 20> bytes{};

  std::string hex() const;
  // Throws ParseError unless given exactly 40 hex digits.
  static GlobalId from_hex(std::string_view hex);
  auto operator<=>(const GlobalId&) const = default;
};

struct GlobalIdHash {
  std::size_t operator()(const GlobalId& id) const noexcept;
};

// Short name inside one mMTC local domain.
struct LocalId {
  std::uint8_t value = 0;
  auto operator<=>(const LocalId&) const = default;
};
inline constexpr std::size_t kLocalNamespace = 256;

struct NetworkAddress {
  enum class Version : std::uint8_t { v4, v6 };

  Version version = Version::v4;
  std::array<std::uint8_t, 16> bytes{};  // v4 uses the first 4

  static NetworkAddress v4(std::uint32_t addr);
  static NetworkAddress v6(const std::array<std::uint8_t, 16>& bytes);
  // Deterministic address of a topology node: 10.0.0.0/8 or fd00::/8.
  static NetworkAddress for_node(topology::NodeId node, Version version = Version::v4);
  // Inverse of for_node; nullopt for foreign addresses.
  std::optional<topology::NodeId> node() const;

  std::size_t width_bits() const { return version == Version::v4 ? 32 : 128; }
  std::string to_string() const;
  // Dotted quad or full colon-hex form (8 groups). Throws ParseError.
  static NetworkAddress parse(std::string_view text);
  auto operator<=>(const NetworkAddress&) const = default;
};

inline constexpr std::size_t kMaxLocators = 4;

struct NameRecord {
  std::string hrn;
  GlobalId id;
  std::vector<NetworkAddress> locators;  // ascending, unique
  std::optional<GlobalId> indirect_target;
  std::uint32_t service_meta = 0;  // type of service (high 16 bits), priority (low 16)

  bool operator==(const NameRecord&) const = default;
};

// SHA-1 of the HRN bytes.
GlobalId digest(std::string_view hrn);

// HRN -> ID translation. Remembers every assignment and treats two HRNs
// digesting to one ID as fatal.
class NamingService {
 public:
  using HashFn = std::function<GlobalId(std::string_view)>;

  NamingService() : hash_(digest) {}
  explicit NamingService(HashFn hash) : hash_(std::move(hash)) {}

  // Throws EmptyHrn, CollisionDetected.
  GlobalId assign_id(std::string_view hrn);
  std::optional<std::string> hrn_of(const GlobalId& id) const;
  std::size_t size() const { return names_.size(); }

 private:
  HashFn hash_;
  std::unordered_map<GlobalId, std::string, GlobalIdHash> names_;
};

}  // namespace sien::ilm
