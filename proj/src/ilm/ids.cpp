// SPDX-License-Identifier: Apache-2.0
#include "sien/ilm/ids.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <cstring>

#include "sien/error.hpp"

namespace sien::ilm {

namespace {
constexpr char kHex[] = "0123456789abcdef";

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}
}  // namespace

std::string GlobalId::hex() const {
  std::string s(40, '0');
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    s[2 * i] = kHex[bytes[i] >> 4];
    s[2 * i + 1] = kHex[bytes[i] & 0xf];
  }
  return s;
}

GlobalId GlobalId::from_hex(std::string_view hex) {
  if (hex.size() != 40) throw Error(Errc::ParseError, "identifier must have 40 hex digits");
  GlobalId id;
  for (std::size_t i = 0; i < 20; ++i) {
    const int hi = hex_value(hex[2 * i]);
    const int lo = hex_value(hex[2 * i + 1]);
    if (hi < 0 || lo < 0) throw Error(Errc::ParseError, "bad hex digit in identifier");
    id.bytes[i] = static_cast<std::uint8_t>(hi << 4 | lo);
  }
  return id;
}

std::size_t GlobalIdHash::operator()(const GlobalId& id) const noexcept {
  std::uint64_t h;
  std::memcpy(&h, id.bytes.data(), sizeof h);
  return static_cast<std::size_t>(h);
}

NetworkAddress NetworkAddress::v4(std::uint32_t addr) {
  NetworkAddress na;
  na.version = Version::v4;
  for (int i = 0; i < 4; ++i) na.bytes[i] = static_cast<std::uint8_t>(addr >> (24 - 8 * i));
  return na;
}

NetworkAddress NetworkAddress::v6(const std::array<std::uint8_t, 16>& bytes) {
  NetworkAddress na;
  na.version = Version::v6;
  na.bytes = bytes;
  return na;
}

NetworkAddress NetworkAddress::for_node(topology::NodeId node, Version version) {
  if (version == Version::v4) {
    if (node >= (1u << 24) - 1) throw Error(Errc::InvalidParams, "node id does not fit 10.0.0.0/8");
    return v4((10u << 24) | (node + 1));
  }
  std::array<std::uint8_t, 16> b{};
  b[0] = 0xfd;
  for (int i = 0; i < 4; ++i) b[12 + i] = static_cast<std::uint8_t>(node >> (24 - 8 * i));
  return v6(b);
}

std::optional<topology::NodeId> NetworkAddress::node() const {
  if (version == Version::v4) {
    if (bytes[0] != 10) return std::nullopt;
    const std::uint32_t low = std::uint32_t(bytes[1]) << 16 | std::uint32_t(bytes[2]) << 8 | bytes[3];
    if (low == 0) return std::nullopt;
    return low - 1;
  }
  if (bytes[0] != 0xfd) return std::nullopt;
  for (int i = 1; i < 12; ++i) {
    if (bytes[i] != 0) return std::nullopt;
  }
  std::uint32_t n = 0;
  for (int i = 12; i < 16; ++i) n = n << 8 | bytes[i];
  return n;
}

std::string NetworkAddress::to_string() const {
  std::string s;
  if (version == Version::v4) {
    for (int i = 0; i < 4; ++i) {
      if (i) s += '.';
      s += std::to_string(bytes[i]);
    }
    return s;
  }
  for (int g = 0; g < 8; ++g) {
    if (g) s += ':';
    const unsigned v = unsigned(bytes[2 * g]) << 8 | bytes[2 * g + 1];
    char buf[5];
    auto [p, ec] = std::to_chars(buf, buf + 5, v, 16);
    s.append(buf, p);
  }
  return s;
}

NetworkAddress NetworkAddress::parse(std::string_view text) {
  auto fail = [&]() -> NetworkAddress {
    throw Error(Errc::ParseError, "bad network address '" + std::string(text) + "'");
  };
  const bool v6 = text.find(':') != std::string_view::npos;
  const char sep = v6 ? ':' : '.';
  const int groups = v6 ? 8 : 4;
  std::array<std::uint8_t, 16> b{};
  std::size_t pos = 0;
  for (int g = 0; g < groups; ++g) {
    const std::size_t end = g + 1 < groups ? text.find(sep, pos) : text.size();
    if (end == std::string_view::npos || end == pos) return fail();
    unsigned v = 0;
    const auto [p, ec] = std::from_chars(text.data() + pos, text.data() + end, v, v6 ? 16 : 10);
    if (ec != std::errc{} || p != text.data() + end) return fail();
    if (v6) {
      if (v > 0xffff) return fail();
      b[2 * g] = static_cast<std::uint8_t>(v >> 8);
      b[2 * g + 1] = static_cast<std::uint8_t>(v);
    } else {
      if (v > 255) return fail();
      b[g] = static_cast<std::uint8_t>(v);
    }
    pos = end + 1;
  }
  if (v6) return NetworkAddress::v6(b);
  NetworkAddress na;
  na.bytes = b;
  return na;
}

GlobalId digest(std::string_view hrn) {
  GlobalId id;
  unsigned int len = 0;
  if (EVP_Digest(hrn.data(), hrn.size(), id.bytes.data(), &len, EVP_sha1(), nullptr) != 1 || len != 20) {
    throw Error(Errc::InvalidParams, "SHA-1 digest failed");
  }
  return id;
}

GlobalId NamingService::assign_id(std::string_view hrn) {
  if (hrn.empty()) throw Error(Errc::EmptyHrn, "human-readable name is empty");
  const GlobalId id = hash_(hrn);
  auto [it, inserted] = names_.try_emplace(id, hrn);
  if (!inserted && it->second != hrn) {
    throw Error(Errc::CollisionDetected, "'" + std::string(hrn) + "' and '" + it->second + "' share id " + id.hex());
  }
  return id;
}

std::optional<std::string> NamingService::hrn_of(const GlobalId& id) const {
  auto it = names_.find(id);
  if (it == names_.end()) return std::nullopt;
  return it->second;
}

}  // namespace sien::ilm
