// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sien/containment/containerize.hpp"
#include "sien/ilm/ids.hpp"

namespace sien::ilm {

using IlmRef = std::uint32_t;

// One resolver per container. The nonlocal ILM sits one level above the
// top container level and owns the naming service.
struct IlmNode {
  std::uint32_t level = 0;  // container level; top level + 1 for the nonlocal ILM
  std::uint32_t index = 1;  // container index within the level
  std::optional<IlmRef> parent;
  std::vector<IlmRef> children;
  std::unordered_set<GlobalId, GlobalIdHash> table;  // ids held by this ILM
};

enum class BindingAction { add, remove };

// Mapping tables of every ILM in the tree. Records are kept identical at all
// holders, so an update is visible from every position once it returns.
class IlmTree {
 public:
  // Throws InvalidParams if the hierarchy is not properly nested.
  static IlmTree build(const containment::ContainerHierarchy& h);

  std::size_t size() const { return nodes_.size(); }
  const IlmNode& node(IlmRef r) const { return nodes_.at(r); }
  IlmRef root() const { return root_; }
  // Leaf (level-1) resolver serving a topology node; the root when the
  // hierarchy has no levels.
  IlmRef leaf_of(topology::NodeId n) const;
  // Throws NotFound.
  IlmRef locate(std::uint32_t level, std::uint32_t index) const;
  // at, its parent, ..., root.
  std::vector<IlmRef> chain(IlmRef at) const;

  NamingService& naming() { return naming_; }
  const NamingService& naming() const { return naming_; }

  // Creates or extends the record and propagates it from `at` to the root.
  // Throws EmptyHrn, LocatorLimitExceeded, CollisionDetected.
  GlobalId register_object(IlmRef at, std::string_view hrn, const NetworkAddress& na, std::uint32_t service_meta = 0);
  // Indirect binding id -> target (data id to device id), propagated from `at`.
  GlobalId bind_indirect(IlmRef at, std::string_view hrn, const GlobalId& target, std::uint32_t service_meta = 0);

  // Locators of the record found on the walk up from `at`, merged with those
  // reached through its indirect chain. Throws NotFound, IndirectLoop.
  std::vector<NetworkAddress> resolve(IlmRef at, const GlobalId& id) const;
  // Like resolve but walks the chain anyway and returns the ILM that answered.
  std::optional<IlmRef> answering(IlmRef at, const GlobalId& id) const;

  // Adds or removes one locator. Removing the last locator of a direct
  // record deletes it. Throws NotFound, LocatorLimitExceeded.
  void update_binding(IlmRef at, const GlobalId& id, BindingAction action, const NetworkAddress& na);

  const NameRecord* record(const GlobalId& id) const;
  std::size_t record_count() const { return records_.size(); }

  // `rec <id> <hrn> <indirect|-> <na,...|->` per record held at `at`, by id.
  void dump(std::ostream& out, IlmRef at) const;
  std::string format_table(IlmRef at) const;

 private:
  struct Entry {
    NameRecord record;
    std::vector<IlmRef> holders;  // ascending
  };

  Entry& upsert(IlmRef at, const GlobalId& id, std::string_view hrn, std::uint32_t service_meta);
  void spread(Entry& e, IlmRef at);
  void erase(const GlobalId& id);

  std::vector<IlmNode> nodes_;
  IlmRef root_ = 0;
  std::vector<IlmRef> leaf_;  // per topology node
  std::vector<std::vector<IlmRef>> by_level_;
  NamingService naming_;
  std::unordered_map<GlobalId, Entry, GlobalIdHash> records_;
};

// Gateway state of one mMTC local domain: 8-bit short names mapped to
// global ids, plus local indirect bindings (data Lx -> device Lt).
class LocalDomain {
 public:
  explicit LocalDomain(topology::NodeId gateway = 0) : gateway_(gateway) {}

  topology::NodeId gateway() const { return gateway_; }
  // Lowest free LocalId; re-registering a live id returns its LocalId.
  // Throws NamespaceExhausted.
  LocalId register_local(const GlobalId& id);
  // Digests the HRN first. Throws EmptyHrn, NamespaceExhausted.
  LocalId register_local(std::string_view hrn);
  // Frees the name and any local binding from or to it. Throws NotFound.
  void deregister(LocalId lid);

  GlobalId translate(LocalId lid) const;         // throws NotFound
  LocalId translate_back(const GlobalId& id) const;  // throws NotFound

  // Binds data name lx to device name lt; both must be live. Throws NotFound.
  void bind_local(LocalId lx, LocalId lt);
  // Follows local bindings to the device name. Throws NotFound, IndirectLoop.
  LocalId resolve_local(LocalId lx) const;

  std::size_t size() const { return live_; }

 private:
  topology::NodeId gateway_;
  std::array<std::optional<GlobalId>, kLocalNamespace> slots_{};
  std::array<std::optional<LocalId>, kLocalNamespace> bindings_{};
  std::unordered_map<GlobalId, LocalId, GlobalIdHash> reverse_;
  std::size_t live_ = 0;
};

}  // namespace sien::ilm
