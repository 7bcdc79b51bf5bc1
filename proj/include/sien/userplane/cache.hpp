// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <list>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "sien/ilm/ids.hpp"
#include "sien/topology/graph.hpp"

namespace sien::userplane {

using ilm::GlobalId;

// Media partition of one element with least-recently-used replacement.
// Pinned objects (origin copies, pre-placed content) live outside the
// partition and are never evicted.
class CacheStore {
 public:
  struct Entry {
    GlobalId id;
    std::uint64_t bytes = 0;
    std::uint64_t last_use = 0;
    bool explicit_copy = false;  // placed by prefetching and known to the ILM
  };

  CacheStore() = default;
  CacheStore(topology::NodeId owner, std::uint64_t media_capacity, std::uint64_t other_capacity = 0)
      : owner_(owner), media_capacity_(media_capacity), other_capacity_(other_capacity) {}

  topology::NodeId owner() const { return owner_; }
  std::uint64_t media_capacity() const { return media_capacity_; }
  std::uint64_t other_capacity() const { return other_capacity_; }
  std::uint64_t used() const { return used_; }
  std::size_t size() const { return entries_.size(); }

  bool holds(const GlobalId& id) const { return pinned_.count(id) || index_.count(id); }
  bool pinned(const GlobalId& id) const { return pinned_.count(id) != 0; }
  const Entry* find(const GlobalId& id) const;

  // Marks a use; false when the object is not in the partition.
  bool touch(const GlobalId& id);
  // Stores the object after evicting colder entries; false (and no change)
  // when it exceeds the partition. Re-inserting refreshes the entry.
  bool insert(const GlobalId& id, std::uint64_t bytes, bool explicit_copy, std::vector<Entry>* evicted = nullptr);
  bool erase(const GlobalId& id);
  void pin(const GlobalId& id) { pinned_.insert(id); }

  // Least to most recently used.
  std::vector<GlobalId> lru_order() const;

 private:
  topology::NodeId owner_ = 0;
  std::uint64_t media_capacity_ = 0;
  std::uint64_t other_capacity_ = 0;
  std::uint64_t used_ = 0;
  std::uint64_t clock_ = 0;
  std::list<Entry> entries_;  // front = most recent
  std::unordered_map<GlobalId, std::list<Entry>::iterator, ilm::GlobalIdHash> index_;
  std::unordered_set<GlobalId, ilm::GlobalIdHash> pinned_;
};

}  // namespace sien::userplane
