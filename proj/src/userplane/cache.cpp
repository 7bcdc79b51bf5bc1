// SPDX-License-Identifier: Apache-2.0
#include "sien/userplane/cache.hpp"

namespace sien::userplane {

const CacheStore::Entry* CacheStore::find(const GlobalId& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &*it->second;
}

bool CacheStore::touch(const GlobalId& id) {
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  it->second->last_use = ++clock_;
  entries_.splice(entries_.begin(), entries_, it->second);
  return true;
}

bool CacheStore::insert(const GlobalId& id, std::uint64_t bytes, bool explicit_copy, std::vector<Entry>* evicted) {
  if (auto it = index_.find(id); it != index_.end()) {
    it->second->explicit_copy = it->second->explicit_copy || explicit_copy;
    touch(id);
    return true;
  }
  if (bytes > media_capacity_) return false;
  while (used_ + bytes > media_capacity_) {
    Entry& cold = entries_.back();
    used_ -= cold.bytes;
    index_.erase(cold.id);
    if (evicted) evicted->push_back(cold);
    entries_.pop_back();
  }
  entries_.push_front(Entry{id, bytes, ++clock_, explicit_copy});
  index_.emplace(id, entries_.begin());
  used_ += bytes;
  return true;
}

bool CacheStore::erase(const GlobalId& id) {
  auto it = index_.find(id);
  if (it == index_.end()) return false;
  used_ -= it->second->bytes;
  entries_.erase(it->second);
  index_.erase(it);
  return true;
}

std::vector<GlobalId> CacheStore::lru_order() const {
  std::vector<GlobalId> out;
  out.reserve(entries_.size());
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) out.push_back(it->id);
  return out;
}

}  // namespace sien::userplane
