// SPDX-License-Identifier: Apache-2.0
#include "sien/ilm/tree.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "sien/error.hpp"

namespace sien::ilm {

IlmTree IlmTree::build(const containment::ContainerHierarchy& h) {
  IlmTree t;
  t.by_level_.resize(h.level_count());
  for (std::size_t l = 0; l < h.level_count(); ++l) {
    for (const auto& c : h.levels[l]) {
      IlmNode n;
      n.level = static_cast<std::uint32_t>(l + 1);
      n.index = c.index;
      t.by_level_[l].push_back(static_cast<IlmRef>(t.nodes_.size()));
      t.nodes_.push_back(std::move(n));
    }
  }
  IlmNode root;
  root.level = static_cast<std::uint32_t>(h.level_count() + 1);
  t.root_ = static_cast<IlmRef>(t.nodes_.size());
  t.nodes_.push_back(std::move(root));

  for (std::size_t l = 0; l < h.level_count(); ++l) {
    if (l + 1 == h.level_count()) {
      for (IlmRef self : t.by_level_[l]) {
        t.nodes_[self].parent = t.root_;
        t.nodes_[t.root_].children.push_back(self);
      }
      continue;
    }
    for (std::size_t p = 0; p < h.levels[l + 1].size(); ++p) {
      const IlmRef parent = t.by_level_[l + 1][p];
      for (std::uint32_t child : h.levels[l + 1][p].children) {
        if (child >= t.by_level_[l].size()) throw Error(Errc::InvalidParams, "container child out of range");
        IlmNode& cn = t.nodes_[t.by_level_[l][child]];
        if (cn.parent) throw Error(Errc::InvalidParams, "container has two parents");
        cn.parent = parent;
        t.nodes_[parent].children.push_back(t.by_level_[l][child]);
      }
    }
    for (IlmRef r : t.by_level_[l]) {
      if (!t.nodes_[r].parent) throw Error(Errc::InvalidParams, "container has no parent");
    }
  }

  t.leaf_.assign(h.node_count, t.root_);
  if (h.level_count() > 0) {
    for (std::size_t i = 0; i < h.levels[0].size(); ++i) {
      for (topology::NodeId m : h.levels[0][i].members) {
        if (m < t.leaf_.size()) t.leaf_[m] = t.by_level_[0][i];
      }
    }
  }
  return t;
}

IlmRef IlmTree::leaf_of(topology::NodeId n) const {
  if (n >= leaf_.size()) throw Error(Errc::InvalidNode, "node " + std::to_string(n) + " is not in the hierarchy");
  return leaf_[n];
}

IlmRef IlmTree::locate(std::uint32_t level, std::uint32_t index) const {
  if (level == by_level_.size() + 1 && index == 1) return root_;
  if (level >= 1 && level <= by_level_.size()) {
    for (IlmRef r : by_level_[level - 1]) {
      if (nodes_[r].index == index) return r;
    }
  }
  throw Error(Errc::NotFound, "no ILM for container " + std::to_string(level) + "/" + std::to_string(index));
}

std::vector<IlmRef> IlmTree::chain(IlmRef at) const {
  std::vector<IlmRef> out;
  std::optional<IlmRef> cur = at;
  while (cur) {
    out.push_back(*cur);
    cur = nodes_.at(*cur).parent;
  }
  return out;
}

IlmTree::Entry& IlmTree::upsert(IlmRef at, const GlobalId& id, std::string_view hrn, std::uint32_t service_meta) {
  auto [it, inserted] = records_.try_emplace(id);
  if (inserted) {
    it->second.record.hrn = std::string(hrn);
    it->second.record.id = id;
    it->second.record.service_meta = service_meta;
  }
  spread(it->second, at);
  return it->second;
}

void IlmTree::spread(Entry& e, IlmRef at) {
  for (IlmRef r : chain(at)) {
    auto pos = std::lower_bound(e.holders.begin(), e.holders.end(), r);
    if (pos != e.holders.end() && *pos == r) continue;
    e.holders.insert(pos, r);
    nodes_[r].table.insert(e.record.id);
  }
}

void IlmTree::erase(const GlobalId& id) {
  auto it = records_.find(id);
  if (it == records_.end()) return;
  for (IlmRef r : it->second.holders) nodes_[r].table.erase(id);
  records_.erase(it);
}

namespace {

bool contains(const std::vector<NetworkAddress>& v, const NetworkAddress& na) {
  return std::binary_search(v.begin(), v.end(), na);
}

void check_hrn(std::string_view hrn) {
  if (hrn.empty()) throw Error(Errc::EmptyHrn, "human-readable name is empty");
  if (hrn.find_first_of(" \t\r\n") != std::string_view::npos) {
    throw Error(Errc::InvalidParams, "human-readable name contains whitespace");
  }
}

}  // namespace

GlobalId IlmTree::register_object(IlmRef at, std::string_view hrn, const NetworkAddress& na,
                                  std::uint32_t service_meta) {
  check_hrn(hrn);
  const GlobalId id = naming_.assign_id(hrn);
  if (auto it = records_.find(id); it != records_.end()) {
    const auto& locs = it->second.record.locators;
    if (!contains(locs, na) && locs.size() >= kMaxLocators) {
      throw Error(Errc::LocatorLimitExceeded, id.hex() + " already binds " + std::to_string(kMaxLocators) + " addresses");
    }
  }
  Entry& e = upsert(at, id, hrn, service_meta);
  auto& locs = e.record.locators;
  auto pos = std::lower_bound(locs.begin(), locs.end(), na);
  if (pos == locs.end() || *pos != na) locs.insert(pos, na);
  return id;
}

GlobalId IlmTree::bind_indirect(IlmRef at, std::string_view hrn, const GlobalId& target, std::uint32_t service_meta) {
  check_hrn(hrn);
  const GlobalId id = naming_.assign_id(hrn);
  Entry& e = upsert(at, id, hrn, service_meta);
  e.record.indirect_target = target;
  return id;
}

std::optional<IlmRef> IlmTree::answering(IlmRef at, const GlobalId& id) const {
  std::optional<IlmRef> cur = at;
  while (cur) {
    const IlmNode& n = nodes_.at(*cur);
    if (n.table.count(id)) return cur;
    cur = n.parent;
  }
  return std::nullopt;
}

std::vector<NetworkAddress> IlmTree::resolve(IlmRef at, const GlobalId& id) const {
  std::vector<NetworkAddress> out;
  std::vector<GlobalId> visited;
  GlobalId cur = id;
  for (;;) {
    if (!answering(at, cur)) throw Error(Errc::NotFound, "id " + cur.hex() + " is not registered");
    if (std::find(visited.begin(), visited.end(), cur) != visited.end()) {
      throw Error(Errc::IndirectLoop, "indirect chain of " + id.hex() + " revisits " + cur.hex());
    }
    visited.push_back(cur);
    const NameRecord& rec = records_.at(cur).record;
    out.insert(out.end(), rec.locators.begin(), rec.locators.end());
    if (!rec.indirect_target) break;
    cur = *rec.indirect_target;
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void IlmTree::update_binding(IlmRef at, const GlobalId& id, BindingAction action, const NetworkAddress& na) {
  if (!answering(at, id)) throw Error(Errc::NotFound, "id " + id.hex() + " is not registered");
  Entry& e = records_.at(id);
  auto& locs = e.record.locators;
  auto pos = std::lower_bound(locs.begin(), locs.end(), na);
  const bool present = pos != locs.end() && *pos == na;
  if (action == BindingAction::add) {
    if (!present && locs.size() >= kMaxLocators) {
      throw Error(Errc::LocatorLimitExceeded, id.hex() + " already binds " + std::to_string(kMaxLocators) + " addresses");
    }
    spread(e, at);
    if (!present) locs.insert(pos, na);
    return;
  }
  if (!present) return;
  locs.erase(pos);
  if (locs.empty() && !e.record.indirect_target) erase(id);
}

const NameRecord* IlmTree::record(const GlobalId& id) const {
  auto it = records_.find(id);
  return it == records_.end() ? nullptr : &it->second.record;
}

void IlmTree::dump(std::ostream& out, IlmRef at) const {
  const IlmNode& n = nodes_.at(at);
  std::vector<GlobalId> ids(n.table.begin(), n.table.end());
  std::sort(ids.begin(), ids.end());
  for (const GlobalId& id : ids) {
    const NameRecord& rec = records_.at(id).record;
    out << "rec " << id.hex() << ' ' << rec.hrn << ' ' << (rec.indirect_target ? rec.indirect_target->hex() : "-")
        << ' ';
    if (rec.locators.empty()) out << '-';
    for (std::size_t i = 0; i < rec.locators.size(); ++i) {
      if (i) out << ',';
      out << rec.locators[i].to_string();
    }
    out << '\n';
  }
}

std::string IlmTree::format_table(IlmRef at) const {
  std::ostringstream os;
  dump(os, at);
  return os.str();
}

LocalId LocalDomain::register_local(const GlobalId& id) {
  if (auto it = reverse_.find(id); it != reverse_.end()) return it->second;
  for (std::size_t i = 0; i < kLocalNamespace; ++i) {
    if (!slots_[i]) {
      slots_[i] = id;
      const LocalId lid{static_cast<std::uint8_t>(i)};
      reverse_.emplace(id, lid);
      ++live_;
      return lid;
    }
  }
  throw Error(Errc::NamespaceExhausted, "all " + std::to_string(kLocalNamespace) + " local names of gateway " +
                                            std::to_string(gateway_) + " are in use");
}

LocalId LocalDomain::register_local(std::string_view hrn) {
  if (hrn.empty()) throw Error(Errc::EmptyHrn, "human-readable name is empty");
  return register_local(digest(hrn));
}

void LocalDomain::deregister(LocalId lid) {
  auto& slot = slots_[lid.value];
  if (!slot) throw Error(Errc::NotFound, "local id " + std::to_string(lid.value) + " is not allocated");
  reverse_.erase(*slot);
  slot.reset();
  bindings_[lid.value].reset();
  for (auto& b : bindings_) {
    if (b && *b == lid) b.reset();
  }
  --live_;
}

GlobalId LocalDomain::translate(LocalId lid) const {
  const auto& slot = slots_[lid.value];
  if (!slot) throw Error(Errc::NotFound, "local id " + std::to_string(lid.value) + " is not allocated");
  return *slot;
}

LocalId LocalDomain::translate_back(const GlobalId& id) const {
  auto it = reverse_.find(id);
  if (it == reverse_.end()) throw Error(Errc::NotFound, "id " + id.hex() + " has no local name");
  return it->second;
}

void LocalDomain::bind_local(LocalId lx, LocalId lt) {
  translate(lx);
  translate(lt);
  bindings_[lx.value] = lt;
}

LocalId LocalDomain::resolve_local(LocalId lx) const {
  translate(lx);
  LocalId cur = lx;
  for (std::size_t steps = 0; bindings_[cur.value]; ++steps) {
    if (steps >= kLocalNamespace) throw Error(Errc::IndirectLoop, "local binding chain loops");
    cur = *bindings_[cur.value];
  }
  return cur;
}

}  // namespace sien::ilm
