// SPDX-License-Identifier: Apache-2.0
#include "sien/userplane/forwarding.hpp"

#include <algorithm>
#include <ostream>

#include "sien/error.hpp"

namespace sien::userplane {

using ilm::NetworkAddress;

UserPlane::UserPlane(const topology::WeightedGraph& g, ilm::IlmTree& ilm, std::uint64_t cache_capacity)
    : g_(&g), ilm_(&ilm), hops_(g) {
  caches_.reserve(g.node_count());
  for (const auto& n : g.nodes()) {
    const std::uint64_t media = topology::is_forwarding(n.kind) ? std::min(n.memory_media_partition(), cache_capacity) : 0;
    caches_.emplace_back(n.id, media, n.memory_other_partition());
  }
}

void UserPlane::publish(const ContentObject& obj, const std::string& device_hrn) {
  if (obj.publisher >= g_->node_count()) throw Error(Errc::InvalidNode, "publisher outside the graph");
  if (obj.volume == 0) throw Error(Errc::InvalidParams, "object volume must be > 0");
  const ilm::IlmRef leaf = ilm_->leaf_of(obj.publisher);
  const NetworkAddress na = NetworkAddress::for_node(obj.publisher);
  ContentObject stored = obj;
  if (device_hrn.empty()) {
    stored.id = ilm_->register_object(leaf, obj.hrn, na);
  } else {
    const GlobalId device = ilm_->register_object(leaf, device_hrn, na);
    stored.id = ilm_->bind_indirect(leaf, obj.hrn, device);
  }
  caches_[obj.publisher].pin(stored.id);
  catalog_[stored.id] = std::move(stored);
}

const ContentObject& UserPlane::object(const GlobalId& id) const {
  auto it = catalog_.find(id);
  if (it == catalog_.end()) throw Error(Errc::NotFound, "object " + id.hex() + " is not in the catalog");
  return it->second;
}

std::optional<NodeId> UserPlane::nearest(NodeId from, const std::vector<NetworkAddress>& locs,
                                         std::size_t rank) const {
  std::vector<std::pair<std::uint32_t, const NetworkAddress*>> hosts;
  for (const auto& na : locs) {
    const auto n = na.node();
    if (!n || *n >= g_->node_count()) continue;
    const std::uint32_t h = hops_.hops(from, *n);
    if (h != HopIndex::kUnreachable) hosts.emplace_back(h, &na);
  }
  if (hosts.empty()) return std::nullopt;
  std::sort(hosts.begin(), hosts.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : *a.second < *b.second;
  });
  return *hosts[rank % hosts.size()].second->node();
}

DeliveryTrace UserPlane::handle_request(const RequestMsg& req, std::size_t request_n, std::size_t path_j) {
  auto found = catalog_.find(req.requested);
  if (found == catalog_.end()) throw Error(Errc::Unresolvable, "no locator or copy for " + req.requested.hex());
  const ContentObject& obj = found->second;
  if (req.origin_node >= g_->node_count()) throw Error(Errc::InvalidNode, "requester outside the graph");
  DeliveryTrace t;
  t.request_n = request_n;
  t.path_j = path_j;
  t.object = req.requested;
  t.volume = obj.volume;
  t.path.push_back(req.origin_node);

  NodeId cur = req.origin_node;
  std::optional<NodeId> fixed;  // target of a secondary path
  for (;;) {
    if (caches_[cur].holds(req.requested)) break;
    if (t.path.size() > g_->node_count()) throw Error(Errc::NoRoute, "request loops");
    std::optional<NodeId> target = fixed;
    if (!target) {
      std::vector<NetworkAddress> locs;
      try {
        locs = ilm_->resolve(ilm_->leaf_of(cur), req.requested);
      } catch (const Error& e) {
        if (e.code() != Errc::NotFound) throw;
        throw Error(Errc::Unresolvable, "no locator or copy for " + req.requested.hex());
      }
      target = nearest(cur, locs, path_j);
      if (!target) throw Error(Errc::NoRoute, "no reachable locator for " + req.requested.hex());
      if (path_j > 0) fixed = target;
    }
    const auto next = hops_.next_hop(cur, *target);
    if (!next) throw Error(Errc::Unresolvable, "locator " + std::to_string(*target) + " holds no copy");
    cur = *next;
    t.path.push_back(cur);
  }
  t.hops = static_cast<std::uint32_t>(t.path.size() - 1);
  t.serving_node = cur;
  t.cache_hit = cur != obj.publisher;
  caches_[cur].touch(req.requested);
  return t;
}

void UserPlane::announce_evictions(NodeId node, const std::vector<CacheStore::Entry>& evicted) {
  for (const auto& e : evicted) {
    if (!e.explicit_copy) continue;
    if (!ilm_->record(e.id)) continue;
    ilm_->update_binding(ilm_->leaf_of(node), e.id, ilm::BindingAction::remove, NetworkAddress::for_node(node));
    ++ilm_updates_;
  }
}

void UserPlane::deliver_data(const DeliveryTrace& trace) {
  std::vector<CacheStore::Entry> evicted;
  // Reverse path, skipping the serving element itself.
  for (std::size_t i = trace.path.size() - 1; i-- > 0;) {
    const NodeId n = trace.path[i];
    if (!topology::is_forwarding(g_->node(n).kind)) continue;
    if (caches_[n].pinned(trace.object)) continue;
    evicted.clear();
    caches_[n].insert(trace.object, trace.volume, false, &evicted);
    announce_evictions(n, evicted);
  }
}

bool UserPlane::place_explicit(const GlobalId& id, NodeId node) {
  const ContentObject& obj = object(id);
  if (node >= g_->node_count()) throw Error(Errc::InvalidNode, "placement outside the graph");
  CacheStore& c = caches_[node];
  if (c.pinned(id)) return true;
  const ilm::NameRecord* rec = ilm_->record(id);
  const NetworkAddress na = NetworkAddress::for_node(node);
  const bool known = rec && std::binary_search(rec->locators.begin(), rec->locators.end(), na);
  const bool can_announce = rec && (known || rec->locators.size() < ilm::kMaxLocators);
  std::vector<CacheStore::Entry> evicted;
  if (!c.insert(id, obj.volume, can_announce, &evicted)) return false;
  announce_evictions(node, evicted);
  if (can_announce && !known) {
    ilm_->update_binding(ilm_->leaf_of(node), id, ilm::BindingAction::add, na);
    ++ilm_updates_;
  }
  return true;
}

void UserPlane::preplace(const GlobalId& id, NodeId node) {
  object(id);
  caches_.at(node).pin(id);
}

void write_trace_header(std::ostream& out) { out << "request_n,path_j,hops,serving_node,volume_bytes,cache_hit\n"; }

void write_trace_row(std::ostream& out, const DeliveryTrace& t) {
  out << t.request_n << ',' << t.path_j << ',' << t.hops << ',' << t.serving_node << ',' << t.volume << ','
      << (t.cache_hit ? 1 : 0) << '\n';
}

}  // namespace sien::userplane
