// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "sien/ilm/tree.hpp"
#include "sien/topology/graph.hpp"
#include "sien/userplane/cache.hpp"
#include "sien/userplane/hops.hpp"

namespace sien::userplane {

struct ContentObject {
  GlobalId id;
  std::string hrn;
  std::uint64_t volume = 0;  // bytes
  NodeId publisher = 0;
  std::uint32_t popularity_rank = 1;
};

struct RequestMsg {
  GlobalId requested;
  GlobalId requester;
  NodeId origin_node = 0;
  std::uint32_t hop_count = 0;
  std::uint16_t priority = 0;
};

struct DeliveryTrace {
  std::size_t request_n = 0;
  std::size_t path_j = 0;
  GlobalId object;
  std::vector<NodeId> path;  // requester first, serving node last
  std::uint32_t hops = 0;    // forwarding elements traversed
  NodeId serving_node = 0;
  std::uint64_t volume = 0;
  bool cache_hit = false;  // served by a copy rather than the publisher
};

// Forwarding elements, their caches and the content catalog of one run.
class UserPlane {
 public:
  // Each forwarding element gets min(its media partition, cache_capacity)
  // bytes of cache; end devices get none.
  UserPlane(const topology::WeightedGraph& g, ilm::IlmTree& ilm, std::uint64_t cache_capacity);

  const topology::WeightedGraph& graph() const { return *g_; }
  const HopIndex& hop_index() const { return hops_; }
  ilm::IlmTree& ilm() { return *ilm_; }
  CacheStore& cache(NodeId n) { return caches_.at(n); }
  const CacheStore& cache(NodeId n) const { return caches_.at(n); }

  // Adds the object to the catalog, pins it at the publisher and registers
  // the publisher's address at its leaf ILM. With device_hrn set, the object
  // id is bound indirectly to the device id, which holds the address.
  void publish(const ContentObject& obj, const std::string& device_hrn = {});
  const ContentObject& object(const GlobalId& id) const;  // throws NotFound
  std::size_t catalog_size() const { return catalog_.size(); }

  // Walks the request hop by hop until an element holding the object.
  // path_j > 0 selects the (path_j mod m)-th nearest of the m locators known
  // at the requester instead of re-resolving. Throws Unresolvable, NoRoute.
  DeliveryTrace handle_request(const RequestMsg& req, std::size_t request_n = 0, std::size_t path_j = 0);
  // Carries the data back along the request path, leaving implicit copies
  // in the forwarding elements.
  void deliver_data(const DeliveryTrace& trace);

  // Explicit copy at `node`, announced to the ILM. Falls back to an implicit
  // copy when the record already binds the maximum number of addresses.
  // Returns false when the object does not fit.
  bool place_explicit(const GlobalId& id, NodeId node);
  // Pinned copy outside the LRU partition; the ILM is not informed.
  void preplace(const GlobalId& id, NodeId node);

  std::size_t ilm_updates() const { return ilm_updates_; }

 private:
  void announce_evictions(NodeId node, const std::vector<CacheStore::Entry>& evicted);
  std::optional<NodeId> nearest(NodeId from, const std::vector<ilm::NetworkAddress>& locs, std::size_t rank) const;

  const topology::WeightedGraph* g_;
  ilm::IlmTree* ilm_;
  HopIndex hops_;
  std::vector<CacheStore> caches_;
  std::unordered_map<GlobalId, ContentObject, ilm::GlobalIdHash> catalog_;
  std::size_t ilm_updates_ = 0;
};

// CSV header: request_n,path_j,hops,serving_node,volume_bytes,cache_hit
void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const DeliveryTrace& t);

}  // namespace sien::userplane
