// SPDX-License-Identifier: Apache-2.0
#include "sien/evaluation/ito.hpp"

#include <string>

#include "sien/error.hpp"

namespace sien::evaluation {

ItoTerms ito_terms(std::span<const RequestRecord> records) {
  if (records.empty()) throw Error(Errc::EmptyLog, "no request records");
  ItoTerms t;
  for (const RequestRecord& r : records) {
    if (r.paths.empty()) throw Error(Errc::InvalidRecord, "request " + std::to_string(r.n) + " has no paths");
    if (r.volume == 0) throw Error(Errc::InvalidRecord, "request " + std::to_string(r.n) + " has zero volume");
    if (r.baseline_hops == 0) throw Error(Errc::InvalidRecord, "request " + std::to_string(r.n) + " has zero baseline hops");
    __int128 hops = 0;
    for (std::uint32_t h : r.paths) hops += h;
    const __int128 base = static_cast<__int128>(r.paths.size()) * r.baseline_hops;
    t.numerator += (base - hops) * r.volume;
    t.denominator += base * r.volume;
  }
  if (t.denominator == 0) throw Error(Errc::ZeroDenominator, "offloading denominator is zero");
  return t;
}

double compute_ito(std::span<const RequestRecord> records) { return ito_terms(records).ratio(); }

std::uint32_t baseline_hops(const topology::WeightedGraph& g, topology::NodeId requester, topology::NodeId publisher) {
  if (!g.contains(requester) || !g.contains(publisher)) throw Error(Errc::InvalidNode, "node outside the graph");
  const auto h = topology::hop_distance(g, requester, publisher);
  if (!h) {
    throw Error(Errc::Unreachable, std::to_string(requester) + " cannot reach " + std::to_string(publisher));
  }
  return static_cast<std::uint32_t>(*h);
}

}  // namespace sien::evaluation
