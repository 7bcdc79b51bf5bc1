// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <map>
#include <set>

#include "sien/containment/containerize.hpp"
#include "sien/error.hpp"
#include "sien/ilm/ids.hpp"
#include "sien/ilm/tree.hpp"
#include "sien/rng.hpp"
#include "support.hpp"

using namespace sien;
using namespace sien::ilm;
using sien::testing::make_graph;

namespace {

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return Errc::IoError;
}

// Chain 0-1-2-3-4-5 with weights 1,10,1,100,1: three leaves, two level-2
// containers, one root.
IlmTree chain_tree() {
  const auto g = make_graph(6, {{0, 1, 1}, {1, 2, 10}, {2, 3, 1}, {3, 4, 100}, {4, 5, 1}});
  const auto ts = containment::parse_targets("5us,50us");
  return IlmTree::build(containment::containerize(g, ts));
}

NetworkAddress na(topology::NodeId n) { return NetworkAddress::for_node(n); }

}  // namespace

TEST_CASE("ids and digests") {
  CHECK(digest("urn:a").hex() == "ba2b6066c746dcd30c3b6e622a3adfbd35eaaaa9");
  CHECK(digest("urn:b").hex() == "daedcd9bee920d387cc49d9282f5c9f03efe7c6f");
  const auto id = digest("urn:sien:content:1");
  CHECK(GlobalId::from_hex(id.hex()) == id);
  CHECK(code_of([] { GlobalId::from_hex("abc"); }) == Errc::ParseError);
  CHECK(code_of([] { GlobalId::from_hex(std::string(40, 'g')); }) == Errc::ParseError);

  NamingService ns;
  CHECK(ns.assign_id("urn:a") == ns.assign_id("urn:a"));
  CHECK(ns.assign_id("urn:a") != ns.assign_id("urn:b"));
  CHECK(ns.size() == 2);
  CHECK(ns.hrn_of(digest("urn:b")) == "urn:b");
  CHECK_FALSE(ns.hrn_of(digest("urn:c")).has_value());
  CHECK(code_of([&] { ns.assign_id(""); }) == Errc::EmptyHrn);

  NamingService weak([](std::string_view) { return GlobalId{}; });
  weak.assign_id("urn:x");
  CHECK(code_of([&] { weak.assign_id("urn:y"); }) == Errc::CollisionDetected);
}

TEST_CASE("network addresses") {
  const auto a = NetworkAddress::for_node(300);
  CHECK(a.to_string() == "10.0.1.45");
  CHECK(a.node() == 300u);
  CHECK(NetworkAddress::parse("10.0.1.45") == a);
  const auto b = NetworkAddress::for_node(7, NetworkAddress::Version::v6);
  CHECK(b.width_bits() == 128);
  CHECK(b.node() == 7u);
  CHECK(NetworkAddress::parse(b.to_string()) == b);
  CHECK_FALSE(NetworkAddress::parse("192.168.0.1").node().has_value());
  CHECK(code_of([] { NetworkAddress::parse("10.0.0"); }) == Errc::ParseError);
  CHECK(code_of([] { NetworkAddress::parse("10.0.0.256"); }) == Errc::ParseError);
}

TEST_CASE("tree mirrors the container hierarchy") {
  const auto t = chain_tree();
  CHECK(t.size() == 3 + 2 + 1);
  CHECK(t.node(t.root()).level == 3);
  CHECK(t.node(t.leaf_of(0)).level == 1);
  CHECK(t.leaf_of(0) == t.leaf_of(1));
  CHECK(t.leaf_of(1) != t.leaf_of(2));
  CHECK(t.chain(t.leaf_of(5)).size() == 3);
  CHECK(t.chain(t.leaf_of(5)).back() == t.root());
  CHECK(t.locate(1, 2) == t.leaf_of(2));
  CHECK(code_of([&] { t.locate(4, 1); }) == Errc::NotFound);
  CHECK(code_of([&] { t.leaf_of(6); }) == Errc::InvalidNode);
}

TEST_CASE("register then resolve from every position") {
  auto t = chain_tree();
  for (topology::NodeId n = 0; n < 6; ++n) {
    const std::string hrn = "urn:obj:" + std::to_string(n);
    const auto id = t.register_object(t.leaf_of(n), hrn, na(n));
    CHECK(t.resolve(t.root(), id) == std::vector<NetworkAddress>{na(n)});
    CHECK(t.resolve(t.leaf_of(n), id) == std::vector<NetworkAddress>{na(n)});
    CHECK(t.answering(t.leaf_of(n), id) == t.leaf_of(n));
    for (topology::NodeId m = 0; m < 6; ++m) CHECK(t.resolve(t.leaf_of(m), id) == std::vector<NetworkAddress>{na(n)});
    for (IlmRef r = 0; r < t.size(); ++r) CHECK(t.resolve(r, id) == std::vector<NetworkAddress>{na(n)});
  }
  // Only the registering chain holds the record.
  const auto id0 = digest("urn:obj:0");
  CHECK(t.node(t.leaf_of(0)).table.count(id0) == 1);
  CHECK(t.node(t.leaf_of(2)).table.count(id0) == 0);
  CHECK(t.answering(t.leaf_of(5), id0) == t.root());
  CHECK(code_of([&] { t.register_object(t.root(), "", na(0)); }) == Errc::EmptyHrn);
  CHECK(code_of([&] { t.register_object(t.root(), "urn:has space", na(0)); }) == Errc::InvalidParams);
}

TEST_CASE("locator cap and idempotence") {
  auto t = chain_tree();
  const auto leaf = t.leaf_of(0);
  const auto id = t.register_object(leaf, "urn:x", na(0));
  t.register_object(leaf, "urn:x", na(0));
  CHECK(t.record(id)->locators.size() == 1);
  for (topology::NodeId n = 1; n < 4; ++n) t.register_object(leaf, "urn:x", na(n));
  CHECK(t.record(id)->locators.size() == 4);
  CHECK(code_of([&] { t.register_object(leaf, "urn:x", na(4)); }) == Errc::LocatorLimitExceeded);
  CHECK(t.record(id)->locators.size() == 4);
  CHECK(code_of([&] { t.update_binding(leaf, id, BindingAction::add, na(5)); }) == Errc::LocatorLimitExceeded);
  t.register_object(leaf, "urn:x", na(3));  // already bound: no error
  CHECK(t.resolve(t.root(), id).size() == 4);
}

TEST_CASE("resolution failures and indirect bindings") {
  auto t = chain_tree();
  CHECK(code_of([&] { t.resolve(t.root(), digest("urn:nobody")); }) == Errc::NotFound);

  const auto gt = t.register_object(t.leaf_of(4), "urn:device:1", na(4));
  const auto gx = t.bind_indirect(t.leaf_of(4), "urn:data:1", gt);
  CHECK(t.resolve(t.leaf_of(0), gx) == std::vector<NetworkAddress>{na(4)});
  CHECK(t.record(gx)->indirect_target == gt);

  const auto dangling = t.bind_indirect(t.root(), "urn:data:2", digest("urn:device:none"));
  CHECK(code_of([&] { t.resolve(t.root(), dangling); }) == Errc::NotFound);

  const auto self = t.register_object(t.leaf_of(2), "urn:device:2", na(2));
  const auto gx2 = t.bind_indirect(t.leaf_of(2), "urn:data:3", self);
  t.bind_indirect(t.leaf_of(2), "urn:device:2", self);
  CHECK(code_of([&] { t.resolve(t.root(), gx2); }) == Errc::IndirectLoop);
}

TEST_CASE("binding updates") {
  auto t = chain_tree();
  const auto id = t.register_object(t.leaf_of(0), "urn:m", na(0));
  t.update_binding(t.leaf_of(5), id, BindingAction::add, na(5));
  CHECK(t.resolve(t.leaf_of(0), id) == std::vector<NetworkAddress>{na(0), na(5)});
  CHECK(t.answering(t.leaf_of(5), id) == t.leaf_of(5));
  t.update_binding(t.root(), id, BindingAction::remove, na(0));
  CHECK(t.resolve(t.leaf_of(5), id) == std::vector<NetworkAddress>{na(5)});
  t.update_binding(t.root(), id, BindingAction::remove, na(3));  // absent: no-op
  t.update_binding(t.root(), id, BindingAction::remove, na(5));
  CHECK(code_of([&] { t.resolve(t.root(), id); }) == Errc::NotFound);
  CHECK(t.record(id) == nullptr);
  CHECK(t.node(t.leaf_of(0)).table.empty());
  CHECK(code_of([&] { t.update_binding(t.root(), id, BindingAction::add, na(1)); }) == Errc::NotFound);
}

TEST_CASE("update workload keeps every holder coherent") {
  auto t = chain_tree();
  Rng rng(4);
  std::map<GlobalId, std::set<NetworkAddress>> truth;
  std::vector<GlobalId> ids;
  for (int i = 0; i < 200; ++i) {
    const topology::NodeId n = rng.uniform_int(0, 5);
    ids.push_back(t.register_object(t.leaf_of(n), "urn:w:" + std::to_string(i), na(n)));
    truth[ids.back()].insert(na(n));
  }
  for (int step = 0; step < 4000; ++step) {
    const auto& id = ids[rng.uniform_int(0, ids.size() - 1)];
    const topology::NodeId n = rng.uniform_int(0, 5);
    auto& want = truth[id];
    if (want.empty()) continue;
    const bool add = want.size() < kMaxLocators && rng.bernoulli(0.5);
    if (add) {
      t.update_binding(t.leaf_of(n), id, BindingAction::add, na(n));
      want.insert(na(n));
    } else if (want.size() > 1) {
      const auto victim = *want.begin();
      t.update_binding(t.leaf_of(n), id, BindingAction::remove, victim);
      want.erase(victim);
    }
  }
  for (const auto& [id, want] : truth) {
    const std::vector<NetworkAddress> expect(want.begin(), want.end());
    for (IlmRef r = 0; r < t.size(); ++r) CHECK(t.resolve(r, id) == expect);
  }
}

TEST_CASE("table dump format") {
  auto t = chain_tree();
  const auto gt = t.register_object(t.leaf_of(0), "urn:a", na(0));
  t.register_object(t.leaf_of(0), "urn:a", na(1));
  t.bind_indirect(t.leaf_of(0), "urn:b", gt);
  CHECK(t.format_table(t.leaf_of(0)) ==
        "rec ba2b6066c746dcd30c3b6e622a3adfbd35eaaaa9 urn:a - 10.0.0.1,10.0.0.2\n"
        "rec daedcd9bee920d387cc49d9282f5c9f03efe7c6f urn:b ba2b6066c746dcd30c3b6e622a3adfbd35eaaaa9 -\n");
  CHECK(t.format_table(t.leaf_of(2)).empty());
}

TEST_CASE("local domain naming") {
  LocalDomain d(3);
  CHECK(d.gateway() == 3);
  CHECK(d.register_local("urn:dev:0").value == 0);
  CHECK(d.register_local("urn:dev:0").value == 0);
  for (int i = 1; i < 256; ++i) CHECK(d.register_local("urn:dev:" + std::to_string(i)).value == i);
  CHECK(d.size() == 256);
  CHECK(code_of([&] { d.register_local("urn:dev:256"); }) == Errc::NamespaceExhausted);
  d.deregister(LocalId{17});
  CHECK(d.register_local("urn:dev:256").value == 17);
  for (int i = 0; i < 256; ++i) {
    const LocalId lid{static_cast<std::uint8_t>(i)};
    CHECK(d.translate_back(d.translate(lid)) == lid);
  }
  CHECK(code_of([&] { d.register_local(std::string_view{}); }) == Errc::EmptyHrn);

  LocalDomain e(4);
  CHECK(code_of([&] { e.translate(LocalId{0}); }) == Errc::NotFound);
  CHECK(code_of([&] { e.translate_back(digest("urn:dev:0")); }) == Errc::NotFound);
  const auto lx = e.register_local("urn:data:x");
  CHECK(lx.value == 0);
  CHECK(e.translate(lx) != d.translate(LocalId{0}));

  const auto lt = e.register_local("urn:dev:x");
  e.bind_local(lx, lt);
  CHECK(e.resolve_local(lx) == lt);
  CHECK(e.resolve_local(lt) == lt);
  e.bind_local(lt, lx);
  CHECK(code_of([&] { e.resolve_local(lx); }) == Errc::IndirectLoop);
  e.deregister(lt);
  CHECK(e.resolve_local(lx) == lx);
  CHECK(code_of([&] { e.deregister(lt); }) == Errc::NotFound);
  CHECK(code_of([&] { e.bind_local(lx, LocalId{9}); }) == Errc::NotFound);
}
