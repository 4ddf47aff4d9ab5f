#include "doctest.h"

#include "placer/creason.hpp"
#include "placer/milp.hpp"
#include "placer/sim.hpp"
#include "support/builders.hpp"

using namespace placer;
using testsup::add_link;
using testsup::data_path;
using testsup::make_node;

namespace {

Placement solve_fresh(const ApplicationSpec& app, const Infrastructure& infra,
                      const PriceTable& table) {
  auto pre = preprocess(app, infra, table, nullptr);
  auto result = solve(build_model(pre, app, infra), 0, 1);
  REQUIRE(result.status == "optimal");
  return *result.placement;
}

}  // namespace

TEST_CASE("without a previous placement the preprocess is a fresh filter") {
  auto app = load_application(data_path("apps/speakToMe.json"));
  auto infra = load_infrastructure(data_path("infra/demo8.json"));
  auto table = default_price_table();
  auto out = preprocess(app, infra, table, nullptr);
  CHECK(out.mode == "fresh");
  CHECK(out.retained.empty());
  CHECK(out.candidate_sets == find_compatible(app, infra, table));
}

TEST_CASE("an undisturbed placement is retained wholesale and re-solves to itself") {
  auto app = load_application(data_path("apps/speakToMe.json"));
  auto infra = load_infrastructure(data_path("infra/demo8.json"));
  auto table = default_price_table();
  Placement previous = solve_fresh(app, infra, table);

  auto out = preprocess(app, infra, table, &previous);
  CHECK(out.mode == "continuous");
  CHECK(out.retained.size() == app.component_ids().size());
  for (const auto& set : out.candidate_sets) {
    REQUIRE(set.candidates.size() == 1);
    const auto& prev = previous.assignments.at(set.component);
    CHECK(set.candidates[0].node == prev.node);
    CHECK(set.candidates[0].cost == prev.cost);
  }

  auto again = solve(build_model(out, app, infra), 0, 1);
  REQUIRE(again.status == "optimal");
  CHECK(again.placement->assignments == previous.assignments);
  CHECK(again.objective_value == previous.total_cost);
}

TEST_CASE("a failed node frees exactly its own components") {
  auto app = load_application(data_path("apps/speakToMe.json"));
  auto infra = load_infrastructure(data_path("infra/demo8.json"));
  auto table = default_price_table();
  Placement previous = solve_fresh(app, infra, table);

  const Id failed = previous.assignments.at("convertTxt").node;
  infra.nodes.at(failed).available = false;

  std::set<Id> displaced;
  for (const auto& [comp, a] : previous.assignments)
    if (a.node == failed) displaced.insert(comp);
  REQUIRE(displaced.count("convertTxt") == 1);

  auto out = preprocess(app, infra, table, &previous);
  CHECK(out.mode == "continuous");
  for (const auto& comp : app.component_ids())
    CHECK(out.retained.count(comp) == (displaced.count(comp) ? 0u : 1u));
  for (const auto& set : out.candidate_sets) {
    if (!displaced.count(set.component)) continue;
    CHECK_FALSE(set.candidates.empty());  // fresh list, not a pin
    for (const auto& c : set.candidates) CHECK(c.node != failed);
  }

  auto moved = solve(build_model(out, app, infra), 0, 1);
  REQUIRE(moved.status == "optimal");
  std::int64_t migrations = count_migrations(previous, *moved.placement);
  CHECK(migrations == static_cast<std::int64_t>(displaced.size()));
  for (const auto& [comp, a] : moved.placement->assignments) {
    CHECK(a.node != failed);
    if (!displaced.count(comp)) CHECK(a.node == previous.assignments.at(comp).node);
  }
}

TEST_CASE("retention validates hardware against the untraversed remainder") {
  // Both instances sat on A when it had room; the shrunken A holds only one.
  // The pass frees the first component and keeps the later one, mirroring
  // the recursion it replaces.
  auto app = testsup::make_simple_app(2, 60);
  Infrastructure roomy;
  roomy.nodes["A"] = make_node("A", NodeType::cloud, "x86", 200);
  roomy.nodes["B"] = make_node("B", NodeType::cloud, "x86", 200);
  add_link(roomy, "A", "B", 5.0, 100.0);
  auto table = default_price_table();
  Placement previous = solve_fresh(app, roomy, table);
  REQUIRE(previous.assignments.at("s0").node == previous.assignments.at("s1").node);

  Infrastructure shrunk = roomy;
  shrunk.nodes.at(previous.assignments.at("s0").node).hw_caps = 100;

  std::set<Id> retained;
  auto sets = cr_step(previous, app, shrunk, table, &retained);
  REQUIRE(sets.has_value());
  CHECK(retained == std::set<Id>{"s1"});
  CHECK((*sets)[0].component == "s0");
  CHECK((*sets)[0].candidates.size() == 2);  // fresh: both nodes alone could host it
  CHECK((*sets)[1].candidates.size() == 1);  // pinned

  auto repaired = solve(build_model({*sets, retained, "continuous"}, app, shrunk), 0, 1);
  REQUIRE(repaired.status == "optimal");
  CHECK(repaired.placement->assignments.at("s1").node == previous.assignments.at("s1").node);
  CHECK(repaired.placement->assignments.at("s0").node !=
        repaired.placement->assignments.at("s1").node);
}

TEST_CASE("retention re-checks flows against the retained prefix") {
  // s0 and s1 exchange traffic across a link that has since lost capacity;
  // the assignment order (s0 first) keeps s0 and frees s1.
  auto app = testsup::make_simple_app(2, 10);
  app.flows.push_back(testsup::make_flow("s0", "s1", 1.0, 5.0, 50.0));  // 40 Mbps
  Infrastructure infra;
  infra.nodes["A"] = make_node("A", NodeType::cloud, "x86", 100);
  infra.nodes["B"] = make_node("B", NodeType::cloud, "x86", 100);
  infra.nodes["C"] = make_node("C", NodeType::edge, "x86", 100);
  add_link(infra, "A", "B", 5.0, 100.0);
  add_link(infra, "A", "C", 5.0, 100.0);
  add_link(infra, "B", "C", 5.0, 100.0);
  auto table = default_price_table();

  Placement previous;
  previous.assignments["s0"] = {"A", component_cost(table, infra.nodes.at("A"), app, "s0")};
  previous.assignments["s1"] = {"B", component_cost(table, infra.nodes.at("B"), app, "s1")};
  previous.recompute_total();

  infra.links.at({"A", "B"}).bandwidth_mbps = Fixed::from_int(30);  // < 40 required

  std::set<Id> retained;
  auto sets = cr_step(previous, app, infra, table, &retained);
  REQUIRE(sets.has_value());
  CHECK(retained == std::set<Id>{"s0"});
  CHECK((*sets)[0].candidates.size() == 1);
  CHECK((*sets)[1].candidates.size() == 3);
}

TEST_CASE("retention aborts into a fresh fallback when a component loses every node") {
  auto app = load_application(data_path("apps/speakToMe.json"));
  auto demo = load_infrastructure(data_path("infra/demo8.json"));
  auto table = default_price_table();
  Placement previous = solve_fresh(app, demo, table);

  // The previous nodes do not exist here and several components have no
  // candidates at all, so the retention pass gives up.
  auto tiny = load_infrastructure(data_path("infra/twoNodes.json"));
  CHECK_FALSE(cr_step(previous, app, tiny, table).has_value());

  auto out = preprocess(app, tiny, table, &previous);
  CHECK(out.mode == "fallback");
  CHECK(out.retained.empty());
  CHECK(out.candidate_sets == find_compatible(app, tiny, table));
}

TEST_CASE("hand-traced retention over a three-node ring") {
  auto app = testsup::make_simple_app(2, 10);
  app.flows.push_back(testsup::make_flow("s0", "s1", 1.0, 2.0, 30.0));
  Infrastructure infra;
  infra.nodes["A"] = make_node("A", NodeType::cloud, "x86", 100);
  infra.nodes["B"] = make_node("B", NodeType::edge, "x86", 100);
  infra.nodes["C"] = make_node("C", NodeType::edge, "x86", 100);
  add_link(infra, "A", "B", 5.0, 100.0);
  add_link(infra, "B", "C", 5.0, 100.0);
  add_link(infra, "A", "C", 5.0, 100.0);
  auto table = default_price_table();

  Placement previous;
  previous.assignments["s0"] = {"A", component_cost(table, infra.nodes.at("A"), app, "s0")};
  previous.assignments["s1"] = {"B", component_cost(table, infra.nodes.at("B"), app, "s1")};
  previous.recompute_total();

  infra.nodes.at("B").available = false;

  std::set<Id> retained;
  auto sets = cr_step(previous, app, infra, table, &retained);
  REQUIRE(sets.has_value());
  // s0 keeps its pin; its flow to s1 defers because s1 is no longer retained.
  CHECK(retained == std::set<Id>{"s0"});
  REQUIRE(sets->size() == 2);
  CHECK((*sets)[0].component == "s0");
  CHECK((*sets)[0].candidates.size() == 1);
  CHECK((*sets)[0].candidates[0].node == "A");
  CHECK((*sets)[1].component == "s1");
  REQUIRE((*sets)[1].candidates.size() == 2);  // A and C, never the failed B
  CHECK((*sets)[1].candidates[0].node != "B");
  CHECK((*sets)[1].candidates[1].node != "B");
}
