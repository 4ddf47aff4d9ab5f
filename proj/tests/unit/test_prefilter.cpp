#include "doctest.h"

#include <algorithm>

#include "placer/creason.hpp"
#include "placer/prefilter.hpp"
#include "support/builders.hpp"

using namespace placer;
using testsup::add_link;
using testsup::data_path;
using testsup::make_flow;
using testsup::make_node;

namespace {

// Two nodes joined by one bidirectional link (10 ms, 100 Mbps).
Infrastructure two_linked_nodes(std::int64_t hw_a = 100, std::int64_t hw_b = 100,
                                double bw = 100.0) {
  Infrastructure infra;
  infra.nodes["A"] = make_node("A", NodeType::cloud, "x86", hw_a);
  infra.nodes["B"] = make_node("B", NodeType::edge, "x86", hw_b);
  add_link(infra, "A", "B", 10.0, bw);
  return infra;
}

// Two instances of one tiny service plus one flow s0 -> s1.
ApplicationSpec flow_pair_app(double size_mb, double rate_hz, double max_lat_ms,
                              std::set<std::string> sec = {}) {
  auto app = testsup::make_simple_app(2, 1);
  app.flows.push_back(make_flow("s0", "s1", size_mb, rate_hz, max_lat_ms, std::move(sec)));
  return app;
}

}  // namespace

TEST_CASE("candidate sets equal exhaustive per-pair checking") {
  auto app = load_application(data_path("apps/speakToMe.json"));
  auto table = default_price_table();
  for (const char* infra_file : {"infra/demo8.json", "infra/twoNodes.json"}) {
    auto infra = load_infrastructure(data_path(infra_file));
    auto sets = find_compatible(app, infra, table);
    auto comps = app.component_ids();
    REQUIRE(sets.size() == comps.size());
    Placement empty;
    for (std::size_t i = 0; i < comps.size(); ++i) {
      CHECK(sets[i].component == comps[i]);
      for (const auto& [node_id, node] : infra.nodes) {
        auto cost = component_placement(comps[i], node, empty, infra, app, table);
        auto it = std::find_if(sets[i].candidates.begin(), sets[i].candidates.end(),
                               [&](const Candidate& c) { return c.node == node_id; });
        CAPTURE(comps[i]);
        CAPTURE(node_id);
        CHECK(cost.has_value() == (it != sets[i].candidates.end()));
        if (cost && it != sets[i].candidates.end()) CHECK(it->cost == *cost);
      }
      CHECK(std::is_sorted(sets[i].candidates.begin(), sets[i].candidates.end(),
                           [](const Candidate& a, const Candidate& b) {
                             return a.cost != b.cost ? a.cost < b.cost : a.node < b.node;
                           }));
    }
  }
}

TEST_CASE("two-node infrastructure filters speakToMe down to the known sets") {
  auto app = load_application(data_path("apps/speakToMe.json"));
  auto infra = load_infrastructure(data_path("infra/twoNodes.json"));
  auto sets = find_compatible(app, infra, default_price_table());

  std::map<Id, std::vector<Id>> by_comp;
  for (const auto& s : sets) {
    std::vector<Id> nodes;
    for (const auto& c : s.candidates) nodes.push_back(c.node);
    by_comp[s.component] = nodes;
  }
  // n1 is x86 {python, js}; n2 is arm64 {gcc, mySQL}. Only the pure
  // python/js components fit anywhere, and only on n1.
  CHECK(by_comp["postQueue"] == std::vector<Id>{"n1"});
  CHECK(by_comp["uploadPost"] == std::vector<Id>{"n1"});
  CHECK(by_comp["uploadAudio"] == std::vector<Id>{"n1"});
  CHECK(by_comp["publishPost"] == std::vector<Id>{"n1"});
  for (const char* empty_comp :
       {"textBucket", "audioBucket", "mainDB", "converter", "metaPost", "metaAudio", "convertTxt"})
    CHECK(by_comp[empty_comp].empty());
}

TEST_CASE("violations are named in deployment-check order") {
  auto app = load_application(data_path("apps/speakToMe.json"));
  auto infra = load_infrastructure(data_path("infra/twoNodes.json"));
  Placement empty;
  auto violation = [&](const Id& comp, const Node& node) {
    const char* v = placement_violation(comp, node, empty, infra, app);
    return v ? std::string(v) : std::string("ok");
  };

  const Node& n1 = infra.nodes.at("n1");
  const Node& n2 = infra.nodes.at("n2");
  CHECK(violation("postQueue", n1) == "ok");
  CHECK(violation("postQueue", n2) == "architecture");
  CHECK(violation("textBucket", n1) == "software");   // ubuntu missing
  CHECK(violation("textBucket", n2) == "architecture");
  CHECK(violation("converter", n1) == "architecture");
  CHECK(violation("converter", n2) == "software");    // python missing
  CHECK(violation("metaPost", n2) == "software");     // function platform missing

  SUBCASE("availability is checked before everything else") {
    Node down = n2;  // would fail architecture otherwise
    down.available = false;
    CHECK(violation("postQueue", down) == "unavailable");
  }
  SUBCASE("policy comes after software, before hardware") {
    // Passes arch + software for mainDB but sits with the wrong provider
    // and almost no hardware; the policy must be reported, not hardware.
    Node n = make_node("p1", NodeType::cloud, "x86", 1, {"mySQL", "ubuntu"},
                       {"access_logs", "authentication", "backup"});
    n.provider = "gcloud";
    CHECK(violation("mainDB", n) == "policy");
  }
  SUBCASE("hardware is the last check") {
    Node n = make_node("h1", NodeType::cloud, "x86", 1, {"python"});
    CHECK(violation("postQueue", n) == "hardware");  // needs 2
  }
}

TEST_CASE("hardware feasibility respects the threshold and the partial placement") {
  auto app = testsup::make_simple_app(3, 40);
  Infrastructure infra;
  infra.nodes["A"] = make_node("A", NodeType::cloud, "x86", 100);

  Placement partial;
  CHECK(hw_ok(infra.nodes.at("A"), 100, partial, infra, app));
  CHECK_FALSE(hw_ok(infra.nodes.at("A"), 101, partial, infra, app));

  infra.hw_threshold = 10;
  CHECK(hw_ok(infra.nodes.at("A"), 90, partial, infra, app));
  CHECK_FALSE(hw_ok(infra.nodes.at("A"), 91, partial, infra, app));

  infra.hw_threshold = 0;
  partial.assignments["s0"] = {"A", Cost{}};
  partial.assignments["s1"] = {"A", Cost{}};  // 80 units committed
  CHECK(hw_ok(infra.nodes.at("A"), 20, partial, infra, app));
  CHECK_FALSE(hw_ok(infra.nodes.at("A"), 21, partial, infra, app));
}

TEST_CASE("flow checks cover security, latency and residual bandwidth") {
  auto infra = two_linked_nodes();
  ResidualState none;

  SUBCASE("happy path") {
    auto flow = make_flow("s0", "s1", 1.0, 5.0, 15.0);  // 40 Mbps, 15 ms bound
    CHECK(check_flow(flow, "A", "B", none, infra));
  }
  SUBCASE("latency bound") {
    auto flow = make_flow("s0", "s1", 1.0, 5.0, 9.0);  // link is 10 ms
    CHECK_FALSE(check_flow(flow, "A", "B", none, infra));
  }
  SUBCASE("missing link") {
    infra.links.clear();
    auto flow = make_flow("s0", "s1", 1.0, 5.0, 15.0);
    CHECK_FALSE(check_flow(flow, "A", "B", none, infra));
  }
  SUBCASE("bandwidth minus threshold, with residual accumulation") {
    auto flow = make_flow("s0", "s1", 1.0, 5.0, 15.0);  // 40 Mbps
    ResidualState used;
    used.commit_flow("A", "B", Fixed::from_int(60));
    CHECK(check_flow(flow, "A", "B", used, infra));  // 60 + 40 == 100
    infra.bw_threshold = Fixed::from_int(1);
    CHECK_FALSE(check_flow(flow, "A", "B", used, infra));
  }
  SUBCASE("security must hold at both endpoints") {
    auto flow = make_flow("s0", "s1", 1.0, 1.0, 50.0, {"enc_storage"});
    CHECK_FALSE(check_flow(flow, "A", "B", none, infra));
    infra.nodes.at("A").sec_caps = {"enc_storage"};
    CHECK_FALSE(check_flow(flow, "A", "B", none, infra));
    infra.nodes.at("B").sec_caps = {"enc_storage", "firewall"};
    CHECK(check_flow(flow, "A", "B", none, infra));
  }
  SUBCASE("same node passes latency and bandwidth outright but not security") {
    auto heavy = make_flow("s0", "s1", 100.0, 100.0, 0.001);  // hopeless on any link
    CHECK(check_flow(heavy, "A", "A", none, infra));
    auto secured = make_flow("s0", "s1", 100.0, 100.0, 0.001, {"enc_storage"});
    CHECK_FALSE(check_flow(secured, "A", "A", none, infra));
  }
}

TEST_CASE("qos accepts a node only when every resolvable flow fits") {
  auto infra = two_linked_nodes();

  SUBCASE("unplaced partner defers the flow to the exact stage") {
    auto app = flow_pair_app(1.0, 5.0, 15.0);
    Placement retained;
    CHECK(qos_ok("s0", "A", retained, app, infra));
  }
  SUBCASE("placed partner activates the link check") {
    auto app = flow_pair_app(1.0, 5.0, 15.0);
    Placement retained;
    retained.assignments["s1"] = {"B", Cost{}};
    CHECK(qos_ok("s0", "A", retained, app, infra));
    auto tight = flow_pair_app(1.0, 5.0, 9.0);
    CHECK_FALSE(qos_ok("s0", "A", retained, tight, infra));
  }
  SUBCASE("the component's own flows accumulate bandwidth") {
    auto app = flow_pair_app(1.0, 5.0, 15.0);  // 40 Mbps
    app.flows.push_back(make_flow("s0", "s1", 1.0, 5.0, 15.0));  // + 40 Mbps
    Placement retained;
    retained.assignments["s1"] = {"B", Cost{}};
    CHECK(qos_ok("s0", "A", retained, app, infra));  // 80 <= 100

    auto narrow = two_linked_nodes(100, 100, 75.0);
    CHECK_FALSE(qos_ok("s0", "A", retained, app, narrow));
  }
  SUBCASE("traffic already placed elsewhere consumes the link first") {
    auto app = testsup::make_simple_app(3, 1);
    app.flows.push_back(make_flow("s2", "s1", 1.0, 5.0, 15.0));  // A -> B, 40 Mbps
    app.flows.push_back(make_flow("s0", "s1", 1.0, 5.0, 15.0));  // A -> B, 40 Mbps
    Placement retained;
    retained.assignments["s1"] = {"B", Cost{}};
    retained.assignments["s2"] = {"A", Cost{}};
    CHECK(qos_ok("s0", "A", retained, app, infra));  // 80 <= 100
    auto narrow = two_linked_nodes(100, 100, 75.0);
    CHECK_FALSE(qos_ok("s0", "A", retained, app, narrow));
  }
  SUBCASE("a thing endpoint must be hosted on a live node") {
    auto app = testsup::make_simple_app(1, 1);
    app.things.push_back({"sensor", "generic"});
    app.thing_instances.push_back({"tng0", "sensor"});
    app.flows.push_back(make_flow("tng0", "s0", 1.0, 5.0, 15.0));
    Placement retained;
    CHECK_FALSE(qos_ok("s0", "A", retained, app, infra));  // unhosted
    infra.nodes.at("B").hosted_things.insert("tng0");
    CHECK(qos_ok("s0", "A", retained, app, infra));
    infra.nodes.at("B").available = false;
    CHECK_FALSE(qos_ok("s0", "A", retained, app, infra));
  }
}

TEST_CASE("residuals mirror the partial placement") {
  auto infra = two_linked_nodes();
  auto app = testsup::make_simple_app(2, 30);
  app.flows.push_back(make_flow("s0", "s1", 1.0, 5.0, 15.0));

  Placement placed;
  placed.assignments["s0"] = {"A", Cost{}};
  placed.assignments["s1"] = {"B", Cost{}};
  auto residual = residual_of(placed, app, infra);
  CHECK(residual.hw_used.at("A") == 30);
  CHECK(residual.hw_used.at("B") == 30);
  CHECK(residual.bw_on("A", "B") == Fixed::from_int(40));
  CHECK(residual.bw_on("B", "A") == Fixed{});

  SUBCASE("same-node flows never consume a link") {
    placed.assignments["s1"] = {"A", Cost{}};
    auto r = residual_of(placed, app, infra);
    CHECK(r.hw_used.at("A") == 60);
    CHECK(r.bw_on("A", "A") == Fixed{});
    CHECK(r.bw_used.empty());
  }
  SUBCASE("flows with an unplaced endpoint stay out") {
    placed.assignments.erase("s1");
    auto r = residual_of(placed, app, infra);
    CHECK(r.bw_used.empty());
  }
}

TEST_CASE("thing-to-thing traffic is decided by the infrastructure alone") {
  auto infra = two_linked_nodes();
  ApplicationSpec app;
  app.name = "pair";
  app.things.push_back({"sensor", "generic"});
  app.thing_instances.push_back({"tngA", "sensor"});
  app.thing_instances.push_back({"tngB", "sensor"});
  app.flows.push_back(make_flow("tngA", "tngB", 1.0, 5.0, 15.0));  // 40 Mbps

  SUBCASE("unhosted endpoint fails") { CHECK_FALSE(fixed_flows_ok(app, infra)); }

  infra.nodes.at("A").hosted_things.insert("tngA");
  infra.nodes.at("B").hosted_things.insert("tngB");
  CHECK(fixed_flows_ok(app, infra));

  SUBCASE("joint accumulation over the shared link") {
    app.flows.push_back(make_flow("tngA", "tngB", 1.0, 5.0, 15.0));
    CHECK(fixed_flows_ok(app, infra));  // 80 <= 100
    app.flows.push_back(make_flow("tngA", "tngB", 1.0, 5.0, 15.0));
    CHECK_FALSE(fixed_flows_ok(app, infra));  // 120 > 100
  }
  SUBCASE("co-hosted things bypass the link") {
    infra.nodes.at("B").hosted_things.clear();
    infra.nodes.at("A").hosted_things.insert("tngB");
    app.flows.push_back(make_flow("tngA", "tngB", 100.0, 100.0, 0.001));
    CHECK(fixed_flows_ok(app, infra));
  }
}

TEST_CASE("greedy places components in id order on the cheapest feasible node") {
  auto table = default_price_table();

  SUBCASE("matches the exact optimum on the demo fixture") {
    auto app = load_application(data_path("apps/speakToMe.json"));
    auto infra = load_infrastructure(data_path("infra/demo8.json"));
    auto result = greedy_place(app, infra, table);
    CHECK(result.status == "feasible");
    CHECK(result.placement.assignments.size() == 11);
    CHECK(result.placement.total_cost == Fixed::from_units(21'551'980));
    for (const auto& [comp, a] : result.placement.assignments)
      CHECK(infra.nodes.count(a.node) == 1);
  }
  SUBCASE("reports infeasible when some component has nowhere to go") {
    auto app = load_application(data_path("apps/speakToMe.json"));
    auto infra = load_infrastructure(data_path("infra/twoNodes.json"));
    auto result = greedy_place(app, infra, table);
    CHECK(result.status == "infeasible");
    CHECK(result.placement.assignments.empty());
  }
  SUBCASE("honours the node budget") {
    auto app = testsup::make_simple_app(2, 10);
    auto infra = two_linked_nodes();
    infra.max_bin = 1;
    auto result = greedy_place(app, infra, table);
    CHECK(result.status == "feasible");
    CHECK(result.placement.assignments.at("s0").node ==
          result.placement.assignments.at("s1").node);

    auto small = two_linked_nodes(15, 15);  // each node fits only one
    small.max_bin = 1;
    CHECK(greedy_place(app, small, table).status == "infeasible");
  }
  SUBCASE("broken fixed traffic stops the search before any placement") {
    auto app = testsup::make_simple_app(1, 1);
    app.things.push_back({"sensor", "generic"});
    app.thing_instances.push_back({"tngA", "sensor"});
    app.thing_instances.push_back({"tngB", "sensor"});
    app.flows.push_back(make_flow("tngA", "tngB", 10.0, 5.0, 15.0));  // 400 Mbps
    auto infra = two_linked_nodes();
    infra.nodes.at("A").hosted_things.insert("tngA");
    infra.nodes.at("B").hosted_things.insert("tngB");
    CHECK(greedy_place(app, infra, table).status == "infeasible");
  }
}
