#pragma once

// Seeded generator of hand-sized placement instances (<= 5 components,
// <= 6 nodes, 0-4 flows). The draw ranges deliberately produce a mix of
// feasible, tight and infeasible cases so oracle-equivalence sweeps exercise
// every solver outcome. Shared by the unit and acceptance suites.

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "placer/model.hpp"
#include "placer/rng.hpp"

namespace testsup {

struct RandomInstance {
  placer::ApplicationSpec app;
  placer::Infrastructure infra;
};

inline RandomInstance make_random_instance(std::uint64_t seed) {
  using namespace placer;
  auto eng = rng::make_engine(0x5EEDF00Dull ^ (seed * 0x9E3779B97F4A7C15ull));

  const std::vector<std::string> sw_pool = {"python", "js", "gcc", "mySQL", "ubuntu"};
  const std::vector<std::string> sec_pool = {"authentication", "enc_storage", "access_logs"};
  auto pick_arch = [&] { return rng::bernoulli(eng, 0.65) ? "x86" : "arm64"; };

  RandomInstance inst;
  auto& app = inst.app;
  auto& infra = inst.infra;
  app.name = "rand" + std::to_string(seed);

  std::int64_t n_nodes = rng::uniform_int(eng, 3, 6);
  std::int64_t n_comps = rng::uniform_int(eng, 1, 5);
  std::int64_t n_flows = rng::uniform_int(eng, 0, 4);

  for (std::int64_t j = 0; j < n_nodes; ++j) {
    Node node;
    node.id = "n" + std::to_string(j);
    double t = rng::unit_real(eng);
    node.node_type = t < 0.40 ? NodeType::cloud : t < 0.75 ? NodeType::edge : NodeType::thing;
    node.location = rng::bernoulli(eng, 0.5) ? "it" : "de";
    node.provider = std::vector<std::string>{"aws", "azure", "gcloud"}[rng::bounded(eng, 3)];
    node.arch = pick_arch();
    node.hw_caps = rng::uniform_int(eng, 20, 200);
    for (const auto& sw : sw_pool)
      if (rng::bernoulli(eng, 0.75)) node.sw_caps.insert(sw);
    for (const auto& sec : sec_pool)
      if (rng::bernoulli(eng, 0.50)) node.sec_caps.insert(sec);
    infra.nodes[node.id] = node;
  }
  for (std::int64_t a = 0; a < n_nodes; ++a)
    for (std::int64_t b = a + 1; b < n_nodes; ++b) {
      if (!rng::bernoulli(eng, 0.55)) continue;
      Id na = "n" + std::to_string(a), nb = "n" + std::to_string(b);
      auto lat = Fixed::from_int(rng::uniform_int(eng, 1, 25));
      auto bw = Fixed::from_int(rng::uniform_int(eng, 20, 200));
      infra.links[{na, nb}] = Link{na, nb, lat, bw};
      infra.links[{nb, na}] = Link{nb, na, lat, bw};
    }
  if (rng::bernoulli(eng, 0.25)) infra.hw_threshold = 5;
  if (rng::bernoulli(eng, 0.25)) infra.bw_threshold = Fixed::from_int(5);
  if (rng::bernoulli(eng, 0.25)) infra.max_bin = rng::uniform_int(eng, 1, n_nodes);

  std::vector<Id> endpoints;
  for (std::int64_t i = 0; i < n_comps; ++i) {
    std::string tag = std::to_string(i);
    std::int64_t hw = rng::uniform_int(eng, 5, 90);
    if (rng::bernoulli(eng, 0.5)) {
      ServiceSpec spec{"svc" + tag, {}, pick_arch(), hw};
      spec.sw_reqs.insert(sw_pool[rng::bounded(eng, sw_pool.size())]);
      if (rng::bernoulli(eng, 0.25)) spec.sw_reqs.insert(sw_pool[rng::bounded(eng, sw_pool.size())]);
      app.services.push_back(spec);
      app.service_instances.push_back({"c" + tag, spec.id});
    } else {
      FunctionSpec spec{"fun" + tag, sw_pool[rng::bounded(eng, sw_pool.size())], pick_arch(), hw};
      app.functions.push_back(spec);
      FunctionInstance fi;
      fi.id = "c" + tag;
      fi.spec = spec.id;
      fi.monthly_requests = rng::uniform_int(eng, 500, 3000);
      fi.duration_ms = Fixed::from_int(rng::uniform_int(eng, 5, 50));
      app.function_instances.push_back(fi);
    }
    endpoints.push_back("c" + tag);
  }

  if (rng::bernoulli(eng, 0.40)) {
    app.things.push_back({"sensor", "generic"});
    app.thing_instances.push_back({"tng0", "sensor"});
    Id host = "n" + std::to_string(rng::bounded(eng, static_cast<std::uint64_t>(n_nodes)));
    infra.nodes.at(host).hosted_things.insert("tng0");
    endpoints.push_back("tng0");
  }

  for (std::int64_t f = 0; f < n_flows && endpoints.size() >= 2; ++f) {
    Id src = endpoints[rng::bounded(eng, endpoints.size())];
    Id dst = endpoints[rng::bounded(eng, endpoints.size())];
    if (src == dst) continue;
    DataFlow flow;
    flow.src = src;
    flow.dst = dst;
    flow.data_type = "data";
    if (rng::bernoulli(eng, 0.30)) flow.sec_reqs.insert(sec_pool[rng::bounded(eng, 2)]);
    flow.size_mb = Fixed::from_units(rng::uniform_int(eng, 100'000, 1'500'000));
    flow.rate_hz = Fixed::from_int(rng::uniform_int(eng, 1, 5));
    flow.max_latency_ms = Fixed::from_int(rng::uniform_int(eng, 4, 40));
    app.flows.push_back(flow);
  }

  if (!endpoints.empty() && rng::bernoulli(eng, 0.25)) {
    const Id& comp = endpoints[0];
    if (app.is_component(comp)) {
      auto expr = rng::bernoulli(eng, 0.5)
                      ? RequirementExpr::node_type_in({"cloud", "edge"})
                      : RequirementExpr::provider_in({"aws", "azure"});
      app.requirement_policies[app.component_spec_id(comp)] = expr;
    }
  }

  validate(app);
  validate(infra);
  return inst;
}

}  // namespace testsup
