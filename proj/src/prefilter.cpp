#include "placer/prefilter.hpp"

#include <algorithm>

namespace placer {

namespace {

// Thing endpoint host, or nothing when the thing is unhosted or its host is
// down. Component endpoints resolve through the placement.
std::optional<Id> resolve_endpoint(const Id& instance, const Placement& placed,
                                   const ApplicationSpec& app, const Infrastructure& infra) {
  if (app.is_thing(instance)) {
    auto host = thing_host(infra, instance);
    if (!host || !infra.nodes.at(*host).available) return std::nullopt;
    return host;
  }
  auto it = placed.assignments.find(instance);
  if (it == placed.assignments.end()) return std::nullopt;
  return it->second.node;
}

bool sec_ok(const DataFlow& flow, const Node& a, const Node& b) {
  auto covered = [&](const Node& n) {
    return std::includes(n.sec_caps.begin(), n.sec_caps.end(), flow.sec_reqs.begin(),
                         flow.sec_reqs.end());
  };
  return covered(a) && covered(b);
}

}  // namespace

ResidualState residual_of(const Placement& placed, const ApplicationSpec& app,
                          const Infrastructure& infra) {
  ResidualState residual;
  for (const auto& [comp, a] : placed.assignments)
    residual.commit_component(a.node, app.component_hw(comp));
  for (const auto& flow : app.flows) {
    auto src = resolve_endpoint(flow.src, placed, app, infra);
    auto dst = resolve_endpoint(flow.dst, placed, app, infra);
    if (src && dst) residual.commit_flow(*src, *dst, required_bw(flow));
  }
  return residual;
}

const char* placement_violation(const Id& component, const Node& node, const Placement& partial,
                                const Infrastructure& infra, const ApplicationSpec& app) {
  if (!node.available) return "unavailable";

  std::int64_t hw_reqs = 0;
  if (app.component_kind(component) == ComponentKind::function) {
    const auto& spec = *app.find_function_spec(app.component_spec_id(component));
    if (spec.arch != node.arch) return "architecture";
    if (!node.sw_caps.count(spec.sw_platform)) return "software";
    hw_reqs = spec.hw_reqs;
  } else {
    const auto& spec = *app.find_service_spec(app.component_spec_id(component));
    if (spec.arch != node.arch) return "architecture";
    if (!std::includes(node.sw_caps.begin(), node.sw_caps.end(), spec.sw_reqs.begin(),
                       spec.sw_reqs.end()))
      return "software";
    hw_reqs = spec.hw_reqs;
  }

  if (auto policy = app.policy_for(component); policy && !eval_requirement(*policy, node, infra))
    return "policy";
  if (!hw_ok(node, hw_reqs, partial, infra, app)) return "hardware";
  return nullptr;
}

std::optional<Cost> component_placement(const Id& component, const Node& node,
                                        const Placement& partial, const Infrastructure& infra,
                                        const ApplicationSpec& app, const PriceTable& table) {
  if (placement_violation(component, node, partial, infra, app)) return std::nullopt;
  return component_cost(table, node, app, component);
}

bool hw_ok(const Node& node, std::int64_t hw_reqs, const Placement& partial,
           const Infrastructure& infra, const ApplicationSpec& app) {
  std::int64_t used = 0;
  for (const auto& [comp, a] : partial.assignments)
    if (a.node == node.id) used += app.component_hw(comp);
  return node.hw_caps >= used + hw_reqs + infra.hw_threshold;
}

std::vector<CandidateSet> find_compatible(const ApplicationSpec& app, const Infrastructure& infra,
                                          const PriceTable& table) {
  std::vector<CandidateSet> out;
  Placement empty;
  for (const auto& comp : app.component_ids()) {
    CandidateSet set;
    set.component = comp;
    for (const auto& [node_id, node] : infra.nodes)
      if (auto cost = component_placement(comp, node, empty, infra, app, table))
        set.candidates.push_back({node_id, *cost});
    std::sort(set.candidates.begin(), set.candidates.end(), [](const auto& a, const auto& b) {
      return a.cost != b.cost ? a.cost < b.cost : a.node < b.node;
    });
    out.push_back(std::move(set));
  }
  return out;
}

bool check_flow(const DataFlow& flow, const Id& src_node, const Id& dst_node,
                const ResidualState& residual, const Infrastructure& infra) {
  const Node& src = infra.nodes.at(src_node);
  const Node& dst = infra.nodes.at(dst_node);
  if (!sec_ok(flow, src, dst)) return false;
  if (src_node == dst_node) return true;
  const Link* link = infra.find_link(src_node, dst_node);
  if (!link) return false;
  if (link->latency_ms > flow.max_latency_ms) return false;
  return residual.bw_on(src_node, dst_node) + required_bw(flow) <=
         link->bandwidth_mbps - infra.bw_threshold;
}

bool qos_ok(const Id& component, const Id& node, const Placement& retained,
            const ApplicationSpec& app, const Infrastructure& infra) {
  ResidualState residual = residual_of(retained, app, infra);
  for (const auto& flow : app.flows) {
    if (flow.src != component && flow.dst != component) continue;
    const Id& other = flow.src == component ? flow.dst : flow.src;
    std::optional<Id> other_node;
    if (app.is_thing(other)) {
      auto host = thing_host(infra, other);
      if (!host || !infra.nodes.at(*host).available) return false;
      other_node = host;
    } else {
      auto it = retained.assignments.find(other);
      if (it == retained.assignments.end()) continue;  // deferred to stage 2
      other_node = it->second.node;
    }
    Id src_node = flow.src == component ? node : *other_node;
    Id dst_node = flow.dst == component ? node : *other_node;
    if (!check_flow(flow, src_node, dst_node, residual, infra)) return false;
    residual.commit_flow(src_node, dst_node, required_bw(flow));
  }
  return true;
}

bool fixed_flows_ok(const ApplicationSpec& app, const Infrastructure& infra) {
  ResidualState residual;
  for (const auto& flow : app.flows) {
    if (!app.is_thing(flow.src) || !app.is_thing(flow.dst)) continue;
    Placement none;
    auto src = resolve_endpoint(flow.src, none, app, infra);
    auto dst = resolve_endpoint(flow.dst, none, app, infra);
    if (!src || !dst) return false;
    if (!check_flow(flow, *src, *dst, residual, infra)) return false;
    residual.commit_flow(*src, *dst, required_bw(flow));
  }
  return true;
}

GreedyResult greedy_place(const ApplicationSpec& app, const Infrastructure& infra,
                          const PriceTable& table) {
  if (!fixed_flows_ok(app, infra)) return {"infeasible", {}};

  Placement partial;
  std::set<Id> used_nodes;
  for (const auto& comp : app.component_ids()) {
    std::vector<Candidate> candidates;
    for (const auto& [node_id, node] : infra.nodes)
      if (auto cost = component_placement(comp, node, partial, infra, app, table))
        candidates.push_back({node_id, *cost});
    std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
      return a.cost != b.cost ? a.cost < b.cost : a.node < b.node;
    });

    bool placed = false;
    for (const auto& c : candidates) {
      if (infra.max_bin && !used_nodes.count(c.node) &&
          static_cast<std::int64_t>(used_nodes.size()) >= *infra.max_bin)
        continue;
      if (!qos_ok(comp, c.node, partial, app, infra)) continue;
      partial.assignments[comp] = {c.node, c.cost};
      used_nodes.insert(c.node);
      placed = true;
      break;
    }
    if (!placed) return {"infeasible", {}};
  }
  partial.recompute_total();
  return {"feasible", partial};
}

}  // namespace placer
