#include "placer/creason.hpp"

#include <algorithm>

namespace placer {

namespace {

// Fresh candidate set for one component against an empty partial placement.
CandidateSet fresh_set(const Id& comp, const ApplicationSpec& app, const Infrastructure& infra,
                       const PriceTable& table) {
  CandidateSet set;
  set.component = comp;
  Placement empty;
  for (const auto& [node_id, node] : infra.nodes)
    if (auto cost = component_placement(comp, node, empty, infra, app, table))
      set.candidates.push_back({node_id, *cost});
  std::sort(set.candidates.begin(), set.candidates.end(), [](const auto& a, const auto& b) {
    return a.cost != b.cost ? a.cost < b.cost : a.node < b.node;
  });
  return set;
}

}  // namespace

std::optional<std::vector<CandidateSet>> cr_step(const Placement& previous,
                                                 const ApplicationSpec& app,
                                                 const Infrastructure& infra,
                                                 const PriceTable& table,
                                                 std::set<Id>* retained_out) {
  auto components = app.component_ids();

  std::vector<CandidateSet> sets;
  Placement retained_prefix;
  std::set<Id> retained;
  bool any_empty = false;

  for (std::size_t i = 0; i < components.size(); ++i) {
    const Id& comp = components[i];
    auto prev_it = previous.assignments.find(comp);
    if (prev_it != previous.assignments.end()) {
      const Id& prev_node = prev_it->second.node;
      // Hardware is checked against the untraversed remainder of the
      // previous placement; QoS against the retained prefix. The two views
      // differ on purpose, mirroring the retention recursion.
      Placement tail;
      for (std::size_t k = i + 1; k < components.size(); ++k) {
        auto it = previous.assignments.find(components[k]);
        if (it != previous.assignments.end()) tail.assignments[components[k]] = it->second;
      }
      const Node* node = infra.find_node(prev_node);
      std::optional<Cost> cost =
          node ? component_placement(comp, *node, tail, infra, app, table) : std::nullopt;
      if (cost && qos_ok(comp, prev_node, retained_prefix, app, infra)) {
        sets.push_back({comp, {{prev_node, *cost}}});
        retained_prefix.assignments[comp] = {prev_node, *cost};
        retained.insert(comp);
        continue;
      }
    }
    CandidateSet set = fresh_set(comp, app, infra, table);
    any_empty = any_empty || set.candidates.empty();
    sets.push_back(std::move(set));
  }

  if (any_empty) return std::nullopt;
  if (retained_out) *retained_out = std::move(retained);
  return sets;
}

PreprocessOutcome preprocess(const ApplicationSpec& app, const Infrastructure& infra,
                             const PriceTable& table, const Placement* previous) {
  PreprocessOutcome out;
  if (!previous) {
    out.candidate_sets = find_compatible(app, infra, table);
    out.mode = "fresh";
    return out;
  }
  std::set<Id> retained;
  if (auto sets = cr_step(*previous, app, infra, table, &retained)) {
    out.candidate_sets = std::move(*sets);
    out.retained = std::move(retained);
    out.mode = "continuous";
    return out;
  }
  out.candidate_sets = find_compatible(app, infra, table);
  out.mode = "fallback";
  return out;
}

}  // namespace placer
