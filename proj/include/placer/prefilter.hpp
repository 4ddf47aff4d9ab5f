#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "placer/cost.hpp"
#include "placer/model.hpp"

namespace placer {

struct Candidate {
  Id node;
  Cost cost;

  bool operator==(const Candidate&) const = default;
};

// Candidates sorted by (cost, node id); no duplicates.
struct CandidateSet {
  Id component;
  std::vector<Candidate> candidates;

  bool operator==(const CandidateSet&) const = default;
};

// Hardware and bandwidth already committed by a partial placement.
struct ResidualState {
  std::map<Id, std::int64_t> hw_used;
  std::map<std::pair<Id, Id>, Fixed> bw_used;

  void commit_component(const Id& node, std::int64_t hw) { hw_used[node] += hw; }
  // Same-node traffic consumes no link capacity.
  void commit_flow(const Id& src_node, const Id& dst_node, Fixed bw) {
    if (src_node != dst_node) bw_used[{src_node, dst_node}] += bw;
  }
  Fixed bw_on(const Id& src_node, const Id& dst_node) const {
    auto it = bw_used.find({src_node, dst_node});
    return it == bw_used.end() ? Fixed{} : it->second;
  }
};

// Residual implied by `placed`: hardware per assigned node plus bandwidth of
// every flow whose endpoints are both resolvable (assigned components, or
// things hosted on available nodes).
ResidualState residual_of(const Placement& placed, const ApplicationSpec& app,
                          const Infrastructure& infra);

// Cost of hosting the component on the node, or nothing when any deployment
// constraint fails. Infeasibility is a value here, never an error.
std::optional<Cost> component_placement(const Id& component, const Node& node,
                                        const Placement& partial, const Infrastructure& infra,
                                        const ApplicationSpec& app, const PriceTable& table);

// First violated constraint name ("unavailable", "architecture", "software",
// "policy", "hardware"), or nullptr when the pair is feasible.
const char* placement_violation(const Id& component, const Node& node, const Placement& partial,
                                const Infrastructure& infra, const ApplicationSpec& app);

bool hw_ok(const Node& node, std::int64_t hw_reqs, const Placement& partial,
           const Infrastructure& infra, const ApplicationSpec& app);

// One CandidateSet per component (component id ascending), each computed
// against an empty partial placement.
std::vector<CandidateSet> find_compatible(const ApplicationSpec& app, const Infrastructure& infra,
                                          const PriceTable& table);

// True iff every flow between `component`@`node` and an endpoint resolvable
// through `retained` (or a hosted thing) passes check_flow, with bandwidth
// accumulating across the component's own flows. A flow whose thing endpoint
// is unhosted or on a failed node fails the check.
bool qos_ok(const Id& component, const Id& node, const Placement& retained,
            const ApplicationSpec& app, const Infrastructure& infra);

// Security at both endpoint nodes, then latency and residual bandwidth on the
// connecting link. Same-node endpoints pass latency and bandwidth outright.
bool check_flow(const DataFlow& flow, const Id& src_node, const Id& dst_node,
                const ResidualState& residual, const Infrastructure& infra);

// True iff every flow between two thing instances fits its fixed link, with
// such flows accumulating jointly. These pairs are decided by the
// infrastructure alone, so no placement stage ever revisits them.
bool fixed_flows_ok(const ApplicationSpec& app, const Infrastructure& infra);

struct GreedyResult {
  std::string status;  // "feasible" or "infeasible"
  Placement placement;
};

// First-feasible baseline: components in id order, candidates in (cost, node)
// order, no backtracking.
GreedyResult greedy_place(const ApplicationSpec& app, const Infrastructure& infra,
                          const PriceTable& table);

}  // namespace placer
