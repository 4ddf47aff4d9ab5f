#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "placer/fixed.hpp"

namespace placer {

using Id = std::string;

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

enum class NodeType { cloud, edge, thing };

const char* to_string(NodeType t);
NodeType node_type_from_string(const std::string& s);

// ---------------------------------------------------------------------------
// Requirement expressions
//
// Closed expression language standing in for free-form deployment policies:
// atoms over node attributes combined with and/or/not. Evaluation is total
// over any node.

struct RequirementExpr;
using RequirementExprPtr = std::shared_ptr<const RequirementExpr>;

struct RequirementExpr {
  enum class Op { And, Or, Not, ProviderIn, LocationIn, HasSecCaps, AvgInBwAtLeast, NodeTypeIn };

  Op op;
  std::vector<RequirementExprPtr> args;  // And / Or / Not
  std::set<std::string> values;          // set-valued atoms
  Fixed mbps;                            // AvgInBwAtLeast

  static RequirementExprPtr make_and(std::vector<RequirementExprPtr> xs);
  static RequirementExprPtr make_or(std::vector<RequirementExprPtr> xs);
  static RequirementExprPtr make_not(RequirementExprPtr x);
  static RequirementExprPtr provider_in(std::set<std::string> v);
  static RequirementExprPtr location_in(std::set<std::string> v);
  static RequirementExprPtr has_sec_caps(std::set<std::string> v);
  static RequirementExprPtr avg_in_bw_at_least(Fixed mbps);
  static RequirementExprPtr node_type_in(std::set<std::string> v);

  bool operator==(const RequirementExpr& o) const;
};

// ---------------------------------------------------------------------------
// Application

struct ServiceSpec {
  Id id;
  std::set<std::string> sw_reqs;
  std::string arch;
  std::int64_t hw_reqs = 0;  // > 0

  bool operator==(const ServiceSpec&) const = default;
};

struct FunctionSpec {
  Id id;
  std::string sw_platform;
  std::string arch;
  std::int64_t hw_reqs = 0;  // > 0

  bool operator==(const FunctionSpec&) const = default;
};

struct ThingSpec {
  Id id;
  std::string type;

  bool operator==(const ThingSpec&) const = default;
};

struct ServiceInstance {
  Id id;
  Id spec;

  bool operator==(const ServiceInstance&) const = default;
};

struct FunctionInstance {
  Id id;
  Id spec;
  std::int64_t monthly_requests = 0;  // >= 0
  Fixed duration_ms;                  // > 0, per request

  bool operator==(const FunctionInstance&) const = default;
};

struct ThingInstance {
  Id id;
  Id spec;

  bool operator==(const ThingInstance&) const = default;
};

struct DataFlow {
  Id src;  // component or thing instance
  Id dst;
  std::string data_type;
  std::set<std::string> sec_reqs;  // required at both endpoint nodes
  Fixed size_mb;                   // > 0, per message
  Fixed rate_hz;                   // > 0
  Fixed max_latency_ms;            // > 0

  bool operator==(const DataFlow&) const = default;
};

// Mbps a flow keeps busy: size (MB) * 8 * rate (Hz).
Fixed required_bw(const DataFlow& flow);

enum class ComponentKind { service, function };

struct ApplicationSpec {
  std::string name;
  std::string comment;  // free text carried through round-trips

  std::vector<ServiceSpec> services;
  std::vector<FunctionSpec> functions;
  std::vector<ThingSpec> things;
  std::vector<ServiceInstance> service_instances;
  std::vector<FunctionInstance> function_instances;
  std::vector<ThingInstance> thing_instances;
  std::vector<DataFlow> flows;
  std::map<Id, RequirementExprPtr> requirement_policies;  // spec id -> expr

  // Lookup helpers over validated specs.
  const ServiceSpec* find_service_spec(const Id& id) const;
  const FunctionSpec* find_function_spec(const Id& id) const;
  const ServiceInstance* find_service_instance(const Id& id) const;
  const FunctionInstance* find_function_instance(const Id& id) const;
  const ThingInstance* find_thing_instance(const Id& id) const;

  bool is_component(const Id& instance_id) const;
  bool is_thing(const Id& instance_id) const;

  // Service + function instance ids, sorted ascending. The canonical
  // component ordering used everywhere ordering matters.
  std::vector<Id> component_ids() const;

  // Hardware demand of a component instance (from its spec).
  std::int64_t component_hw(const Id& instance_id) const;
  ComponentKind component_kind(const Id& instance_id) const;
  // Spec id a component instance refers to.
  const Id& component_spec_id(const Id& instance_id) const;

  // Policy for a component's spec; null when none declared (always satisfied).
  RequirementExprPtr policy_for(const Id& instance_id) const;

  // Flows touching the given instance (either endpoint).
  std::vector<const DataFlow*> flows_of(const Id& instance_id) const;

  bool operator==(const ApplicationSpec& o) const;
};

// ---------------------------------------------------------------------------
// Infrastructure

struct Node {
  Id id;
  NodeType node_type = NodeType::cloud;
  std::string location;
  std::string provider;
  std::set<std::string> sw_caps;
  std::string arch;
  std::int64_t hw_caps = 0;  // >= 0
  std::set<std::string> sec_caps;
  std::set<Id> hosted_things;
  bool available = true;  // simulator failure flag, not serialized

  bool operator==(const Node&) const = default;
};

struct Link {
  Id src;
  Id dst;
  Fixed latency_ms;       // >= 0
  Fixed bandwidth_mbps;   // > 0

  bool operator==(const Link&) const = default;
};

struct Infrastructure {
  std::map<Id, Node> nodes;
  std::map<std::pair<Id, Id>, Link> links;
  std::int64_t hw_threshold = 0;               // reserved hw per node
  Fixed bw_threshold;                          // reserved Mbps per link
  std::optional<std::int64_t> max_bin;         // empty = unlimited
  bool generated = false;                      // set by the topology generator

  const Node* find_node(const Id& id) const;
  const Link* find_link(const Id& src, const Id& dst) const;

  bool operator==(const Infrastructure&) const = default;
};

// Node hosting the thing. Throws ValidationError when the thing is hosted
// nowhere or its host is currently failed.
Id thing_location(const Infrastructure& infra, const Id& thing_id);
// Host node regardless of availability; nullopt when unhosted.
std::optional<Id> thing_host(const Infrastructure& infra, const Id& thing_id);

bool eval_requirement(const RequirementExpr& expr, const Node& node, const Infrastructure& infra);

// Mean bandwidth over links entering the node; zero when it has none.
Fixed avg_in_bandwidth(const Infrastructure& infra, const Id& node_id);

// ---------------------------------------------------------------------------
// Placement

struct Assignment {
  Id node;
  Cost cost;

  bool operator==(const Assignment&) const = default;
};

struct Placement {
  std::map<Id, Assignment> assignments;  // component instance id -> (node, cost)
  Cost total_cost;

  void recompute_total();
  bool operator==(const Placement&) const = default;
};

// ---------------------------------------------------------------------------
// File I/O (JSON schemas documented in docs/schemas.md)

ApplicationSpec load_application(const std::string& path);
ApplicationSpec parse_application(const std::string& json_text);
std::string serialize_application(const ApplicationSpec& app);

Infrastructure load_infrastructure(const std::string& path);
Infrastructure parse_infrastructure(const std::string& json_text);
std::string serialize_infrastructure(const Infrastructure& infra);

Placement load_placement(const std::string& path);
Placement parse_placement(const std::string& json_text);
std::string serialize_placement(const Placement& p, const std::string& mode, const std::string& status);

void validate(const ApplicationSpec& app);
void validate(const Infrastructure& infra);

}  // namespace placer
