#include "placer/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace placer {

using json = nlohmann::ordered_json;

const char* to_string(NodeType t) {
  switch (t) {
    case NodeType::cloud: return "cloud";
    case NodeType::edge: return "edge";
    case NodeType::thing: return "thing";
  }
  throw ContractError("bad NodeType");
}

NodeType node_type_from_string(const std::string& s) {
  if (s == "cloud") return NodeType::cloud;
  if (s == "edge") return NodeType::edge;
  if (s == "thing") return NodeType::thing;
  throw ParseError("unknown node type '" + s + "'");
}

// ---------------------------------------------------------------------------
// Requirement expressions

static RequirementExprPtr make_expr(RequirementExpr e) {
  return std::make_shared<const RequirementExpr>(std::move(e));
}

RequirementExprPtr RequirementExpr::make_and(std::vector<RequirementExprPtr> xs) {
  return make_expr({Op::And, std::move(xs), {}, {}});
}
RequirementExprPtr RequirementExpr::make_or(std::vector<RequirementExprPtr> xs) {
  return make_expr({Op::Or, std::move(xs), {}, {}});
}
RequirementExprPtr RequirementExpr::make_not(RequirementExprPtr x) {
  return make_expr({Op::Not, {std::move(x)}, {}, {}});
}
RequirementExprPtr RequirementExpr::provider_in(std::set<std::string> v) {
  return make_expr({Op::ProviderIn, {}, std::move(v), {}});
}
RequirementExprPtr RequirementExpr::location_in(std::set<std::string> v) {
  return make_expr({Op::LocationIn, {}, std::move(v), {}});
}
RequirementExprPtr RequirementExpr::has_sec_caps(std::set<std::string> v) {
  return make_expr({Op::HasSecCaps, {}, std::move(v), {}});
}
RequirementExprPtr RequirementExpr::avg_in_bw_at_least(Fixed mbps) {
  return make_expr({Op::AvgInBwAtLeast, {}, {}, mbps});
}
RequirementExprPtr RequirementExpr::node_type_in(std::set<std::string> v) {
  return make_expr({Op::NodeTypeIn, {}, std::move(v), {}});
}

bool RequirementExpr::operator==(const RequirementExpr& o) const {
  if (op != o.op || values != o.values || mbps != o.mbps) return false;
  if (args.size() != o.args.size()) return false;
  for (std::size_t i = 0; i < args.size(); ++i)
    if (!(*args[i] == *o.args[i])) return false;
  return true;
}

Fixed avg_in_bandwidth(const Infrastructure& infra, const Id& node_id) {
  __int128 sum = 0;
  std::int64_t count = 0;
  for (const auto& [key, link] : infra.links) {
    if (key.second == node_id) {
      sum += link.bandwidth_mbps.units();
      ++count;
    }
  }
  if (count == 0) return Fixed{};
  return Fixed::from_units(Fixed::div_round(sum, count));
}

bool eval_requirement(const RequirementExpr& e, const Node& node, const Infrastructure& infra) {
  using Op = RequirementExpr::Op;
  switch (e.op) {
    case Op::And:
      return std::all_of(e.args.begin(), e.args.end(),
                         [&](const auto& a) { return eval_requirement(*a, node, infra); });
    case Op::Or:
      return std::any_of(e.args.begin(), e.args.end(),
                         [&](const auto& a) { return eval_requirement(*a, node, infra); });
    case Op::Not:
      return !eval_requirement(*e.args.front(), node, infra);
    case Op::ProviderIn:
      return e.values.count(node.provider) > 0;
    case Op::LocationIn:
      return e.values.count(node.location) > 0;
    case Op::HasSecCaps:
      return std::includes(node.sec_caps.begin(), node.sec_caps.end(),
                           e.values.begin(), e.values.end());
    case Op::AvgInBwAtLeast:
      return avg_in_bandwidth(infra, node.id) >= e.mbps;
    case Op::NodeTypeIn:
      return e.values.count(to_string(node.node_type)) > 0;
  }
  throw ContractError("bad RequirementExpr op");
}

// ---------------------------------------------------------------------------
// Application helpers

Fixed required_bw(const DataFlow& flow) {
  return flow.size_mb.times(8) * flow.rate_hz;
}

template <class T>
static const T* find_by_id(const std::vector<T>& xs, const Id& id) {
  for (const auto& x : xs)
    if (x.id == id) return &x;
  return nullptr;
}

const ServiceSpec* ApplicationSpec::find_service_spec(const Id& id) const {
  return find_by_id(services, id);
}
const FunctionSpec* ApplicationSpec::find_function_spec(const Id& id) const {
  return find_by_id(functions, id);
}
const ServiceInstance* ApplicationSpec::find_service_instance(const Id& id) const {
  return find_by_id(service_instances, id);
}
const FunctionInstance* ApplicationSpec::find_function_instance(const Id& id) const {
  return find_by_id(function_instances, id);
}
const ThingInstance* ApplicationSpec::find_thing_instance(const Id& id) const {
  return find_by_id(thing_instances, id);
}

bool ApplicationSpec::is_component(const Id& id) const {
  return find_service_instance(id) || find_function_instance(id);
}
bool ApplicationSpec::is_thing(const Id& id) const { return find_thing_instance(id) != nullptr; }

std::vector<Id> ApplicationSpec::component_ids() const {
  std::vector<Id> ids;
  ids.reserve(service_instances.size() + function_instances.size());
  for (const auto& s : service_instances) ids.push_back(s.id);
  for (const auto& f : function_instances) ids.push_back(f.id);
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::int64_t ApplicationSpec::component_hw(const Id& id) const {
  if (const auto* si = find_service_instance(id)) return find_service_spec(si->spec)->hw_reqs;
  if (const auto* fi = find_function_instance(id)) return find_function_spec(fi->spec)->hw_reqs;
  throw ContractError("not a component instance: " + id);
}

ComponentKind ApplicationSpec::component_kind(const Id& id) const {
  if (find_service_instance(id)) return ComponentKind::service;
  if (find_function_instance(id)) return ComponentKind::function;
  throw ContractError("not a component instance: " + id);
}

const Id& ApplicationSpec::component_spec_id(const Id& id) const {
  if (const auto* si = find_service_instance(id)) return si->spec;
  if (const auto* fi = find_function_instance(id)) return fi->spec;
  throw ContractError("not a component instance: " + id);
}

RequirementExprPtr ApplicationSpec::policy_for(const Id& id) const {
  auto it = requirement_policies.find(component_spec_id(id));
  return it == requirement_policies.end() ? nullptr : it->second;
}

std::vector<const DataFlow*> ApplicationSpec::flows_of(const Id& id) const {
  std::vector<const DataFlow*> out;
  for (const auto& f : flows)
    if (f.src == id || f.dst == id) out.push_back(&f);
  return out;
}

bool ApplicationSpec::operator==(const ApplicationSpec& o) const {
  if (name != o.name || comment != o.comment || services != o.services ||
      functions != o.functions || things != o.things ||
      service_instances != o.service_instances || function_instances != o.function_instances ||
      thing_instances != o.thing_instances || flows != o.flows)
    return false;
  if (requirement_policies.size() != o.requirement_policies.size()) return false;
  for (const auto& [k, v] : requirement_policies) {
    auto it = o.requirement_policies.find(k);
    if (it == o.requirement_policies.end() || !(*v == *it->second)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Infrastructure helpers

const Node* Infrastructure::find_node(const Id& id) const {
  auto it = nodes.find(id);
  return it == nodes.end() ? nullptr : &it->second;
}

const Link* Infrastructure::find_link(const Id& src, const Id& dst) const {
  auto it = links.find({src, dst});
  return it == links.end() ? nullptr : &it->second;
}

std::optional<Id> thing_host(const Infrastructure& infra, const Id& thing_id) {
  for (const auto& [id, node] : infra.nodes)
    if (node.hosted_things.count(thing_id)) return id;
  return std::nullopt;
}

Id thing_location(const Infrastructure& infra, const Id& thing_id) {
  auto host = thing_host(infra, thing_id);
  if (!host) throw ValidationError("thing '" + thing_id + "' is not hosted by any node");
  if (!infra.nodes.at(*host).available)
    throw ValidationError("thing '" + thing_id + "' is hosted by failed node '" + *host + "'");
  return *host;
}

void Placement::recompute_total() {
  total_cost = Cost{};
  for (const auto& [id, a] : assignments) total_cost += a.cost;
}

// ---------------------------------------------------------------------------
// JSON helpers

static const json& field(const json& j, const char* key, const std::string& ctx) {
  auto it = j.find(key);
  if (it == j.end()) throw ParseError(ctx + ": missing field '" + key + "'");
  return *it;
}

static std::string str_field(const json& j, const char* key, const std::string& ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_string()) throw ParseError(ctx + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

static std::int64_t int_field(const json& j, const char* key, const std::string& ctx) {
  const json& v = field(j, key, ctx);
  if (!v.is_number_integer() && !v.is_number_unsigned())
    throw ParseError(ctx + ": field '" + key + "' must be an integer");
  return v.get<std::int64_t>();
}

static Fixed fixed_from_json(const json& v, const std::string& where) {
  if (v.is_number_integer() || v.is_number_unsigned()) return Fixed::from_int(v.get<std::int64_t>());
  if (v.is_number_float()) return Fixed::from_double(v.get<double>());
  throw ParseError(where + " must be a number");
}

static Fixed fixed_field(const json& j, const char* key, const std::string& ctx) {
  return fixed_from_json(field(j, key, ctx), ctx + ": field '" + std::string(key) + "'");
}

static std::set<std::string> strset_field(const json& j, const char* key, const std::string& ctx,
                                          bool required) {
  auto it = j.find(key);
  if (it == j.end()) {
    if (required) throw ParseError(ctx + ": missing field '" + key + "'");
    return {};
  }
  if (!it->is_array()) throw ParseError(ctx + ": field '" + key + "' must be an array");
  std::set<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw ParseError(ctx + ": field '" + key + "' must contain strings");
    out.insert(v.get<std::string>());
  }
  return out;
}

static const json* opt_field(const json& j, const char* key) {
  auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

// Emits a whole Fixed as a JSON integer and a fractional one as a double.
static json fixed_to_json(Fixed f) {
  if (f.units() % Fixed::kScale == 0) return json(f.units() / Fixed::kScale);
  return json(f.to_double());
}

// ---------------------------------------------------------------------------
// Requirement tree (de)serialization

static RequirementExprPtr parse_requirement(const json& j, const std::string& ctx) {
  if (!j.is_object()) throw ParseError(ctx + ": requirement must be an object");
  std::string op = str_field(j, "op", ctx);
  auto subtrees = [&](std::size_t min_n, std::size_t max_n) {
    const json& args = field(j, "args", ctx);
    if (!args.is_array() || args.size() < min_n || args.size() > max_n)
      throw ParseError(ctx + ": field 'args' has the wrong arity for '" + op + "'");
    std::vector<RequirementExprPtr> xs;
    std::size_t k = 0;
    for (const auto& a : args)
      xs.push_back(parse_requirement(a, ctx + ".args[" + std::to_string(k++) + "]"));
    return xs;
  };
  auto values = [&] {
    auto v = strset_field(j, "values", ctx, true);
    if (v.empty()) throw ParseError(ctx + ": field 'values' must be non-empty");
    return v;
  };
  constexpr std::size_t kMaxArgs = 1u << 20;
  if (op == "and") return RequirementExpr::make_and(subtrees(1, kMaxArgs));
  if (op == "or") return RequirementExpr::make_or(subtrees(1, kMaxArgs));
  if (op == "not") return RequirementExpr::make_not(subtrees(1, 1).front());
  if (op == "providerIn") return RequirementExpr::provider_in(values());
  if (op == "locationIn") return RequirementExpr::location_in(values());
  if (op == "hasSecCaps") return RequirementExpr::has_sec_caps(values());
  if (op == "nodeTypeIn") {
    auto v = values();
    for (const auto& t : v) node_type_from_string(t);
    return RequirementExpr::node_type_in(std::move(v));
  }
  if (op == "avgInBwAtLeast") {
    Fixed mbps = fixed_field(j, "mbps", ctx);
    if (mbps < Fixed{}) throw ParseError(ctx + ": field 'mbps' must be >= 0");
    return RequirementExpr::avg_in_bw_at_least(mbps);
  }
  throw ParseError(ctx + ": unknown op '" + op + "'");
}

static json requirement_to_json(const RequirementExpr& e) {
  using Op = RequirementExpr::Op;
  json j;
  auto args_out = [&] {
    json a = json::array();
    for (const auto& x : e.args) a.push_back(requirement_to_json(*x));
    return a;
  };
  switch (e.op) {
    case Op::And: j["op"] = "and"; j["args"] = args_out(); break;
    case Op::Or: j["op"] = "or"; j["args"] = args_out(); break;
    case Op::Not: j["op"] = "not"; j["args"] = args_out(); break;
    case Op::ProviderIn: j["op"] = "providerIn"; j["values"] = e.values; break;
    case Op::LocationIn: j["op"] = "locationIn"; j["values"] = e.values; break;
    case Op::HasSecCaps: j["op"] = "hasSecCaps"; j["values"] = e.values; break;
    case Op::NodeTypeIn: j["op"] = "nodeTypeIn"; j["values"] = e.values; break;
    case Op::AvgInBwAtLeast: j["op"] = "avgInBwAtLeast"; j["mbps"] = fixed_to_json(e.mbps); break;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Application (de)serialization

ApplicationSpec parse_application(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("application: invalid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw ParseError("application: top level must be an object");

  ApplicationSpec app;
  app.name = str_field(j, "name", "application");
  if (const json* c = opt_field(j, "comment")) {
    if (!c->is_string()) throw ParseError("application: field 'comment' must be a string");
    app.comment = c->get<std::string>();
  }

  auto list = [&](const char* key) -> const json& {
    static const json empty = json::array();
    const json* v = opt_field(j, key);
    if (!v) return empty;
    if (!v->is_array()) throw ParseError(std::string("application: field '") + key + "' must be an array");
    return *v;
  };

  for (const auto& s : list("services")) {
    std::string ctx = "services[" + std::to_string(app.services.size()) + "]";
    app.services.push_back({str_field(s, "id", ctx), strset_field(s, "swReqs", ctx, true),
                            str_field(s, "arch", ctx), int_field(s, "hwReqs", ctx)});
  }
  for (const auto& f : list("functions")) {
    std::string ctx = "functions[" + std::to_string(app.functions.size()) + "]";
    app.functions.push_back({str_field(f, "id", ctx), str_field(f, "swPlatform", ctx),
                             str_field(f, "arch", ctx), int_field(f, "hwReqs", ctx)});
  }
  for (const auto& t : list("things")) {
    std::string ctx = "things[" + std::to_string(app.things.size()) + "]";
    app.things.push_back({str_field(t, "id", ctx), str_field(t, "type", ctx)});
  }
  for (const auto& s : list("serviceInstances")) {
    std::string ctx = "serviceInstances[" + std::to_string(app.service_instances.size()) + "]";
    app.service_instances.push_back({str_field(s, "id", ctx), str_field(s, "spec", ctx)});
  }
  for (const auto& f : list("functionInstances")) {
    std::string ctx = "functionInstances[" + std::to_string(app.function_instances.size()) + "]";
    app.function_instances.push_back({str_field(f, "id", ctx), str_field(f, "spec", ctx),
                                      int_field(f, "monthlyRequests", ctx),
                                      fixed_field(f, "durationMs", ctx)});
  }
  for (const auto& t : list("thingInstances")) {
    std::string ctx = "thingInstances[" + std::to_string(app.thing_instances.size()) + "]";
    app.thing_instances.push_back({str_field(t, "id", ctx), str_field(t, "spec", ctx)});
  }
  for (const auto& f : list("flows")) {
    std::string ctx = "flows[" + std::to_string(app.flows.size()) + "]";
    app.flows.push_back({str_field(f, "src", ctx), str_field(f, "dst", ctx),
                         str_field(f, "dataType", ctx), strset_field(f, "secReqs", ctx, true),
                         fixed_field(f, "sizeMB", ctx), fixed_field(f, "rateHz", ctx),
                         fixed_field(f, "maxLatencyMs", ctx)});
  }
  if (const json* reqs = opt_field(j, "requirements")) {
    if (!reqs->is_object()) throw ParseError("application: field 'requirements' must be an object");
    for (const auto& [spec_id, expr] : reqs->items())
      app.requirement_policies[spec_id] = parse_requirement(expr, "requirements." + spec_id);
  }

  validate(app);
  return app;
}

static std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ApplicationSpec load_application(const std::string& path) {
  return parse_application(read_file(path));
}

std::string serialize_application(const ApplicationSpec& app) {
  json j;
  j["name"] = app.name;
  if (!app.comment.empty()) j["comment"] = app.comment;
  j["services"] = json::array();
  for (const auto& s : app.services)
    j["services"].push_back({{"id", s.id}, {"swReqs", s.sw_reqs}, {"arch", s.arch}, {"hwReqs", s.hw_reqs}});
  j["functions"] = json::array();
  for (const auto& f : app.functions)
    j["functions"].push_back(
        {{"id", f.id}, {"swPlatform", f.sw_platform}, {"arch", f.arch}, {"hwReqs", f.hw_reqs}});
  j["things"] = json::array();
  for (const auto& t : app.things) j["things"].push_back({{"id", t.id}, {"type", t.type}});
  j["serviceInstances"] = json::array();
  for (const auto& s : app.service_instances)
    j["serviceInstances"].push_back({{"id", s.id}, {"spec", s.spec}});
  j["functionInstances"] = json::array();
  for (const auto& f : app.function_instances)
    j["functionInstances"].push_back({{"id", f.id},
                                      {"spec", f.spec},
                                      {"monthlyRequests", f.monthly_requests},
                                      {"durationMs", fixed_to_json(f.duration_ms)}});
  j["thingInstances"] = json::array();
  for (const auto& t : app.thing_instances)
    j["thingInstances"].push_back({{"id", t.id}, {"spec", t.spec}});
  j["flows"] = json::array();
  for (const auto& f : app.flows)
    j["flows"].push_back({{"src", f.src},
                          {"dst", f.dst},
                          {"dataType", f.data_type},
                          {"secReqs", f.sec_reqs},
                          {"sizeMB", fixed_to_json(f.size_mb)},
                          {"rateHz", fixed_to_json(f.rate_hz)},
                          {"maxLatencyMs", fixed_to_json(f.max_latency_ms)}});
  json reqs = json::object();
  for (const auto& [spec_id, expr] : app.requirement_policies)
    reqs[spec_id] = requirement_to_json(*expr);
  j["requirements"] = reqs;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Infrastructure (de)serialization

Infrastructure parse_infrastructure(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("infrastructure: invalid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw ParseError("infrastructure: top level must be an object");

  Infrastructure infra;
  if (const json* nodes = opt_field(j, "nodes")) {
    if (!nodes->is_array()) throw ParseError("infrastructure: field 'nodes' must be an array");
    std::size_t k = 0;
    for (const auto& n : *nodes) {
      std::string ctx = "nodes[" + std::to_string(k++) + "]";
      Node node;
      node.id = str_field(n, "id", ctx);
      node.node_type = node_type_from_string(str_field(n, "type", ctx));
      node.location = str_field(n, "location", ctx);
      node.provider = str_field(n, "provider", ctx);
      node.sw_caps = strset_field(n, "swCaps", ctx, true);
      node.arch = str_field(n, "arch", ctx);
      node.hw_caps = int_field(n, "hwCaps", ctx);
      node.sec_caps = strset_field(n, "secCaps", ctx, true);
      node.hosted_things = strset_field(n, "things", ctx, false);
      Id nid = node.id;
      if (!infra.nodes.emplace(nid, std::move(node)).second)
        throw ParseError(ctx + ": duplicate node id '" + nid + "'");
    }
  }
  if (const json* links = opt_field(j, "links")) {
    if (!links->is_array()) throw ParseError("infrastructure: field 'links' must be an array");
    std::size_t k = 0;
    for (const auto& l : *links) {
      std::string ctx = "links[" + std::to_string(k++) + "]";
      Link link{str_field(l, "src", ctx), str_field(l, "dst", ctx),
                fixed_field(l, "latencyMs", ctx), fixed_field(l, "bandwidthMbps", ctx)};
      auto key = std::make_pair(link.src, link.dst);
      if (!infra.links.emplace(key, std::move(link)).second)
        throw ParseError(ctx + ": duplicate link " + key.first + " -> " + key.second);
    }
  }
  if (const json* v = opt_field(j, "hwThreshold")) {
    if (!v->is_number_integer() && !v->is_number_unsigned())
      throw ParseError("infrastructure: field 'hwThreshold' must be an integer");
    infra.hw_threshold = v->get<std::int64_t>();
  }
  if (const json* v = opt_field(j, "bwThreshold"))
    infra.bw_threshold = fixed_from_json(*v, "infrastructure: field 'bwThreshold'");
  if (const json* v = opt_field(j, "maxBin")) {
    if (!v->is_number_integer() && !v->is_number_unsigned())
      throw ParseError("infrastructure: field 'maxBin' must be an integer");
    infra.max_bin = v->get<std::int64_t>();
  }
  if (const json* v = opt_field(j, "generated")) {
    if (!v->is_boolean()) throw ParseError("infrastructure: field 'generated' must be a boolean");
    infra.generated = v->get<bool>();
  }

  validate(infra);
  return infra;
}

Infrastructure load_infrastructure(const std::string& path) {
  return parse_infrastructure(read_file(path));
}

std::string serialize_infrastructure(const Infrastructure& infra) {
  json j;
  j["nodes"] = json::array();
  for (const auto& [id, n] : infra.nodes) {
    json nj{{"id", n.id},          {"type", to_string(n.node_type)},
            {"location", n.location}, {"provider", n.provider},
            {"swCaps", n.sw_caps},    {"arch", n.arch},
            {"hwCaps", n.hw_caps},    {"secCaps", n.sec_caps}};
    if (!n.hosted_things.empty()) nj["things"] = n.hosted_things;
    j["nodes"].push_back(std::move(nj));
  }
  j["links"] = json::array();
  for (const auto& [key, l] : infra.links)
    j["links"].push_back({{"src", l.src},
                          {"dst", l.dst},
                          {"latencyMs", fixed_to_json(l.latency_ms)},
                          {"bandwidthMbps", fixed_to_json(l.bandwidth_mbps)}});
  j["hwThreshold"] = infra.hw_threshold;
  j["bwThreshold"] = fixed_to_json(infra.bw_threshold);
  if (infra.max_bin) j["maxBin"] = *infra.max_bin;
  if (infra.generated) j["generated"] = true;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Placement (de)serialization

Placement load_placement(const std::string& path) { return parse_placement(read_file(path)); }

Placement parse_placement(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("placement: invalid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw ParseError("placement: top level must be an object");
  Placement p;
  const json& assignments = field(j, "assignments", "placement");
  if (!assignments.is_object()) throw ParseError("placement: field 'assignments' must be an object");
  for (const auto& [comp, a] : assignments.items()) {
    std::string ctx = "placement.assignments." + comp;
    p.assignments[comp] = {str_field(a, "node", ctx), fixed_field(a, "cost", ctx)};
  }
  p.recompute_total();
  Fixed declared = fixed_field(j, "totalCost", "placement");
  if (declared != p.total_cost)
    throw ValidationError("placement: totalCost does not match the sum of assignment costs");
  return p;
}

std::string serialize_placement(const Placement& p, const std::string& mode,
                                const std::string& status) {
  json j;
  json assignments = json::object();
  for (const auto& [comp, a] : p.assignments)
    assignments[comp] = {{"node", a.node}, {"cost", fixed_to_json(a.cost)}};
  j["assignments"] = assignments;
  j["totalCost"] = fixed_to_json(p.total_cost);
  j["mode"] = mode;
  j["status"] = status;
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Validation

void validate(const ApplicationSpec& app) {
  if (app.name.empty()) throw ValidationError("application name must be non-empty");

  std::set<Id> spec_ids;
  auto add_spec = [&](const Id& id, const char* kind) {
    if (id.empty()) throw ValidationError(std::string(kind) + " id must be non-empty");
    if (!spec_ids.insert(id).second) throw ValidationError("duplicate spec id '" + id + "'");
  };
  for (const auto& s : app.services) {
    add_spec(s.id, "service");
    if (s.hw_reqs <= 0) throw ValidationError("service '" + s.id + "': hwReqs must be > 0");
  }
  for (const auto& f : app.functions) {
    add_spec(f.id, "function");
    if (f.hw_reqs <= 0) throw ValidationError("function '" + f.id + "': hwReqs must be > 0");
  }
  for (const auto& t : app.things) add_spec(t.id, "thing");

  std::set<Id> instance_ids;
  auto add_instance = [&](const Id& id) {
    if (id.empty()) throw ValidationError("instance id must be non-empty");
    if (!instance_ids.insert(id).second)
      throw ValidationError("duplicate instance id '" + id + "'");
  };
  for (const auto& s : app.service_instances) {
    add_instance(s.id);
    if (!app.find_service_spec(s.spec))
      throw ValidationError("service instance '" + s.id + "' references unknown spec '" + s.spec + "'");
  }
  for (const auto& f : app.function_instances) {
    add_instance(f.id);
    if (!app.find_function_spec(f.spec))
      throw ValidationError("function instance '" + f.id + "' references unknown spec '" + f.spec + "'");
    if (f.monthly_requests < 0)
      throw ValidationError("function instance '" + f.id + "': monthlyRequests must be >= 0");
    if (f.duration_ms <= Fixed{})
      throw ValidationError("function instance '" + f.id + "': durationMs must be > 0");
  }
  for (const auto& t : app.thing_instances) {
    add_instance(t.id);
    if (!find_by_id(app.things, t.spec))
      throw ValidationError("thing instance '" + t.id + "' references unknown spec '" + t.spec + "'");
  }

  for (const auto& f : app.flows) {
    std::string label = "flow " + f.src + " -> " + f.dst;
    if (f.src == f.dst) throw ValidationError(label + ": src and dst must differ");
    for (const Id& end : {f.src, f.dst})
      if (!instance_ids.count(end))
        throw ValidationError(label + ": endpoint '" + end + "' is not a declared instance");
    if (f.size_mb <= Fixed{}) throw ValidationError(label + ": sizeMB must be > 0");
    if (f.rate_hz <= Fixed{}) throw ValidationError(label + ": rateHz must be > 0");
    if (f.max_latency_ms <= Fixed{}) throw ValidationError(label + ": maxLatencyMs must be > 0");
  }

  for (const auto& [spec_id, expr] : app.requirement_policies) {
    if (!app.find_service_spec(spec_id) && !app.find_function_spec(spec_id))
      throw ValidationError("requirement policy references unknown spec '" + spec_id + "'");
    if (!expr) throw ValidationError("requirement policy for '" + spec_id + "' is empty");
  }
}

void validate(const Infrastructure& infra) {
  std::set<Id> hosted;
  for (const auto& [id, n] : infra.nodes) {
    if (id != n.id) throw ValidationError("node map key differs from node id '" + n.id + "'");
    if (id.empty()) throw ValidationError("node id must be non-empty");
    if (n.hw_caps < 0) throw ValidationError("node '" + id + "': hwCaps must be >= 0");
    for (const auto& t : n.hosted_things)
      if (!hosted.insert(t).second)
        throw ValidationError("thing '" + t + "' is hosted by more than one node");
    if (infra.generated) {
      if (n.hw_caps < 32 || n.hw_caps > 1024)
        throw ValidationError("generated node '" + id + "': hwCaps outside [32, 1024]");
    }
  }
  for (const auto& [key, l] : infra.links) {
    if (key != std::make_pair(l.src, l.dst))
      throw ValidationError("link map key differs from link endpoints " + l.src + " -> " + l.dst);
    std::string label = "link " + l.src + " -> " + l.dst;
    if (l.src == l.dst) throw ValidationError(label + ": endpoints must differ");
    for (const Id& end : {l.src, l.dst})
      if (!infra.nodes.count(end))
        throw ValidationError(label + ": endpoint '" + end + "' is not a declared node");
    if (l.latency_ms < Fixed{}) throw ValidationError(label + ": latencyMs must be >= 0");
    if (l.bandwidth_mbps <= Fixed{}) throw ValidationError(label + ": bandwidthMbps must be > 0");
    if (infra.generated) {
      if (l.latency_ms < Fixed::from_int(2))
        throw ValidationError(label + ": generated latency below 2 ms");
      if (l.bandwidth_mbps < Fixed::from_int(20) || l.bandwidth_mbps > Fixed::from_int(500))
        throw ValidationError(label + ": generated bandwidth outside [20, 500] Mbps");
    }
  }
  if (infra.hw_threshold < 0) throw ValidationError("hwThreshold must be >= 0");
  if (infra.bw_threshold < Fixed{}) throw ValidationError("bwThreshold must be >= 0");
  if (infra.max_bin && *infra.max_bin < 1) throw ValidationError("maxBin must be >= 1");
}

}  // namespace placer
