#include "placer/cost.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace placer {

using json = nlohmann::ordered_json;

static std::int64_t lookup(const std::map<std::string, std::int64_t>& m, const std::string& key,
                           const char* section) {
  auto it = m.find(key);
  if (it == m.end())
    throw PricingError(std::string("no price for ") + section + " entry '" + key + "'");
  return it->second;
}

std::int64_t PriceTable::unit(const std::string& tag, NodeType t) const {
  return lookup(unit_cost, tag + "/" + to_string(t), "unitCost");
}
std::int64_t PriceTable::comp(NodeType t) const { return lookup(comp_cost, to_string(t), "compCost"); }
std::int64_t PriceTable::req(NodeType t) const { return lookup(req_cost, to_string(t), "reqCost"); }

static std::int64_t pico(double v) {
  return std::llround(v * static_cast<double>(PriceTable::kPicoScale));
}

PriceTable default_price_table() {
  PriceTable t;
  t.unit_cost = {
      {"x86/cloud", pico(0.05)},   {"x86/edge", pico(0.08)},   {"x86/thing", pico(0.12)},
      {"arm64/cloud", pico(0.04)}, {"arm64/edge", pico(0.06)}, {"arm64/thing", pico(0.10)},
      {"ubuntu/cloud", pico(2.0)}, {"ubuntu/edge", pico(2.5)}, {"ubuntu/thing", pico(3.0)},
      {"mySQL/cloud", pico(1.5)},  {"mySQL/edge", pico(2.0)},  {"mySQL/thing", pico(2.5)},
      {"python/cloud", pico(0.5)}, {"python/edge", pico(0.75)}, {"python/thing", pico(1.0)},
      {"js/cloud", pico(0.5)},     {"js/edge", pico(0.75)},    {"js/thing", pico(1.0)},
      {"gcc/cloud", pico(0.25)},   {"gcc/edge", pico(0.4)},    {"gcc/thing", pico(0.6)},
  };
  t.comp_cost = {{"cloud", pico(1e-5)}, {"edge", pico(2e-5)}, {"thing", pico(5e-5)}};
  t.req_cost = {{"cloud", pico(2e-7)}, {"edge", pico(3e-7)}, {"thing", pico(5e-7)}};
  return t;
}

static void parse_price_map(const json& j, const char* key,
                            std::map<std::string, std::int64_t>& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (!it->is_object())
    throw ParseError(std::string("prices: field '") + key + "' must be an object");
  for (const auto& [k, v] : it->items()) {
    if (!v.is_number()) throw ParseError(std::string("prices: ") + key + "." + k + " must be a number");
    double d = v.get<double>();
    if (d < 0) throw ParseError(std::string("prices: ") + key + "." + k + " must be >= 0");
    out[k] = pico(d);
  }
}

PriceTable parse_price_table(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& ex) {
    throw ParseError(std::string("prices: invalid JSON: ") + ex.what());
  }
  if (!j.is_object()) throw ParseError("prices: top level must be an object");
  PriceTable t;
  parse_price_map(j, "unitCost", t.unit_cost);
  parse_price_map(j, "compCost", t.comp_cost);
  parse_price_map(j, "reqCost", t.req_cost);
  return t;
}

PriceTable load_price_table(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_price_table(ss.str());
}

static json price_map_to_json(const std::map<std::string, std::int64_t>& m) {
  json out = json::object();
  for (const auto& [k, v] : m)
    out[k] = static_cast<double>(v) / static_cast<double>(PriceTable::kPicoScale);
  return out;
}

std::string serialize_price_table(const PriceTable& t) {
  json j;
  j["unitCost"] = price_map_to_json(t.unit_cost);
  j["compCost"] = price_map_to_json(t.comp_cost);
  j["reqCost"] = price_map_to_json(t.req_cost);
  return j.dump(2) + "\n";
}

static constexpr std::int64_t kPicoPerMicro = PriceTable::kPicoScale / Fixed::kScale;

// Rounds a pico-unit total to the nearest Fixed (half away from zero).
static Cost pico_to_cost(__int128 pico_total) {
  return Fixed::from_units(Fixed::div_round(pico_total, kPicoPerMicro));
}

Cost service_cost(const PriceTable& table, NodeType node_type, const ServiceSpec& spec) {
  __int128 total = static_cast<__int128>(spec.hw_reqs) * table.unit(spec.arch, node_type);
  for (const auto& sw : spec.sw_reqs) total += table.unit(sw, node_type);
  return pico_to_cost(total);
}

Cost function_cost(const PriceTable& table, NodeType node_type, const FunctionInstance& inst,
                   const FunctionSpec& spec) {
  // m = hw_reqs * monthly_requests * duration_ms / 1000, with duration held
  // in 1e-6 ms units; the single division is rounded once, in pico space.
  __int128 m_num = static_cast<__int128>(spec.hw_reqs) * inst.monthly_requests;
  m_num *= inst.duration_ms.units();
  __int128 compute = m_num * table.comp(node_type);
  std::int64_t compute_pico =
      Fixed::div_round(compute, std::int64_t{1000} * Fixed::kScale);
  __int128 total = static_cast<__int128>(compute_pico) +
                   static_cast<__int128>(inst.monthly_requests) * table.req(node_type);
  return pico_to_cost(total);
}

Cost component_cost(const PriceTable& table, const Node& node, const ApplicationSpec& app,
                    const Id& component_id) {
  if (const auto* si = app.find_service_instance(component_id))
    return service_cost(table, node.node_type, *app.find_service_spec(si->spec));
  if (const auto* fi = app.find_function_instance(component_id))
    return function_cost(table, node.node_type, *fi, *app.find_function_spec(fi->spec));
  throw ContractError("cost requested for non-component '" + component_id + "'");
}

}  // namespace placer
