#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "placer/fixed.hpp"
#include "placer/model.hpp"

namespace placer {

struct PricingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unit prices held in 1e-12 units so that per-request prices like 2e-7 are
// exact integers. Cost results round back to the 1e-6 Fixed grid once, at
// the end of each formula.
class PriceTable {
public:
  static constexpr std::int64_t kPicoScale = 1'000'000'000'000;

  // Keys: unit costs as "<tag>/<nodeType>" where tag is an architecture
  // (price per hardware unit) or a software name (flat); comp/req costs by
  // node type name.
  std::map<std::string, std::int64_t> unit_cost;  // pico-units
  std::map<std::string, std::int64_t> comp_cost;  // pico-units
  std::map<std::string, std::int64_t> req_cost;   // pico-units

  std::int64_t unit(const std::string& tag, NodeType t) const;
  std::int64_t comp(NodeType t) const;
  std::int64_t req(NodeType t) const;

  bool operator==(const PriceTable&) const = default;
};

PriceTable default_price_table();
PriceTable load_price_table(const std::string& path);
PriceTable parse_price_table(const std::string& json_text);
std::string serialize_price_table(const PriceTable& table);

Cost service_cost(const PriceTable& table, NodeType node_type, const ServiceSpec& spec);
Cost function_cost(const PriceTable& table, NodeType node_type, const FunctionInstance& inst,
                   const FunctionSpec& spec);

// Dispatches on the component's kind; throws ContractError for thing ids.
Cost component_cost(const PriceTable& table, const Node& node, const ApplicationSpec& app,
                    const Id& component_id);

}  // namespace placer
