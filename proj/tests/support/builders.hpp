#pragma once

// Small builders for hand-sized applications and infrastructures, shared by
// the unit and acceptance suites.

#include <string>
#include <vector>

#include "placer/cost.hpp"
#include "placer/model.hpp"

namespace testsup {

inline std::string data_path(const std::string& rel) {
  return std::string(PLACER_DATA_DIR) + "/" + rel;
}

inline placer::Node make_node(std::string id, placer::NodeType type, std::string arch,
                              std::int64_t hw, std::set<std::string> sw = {"python"},
                              std::set<std::string> sec = {}) {
  placer::Node n;
  n.id = std::move(id);
  n.node_type = type;
  n.location = "it";
  n.provider = "aws";
  n.sw_caps = std::move(sw);
  n.arch = std::move(arch);
  n.hw_caps = hw;
  n.sec_caps = std::move(sec);
  return n;
}

inline void add_link(placer::Infrastructure& infra, const std::string& a, const std::string& b,
                     double lat_ms, double bw_mbps) {
  placer::Link l1{a, b, placer::Fixed::from_double(lat_ms), placer::Fixed::from_double(bw_mbps)};
  placer::Link l2{b, a, placer::Fixed::from_double(lat_ms), placer::Fixed::from_double(bw_mbps)};
  infra.links[{a, b}] = l1;
  infra.links[{b, a}] = l2;
}

// One service spec, `n` instances of it, no flows. Architecture x86,
// software {python}.
inline placer::ApplicationSpec make_simple_app(int n_instances, std::int64_t hw_each) {
  placer::ApplicationSpec app;
  app.name = "simple";
  app.services.push_back({"svc", {"python"}, "x86", hw_each});
  for (int i = 0; i < n_instances; ++i)
    app.service_instances.push_back({"s" + std::to_string(i), "svc"});
  return app;
}

inline placer::DataFlow make_flow(std::string src, std::string dst, double size_mb, double rate_hz,
                                  double max_lat_ms, std::set<std::string> sec = {}) {
  return {std::move(src), std::move(dst), "data", std::move(sec),
          placer::Fixed::from_double(size_mb), placer::Fixed::from_double(rate_hz),
          placer::Fixed::from_double(max_lat_ms)};
}

}  // namespace testsup
