#include "placer/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "placer/rng.hpp"

namespace placer {

namespace {

constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;

// Draw streams, one concern each, so structural changes never shift
// attribute sampling for unrelated parts of the graph.
enum Stream : std::uint64_t {
  kEdges = 0,
  kTypes = 1,
  kHardware = 2,
  kNodeAttrs = 3,
  kLatencies = 4,
  kBandwidths = 5,
  kThings = 6,
};

struct SoftwareChance {
  const char* name;
  double cloud, edge, thing;
};
struct SecChance {
  const char* name;
  double cloud, edge, thing;
};

// Capability pools, tuned so the bundled applications stay placeable with
// high probability from 64 nodes up.
constexpr SoftwareChance kSoftware[] = {
    {"ubuntu", 1.00, 0.70, 0.20}, {"mySQL", 0.70, 0.40, 0.05}, {"python", 0.90, 0.90, 0.70},
    {"js", 0.70, 0.60, 0.50},     {"gcc", 0.50, 0.50, 0.30},
};
constexpr SecChance kSecurity[] = {
    {"access_logs", 0.80, 0.55, 0.25},        {"authentication", 0.80, 0.60, 0.40},
    {"backup", 0.60, 0.40, 0.15},             {"enc_storage", 0.80, 0.60, 0.30},
    {"firewall", 0.70, 0.60, 0.40},           {"obfuscated_storage", 0.40, 0.30, 0.10},
};
constexpr const char* kProviders[] = {"aws", "azure", "gcloud"};
constexpr double kProviderWeights[] = {0.40, 0.35, 0.25};
constexpr const char* kLocations[] = {"it", "de", "fr", "es", "us"};

double chance_for(NodeType t, double cloud, double edge, double thing) {
  switch (t) {
    case NodeType::cloud: return cloud;
    case NodeType::edge: return edge;
    default: return thing;
  }
}

std::string node_name(std::int64_t index, std::int64_t n) {
  std::size_t width = std::to_string(n > 0 ? n - 1 : 0).size();
  std::string digits = std::to_string(index);
  return "n" + std::string(width - digits.size(), '0') + digits;
}

// Undirected edges as (u,v) with u < v.
using Edge = std::pair<std::int32_t, std::int32_t>;

// Preferential attachment onto an existing seed graph: each new node picks
// `m` distinct targets with probability proportional to degree.
void attach_preferentially(std::set<Edge>& edges, std::vector<std::int32_t>& endpoints,
                           std::int32_t first_new, std::int32_t n, std::int64_t m,
                           rng::Engine& eng) {
  for (std::int32_t v = first_new; v < n; ++v) {
    std::set<std::int32_t> targets;
    std::int64_t want = std::min<std::int64_t>(m, v);
    while (static_cast<std::int64_t>(targets.size()) < want) {
      std::int32_t t;
      if (endpoints.empty())
        t = static_cast<std::int32_t>(rng::bounded(eng, static_cast<std::uint64_t>(v)));
      else
        t = endpoints[rng::bounded(eng, endpoints.size())];
      targets.insert(t);
    }
    for (std::int32_t t : targets) {
      edges.insert({std::min(v, t), std::max(v, t)});
      endpoints.push_back(v);
      endpoints.push_back(t);
    }
  }
}

std::set<Edge> build_edges(const GenSpec& spec, rng::Engine& eng) {
  auto n = static_cast<std::int32_t>(spec.n_nodes);
  std::set<Edge> edges;
  switch (spec.family) {
    case Family::ba: {
      if (spec.ba_m < 1 || spec.ba_m >= spec.n_nodes)
        throw ValidationError("ba attachment count must be in [1, n)");
      auto m = static_cast<std::int32_t>(spec.ba_m);
      std::vector<std::int32_t> endpoints;
      for (std::int32_t u = 0; u < m; ++u)
        for (std::int32_t v = u + 1; v < m; ++v) {
          edges.insert({u, v});
          endpoints.push_back(u);
          endpoints.push_back(v);
        }
      attach_preferentially(edges, endpoints, m, n, spec.ba_m, eng);
      break;
    }
    case Family::er: {
      if (spec.er_p < 0.0 || spec.er_p > 1.0)
        throw ValidationError("er edge probability must be in [0, 1]");
      for (std::int32_t u = 0; u < n; ++u)
        for (std::int32_t v = u + 1; v < n; ++v)
          if (rng::bernoulli(eng, spec.er_p)) edges.insert({u, v});
      break;
    }
    case Family::iag: {
      if (spec.iag_core_fraction <= 0.0 || spec.iag_core_fraction > 1.0)
        throw ValidationError("iag core fraction must be in (0, 1]");
      if (spec.iag_m < 1) throw ValidationError("iag attachment count must be >= 1");
      auto core = static_cast<std::int32_t>(std::min<std::int64_t>(
          spec.n_nodes, std::max<std::int64_t>(
                            2, std::llround(spec.iag_core_fraction *
                                            static_cast<double>(spec.n_nodes)))));
      std::vector<std::int32_t> endpoints;
      for (std::int32_t u = 0; u < core; ++u)
        for (std::int32_t v = u + 1; v < core; ++v) {
          edges.insert({u, v});
          endpoints.push_back(u);
          endpoints.push_back(v);
        }
      attach_preferentially(edges, endpoints, core, n, spec.iag_m, eng);
      break;
    }
  }
  return edges;
}

std::int32_t iag_core_count(const GenSpec& spec) {
  return static_cast<std::int32_t>(std::min<std::int64_t>(
      spec.n_nodes,
      std::max<std::int64_t>(2, std::llround(spec.iag_core_fraction *
                                             static_cast<double>(spec.n_nodes)))));
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::ba: return "ba";
    case Family::er: return "er";
    default: return "iag";
  }
}

Family family_from_string(const std::string& s) {
  if (s == "ba") return Family::ba;
  if (s == "er") return Family::er;
  if (s == "iag") return Family::iag;
  throw ValidationError("unknown topology family '" + s + "'");
}

Infrastructure generate_raw(const GenSpec& spec) {
  if (spec.n_nodes < 1) throw ValidationError("node count must be positive");
  double wsum = spec.w_cloud + spec.w_edge + spec.w_thing;
  if (spec.w_cloud < 0 || spec.w_edge < 0 || spec.w_thing < 0 || std::abs(wsum - 1.0) > 1e-9)
    throw ValidationError("node type weights must be non-negative and sum to 1");
  if (spec.hw_std < 0) throw ValidationError("hardware deviation must be non-negative");
  if (spec.bw_min < 20 || spec.bw_max > 500 || spec.bw_min > spec.bw_max)
    throw ValidationError("bandwidth range must lie within [20, 500]");
  if (spec.lat_min < 2 || spec.lat_max > 20 || spec.lat_min > spec.lat_max)
    throw ValidationError("latency range must lie within [2, 20]");

  auto n = static_cast<std::int32_t>(spec.n_nodes);

  auto edge_eng = rng::make_stream(spec.seed, kEdges);
  std::set<Edge> edges = build_edges(spec, edge_eng);

  // Node types. The IAG core is cloud by construction; the type draw is
  // still consumed for every node so the stream stays aligned, and stub
  // weights renormalize over edge/thing.
  std::int32_t core = spec.family == Family::iag ? iag_core_count(spec) : 0;
  auto type_eng = rng::make_stream(spec.seed, kTypes);
  std::vector<NodeType> types(n);
  for (std::int32_t v = 0; v < n; ++v) {
    double r = rng::unit_real(type_eng);
    if (spec.family == Family::iag) {
      if (v < core) {
        types[v] = NodeType::cloud;
        continue;
      }
      double we = spec.w_edge, wt = spec.w_thing;
      if (we + wt <= 0.0) {
        types[v] = NodeType::edge;
        continue;
      }
      types[v] = r < we / (we + wt) ? NodeType::edge : NodeType::thing;
      continue;
    }
    if (r < spec.w_cloud)
      types[v] = NodeType::cloud;
    else if (r < spec.w_cloud + spec.w_edge)
      types[v] = NodeType::edge;
    else
      types[v] = NodeType::thing;
  }

  auto hw_eng = rng::make_stream(spec.seed, kHardware);
  std::vector<std::int64_t> hw(n);
  for (std::int32_t v = 0; v < n; ++v)
    hw[v] = std::clamp<std::int64_t>(
        std::llround(rng::normal(hw_eng, spec.hw_mean, spec.hw_std)), 32, 1024);

  Infrastructure infra;
  infra.generated = true;
  auto attr_eng = rng::make_stream(spec.seed, kNodeAttrs);
  for (std::int32_t v = 0; v < n; ++v) {
    Node node;
    node.id = node_name(v, n);
    node.node_type = types[v];
    node.hw_caps = hw[v];
    node.available = true;

    double ra = rng::unit_real(attr_eng);
    node.arch = ra < chance_for(types[v], 0.70, 0.50, 0.35) ? "x86" : "arm64";
    double rp = rng::unit_real(attr_eng);
    node.provider = rp < kProviderWeights[0]                      ? kProviders[0]
                    : rp < kProviderWeights[0] + kProviderWeights[1] ? kProviders[1]
                                                                     : kProviders[2];
    node.location = kLocations[rng::bounded(attr_eng, std::size(kLocations))];
    for (const auto& sw : kSoftware)
      if (rng::bernoulli(attr_eng, chance_for(types[v], sw.cloud, sw.edge, sw.thing)))
        node.sw_caps.insert(sw.name);
    for (const auto& sec : kSecurity)
      if (rng::bernoulli(attr_eng, chance_for(types[v], sec.cloud, sec.edge, sec.thing)))
        node.sec_caps.insert(sec.name);
    infra.nodes.emplace(node.id, std::move(node));
  }

  // Link attributes follow canonical (u,v) edge order, independent of the
  // order the family construction discovered the edges in.
  auto lat_eng = rng::make_stream(spec.seed, kLatencies);
  auto bw_eng = rng::make_stream(spec.seed, kBandwidths);
  for (const auto& [u, v] : edges) {
    Fixed lat = Fixed::from_int(rng::uniform_int(lat_eng, spec.lat_min, spec.lat_max));
    Fixed bw = Fixed::from_int(rng::uniform_int(bw_eng, spec.bw_min, spec.bw_max));
    Id a = node_name(u, n), b = node_name(v, n);
    infra.links[{a, b}] = Link{a, b, lat, bw};
    infra.links[{b, a}] = Link{b, a, lat, bw};
  }

  if (!spec.things.empty()) {
    std::vector<Id> thing_nodes;
    for (const auto& [id, node] : infra.nodes)
      if (node.node_type == NodeType::thing) thing_nodes.push_back(id);
    if (thing_nodes.empty())
      for (const auto& [id, node] : infra.nodes) thing_nodes.push_back(id);
    auto thing_eng = rng::make_stream(spec.seed, kThings);
    for (const auto& thing : spec.things) {
      Id host = thing_nodes[rng::bounded(thing_eng, thing_nodes.size())];
      infra.nodes.at(host).hosted_things.insert(thing);
    }
  }

  validate(infra);
  return infra;
}

Infrastructure generate(const GenSpec& spec) { return latency_closure(generate_raw(spec)); }

Infrastructure latency_closure(const Infrastructure& infra) {
  std::vector<Id> ids;
  for (const auto& [id, node] : infra.nodes) ids.push_back(id);
  auto n = static_cast<std::int32_t>(ids.size());
  std::map<Id, std::int32_t> index;
  for (std::int32_t v = 0; v < n; ++v) index[ids[v]] = v;

  std::size_t nn = static_cast<std::size_t>(n) * n;
  std::vector<std::int64_t> lat(nn, kInf), ebw(nn, 0), elat(nn, kInf);
  std::vector<std::int32_t> hops(nn, 0);
  auto at = [n](std::int32_t j, std::int32_t k) {
    return static_cast<std::size_t>(j) * n + k;
  };

  std::vector<std::vector<std::int32_t>> out(n);  // direct out-neighbors, ascending
  for (const auto& [key, link] : infra.links) {
    std::int32_t j = index.at(key.first), k = index.at(key.second);
    lat[at(j, k)] = link.latency_ms.units();
    hops[at(j, k)] = 1;
    elat[at(j, k)] = link.latency_ms.units();
    ebw[at(j, k)] = link.bandwidth_mbps.units();
    out[j].push_back(k);
  }
  for (auto& list : out) std::sort(list.begin(), list.end());
  for (std::int32_t v = 0; v < n; ++v) {
    lat[at(v, v)] = 0;
    hops[at(v, v)] = 0;
  }

  // All-pairs minimum (latency, hops); both components are additive, so the
  // classic relaxation applies to the lexicographic pair.
  for (std::int32_t m = 0; m < n; ++m)
    for (std::int32_t j = 0; j < n; ++j) {
      std::int64_t ljm = lat[at(j, m)];
      if (ljm >= kInf) continue;
      std::int32_t hjm = hops[at(j, m)];
      for (std::int32_t k = 0; k < n; ++k) {
        std::int64_t lmk = lat[at(m, k)];
        if (lmk >= kInf) continue;
        std::int64_t cand = ljm + lmk;
        std::int32_t cand_h = hjm + hops[at(m, k)];
        auto idx = at(j, k);
        if (cand < lat[idx] || (cand == lat[idx] && cand_h < hops[idx])) {
          lat[idx] = cand;
          hops[idx] = cand_h;
        }
      }
    }

  // First hop per pair: the smallest direct neighbor that attains the
  // optimum. Equal-length optimal paths therefore resolve to the
  // lexicographically smallest node sequence.
  std::vector<std::int32_t> next(nn, -1);
  for (std::int32_t j = 0; j < n; ++j)
    for (std::int32_t k = 0; k < n; ++k) {
      if (j == k || lat[at(j, k)] >= kInf) continue;
      for (std::int32_t m : out[j])
        if (elat[at(j, m)] + (m == k ? 0 : lat[at(m, k)]) == lat[at(j, k)] &&
            1 + (m == k ? 0 : hops[at(m, k)]) == hops[at(j, k)]) {
          next[at(j, k)] = m;
          break;
        }
    }

  // Composite bandwidth = minimum along the chosen path, filled in hop order.
  std::vector<std::int64_t> bw(nn, 0);
  std::int32_t max_hops = 0;
  for (std::size_t i = 0; i < nn; ++i)
    if (lat[i] < kInf) max_hops = std::max(max_hops, hops[i]);
  for (std::int32_t h = 1; h <= max_hops; ++h)
    for (std::int32_t j = 0; j < n; ++j)
      for (std::int32_t k = 0; k < n; ++k) {
        auto idx = at(j, k);
        if (j == k || lat[idx] >= kInf || hops[idx] != h) continue;
        std::int32_t m = next[idx];
        bw[idx] = h == 1 ? ebw[at(j, m)] : std::min(ebw[at(j, m)], bw[at(m, k)]);
      }

  Infrastructure closed = infra;
  closed.links.clear();
  for (std::int32_t j = 0; j < n; ++j)
    for (std::int32_t k = 0; k < n; ++k) {
      if (j == k || lat[at(j, k)] >= kInf) continue;
      closed.links[{ids[j], ids[k]}] =
          Link{ids[j], ids[k], Fixed::from_units(lat[at(j, k)]), Fixed::from_units(bw[at(j, k)])};
    }
  return closed;
}

}  // namespace placer
