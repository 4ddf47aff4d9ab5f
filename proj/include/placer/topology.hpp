#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "placer/model.hpp"

namespace placer {

enum class Family { ba, er, iag };

std::string to_string(Family f);
Family family_from_string(const std::string& s);

// Recipe for a random infrastructure. Every draw is pinned to the seed, so
// equal specs serialize to byte-identical infrastructures.
struct GenSpec {
  std::int64_t n_nodes = 64;
  Family family = Family::er;
  std::uint64_t seed = 1;

  double w_cloud = 0.20, w_edge = 0.45, w_thing = 0.35;  // node-type weights
  double hw_mean = 256.0, hw_std = 128.0;                // clamped to [32,1024]
  std::int64_t bw_min = 20, bw_max = 500;                // Mbps, integer draws
  std::int64_t lat_min = 2, lat_max = 20;                // ms, integer draws

  std::int64_t ba_m = 2;           // edges added per new node
  double er_p = 0.10;              // independent edge probability
  double iag_core_fraction = 0.10; // dense cloud core share of all nodes
  std::int64_t iag_m = 2;          // stub attachment edges

  std::vector<Id> things;  // thing instance ids scattered over thing nodes
};

// Random graph per family with sampled node and link attributes, before the
// all-pairs closure. Exposed so structural properties (edge counts, degree
// profiles) remain observable; generate() is latency_closure() of this.
Infrastructure generate_raw(const GenSpec& spec);

Infrastructure generate(const GenSpec& spec);

// All-pairs shortest latency closure. Every reachable ordered pair becomes a
// direct link; a synthesized link carries the minimum bandwidth along its
// path. Path ties break by fewest hops, then lexicographically smallest node
// sequence, which keeps the operation idempotent.
Infrastructure latency_closure(const Infrastructure& infra);

}  // namespace placer
