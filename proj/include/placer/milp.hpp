#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "placer/creason.hpp"
#include "placer/model.hpp"

namespace placer {

struct InfeasibleModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OracleGuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Binary program over candidate pairs only. Variables are indexed into the
// id-sorted component and node tables; constraints carry a kind tag so the
// solver can interpret them structurally while the LP exporter stays fully
// generic.
struct MilpModel {
  enum class Kind {
    assignment,  // sum_j x_ij = 1
    node_link,   // x_ij - b_j <= 0
    max_bin,     // sum_j b_j <= MAX_BIN
    hardware,    // sum_i rhw_i x_ij <= fhw_j - hwTh
    y_lower,     // x_ij + x_hk - y <= 1
    y_upper,     // y - x_ij <= 0 and y - x_hk <= 0
    bandwidth,   // sum rbw y + sum rbw x <= fbw_jk - bwTh - fixed traffic
    exclusion,   // x_ij + x_hk <= 1
    unary_cut,   // x_ij <= 0
  };
  enum class Rel { le, eq };

  struct XVar {
    std::int32_t comp, node;
    Cost cost;
  };
  struct YVar {
    std::int32_t comp_i, node_j, comp_h, node_k;
  };
  struct Term {
    Fixed coeff;
    std::int32_t var;  // global index: x vars, then y vars, then b vars
  };
  struct Constraint {
    Kind kind;
    Rel rel;
    Fixed rhs;
    std::vector<Term> terms;
    std::int32_t link_j = -1, link_k = -1;  // bandwidth rows: the directed link
  };

  std::vector<Id> components;  // id ascending; index i
  std::vector<Id> nodes;       // id ascending; index j
  std::vector<XVar> x_vars;    // (i, j) lexicographic
  std::vector<YVar> y_vars;
  std::vector<std::int32_t> b_nodes;  // node indices carrying a b var
  std::vector<Constraint> constraints;
  bool fixed_infeasible = false;  // thing-to-thing traffic alone breaks a link

  std::int32_t var_count() const {
    return static_cast<std::int32_t>(x_vars.size() + y_vars.size() + b_nodes.size());
  }
  std::string var_name(std::int32_t v) const;
};

struct SolveResult {
  std::string status;  // "optimal", "infeasible" or "timeout"
  std::optional<Placement> placement;
  Cost objective_value;
  std::int64_t nodes_explored = 0;
  std::int64_t wall_time_ms = 0;
};

// Assembles the program over the preprocess outcome. Throws
// InfeasibleModelError when a component has no candidates.
MilpModel build_model(const PreprocessOutcome& outcome, const ApplicationSpec& app,
                      const Infrastructure& infra);

// Exact depth-first branch-and-bound. Branches components by descending
// hardware demand (ties: id ascending), candidates by ascending cost (ties:
// node id). The seed is recorded but drives nothing; the search is pure.
SolveResult solve(const MilpModel& model, std::int64_t budget_ms, std::uint64_t seed);

// Exhaustive enumeration checked against the constraint definitions directly,
// never against MilpModel. Guarded: product of candidate-list sizes must not
// exceed 10^6.
SolveResult brute_force_oracle(const PreprocessOutcome& outcome, const ApplicationSpec& app,
                               const Infrastructure& infra, const PriceTable& table);

// Direct constraint verification of a complete placement (availability,
// architecture, software, policy, hardware sums, flow security, latency,
// per-link bandwidth sums, max_bin). Returns the first violation, or nothing.
std::optional<std::string> check_placement(const Placement& placement, const ApplicationSpec& app,
                                           const Infrastructure& infra);

// Standard LP text (Minimize / Subject To / Binary / End); byte-deterministic.
std::string export_lp(const MilpModel& model);
void export_lp_file(const MilpModel& model, const std::string& path);

}  // namespace placer
