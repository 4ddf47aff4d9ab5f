#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "placer/cost.hpp"
#include "placer/creason.hpp"
#include "placer/milp.hpp"

namespace placer {

// One simulated deployment run: transient node failures every tick, replanned
// under the chosen strategy.
struct RunConfig {
  std::int64_t ticks = 30;
  double failure_fraction = 0.10;
  std::string strategy = "cr";  // "prolog-only", "milp" or "cr"
  std::int64_t solver_budget_ms = 60000;
  std::uint64_t seed = 1;
  std::int64_t repetitions = 3;  // driven by the CLI as seeds seed, seed+1, ...
};

struct TickRecord {
  std::int64_t tick = 0;
  std::string status;  // solver status, or feasible/infeasible for prolog-only
  std::string mode;    // preprocess mode that produced the tick's plan
  Cost placement_cost;
  std::int64_t exec_time_ms = 0;  // preprocess + model build + solve only
  std::int64_t migrations = 0;    // vs the previously enforced placement
  std::int64_t retained_count = 0;
};

// Components whose node changed between two placements over the same
// component set. Throws ContractError when the sets differ.
std::int64_t count_migrations(const Placement& previous, const Placement& current);

// Executes config.ticks ticks for config.seed (a single repetition). Each
// tick restores the previous tick's failures, fails a fresh
// floor(failure_fraction * |nodes|) node sample from a tick-indexed stream,
// replans, and enforces the result when one exists.
std::vector<TickRecord> run(const ApplicationSpec& app, const Infrastructure& infra,
                            const PriceTable& table, const RunConfig& config);

// Same loop, checkpointing after every tick into state_path (JSON). When the
// file already exists and matches the config, the run resumes where it left
// off; the returned records cover the whole run.
std::vector<TickRecord> run_with_state(const ApplicationSpec& app, const Infrastructure& infra,
                                       const PriceTable& table, const RunConfig& config,
                                       const std::string& state_path);

void write_metrics(const std::vector<TickRecord>& records, const std::string& path);

}  // namespace placer
