#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "placer/prefilter.hpp"

namespace placer {

struct PreprocessOutcome {
  std::vector<CandidateSet> candidate_sets;
  std::set<Id> retained;  // components pinned to their previous node
  std::string mode;       // "fresh", "continuous" or "fallback"
};

// Retention pass over the previous placement, component id ascending. Each
// still-valid assignment becomes a pinned singleton candidate list; each
// invalidated component gets a freshly recomputed candidate set. Aborts
// (nullopt) when any component ends up with no candidates at all.
std::optional<std::vector<CandidateSet>> cr_step(const Placement& previous,
                                                 const ApplicationSpec& app,
                                                 const Infrastructure& infra,
                                                 const PriceTable& table,
                                                 std::set<Id>* retained_out = nullptr);

// Stage-1 dispatch: no previous placement -> fresh find_compatible; previous
// present -> cr_step, falling back to find_compatible when retention aborts.
PreprocessOutcome preprocess(const ApplicationSpec& app, const Infrastructure& infra,
                             const PriceTable& table, const Placement* previous);

}  // namespace placer
