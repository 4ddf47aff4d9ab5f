#include "placer/sim.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"

#include "placer/prefilter.hpp"
#include "placer/rng.hpp"

namespace placer {

namespace {

using json = nlohmann::ordered_json;

// Tick streams sit far away from the generator's attribute streams so a
// shared seed value never aliases draws between the two.
constexpr std::uint64_t kTickStreamBase = 1000;

void validate_config(const RunConfig& config) {
  if (config.ticks < 1) throw ValidationError("tick count must be >= 1");
  if (config.failure_fraction < 0.0 || config.failure_fraction > 1.0)
    throw ValidationError("failure fraction must be in [0, 1]");
  if (config.strategy != "prolog-only" && config.strategy != "milp" && config.strategy != "cr")
    throw ValidationError("unknown strategy '" + config.strategy + "'");
}

std::vector<Id> sample_failures(const std::vector<Id>& ids, std::int64_t k, rng::Engine& eng) {
  std::vector<std::size_t> idx(ids.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::vector<Id> failed;
  for (std::int64_t i = 0; i < k; ++i) {
    std::size_t j = i + rng::bounded(eng, idx.size() - i);
    std::swap(idx[i], idx[j]);
    failed.push_back(ids[idx[i]]);
  }
  return failed;
}

struct PlanOutcome {
  std::string status;
  std::string mode;
  std::optional<Placement> placement;
  std::int64_t retained = 0;
  std::int64_t exec_ms = 0;
};

PlanOutcome plan_tick(const ApplicationSpec& app, const Infrastructure& infra,
                      const PriceTable& table, const RunConfig& config,
                      const Placement* previous) {
  PlanOutcome out;
  auto t0 = std::chrono::steady_clock::now();
  if (config.strategy == "prolog-only") {
    GreedyResult g = greedy_place(app, infra, table);
    out.status = g.status;
    out.mode = "fresh";
    if (g.status == "feasible") out.placement = std::move(g.placement);
  } else {
    const Placement* prev = config.strategy == "cr" ? previous : nullptr;
    PreprocessOutcome pre = preprocess(app, infra, table, prev);
    out.mode = pre.mode;
    out.retained = static_cast<std::int64_t>(pre.retained.size());
    try {
      MilpModel model = build_model(pre, app, infra);
      SolveResult solved = solve(model, config.solver_budget_ms, config.seed);
      out.status = solved.status;
      if (solved.placement) out.placement = std::move(solved.placement);
    } catch (const InfeasibleModelError&) {
      out.status = "infeasible";
    }
  }
  out.exec_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

TickRecord run_one_tick(const ApplicationSpec& app, Infrastructure& infra,
                        const PriceTable& table, const RunConfig& config, std::int64_t tick,
                        std::optional<Placement>& enforced) {
  for (auto& [id, node] : infra.nodes) node.available = true;
  std::vector<Id> ids;
  for (const auto& [id, node] : infra.nodes) ids.push_back(id);
  auto k = static_cast<std::int64_t>(
      std::floor(config.failure_fraction * static_cast<double>(ids.size())));
  auto eng = rng::make_stream(config.seed, kTickStreamBase + static_cast<std::uint64_t>(tick));
  for (const auto& id : sample_failures(ids, k, eng)) infra.nodes.at(id).available = false;

  PlanOutcome plan = plan_tick(app, infra, table, config, enforced ? &*enforced : nullptr);

  TickRecord rec;
  rec.tick = tick;
  rec.status = plan.status;
  rec.mode = plan.mode;
  rec.exec_time_ms = plan.exec_ms;
  rec.retained_count = plan.retained;
  if (plan.placement) {
    rec.migrations = enforced ? count_migrations(*enforced, *plan.placement) : 0;
    enforced = std::move(plan.placement);
  } else {
    rec.migrations = 0;  // replanning failed; the previous deployment stays up
  }
  rec.placement_cost = enforced ? enforced->total_cost : Fixed{};
  return rec;
}

json record_to_json(const TickRecord& r) {
  json j;
  j["tick"] = r.tick;
  j["status"] = r.status;
  j["mode"] = r.mode;
  j["cost"] = r.placement_cost.to_string();
  j["execTimeMs"] = r.exec_time_ms;
  j["migrations"] = r.migrations;
  j["retained"] = r.retained_count;
  return j;
}

TickRecord record_from_json(const json& j) {
  TickRecord r;
  r.tick = j.at("tick").get<std::int64_t>();
  r.status = j.at("status").get<std::string>();
  r.mode = j.at("mode").get<std::string>();
  r.placement_cost = Fixed::parse(j.at("cost").get<std::string>());
  r.exec_time_ms = j.at("execTimeMs").get<std::int64_t>();
  r.migrations = j.at("migrations").get<std::int64_t>();
  r.retained_count = j.at("retained").get<std::int64_t>();
  return r;
}

}  // namespace

std::int64_t count_migrations(const Placement& previous, const Placement& current) {
  if (previous.assignments.size() != current.assignments.size())
    throw ContractError("migration count requires matching component sets");
  std::int64_t moved = 0;
  for (const auto& [comp, a] : previous.assignments) {
    auto it = current.assignments.find(comp);
    if (it == current.assignments.end())
      throw ContractError("migration count requires matching component sets");
    if (it->second.node != a.node) ++moved;
  }
  return moved;
}

std::vector<TickRecord> run(const ApplicationSpec& app, const Infrastructure& infra,
                            const PriceTable& table, const RunConfig& config) {
  validate_config(config);
  Infrastructure working = infra;
  std::optional<Placement> enforced;
  std::vector<TickRecord> records;
  for (std::int64_t tick = 1; tick <= config.ticks; ++tick)
    records.push_back(run_one_tick(app, working, table, config, tick, enforced));
  return records;
}

std::vector<TickRecord> run_with_state(const ApplicationSpec& app, const Infrastructure& infra,
                                       const PriceTable& table, const RunConfig& config,
                                       const std::string& state_path) {
  validate_config(config);
  Infrastructure working = infra;
  std::optional<Placement> enforced;
  std::vector<TickRecord> records;
  std::int64_t next_tick = 1;

  if (std::filesystem::exists(state_path)) {
    std::ifstream in(state_path);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& ex) {
      throw ParseError(std::string("run state: invalid JSON: ") + ex.what());
    }
    bool matches = j.value("strategy", "") == config.strategy &&
                   j.value("seed", std::uint64_t{0}) == config.seed &&
                   j.value("ticks", std::int64_t{0}) == config.ticks;
    if (!matches) throw ValidationError("run state does not match this configuration");
    next_tick = j.at("nextTick").get<std::int64_t>();
    for (const auto& r : j.at("records")) records.push_back(record_from_json(r));
    if (!j.at("previous").is_null()) enforced = parse_placement(j.at("previous").dump());
  }

  for (std::int64_t tick = next_tick; tick <= config.ticks; ++tick) {
    records.push_back(run_one_tick(app, working, table, config, tick, enforced));

    json state;
    state["strategy"] = config.strategy;
    state["seed"] = config.seed;
    state["ticks"] = config.ticks;
    state["failureFraction"] = config.failure_fraction;
    state["nextTick"] = tick + 1;
    state["previous"] =
        enforced ? json::parse(serialize_placement(*enforced, config.strategy, "enforced"))
                 : json(nullptr);
    json recs = json::array();
    for (const auto& r : records) recs.push_back(record_to_json(r));
    state["records"] = recs;
    std::ofstream out(state_path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + state_path + "'");
    out << state.dump(2) << "\n";
  }
  return records;
}

void write_metrics(const std::vector<TickRecord>& records, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "tick,status,mode,cost,exec_time_ms,migrations,retained\n";
  for (const auto& r : records)
    out << r.tick << ',' << r.status << ',' << r.mode << ',' << r.placement_cost.to_string()
        << ',' << r.exec_time_ms << ',' << r.migrations << ',' << r.retained_count << "\n";
}

}  // namespace placer
