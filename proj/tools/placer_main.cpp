// Command-line front end: generate / place / simulate / oracle / export-lp.
// Human-readable logs go to stderr; machine output (JSON, CSV, LP) goes to
// files or stdout so pipelines stay clean.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "placer/cost.hpp"
#include "placer/creason.hpp"
#include "placer/milp.hpp"
#include "placer/model.hpp"
#include "placer/prefilter.hpp"
#include "placer/sim.hpp"
#include "placer/topology.hpp"

namespace {

constexpr const char* kVersion = "placer 1.0.0";

// Exit codes are stable API.
constexpr int kOk = 0;
constexpr int kErr = 1;
constexpr int kInfeasible = 2;
constexpr int kTimeoutNoIncumbent = 3;
constexpr int kOracleGuard = 4;

struct Common {
  std::string config_path;
  std::string prices_path;
  std::uint64_t seed = 1;
  std::int64_t budget_ms = 60000;
  bool seed_set = false;
  bool budget_set = false;
  bool prices_set = false;
};

// --config supplies defaults for values not given on the command line.
void merge_config(Common& c) {
  if (c.config_path.empty()) return;
  std::ifstream in(c.config_path);
  if (!in) throw placer::ParseError("cannot read config '" + c.config_path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw placer::ParseError(std::string("config: invalid JSON: ") + ex.what());
  }
  if (!c.prices_set && j.contains("prices")) c.prices_path = j.at("prices").get<std::string>();
  if (!c.seed_set && j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (!c.budget_set && j.contains("budgetMs")) c.budget_ms = j.at("budgetMs").get<std::int64_t>();
}

placer::PriceTable load_prices(const Common& c) {
  if (c.prices_path.empty()) return placer::default_price_table();
  return placer::load_price_table(c.prices_path);
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

// metrics.csv -> metrics.s7.csv for repetition seed 7.
std::string with_seed_suffix(const std::string& path, std::uint64_t seed) {
  std::filesystem::path p(path);
  std::filesystem::path out = p.parent_path() / p.stem();
  out += ".s" + std::to_string(seed);
  out += p.extension();
  return out.string();
}

int cmd_generate(const Common& common, std::int64_t n, const std::string& family_name,
                 double er_p, std::int64_t ba_m, double core_fraction, std::int64_t iag_m,
                 double w_cloud, double w_edge, double w_thing, double hw_mean, double hw_std,
                 const std::vector<std::string>& things, const std::string& out_path) {
  placer::GenSpec spec;
  spec.n_nodes = n;
  spec.family = placer::family_from_string(family_name);
  spec.seed = common.seed;
  spec.er_p = er_p;
  spec.ba_m = ba_m;
  spec.iag_core_fraction = core_fraction;
  spec.iag_m = iag_m;
  spec.w_cloud = w_cloud;
  spec.w_edge = w_edge;
  spec.w_thing = w_thing;
  spec.hw_mean = hw_mean;
  spec.hw_std = hw_std;
  spec.things = things;

  placer::Infrastructure infra = placer::generate(spec);
  write_text(out_path, placer::serialize_infrastructure(infra));
  std::cerr << "generated " << infra.nodes.size() << " nodes, " << infra.links.size()
            << " directed links (" << family_name << ", seed " << spec.seed << ")\n";
  return kOk;
}

void print_explanations(const placer::ApplicationSpec& app, const placer::Infrastructure& infra) {
  placer::Placement empty;
  for (const auto& comp : app.component_ids()) {
    for (const auto& [id, node] : infra.nodes) {
      const char* why = placer::placement_violation(comp, node, empty, infra, app);
      if (why) std::cerr << "explain: " << comp << " rejected on " << id << ": " << why << "\n";
    }
  }
}

int cmd_place(const Common& common, const std::string& app_path, const std::string& infra_path,
              const std::string& previous_path, const std::string& mode,
              const std::string& out_path, const std::string& lp_path, bool explain) {
  placer::ApplicationSpec app = placer::load_application(app_path);
  placer::Infrastructure infra = placer::load_infrastructure(infra_path);
  placer::PriceTable table = load_prices(common);

  if (explain) print_explanations(app, infra);

  if (mode == "prolog-only") {
    placer::GreedyResult g = placer::greedy_place(app, infra, table);
    write_text(out_path, placer::serialize_placement(g.placement, mode, g.status));
    std::cerr << "mode=" << mode << " status=" << g.status
              << " cost=" << g.placement.total_cost.to_string() << "\n";
    return g.status == "feasible" ? kOk : kInfeasible;
  }

  std::optional<placer::Placement> previous;
  if (!previous_path.empty()) previous = placer::load_placement(previous_path);
  const placer::Placement* prev = mode == "cr" && previous ? &*previous : nullptr;

  auto t0 = std::chrono::steady_clock::now();
  placer::PreprocessOutcome outcome = placer::preprocess(app, infra, table, prev);

  std::string status;
  placer::Placement result;
  try {
    placer::MilpModel model = placer::build_model(outcome, app, infra);
    if (!lp_path.empty()) placer::export_lp_file(model, lp_path);
    placer::SolveResult solved = placer::solve(model, common.budget_ms, common.seed);
    status = solved.status;
    if (solved.placement) result = *solved.placement;
  } catch (const placer::InfeasibleModelError& ex) {
    std::cerr << "model: " << ex.what() << "\n";
    status = "infeasible";
  }
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();

  write_text(out_path, placer::serialize_placement(result, mode, status));
  std::cerr << "mode=" << mode << " (" << outcome.mode << ") status=" << status
            << " cost=" << result.total_cost.to_string() << " retained=" << outcome.retained.size()
            << " time_ms=" << ms << "\n";

  if (status == "infeasible") return kInfeasible;
  if (status == "timeout" && result.assignments.empty()) return kTimeoutNoIncumbent;
  return kOk;
}

int cmd_export_lp(const Common& common, const std::string& app_path,
                  const std::string& infra_path, const std::string& previous_path,
                  const std::string& out_path) {
  placer::ApplicationSpec app = placer::load_application(app_path);
  placer::Infrastructure infra = placer::load_infrastructure(infra_path);
  placer::PriceTable table = load_prices(common);
  std::optional<placer::Placement> previous;
  if (!previous_path.empty()) previous = placer::load_placement(previous_path);

  placer::PreprocessOutcome outcome =
      placer::preprocess(app, infra, table, previous ? &*previous : nullptr);
  placer::MilpModel model = placer::build_model(outcome, app, infra);
  write_text(out_path, placer::export_lp(model));
  std::cerr << "exported " << model.var_count() << " variables, " << model.constraints.size()
            << " constraints\n";
  return kOk;
}

int cmd_simulate(const Common& common, const std::string& app_path,
                 const std::string& infra_path, const std::string& strategy, std::int64_t ticks,
                 double failure, std::int64_t reps, const std::string& out_path,
                 const std::string& state_path) {
  placer::ApplicationSpec app = placer::load_application(app_path);
  placer::Infrastructure infra = placer::load_infrastructure(infra_path);
  placer::PriceTable table = load_prices(common);

  for (std::int64_t r = 0; r < reps; ++r) {
    placer::RunConfig config;
    config.ticks = ticks;
    config.failure_fraction = failure;
    config.strategy = strategy;
    config.solver_budget_ms = common.budget_ms;
    config.seed = common.seed + static_cast<std::uint64_t>(r);
    config.repetitions = reps;

    std::string metrics_path = reps > 1 ? with_seed_suffix(out_path, config.seed) : out_path;
    std::vector<placer::TickRecord> records;
    if (state_path.empty()) {
      records = placer::run(app, infra, table, config);
    } else {
      std::string rep_state =
          reps > 1 ? with_seed_suffix(state_path, config.seed) : state_path;
      records = placer::run_with_state(app, infra, table, config, rep_state);
    }
    placer::write_metrics(records, metrics_path);
    std::cerr << "seed " << config.seed << ": " << records.size() << " ticks -> " << metrics_path
              << "\n";
  }
  return kOk;
}

int cmd_oracle(const Common& common, const std::string& app_path, const std::string& infra_path,
               bool compare) {
  placer::ApplicationSpec app = placer::load_application(app_path);
  placer::Infrastructure infra = placer::load_infrastructure(infra_path);
  placer::PriceTable table = load_prices(common);

  placer::PreprocessOutcome outcome = placer::preprocess(app, infra, table, nullptr);
  placer::SolveResult oracle = placer::brute_force_oracle(outcome, app, infra, table);
  std::cout << "oracle: status=" << oracle.status
            << " cost=" << oracle.objective_value.to_string()
            << " assignments=" << oracle.nodes_explored << "\n";

  if (!compare) return kOk;

  placer::SolveResult solved;
  try {
    placer::MilpModel model = placer::build_model(outcome, app, infra);
    solved = placer::solve(model, common.budget_ms, common.seed);
  } catch (const placer::InfeasibleModelError&) {
    solved.status = "infeasible";
    solved.objective_value = placer::Fixed{};
  }
  std::cout << "solver: status=" << solved.status
            << " cost=" << solved.objective_value.to_string() << "\n";

  bool match = solved.status == oracle.status &&
               (solved.status != "optimal" || solved.objective_value == oracle.objective_value);
  std::cout << (match ? "MATCH" : "MISMATCH") << "\n";
  return match ? kOk : kErr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"two-stage application placement for the cloud-edge continuum"};
  cli.set_version_flag("--version", kVersion);
  cli.require_subcommand(1);

  Common common;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config_path, "JSON config supplying defaults");
    sub->add_option("--prices", common.prices_path, "price table JSON")
        ->each([&](const std::string&) { common.prices_set = true; });
    sub->add_option("--seed", common.seed, "random seed")
        ->each([&](const std::string&) { common.seed_set = true; });
    sub->add_option("--budget-ms", common.budget_ms, "solver budget per solve, ms")
        ->each([&](const std::string&) { common.budget_set = true; });
  };

  // generate
  auto* gen = cli.add_subcommand("generate", "sample a random infrastructure");
  std::int64_t gen_n = 64;
  std::string gen_family = "er";
  double gen_p = 0.10, gen_core = 0.10, gen_wc = 0.20, gen_we = 0.45, gen_wt = 0.35;
  double gen_hw_mean = 256.0, gen_hw_std = 128.0;
  std::int64_t gen_m = 2, gen_iag_m = 2;
  std::vector<std::string> gen_things;
  std::string gen_out;
  gen->add_option("--n", gen_n, "node count");
  gen->add_option("--family", gen_family, "ba | er | iag");
  gen->add_option("--p", gen_p, "er edge probability");
  gen->add_option("--m", gen_m, "ba attachment count");
  gen->add_option("--core-fraction", gen_core, "iag cloud core share");
  gen->add_option("--iag-m", gen_iag_m, "iag stub attachment count");
  gen->add_option("--w-cloud", gen_wc, "cloud node weight");
  gen->add_option("--w-edge", gen_we, "edge node weight");
  gen->add_option("--w-thing", gen_wt, "thing node weight");
  gen->add_option("--hw-mean", gen_hw_mean, "hardware mean");
  gen->add_option("--hw-std", gen_hw_std, "hardware deviation");
  gen->add_option("--things", gen_things, "thing instance ids to scatter")->delimiter(',');
  gen->add_option("--out", gen_out, "output file (default stdout)");
  add_common(gen);

  // place
  auto* place = cli.add_subcommand("place", "compute one placement");
  std::string place_app, place_infra, place_prev, place_mode = "milp", place_out, place_lp;
  bool place_explain = false;
  place->add_option("--app", place_app, "application JSON")->required();
  place->add_option("--infra", place_infra, "infrastructure JSON")->required();
  place->add_option("--previous", place_prev, "previous placement JSON (enables cr)");
  place->add_option("--mode", place_mode, "prolog-only | milp | cr");
  place->add_option("--out", place_out, "placement output (default stdout)");
  place->add_option("--export-lp", place_lp, "also write the model in LP format");
  place->add_flag("--explain", place_explain, "log first violation per rejected node");
  add_common(place);

  // export-lp
  auto* lp = cli.add_subcommand("export-lp", "write the model in LP format without solving");
  std::string lp_app, lp_infra, lp_prev, lp_out;
  lp->add_option("--app", lp_app, "application JSON")->required();
  lp->add_option("--infra", lp_infra, "infrastructure JSON")->required();
  lp->add_option("--previous", lp_prev, "previous placement JSON (enables cr)");
  lp->add_option("--out", lp_out, "LP output (default stdout)");
  add_common(lp);

  // simulate
  auto* sim = cli.add_subcommand("simulate", "tick-based failure simulation");
  std::string sim_app, sim_infra, sim_strategy = "cr", sim_out = "metrics.csv", sim_state;
  std::int64_t sim_ticks = 30, sim_reps = 3;
  double sim_failure = 0.10;
  sim->add_option("--app", sim_app, "application JSON")->required();
  sim->add_option("--infra", sim_infra, "infrastructure JSON")->required();
  sim->add_option("--strategy", sim_strategy, "prolog-only | milp | cr");
  sim->add_option("--ticks", sim_ticks, "tick count");
  sim->add_option("--failure", sim_failure, "failed node fraction per tick");
  sim->add_option("--reps", sim_reps, "repetitions (seeds seed, seed+1, ...)");
  sim->add_option("--out", sim_out, "metrics CSV path");
  sim->add_option("--state", sim_state, "run-state JSON for resumable runs");
  add_common(sim);

  // oracle
  auto* oracle = cli.add_subcommand("oracle", "exhaustive optimum within the guard");
  std::string oracle_app, oracle_infra;
  bool oracle_compare = false;
  oracle->add_option("--app", oracle_app, "application JSON")->required();
  oracle->add_option("--infra", oracle_infra, "infrastructure JSON")->required();
  oracle->add_flag("--compare", oracle_compare, "also run the solver and verdict MATCH/MISMATCH");
  add_common(oracle);

  CLI11_PARSE(cli, argc, argv);

  try {
    merge_config(common);
    if (gen->parsed())
      return cmd_generate(common, gen_n, gen_family, gen_p, gen_m, gen_core, gen_iag_m, gen_wc,
                          gen_we, gen_wt, gen_hw_mean, gen_hw_std, gen_things, gen_out);
    if (place->parsed())
      return cmd_place(common, place_app, place_infra, place_prev, place_mode, place_out,
                       place_lp, place_explain);
    if (lp->parsed()) return cmd_export_lp(common, lp_app, lp_infra, lp_prev, lp_out);
    if (sim->parsed())
      return cmd_simulate(common, sim_app, sim_infra, sim_strategy, sim_ticks, sim_failure,
                          sim_reps, sim_out, sim_state);
    if (oracle->parsed()) return cmd_oracle(common, oracle_app, oracle_infra, oracle_compare);
  } catch (const placer::OracleGuardError& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kOracleGuard;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kErr;
  }
  return kErr;
}
