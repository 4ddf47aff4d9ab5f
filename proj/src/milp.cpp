#include "placer/milp.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <tuple>

#include "placer/cost.hpp"
#include "placer/prefilter.hpp"

namespace placer {

namespace {

// Flow demands aggregated over an ordered endpoint pair: bandwidth adds up,
// the latency budget is the tightest one, security needs accumulate.
struct PairDemand {
  Fixed rbw;
  Fixed rlat = Fixed::from_units(std::numeric_limits<std::int64_t>::max());
  std::set<std::string> sec;

  void add(const DataFlow& flow) {
    rbw += required_bw(flow);
    rlat = std::min(rlat, flow.max_latency_ms);
    sec.insert(flow.sec_reqs.begin(), flow.sec_reqs.end());
  }
};

bool node_covers(const Node& n, const std::set<std::string>& sec) {
  return std::includes(n.sec_caps.begin(), n.sec_caps.end(), sec.begin(), sec.end());
}

}  // namespace

std::string MilpModel::var_name(std::int32_t v) const {
  auto nx = static_cast<std::int32_t>(x_vars.size());
  auto ny = static_cast<std::int32_t>(y_vars.size());
  if (v < nx)
    return "x_" + std::to_string(x_vars[v].comp) + "_" + std::to_string(x_vars[v].node);
  if (v < nx + ny) {
    const YVar& y = y_vars[v - nx];
    return "y_" + std::to_string(y.comp_i) + "_" + std::to_string(y.node_j) + "_" +
           std::to_string(y.comp_h) + "_" + std::to_string(y.node_k);
  }
  return "b_" + std::to_string(b_nodes[v - nx - ny]);
}

MilpModel build_model(const PreprocessOutcome& outcome, const ApplicationSpec& app,
                      const Infrastructure& infra) {
  MilpModel m;
  m.components = app.component_ids();
  for (const auto& [id, node] : infra.nodes) m.nodes.push_back(id);

  std::map<Id, std::int32_t> comp_idx, node_idx;
  for (std::size_t i = 0; i < m.components.size(); ++i)
    comp_idx[m.components[i]] = static_cast<std::int32_t>(i);
  for (std::size_t j = 0; j < m.nodes.size(); ++j)
    node_idx[m.nodes[j]] = static_cast<std::int32_t>(j);

  std::map<Id, const CandidateSet*> sets;
  for (const auto& s : outcome.candidate_sets) sets[s.component] = &s;
  for (const auto& comp : m.components) {
    auto it = sets.find(comp);
    if (it == sets.end() || it->second->candidates.empty())
      throw InfeasibleModelError("component '" + comp + "' has no candidate nodes");
  }

  // x variables in (component, node) lexicographic order.
  std::map<std::pair<std::int32_t, std::int32_t>, std::int32_t> x_of;
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    std::vector<std::pair<std::int32_t, Cost>> cands;
    for (const auto& c : sets.at(m.components[i])->candidates)
      cands.push_back({node_idx.at(c.node), c.cost});
    std::sort(cands.begin(), cands.end());
    for (const auto& [j, cost] : cands) {
      x_of[{static_cast<std::int32_t>(i), j}] = static_cast<std::int32_t>(m.x_vars.size());
      m.x_vars.push_back({static_cast<std::int32_t>(i), j, cost});
    }
  }
  auto nx = static_cast<std::int32_t>(m.x_vars.size());

  std::set<std::int32_t> b_set;
  for (const auto& x : m.x_vars) b_set.insert(x.node);
  m.b_nodes.assign(b_set.begin(), b_set.end());

  // Flow demands per ordered component pair, plus per-component demands
  // toward a fixed node, keyed by (component, node, component-is-source).
  // Node -1 marks flows whose fixed endpoint is unreachable outright.
  std::map<std::pair<std::int32_t, std::int32_t>, PairDemand> pair_demand;
  std::map<std::tuple<std::int32_t, std::int32_t, bool>, PairDemand> thing_demand;
  bool things_ok = fixed_flows_ok(app, infra);
  std::map<std::pair<std::int32_t, std::int32_t>, Fixed> fixed_usage;

  for (const auto& flow : app.flows) {
    bool src_thing = app.is_thing(flow.src);
    bool dst_thing = app.is_thing(flow.dst);
    if (!src_thing && !dst_thing) {
      pair_demand[{comp_idx.at(flow.src), comp_idx.at(flow.dst)}].add(flow);
      continue;
    }
    if (src_thing && dst_thing) {
      auto src = thing_host(infra, flow.src);
      auto dst = thing_host(infra, flow.dst);
      if (!src || !dst || !infra.nodes.at(*src).available || !infra.nodes.at(*dst).available) {
        things_ok = false;
        continue;
      }
      if (*src != *dst) fixed_usage[{node_idx.at(*src), node_idx.at(*dst)}] += required_bw(flow);
      continue;
    }
    const Id& comp = src_thing ? flow.dst : flow.src;
    const Id& thing = src_thing ? flow.src : flow.dst;
    auto host = thing_host(infra, thing);
    std::int32_t f = -1;
    if (host && infra.nodes.at(*host).available) f = node_idx.at(*host);
    thing_demand[{comp_idx.at(comp), f, !src_thing}].add(flow);
  }
  m.fixed_infeasible = !things_ok;

  // A link whose budget is already spent (threshold plus standing
  // thing-to-thing traffic at or over capacity) cannot carry any flow, so
  // pairs needing it turn into cuts rather than a vacuously false row.
  auto link_budget = [&](std::int32_t j, std::int32_t k, const Link& link) {
    Fixed fixed_part;
    if (auto it = fixed_usage.find({j, k}); it != fixed_usage.end()) fixed_part = it->second;
    return link.bandwidth_mbps - infra.bw_threshold - fixed_part;
  };

  // Cuts and y variables. Exclusions are collected as unordered variable
  // pairs so a pair violating in both flow directions yields one cut.
  std::set<std::pair<std::int32_t, std::int32_t>> exclusions;
  std::set<std::int32_t> unary_cuts;
  auto exclude = [&](std::int32_t a, std::int32_t b) {
    exclusions.insert({std::min(a, b), std::max(a, b)});
  };

  struct YTerm {
    std::int32_t y_var;
    Fixed rbw;
  };
  std::map<std::pair<std::int32_t, std::int32_t>, std::vector<YTerm>> link_y_terms;
  std::map<std::pair<std::int32_t, std::int32_t>, std::vector<std::pair<std::int32_t, Fixed>>>
      link_x_terms;

  for (const auto& [pair, demand] : pair_demand) {
    auto [i, h] = pair;
    for (const auto& ci : sets.at(m.components[i])->candidates) {
      std::int32_t j = node_idx.at(ci.node);
      std::int32_t xij = x_of.at({i, j});
      const Node& nj = infra.nodes.at(ci.node);
      for (const auto& ch : sets.at(m.components[h])->candidates) {
        std::int32_t k = node_idx.at(ch.node);
        std::int32_t xhk = x_of.at({h, k});
        const Node& nk = infra.nodes.at(ch.node);
        bool sec_fails = !node_covers(nj, demand.sec) || !node_covers(nk, demand.sec);
        if (j == k) {
          if (sec_fails) exclude(xij, xhk);
          continue;
        }
        const Link* link = infra.find_link(ci.node, ch.node);
        if (!link || link->latency_ms > demand.rlat || sec_fails ||
            link_budget(j, k, *link) < Fixed{}) {
          exclude(xij, xhk);
          continue;
        }
        auto y_var = static_cast<std::int32_t>(nx + m.y_vars.size());
        m.y_vars.push_back({i, j, h, k});
        link_y_terms[{j, k}].push_back({y_var, demand.rbw});
      }
    }
  }

  for (const auto& [key, demand] : thing_demand) {
    auto [i, f, comp_is_src] = key;
    for (const auto& ci : sets.at(m.components[i])->candidates) {
      std::int32_t j = node_idx.at(ci.node);
      std::int32_t xij = x_of.at({i, j});
      if (f < 0) {
        unary_cuts.insert(xij);
        continue;
      }
      const Node& nj = infra.nodes.at(ci.node);
      const Node& nf = infra.nodes.at(m.nodes[f]);
      bool sec_fails = !node_covers(nj, demand.sec) || !node_covers(nf, demand.sec);
      if (j == f) {
        if (sec_fails) unary_cuts.insert(xij);
        continue;
      }
      std::int32_t src = comp_is_src ? j : f;
      std::int32_t dst = comp_is_src ? f : j;
      const Link* link = infra.find_link(m.nodes[src], m.nodes[dst]);
      if (!link || link->latency_ms > demand.rlat || sec_fails ||
          link_budget(src, dst, *link) < Fixed{}) {
        unary_cuts.insert(xij);
        continue;
      }
      link_x_terms[{src, dst}].push_back({xij, demand.rbw});
    }
  }

  // Global variable indexing is the x block, then y block, then b block.
  auto ny = static_cast<std::int32_t>(m.y_vars.size());
  std::map<std::int32_t, std::int32_t> b_of;
  for (std::size_t p = 0; p < m.b_nodes.size(); ++p)
    b_of[m.b_nodes[p]] = nx + ny + static_cast<std::int32_t>(p);

  const Fixed one = Fixed::from_int(1);
  auto by_var = [](const MilpModel::Term& a, const MilpModel::Term& b) { return a.var < b.var; };

  // (1) each component placed exactly once
  for (std::size_t i = 0; i < m.components.size(); ++i) {
    MilpModel::Constraint c{MilpModel::Kind::assignment, MilpModel::Rel::eq, one, {}};
    for (const auto& cand : sets.at(m.components[i])->candidates)
      c.terms.push_back({one, x_of.at({static_cast<std::int32_t>(i), node_idx.at(cand.node)})});
    std::sort(c.terms.begin(), c.terms.end(), by_var);
    m.constraints.push_back(std::move(c));
  }

  // (2) node-usage coupling, then the bin cap when one is set
  for (std::int32_t v = 0; v < nx; ++v) {
    MilpModel::Constraint c{MilpModel::Kind::node_link, MilpModel::Rel::le, Fixed{}, {}};
    c.terms.push_back({one, v});
    c.terms.push_back({-one, b_of.at(m.x_vars[v].node)});
    m.constraints.push_back(std::move(c));
  }
  if (infra.max_bin) {
    MilpModel::Constraint c{MilpModel::Kind::max_bin, MilpModel::Rel::le,
                            Fixed::from_int(*infra.max_bin), {}};
    for (const auto& [node, var] : b_of) c.terms.push_back({one, var});
    m.constraints.push_back(std::move(c));
  }

  // (3) hardware per node holding any candidate
  for (std::int32_t j : m.b_nodes) {
    MilpModel::Constraint c{
        MilpModel::Kind::hardware, MilpModel::Rel::le,
        Fixed::from_int(infra.nodes.at(m.nodes[j]).hw_caps - infra.hw_threshold), {}};
    for (std::int32_t v = 0; v < nx; ++v)
      if (m.x_vars[v].node == j)
        c.terms.push_back({Fixed::from_int(app.component_hw(m.components[m.x_vars[v].comp])), v});
    m.constraints.push_back(std::move(c));
  }

  // (4) pairwise exclusion cuts, then unary cuts
  for (const auto& [a, b] : exclusions) {
    MilpModel::Constraint c{MilpModel::Kind::exclusion, MilpModel::Rel::le, one, {}};
    c.terms.push_back({one, a});
    c.terms.push_back({one, b});
    m.constraints.push_back(std::move(c));
  }
  for (std::int32_t v : unary_cuts) {
    MilpModel::Constraint c{MilpModel::Kind::unary_cut, MilpModel::Rel::le, Fixed{}, {}};
    c.terms.push_back({one, v});
    m.constraints.push_back(std::move(c));
  }

  // (5) linearization links per y variable
  for (std::int32_t q = 0; q < ny; ++q) {
    const auto& y = m.y_vars[q];
    std::int32_t yv = nx + q;
    std::int32_t xij = x_of.at({y.comp_i, y.node_j});
    std::int32_t xhk = x_of.at({y.comp_h, y.node_k});
    m.constraints.push_back(
        {MilpModel::Kind::y_upper, MilpModel::Rel::le, Fixed{}, {{one, yv}, {-one, xij}}});
    m.constraints.push_back(
        {MilpModel::Kind::y_upper, MilpModel::Rel::le, Fixed{}, {{one, yv}, {-one, xhk}}});
    m.constraints.push_back({MilpModel::Kind::y_lower, MilpModel::Rel::le, one,
                             {{one, xij}, {one, xhk}, {-one, yv}}});
  }

  // (6) bandwidth per directed link carrying any placeable traffic; the
  // always-on thing-to-thing share is folded into the right-hand side
  std::set<std::pair<std::int32_t, std::int32_t>> bw_links;
  for (const auto& [link, terms] : link_y_terms) bw_links.insert(link);
  for (const auto& [link, terms] : link_x_terms) bw_links.insert(link);
  for (const auto& [j, k] : bw_links) {
    const Link* link = infra.find_link(m.nodes[j], m.nodes[k]);
    MilpModel::Constraint c{MilpModel::Kind::bandwidth, MilpModel::Rel::le,
                            link_budget(j, k, *link), {}};
    c.link_j = j;
    c.link_k = k;
    if (auto it = link_y_terms.find({j, k}); it != link_y_terms.end())
      for (const auto& t : it->second) c.terms.push_back({t.rbw, t.y_var});
    if (auto it = link_x_terms.find({j, k}); it != link_x_terms.end())
      for (const auto& t : it->second) c.terms.push_back({t.second, t.first});
    std::sort(c.terms.begin(), c.terms.end(), by_var);
    m.constraints.push_back(std::move(c));
  }

  if (m.fixed_infeasible && nx > 0) {
    // Thing-to-thing traffic alone already violates the infrastructure;
    // keep the exported program unsatisfiable as well.
    MilpModel::Constraint c{MilpModel::Kind::bandwidth, MilpModel::Rel::le, -one, {{Fixed{}, 0}}};
    m.constraints.push_back(std::move(c));
  }

  return m;
}

// ---------------------------------------------------------------------------
// Branch and bound

namespace {

struct CandEntry {
  std::int32_t x_var;
  std::int32_t node;
  std::int64_t cost_units;
};

// Bandwidth demand between one component and one flow counterpart, split by
// direction so both directed links are charged when the pair is assigned.
struct PartnerDemand {
  std::int32_t other;      // component index
  std::int64_t out_units;  // this component -> other
  std::int64_t in_units;   // other -> this component
};

struct Search {
  std::vector<std::vector<CandEntry>> cands;         // per component
  std::vector<std::int64_t> rhw;                     // per component
  std::vector<std::int64_t> hw_cap;                  // per node, -1 = unconstrained
  std::vector<std::vector<std::int32_t>> conflicts;  // per x var
  std::vector<std::int32_t> comp_of;                 // x var -> component
  std::vector<std::vector<PartnerDemand>> partners;  // per component
  std::vector<std::vector<std::pair<std::pair<std::int32_t, std::int32_t>, std::int64_t>>>
      thing_load;  // per x var: (directed link, units)
  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> link_cap;
  std::optional<std::int64_t> max_bin;

  std::vector<std::int32_t> order;       // branch order, component indices
  std::vector<std::int64_t> suffix_min;  // cheapest completion of order[d..]

  std::vector<std::int32_t> assigned_node;  // per component, -1 when free
  std::vector<std::int32_t> assigned_x;
  std::vector<std::int64_t> hw_used;  // per node
  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> bw_used;
  std::vector<std::int32_t> node_refs;  // per node
  std::int64_t used_nodes = 0;

  std::int64_t incumbent = -1;
  std::vector<std::int32_t> best_x;
  std::int64_t explored = 0;

  std::chrono::steady_clock::time_point deadline;
  bool has_deadline = false;
  bool timed_out = false;

  std::vector<std::pair<std::pair<std::int32_t, std::int32_t>, std::int64_t>> commits;

  void dive(std::size_t depth, std::int64_t cost_so_far) {
    if (depth == order.size()) {
      incumbent = cost_so_far;
      best_x = assigned_x;
      return;
    }
    std::int32_t comp = order[depth];
    std::int64_t tail = depth + 1 < order.size() ? suffix_min[depth + 1] : 0;
    for (const auto& cand : cands[comp]) {
      // Candidates are cost-sorted, so the first bound failure ends the loop.
      if (incumbent >= 0 && cost_so_far + cand.cost_units + tail >= incumbent) break;

      bool clash = false;
      for (std::int32_t other : conflicts[cand.x_var])
        if (assigned_x[comp_of[other]] == other) {
          clash = true;
          break;
        }
      if (clash) continue;

      if (hw_cap[cand.node] >= 0 && hw_used[cand.node] + rhw[comp] > hw_cap[cand.node]) continue;
      if (max_bin && node_refs[cand.node] == 0 && used_nodes >= *max_bin) continue;

      commits.clear();
      bool ok = true;
      auto add_bw = [&](std::pair<std::int32_t, std::int32_t> link, std::int64_t units) {
        if (units == 0) return true;
        auto cap = link_cap.find(link);
        if (cap == link_cap.end()) return false;  // surviving pairs have a priced link
        std::int64_t next = bw_used[link] + units;
        if (next > cap->second) return false;
        bw_used[link] = next;
        commits.push_back({link, units});
        return true;
      };
      for (const auto& p : partners[comp]) {
        std::int32_t onode = assigned_node[p.other];
        if (onode < 0 || onode == cand.node) continue;
        if (!add_bw({cand.node, onode}, p.out_units) || !add_bw({onode, cand.node}, p.in_units)) {
          ok = false;
          break;
        }
      }
      if (ok)
        for (const auto& [link, units] : thing_load[cand.x_var])
          if (!add_bw(link, units)) {
            ok = false;
            break;
          }
      if (!ok) {
        for (const auto& [link, units] : commits) bw_used[link] -= units;
        continue;
      }

      auto undo = commits;  // the recursive call reuses the scratch vector
      assigned_node[comp] = cand.node;
      assigned_x[comp] = cand.x_var;
      hw_used[cand.node] += rhw[comp];
      if (node_refs[cand.node]++ == 0) ++used_nodes;
      ++explored;
      if (has_deadline && (explored & 1023) == 0 &&
          std::chrono::steady_clock::now() >= deadline)
        timed_out = true;

      if (!timed_out) dive(depth + 1, cost_so_far + cand.cost_units);

      if (--node_refs[cand.node] == 0) --used_nodes;
      hw_used[cand.node] -= rhw[comp];
      assigned_node[comp] = -1;
      assigned_x[comp] = -1;
      for (const auto& [link, units] : undo) bw_used[link] -= units;
      if (timed_out) return;
    }
  }
};

}  // namespace

SolveResult solve(const MilpModel& model, std::int64_t budget_ms, std::uint64_t seed) {
  (void)seed;  // the search is fully deterministic; the seed only labels runs
  auto t0 = std::chrono::steady_clock::now();
  SolveResult res;
  res.status = "infeasible";
  res.objective_value = Fixed{};

  auto finish = [&](SolveResult r) {
    r.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
    return r;
  };

  if (model.components.empty()) {
    if (!model.fixed_infeasible) {
      res.status = "optimal";
      res.placement = Placement{};
    }
    return finish(res);
  }
  if (model.fixed_infeasible) return finish(res);

  auto n_comp = static_cast<std::int32_t>(model.components.size());
  auto n_node = static_cast<std::int32_t>(model.nodes.size());
  auto nx = static_cast<std::int32_t>(model.x_vars.size());

  Search s;
  s.cands.resize(n_comp);
  s.rhw.assign(n_comp, 0);
  s.hw_cap.assign(n_node, -1);
  s.conflicts.resize(nx);
  s.comp_of.resize(nx);
  s.partners.resize(n_comp);
  s.thing_load.resize(nx);

  std::set<std::int32_t> cut_vars;
  for (const auto& c : model.constraints)
    if (c.kind == MilpModel::Kind::unary_cut) cut_vars.insert(c.terms[0].var);

  for (std::int32_t v = 0; v < nx; ++v) {
    const auto& x = model.x_vars[v];
    s.comp_of[v] = x.comp;
    if (!cut_vars.count(v)) s.cands[x.comp].push_back({v, x.node, x.cost.units()});
  }
  for (auto& list : s.cands)
    std::sort(list.begin(), list.end(), [](const CandEntry& a, const CandEntry& b) {
      return std::tie(a.cost_units, a.node) < std::tie(b.cost_units, b.node);
    });
  for (std::int32_t i = 0; i < n_comp; ++i)
    if (s.cands[i].empty()) return finish(res);

  std::map<std::pair<std::int32_t, std::int32_t>, std::int64_t> pair_units;
  for (const auto& c : model.constraints) {
    switch (c.kind) {
      case MilpModel::Kind::hardware:
        if (!c.terms.empty()) {
          s.hw_cap[model.x_vars[c.terms[0].var].node] = c.rhs.units() / Fixed::kScale;
          for (const auto& t : c.terms)
            s.rhw[model.x_vars[t.var].comp] = t.coeff.units() / Fixed::kScale;
        }
        break;
      case MilpModel::Kind::exclusion: {
        std::int32_t a = c.terms[0].var, b = c.terms[1].var;
        s.conflicts[a].push_back(b);
        s.conflicts[b].push_back(a);
        break;
      }
      case MilpModel::Kind::max_bin:
        s.max_bin = c.rhs.units() / Fixed::kScale;
        break;
      case MilpModel::Kind::bandwidth: {
        if (c.link_j < 0) break;                     // the standing-traffic marker
        if (c.rhs.units() < 0) return finish(res);  // guards hand-built models
        s.link_cap[{c.link_j, c.link_k}] = c.rhs.units();
        for (const auto& t : c.terms) {
          if (t.var >= nx) {
            const auto& y = model.y_vars[t.var - nx];
            pair_units[{y.comp_i, y.comp_h}] = t.coeff.units();
          } else {
            s.thing_load[t.var].push_back({{c.link_j, c.link_k}, t.coeff.units()});
          }
        }
        break;
      }
      default:
        break;
    }
  }

  std::map<std::pair<std::int32_t, std::int32_t>, PartnerDemand> agg;
  for (const auto& [pair, units] : pair_units) {
    auto [i, h] = pair;
    auto& fwd = agg.try_emplace({i, h}, PartnerDemand{h, 0, 0}).first->second;
    fwd.out_units = units;
    auto& rev = agg.try_emplace({h, i}, PartnerDemand{i, 0, 0}).first->second;
    rev.in_units = units;
  }
  for (const auto& [key, demand] : agg) s.partners[key.first].push_back(demand);

  s.order.resize(n_comp);
  for (std::int32_t i = 0; i < n_comp; ++i) s.order[i] = i;
  std::sort(s.order.begin(), s.order.end(), [&](std::int32_t a, std::int32_t b) {
    if (s.rhw[a] != s.rhw[b]) return s.rhw[a] > s.rhw[b];
    return a < b;
  });
  s.suffix_min.assign(n_comp, 0);
  std::int64_t acc = 0;
  for (std::int32_t d = n_comp - 1; d >= 0; --d) {
    acc += s.cands[s.order[d]].front().cost_units;
    s.suffix_min[d] = acc;
  }

  s.assigned_node.assign(n_comp, -1);
  s.assigned_x.assign(n_comp, -1);
  s.hw_used.assign(n_node, 0);
  s.node_refs.assign(n_node, 0);
  if (budget_ms > 0) {
    s.deadline = t0 + std::chrono::milliseconds(budget_ms);
    s.has_deadline = true;
  }

  s.dive(0, 0);

  res.nodes_explored = s.explored;
  if (s.incumbent >= 0) {
    Placement p;
    for (std::int32_t i = 0; i < n_comp; ++i) {
      const auto& x = model.x_vars[s.best_x[i]];
      p.assignments[model.components[i]] = {model.nodes[x.node], x.cost};
    }
    p.recompute_total();
    res.placement = p;
    res.objective_value = p.total_cost;
    res.status = s.timed_out ? "timeout" : "optimal";
  } else {
    res.status = s.timed_out ? "timeout" : "infeasible";
  }
  return finish(res);
}

// ---------------------------------------------------------------------------
// Independent checker and exhaustive oracle

std::optional<std::string> check_placement(const Placement& placement, const ApplicationSpec& app,
                                           const Infrastructure& infra) {
  auto comps = app.component_ids();
  for (const auto& comp : comps)
    if (!placement.assignments.count(comp)) return "component '" + comp + "' is not placed";
  for (const auto& [comp, a] : placement.assignments)
    if (!std::binary_search(comps.begin(), comps.end(), comp))
      return "placement names unknown component '" + comp + "'";

  std::map<Id, std::int64_t> hw_need;
  std::set<Id> used_nodes;
  for (const auto& comp : comps) {
    const auto& a = placement.assignments.at(comp);
    const Node* node = infra.find_node(a.node);
    if (!node) return "component '" + comp + "' placed on unknown node '" + a.node + "'";
    if (!node->available) return "component '" + comp + "' placed on an unavailable node";
    used_nodes.insert(node->id);
    hw_need[node->id] += app.component_hw(comp);

    if (app.component_kind(comp) == ComponentKind::service) {
      const auto* spec = app.find_service_spec(app.component_spec_id(comp));
      if (spec->arch != node->arch) return "component '" + comp + "' architecture mismatch";
      if (!std::includes(node->sw_caps.begin(), node->sw_caps.end(), spec->sw_reqs.begin(),
                         spec->sw_reqs.end()))
        return "component '" + comp + "' software mismatch";
    } else {
      const auto* spec = app.find_function_spec(app.component_spec_id(comp));
      if (spec->arch != node->arch) return "component '" + comp + "' architecture mismatch";
      if (!node->sw_caps.count(spec->sw_platform))
        return "component '" + comp + "' software mismatch";
    }
    if (auto policy = app.policy_for(comp); policy && !eval_requirement(*policy, *node, infra))
      return "component '" + comp + "' violates its placement policy";
  }

  for (const auto& [node_id, need] : hw_need)
    if (need > infra.nodes.at(node_id).hw_caps - infra.hw_threshold)
      return "hardware exceeded on node '" + node_id + "'";
  if (infra.max_bin && static_cast<std::int64_t>(used_nodes.size()) > *infra.max_bin)
    return "placement uses more nodes than allowed";

  auto endpoint = [&](const Id& id) -> std::optional<Id> {
    if (app.is_thing(id)) {
      auto host = thing_host(infra, id);
      if (!host || !infra.nodes.at(*host).available) return std::nullopt;
      return host;
    }
    return placement.assignments.at(id).node;
  };

  std::map<std::pair<Id, Id>, Fixed> bw_need;
  for (const auto& flow : app.flows) {
    auto src = endpoint(flow.src);
    auto dst = endpoint(flow.dst);
    if (!src || !dst) return "flow " + flow.src + "->" + flow.dst + " has an unreachable endpoint";
    for (const Id& n : {*src, *dst})
      if (!node_covers(infra.nodes.at(n), flow.sec_reqs))
        return "flow " + flow.src + "->" + flow.dst + " lacks security support on '" + n + "'";
    if (*src == *dst) continue;
    const Link* link = infra.find_link(*src, *dst);
    if (!link) return "flow " + flow.src + "->" + flow.dst + " has no link";
    if (link->latency_ms > flow.max_latency_ms)
      return "flow " + flow.src + "->" + flow.dst + " misses its latency bound";
    bw_need[{*src, *dst}] += required_bw(flow);
  }
  for (const auto& [key, need] : bw_need) {
    const Link* link = infra.find_link(key.first, key.second);
    if (need > link->bandwidth_mbps - infra.bw_threshold)
      return "bandwidth exceeded on link " + key.first + "->" + key.second;
  }
  return std::nullopt;
}

SolveResult brute_force_oracle(const PreprocessOutcome& outcome, const ApplicationSpec& app,
                               const Infrastructure& infra, const PriceTable& table) {
  auto t0 = std::chrono::steady_clock::now();
  auto comps = app.component_ids();

  std::map<Id, const CandidateSet*> sets;
  for (const auto& s : outcome.candidate_sets) sets[s.component] = &s;

  unsigned long long space = 1;
  std::vector<const std::vector<Candidate>*> lists;
  for (const auto& comp : comps) {
    auto it = sets.find(comp);
    std::size_t n = it == sets.end() ? 0 : it->second->candidates.size();
    space = n == 0 ? 0 : space * n;
    if (space > 1000000ull) throw OracleGuardError("search space exceeds 1000000 assignments");
    lists.push_back(n == 0 ? nullptr : &it->second->candidates);
  }

  SolveResult res;
  res.status = "infeasible";
  res.objective_value = Fixed{};

  std::optional<Placement> best;
  if (space > 0) {
    std::vector<std::size_t> pick(comps.size(), 0);
    while (true) {
      Placement p;
      for (std::size_t i = 0; i < comps.size(); ++i) {
        const Id& node = (*lists[i])[pick[i]].node;
        // Costs are recomputed from the price table, not read off the
        // candidate list, so the oracle prices assignments independently.
        p.assignments[comps[i]] = {node, component_cost(table, infra.nodes.at(node), app, comps[i])};
      }
      p.recompute_total();
      ++res.nodes_explored;
      if (!check_placement(p, app, infra) && (!best || p.total_cost < best->total_cost))
        best = std::move(p);

      std::size_t d = comps.size();
      while (d > 0 && ++pick[d - 1] == lists[d - 1]->size()) pick[--d] = 0;
      if (d == 0) break;
    }
  }

  if (best) {
    res.status = "optimal";
    res.placement = best;
    res.objective_value = best->total_cost;
  }
  res.wall_time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  return res;
}

// ---------------------------------------------------------------------------
// LP export

namespace {

void append_terms(std::string& out, const std::vector<MilpModel::Term>& terms,
                  const MilpModel& m) {
  bool first = true;
  for (const auto& t : terms) {
    Fixed coeff = t.coeff;
    if (coeff.units() < 0) {
      out += first ? "- " : " - ";
      coeff = -coeff;
    } else if (!first) {
      out += " + ";
    }
    first = false;
    out += coeff.to_string();
    out += ' ';
    out += m.var_name(t.var);
  }
}

}  // namespace

std::string export_lp(const MilpModel& model) {
  std::string out;
  out += "\\ binary placement program\n";
  out += "\\ components:";
  for (std::size_t i = 0; i < model.components.size(); ++i)
    out += (i ? ", " : " ") + std::to_string(i) + "=" + model.components[i];
  out += "\n\\ nodes:";
  for (std::size_t j = 0; j < model.nodes.size(); ++j)
    out += (j ? ", " : " ") + std::to_string(j) + "=" + model.nodes[j];
  out += "\n";

  out += "Minimize\n obj:";
  if (model.x_vars.empty()) {
    out += " 0.000000";
  } else {
    out += ' ';
    std::vector<MilpModel::Term> obj;
    for (std::size_t v = 0; v < model.x_vars.size(); ++v)
      obj.push_back({model.x_vars[v].cost, static_cast<std::int32_t>(v)});
    append_terms(out, obj, model);
  }
  out += "\nSubject To\n";
  for (std::size_t c = 0; c < model.constraints.size(); ++c) {
    const auto& con = model.constraints[c];
    out += " c" + std::to_string(c) + ": ";
    append_terms(out, con.terms, model);
    out += con.rel == MilpModel::Rel::eq ? " = " : " <= ";
    out += con.rhs.to_string();
    out += "\n";
  }
  out += "Binary\n";
  for (std::int32_t v = 0; v < model.var_count(); ++v) out += " " + model.var_name(v) + "\n";
  out += "End\n";
  return out;
}

void export_lp_file(const MilpModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << export_lp(model);
}

}  // namespace placer
