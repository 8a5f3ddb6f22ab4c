#include "contrib/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "contrib/allocation.hpp"
#include "contrib/json_io.hpp"
#include "contrib/lp.hpp"
#include "contrib/matching.hpp"

namespace contrib {

std::string solve_status_name(SolveStatus s) {
  switch (s) {
    case SolveStatus::Equilibrium: return "equilibrium";
    case SolveStatus::NoEquilibrium: return "no_equilibrium";
    case SolveStatus::Unsupported: return "unsupported";
  }
  return "?";
}

namespace {

SolveOutcome unsupported(std::string algorithm, std::string why) {
  SolveOutcome o;
  o.status = SolveStatus::Unsupported;
  o.algorithm = std::move(algorithm);
  o.witness = std::move(why);
  return o;
}

SolveOutcome equilibrium_outcome(const Game& g, std::string algorithm, Profile p) {
  SolveOutcome o;
  o.status = SolveStatus::Equilibrium;
  o.algorithm = std::move(algorithm);
  o.welfare = social_welfare(g, p);
  o.profile = std::move(p);
  return o;
}

std::vector<WeightedEdge> max_reward_edges(const Game& g) {
  std::vector<WeightedEdge> edges;
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    edges.push_back({ed.u, ed.v, g.reward(e).max_reward(g.budget(ed.u), g.budget(ed.v))});
  }
  return edges;
}

Profile matching_profile(const Game& g, const std::vector<int>& mate) {
  Profile p = Profile::zeros(g);
  for (int e = 0; e < g.edge_count(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    if (mate[u] == v) {
      p.set_effort(g, u, e, g.budget(u));
      p.set_effort(g, v, e, g.budget(v));
    }
  }
  return p;
}

}  // namespace

SolveOutcome solve_greedy_c0(const Game& g, const VerifyOptions&) {
  for (int e = 0; e < g.edge_count(); ++e)
    if (!g.reward(e).in_class_c0())
      return unsupported("greedy-c0",
                         "edge " + g.edge(e).name + " is not in class C0 (coordinate-convex with f(x,0)=0)");
  auto edges = max_reward_edges(g);
  std::vector<int> order(edges.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return edges[a].weight > edges[b].weight; });
  auto mate = greedy_matching(g.node_count(), order, edges);
  SolveOutcome o = equilibrium_outcome(g, "greedy-c0", matching_profile(g, mate));
  o.strong_equilibrium = true;
  return o;
}

SolveOutcome solve_weighted_sum(const Game& g, const VerifyOptions& opts) {
  for (int e = 0; e < g.edge_count(); ++e)
    if (g.reward(e).kind() != RewardSpec::Kind::WeightedSum)
      return unsupported("weighted-sum", "edge " + g.edge(e).name + " is not weighted_sum");
  const double tol = opts.tol;
  int n = g.node_count();

  std::vector<double> cmax(n, 0.0);
  for (int v = 0; v < n; ++v)
    for (int e : g.incident(v)) cmax[v] = std::max(cmax[v], g.reward(e).coef());
  auto in_estar = [&](int v, int e) { return g.reward(e).coef() >= cmax[v] - tol; };

  // Phase 1: edges maximal for exactly one endpoint force that endpoint.
  std::vector<int> forced_edge(n, -1);
  for (int e = 0; e < g.edge_count(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    for (auto [a, b] : {std::pair(u, v), std::pair(v, u)}) {
      if (g.budget(a) <= tol) continue;
      if (in_estar(a, e) && !in_estar(b, e)) {
        if (forced_edge[a] >= 0 && forced_edge[a] != e) {
          SolveOutcome o;
          o.status = SolveStatus::NoEquilibrium;
          o.algorithm = "weighted-sum";
          o.witness = "node " + g.node(a).name + " is forced to spend its full budget on both " +
                      g.edge(forced_edge[a]).name + " and " + g.edge(e).name;
          return o;
        }
        forced_edge[a] = e;
      }
    }
  }

  // Phase 2: cover every doubly-maximal edge by a distinct unforced endpoint.
  std::vector<int> estar_edges;
  for (int e = 0; e < g.edge_count(); ++e)
    if (in_estar(g.edge(e).u, e) && in_estar(g.edge(e).v, e)) estar_edges.push_back(e);
  std::vector<int> node_covers(n, -1);  // node -> covered edge
  std::vector<int> edge_cover(g.edge_count(), -1);
  std::function<bool(int, std::vector<bool>&)> try_cover = [&](int e, std::vector<bool>& visited) {
    for (int x : {g.edge(e).u, g.edge(e).v}) {
      if (forced_edge[x] >= 0 || visited[x]) continue;
      visited[x] = true;
      if (node_covers[x] == -1 || try_cover(node_covers[x], visited)) {
        node_covers[x] = e;
        edge_cover[e] = x;
        return true;
      }
    }
    return false;
  };
  for (int e : estar_edges) {
    std::vector<bool> visited(n, false);
    if (!try_cover(e, visited)) {
      SolveOutcome o;
      o.status = SolveStatus::NoEquilibrium;
      o.algorithm = "weighted-sum";
      o.witness = "no assignment of nodes to maximal edges covers " + g.edge(e).name +
                  "; some doubly-maximal edge is left without a fully committed endpoint";
      return o;
    }
  }

  // Phase 3: every off-maximal edge must pass (c_u-c_e)(c_v-c_e) >= c_e^2.
  for (int e = 0; e < g.edge_count(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    if (in_estar(u, e) || in_estar(v, e)) continue;
    if (g.budget(u) <= tol || g.budget(v) <= tol) continue;
    double ce = g.reward(e).coef();
    double lhs = (cmax[u] - ce) * (cmax[v] - ce);
    if (lhs < ce * ce - tol) {
      SolveOutcome o;
      o.status = SolveStatus::NoEquilibrium;
      o.algorithm = "weighted-sum";
      o.witness = "edge " + g.edge(e).name + " fails (c_u-c_e)(c_v-c_e) >= c_e^2: (" +
                  format_sig(cmax[u]) + "-" + format_sig(ce) + ")(" + format_sig(cmax[v]) + "-" +
                  format_sig(ce) + ") = " + format_sig(lhs) + " < " + format_sig(ce * ce);
      return o;
    }
  }

  Profile p = Profile::zeros(g);
  for (int v = 0; v < n; ++v) {
    if (g.degree(v) == 0 || g.budget(v) <= 0) continue;
    int target = forced_edge[v] >= 0 ? forced_edge[v] : node_covers[v];
    if (target < 0) {
      for (int e : g.incident(v))
        if (in_estar(v, e)) {
          target = e;
          break;
        }
    }
    p.set_effort(g, v, target, g.budget(v));
  }
  SolveOutcome o = equilibrium_outcome(g, "weighted-sum", std::move(p));
  o.notes = "price of anarchy is 1 for weighted-sum games";
  return o;
}

SolveOutcome solve_min_convex_uniform(const Game& g, const VerifyOptions& opts) {
  if (!g.all_min_effort())
    return unsupported("min-convex-uniform", "not a min-effort game");
  for (int e = 0; e < g.edge_count(); ++e)
    if (!g.reward(e).scalar().convex())
      return unsupported("min-convex-uniform",
                         "edge " + g.edge(e).name + " does not have a convex scalar fn");
  if (!g.uniform_budgets(opts.tol))
    return unsupported("min-convex-uniform", "budgets are not uniform");
  std::vector<WeightedEdge> edges;
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto& ed = g.edge(e);
    edges.push_back({ed.u, ed.v, g.reward(e).scalar()(g.budget(ed.u))});
  }
  std::vector<int> order(edges.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return edges[a].weight > edges[b].weight; });
  auto mate = greedy_matching(g.node_count(), order, edges);
  SolveOutcome o = equilibrium_outcome(g, "min-convex-uniform", matching_profile(g, mate));
  o.strong_equilibrium = true;
  return o;
}

SolveOutcome solve_min_concave(const Game& g, const VerifyOptions& opts) {
  if (!g.all_min_effort())
    return unsupported("min-concave", "not a min-effort game");
  bool all_strict = true;
  for (int e = 0; e < g.edge_count(); ++e) {
    const ScalarFn& h = g.reward(e).scalar();
    if (!h.concave())
      return unsupported("min-concave", "edge " + g.edge(e).name + " is not concave");
    if (!h.strictly_concave()) all_strict = false;
  }
  const double tol = opts.tol;
  int n = g.node_count();

  Profile state = Profile::zeros(g);
  std::vector<bool> awake(n, false);
  std::set<int> sleeping;
  for (int v = 0; v < n; ++v) sleeping.insert(v);

  // Water-filling over v's edges: awake edges capped at the awake side's fixed
  // contribution (and filled first at equal marginal, realizing the matching
  // selection); sleeping edges capped at min of budgets. Shared edges to
  // `deprioritized` fill last, which implements the tie-break reshuffle.
  auto overline_br = [&](int v, const std::set<int>& depri) {
    std::vector<FillEdge> fills;
    const auto& inc = g.incident(v);
    for (int e : inc) {
      int w = g.other_end(e, v);
      FillEdge fe;
      fe.key = e;
      fe.h = g.reward(e).scalar();
      if (awake[w]) {
        fe.cap = state.effort(g, w, e);
        fe.priority = 0;
      } else {
        fe.cap = std::min(g.budget(v), g.budget(w));
        fe.priority = depri.count(w) ? 2 : 1;
      }
      fills.push_back(fe);
    }
    return water_fill(fills, g.budget(v), tol);
  };

  auto sleeping_derivative = [&](int v, const FillResult& fill) {
    const auto& inc = g.incident(v);
    double hmin = kInf;  // min over empty set: wakes first, nothing left to decide
    for (size_t i = 0; i < inc.size(); ++i) {
      int w = g.other_end(inc[i], v);
      if (awake[w] || fill.x[i] <= tol) continue;
      hmin = std::min(hmin, g.reward(inc[i]).scalar().left_deriv(fill.x[i]));
    }
    return hmin;
  };

  for (int round = 0; round < n; ++round) {
    std::map<int, FillResult> brs;
    std::map<int, double> deriv;
    double best = -kInf;
    for (int v : sleeping) {
      brs[v] = overline_br(v, {});
      deriv[v] = sleeping_derivative(v, brs[v]);
      best = std::max(best, deriv[v]);
    }
    std::vector<int> tied;
    for (int v : sleeping) {
      bool tie = deriv[v] == best ||
                 (std::isfinite(best) && std::fabs(deriv[v] - best) <= 1e-9 * (1 + std::fabs(best)));
      if (tie) tied.push_back(v);
    }

    int chosen = -1;
    FillResult chosen_fill;
    if (tied.size() == 1) {
      chosen = tied[0];
      chosen_fill = brs[chosen];
    } else {
      std::set<int> tied_set(tied.begin(), tied.end());
      for (int u : tied) {
        FillResult fill = overline_br(u, tied_set);
        bool ok = true;
        const auto& inc = g.incident(u);
        for (size_t i = 0; i < inc.size() && ok; ++i) {
          int w = g.other_end(inc[i], u);
          if (awake[w] || !tied_set.count(w)) continue;
          double theirs = brs[w].x[g.incident_index(w, inc[i])];
          if (fill.x[i] > theirs + 1e-7 * (1 + theirs)) ok = false;
        }
        if (ok) {
          chosen = u;
          chosen_fill = fill;
          break;
        }
      }
      if (chosen < 0)
        throw InternalError("min-concave wake-up: no tied node matches the tie-break rule");
    }

    awake[chosen] = true;
    sleeping.erase(chosen);
    const auto& inc = g.incident(chosen);
    for (size_t i = 0; i < inc.size(); ++i) state.row(chosen)[i] = chosen_fill.x[i];
  }

  // The construction promises symmetric contributions.
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [xu, xv] = edge_state(g, state, e);
    if (std::fabs(xu - xv) > 1e-6 * (1 + std::fabs(xu)))
      throw InternalError("min-concave wake-up produced asymmetric contributions on edge " +
                          g.edge(e).name);
  }
  SolveOutcome o = equilibrium_outcome(g, "min-concave", std::move(state));
  o.strong_equilibrium = true;
  o.unique = all_strict;
  return o;
}

SolveOutcome solve_max_effort(const Game& g, const VerifyOptions& opts) {
  if (!g.all_max_effort())
    return unsupported("max-effort", "not a max-effort game");
  bool exact = true;
  int breakpoints = 0;
  for (int e = 0; e < g.edge_count(); ++e) {
    const ScalarFn& h = g.reward(e).scalar();
    if (!h.convex()) exact = false;
    breakpoints += static_cast<int>(h.breakpoints().size());
  }
  const double tol = opts.tol;
  Profile p = Profile::zeros(g);
  int cap = 10 * (g.node_count() + g.edge_count()) * (breakpoints + 2);
  bool moved = true;
  int rounds = 0;
  while (moved) {
    if (++rounds > cap)
      throw InternalError("max-effort ascent exceeded its round cap; potential argument violated");
    moved = false;
    for (int v = 0; v < g.node_count(); ++v) {
      BestResponse br = best_response(g, p, v, tol, opts.grid);
      double cur = node_utility(g, p, v);
      if (br.value > cur + tol) {
        double phi_before = potential(g, p);
        p = apply_allocation(g, p, v, br.allocation);
        double phi_after = potential(g, p);
        if (phi_after - phi_before < (br.value - cur) - 1e-6 * (1 + std::fabs(phi_after)))
          throw InternalError("max-effort ascent: potential did not rise by the mover's gain");
        moved = true;
      }
    }
  }
  SolveOutcome o = equilibrium_outcome(g, "max-effort", std::move(p));
  o.approximate = !exact;
  o.notes = "price of stability is 1 for max-effort games";
  return o;
}

std::optional<SolveMethod> solve_method_from_name(const std::string& name) {
  if (name == "auto") return SolveMethod::Auto;
  if (name == "greedy-c0") return SolveMethod::GreedyC0;
  if (name == "weighted-sum") return SolveMethod::WeightedSum;
  if (name == "min-convex-uniform") return SolveMethod::MinConvexUniform;
  if (name == "min-concave") return SolveMethod::MinConcave;
  if (name == "max-effort") return SolveMethod::MaxEffort;
  return std::nullopt;
}

std::string solve_method_name(SolveMethod m) {
  switch (m) {
    case SolveMethod::Auto: return "auto";
    case SolveMethod::GreedyC0: return "greedy-c0";
    case SolveMethod::WeightedSum: return "weighted-sum";
    case SolveMethod::MinConvexUniform: return "min-convex-uniform";
    case SolveMethod::MinConcave: return "min-concave";
    case SolveMethod::MaxEffort: return "max-effort";
  }
  return "?";
}

SolveOutcome solve(const Game& g, SolveMethod method, const VerifyOptions& opts) {
  switch (method) {
    case SolveMethod::GreedyC0: return solve_greedy_c0(g, opts);
    case SolveMethod::WeightedSum: return solve_weighted_sum(g, opts);
    case SolveMethod::MinConvexUniform: return solve_min_convex_uniform(g, opts);
    case SolveMethod::MinConcave: return solve_min_concave(g, opts);
    case SolveMethod::MaxEffort: return solve_max_effort(g, opts);
    case SolveMethod::Auto: break;
  }
  if (g.all_weighted_sum()) return solve_weighted_sum(g, opts);
  if (g.all_in_class_c0()) return solve_greedy_c0(g, opts);
  if (g.all_max_effort()) return solve_max_effort(g, opts);
  if (g.all_min_effort()) {
    bool all_concave = true, all_convex = true;
    for (int e = 0; e < g.edge_count(); ++e) {
      all_concave = all_concave && g.reward(e).scalar().concave();
      all_convex = all_convex && g.reward(e).scalar().convex();
    }
    if (all_concave) return solve_min_concave(g, opts);
    if (all_convex && g.uniform_budgets(opts.tol)) return solve_min_convex_uniform(g, opts);
    if (all_convex)
      return unsupported("auto",
                         "min-effort with convex h and non-uniform budgets; existence is "
                         "NP-hard to decide and no solver applies");
    return unsupported("auto", "min-effort game mixing convex and concave scalar fns");
  }
  return unsupported("auto",
                     "mixed reward classes; candidates tried: weighted-sum, greedy-c0, "
                     "min-concave, min-convex-uniform, max-effort");
}

std::optional<OptimumMethod> optimum_method_from_name(const std::string& name) {
  if (name == "tight-matching") return OptimumMethod::TightMatching;
  if (name == "lp") return OptimumMethod::Lp;
  if (name == "grid") return OptimumMethod::Grid;
  return std::nullopt;
}

OptimumResult social_optimum(const Game& g, OptimumMethod method, const GridSpec& grid) {
  switch (method) {
    case OptimumMethod::TightMatching: {
      if (!g.all_in_class_c0())
        throw UnsupportedClassError("tight-matching optimum requires all rewards in class C0");
      auto edges = max_reward_edges(g);
      auto mate = max_weight_matching(g.node_count(), edges);
      Profile p = matching_profile(g, mate);
      return {p, social_welfare(g, p), "tight-matching"};
    }
    case OptimumMethod::Lp: {
      for (int e = 0; e < g.edge_count(); ++e)
        if (g.reward(e).kind() != RewardSpec::Kind::MinEffort || !g.reward(e).scalar().is_linear())
          throw UnsupportedClassError("lp optimum requires min-effort games with linear h");
      int n = g.node_count(), m = g.edge_count();
      std::vector<std::vector<double>> a(n, std::vector<double>(m, 0.0));
      std::vector<double> b(n), c(m);
      for (int v = 0; v < n; ++v) b[v] = g.budget(v);
      for (int e = 0; e < m; ++e) {
        a[g.edge(e).u][e] = 1.0;
        a[g.edge(e).v][e] = 1.0;
        c[e] = 2 * g.reward(e).scalar().coef_a();
      }
      LpResult lp = simplex_solve(a, b, c);
      Profile p = Profile::zeros(g);
      for (int e = 0; e < m; ++e) {
        p.set_effort(g, g.edge(e).u, e, lp.x[e]);
        p.set_effort(g, g.edge(e).v, e, lp.x[e]);
      }
      return {p, social_welfare(g, p), "lp"};
    }
    case OptimumMethod::Grid: {
      auto [p, welfare] = grid_optimum(g, grid);
      return {p, welfare, "grid"};
    }
  }
  throw InternalError("unreachable optimum method");
}

DualCertificate dual_certificate(const Game& g, const Profile& s, const VerifyOptions& opts,
                                 bool force) {
  for (int e = 0; e < g.edge_count(); ++e)
    if (g.reward(e).kind() != RewardSpec::Kind::MinEffort || !g.reward(e).scalar().is_linear())
      throw UnsupportedClassError("dual certificate requires min-effort games with linear h");
  if (!force) {
    VerifyReport rep = verify_pairwise(g, s, opts);
    if (!rep.stable())
      throw InfeasibleError("dual certificate refused: profile is not pairwise stable");
  }
  int n = g.node_count();
  DualCertificate cert;
  cert.y.assign(n, 0.0);
  for (int v = 0; v < n; ++v) {
    double num = 0;
    for (int e : g.incident(v)) num += g.reward(e).scalar().coef_a() * edge_min_effort(g, s, e);
    if (g.budget(v) <= opts.tol) {
      if (num > opts.tol) {
        cert.infinite_nodes.push_back(v);
        cert.y[v] = kInf;
      }
    } else {
      cert.y[v] = num / g.budget(v);
    }
  }
  cert.y_doubled.resize(n);
  for (int v = 0; v < n; ++v) cert.y_doubled[v] = 2 * cert.y[v];
  cert.dual_feasible = true;
  for (int e = 0; e < g.edge_count(); ++e) {
    double ce = g.reward(e).scalar().coef_a();
    if (std::max(cert.y[g.edge(e).u], cert.y[g.edge(e).v]) < ce - opts.tol)
      cert.dual_feasible = false;
  }
  cert.primal_value = 0;
  for (int e = 0; e < g.edge_count(); ++e)
    cert.primal_value += 2 * g.reward(e).scalar().coef_a() * edge_min_effort(g, s, e);
  cert.dual_value = 0;
  for (int v = 0; v < n; ++v)
    if (std::isfinite(cert.y_doubled[v])) cert.dual_value += g.budget(v) * cert.y_doubled[v];
  return cert;
}

PoaResult price_of_anarchy(const Game& g, const Profile& equilibrium, const Profile& optimum,
                           const VerifyOptions& opts, bool force) {
  equilibrium.check_feasible(g, opts.tol);
  optimum.check_feasible(g, opts.tol);
  if (!force) {
    VerifyReport rep = verify_pairwise(g, equilibrium, opts);
    if (!rep.stable())
      throw InfeasibleError("price_of_anarchy refused: equilibrium profile fails verification");
  }
  double we = social_welfare(g, equilibrium);
  double wo = social_welfare(g, optimum);
  PoaResult r;
  if (wo <= opts.tol && we <= opts.tol) {
    r.ratio = 1;
  } else if (we <= opts.tol) {
    r.infinite = true;
    r.ratio = kInf;
  } else {
    r.ratio = wo / we;
  }
  return r;
}

nlohmann::json solve_outcome_to_json(const Game& g, const SolveOutcome& o) {
  nlohmann::json j;
  j["status"] = solve_status_name(o.status);
  j["algorithm"] = o.algorithm;
  if (o.profile) {
    j["profile"] = profile_to_json(g, *o.profile);
    j["welfare"] = o.welfare;
    j["strong_equilibrium"] = o.strong_equilibrium;
    if (o.unique) j["unique"] = true;
    if (o.approximate) j["approximate"] = true;
  }
  if (!o.witness.empty()) j["witness"] = o.witness;
  if (!o.notes.empty()) j["notes"] = o.notes;
  return j;
}

nlohmann::json dual_certificate_to_json(const Game& g, const DualCertificate& c) {
  nlohmann::json y = nlohmann::json::object(), y2 = nlohmann::json::object();
  for (int v = 0; v < g.node_count(); ++v) {
    if (std::isfinite(c.y[v])) {
      y[g.node(v).name] = c.y[v];
      y2[g.node(v).name] = c.y_doubled[v];
    } else {
      y[g.node(v).name] = "inf";
      y2[g.node(v).name] = "inf";
    }
  }
  nlohmann::json j;
  j["y"] = y;
  j["y_doubled"] = y2;
  j["primal_value"] = c.primal_value;
  j["dual_value"] = c.dual_value;
  j["dual_feasible"] = c.dual_feasible;
  return j;
}

}  // namespace contrib
