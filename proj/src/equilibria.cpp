#include "contrib/equilibria.hpp"

#include <algorithm>
#include <cmath>

#include "contrib/allocation.hpp"
#include "contrib/oracle.hpp"

namespace contrib {

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Stable: return "stable";
    case Verdict::UnilateralDeviation: return "unilateral_deviation";
    case Verdict::BilateralDeviation: return "bilateral_deviation";
    case Verdict::StableAtResolution: return "stable_at_resolution";
  }
  return "?";
}

std::string method_name(VerifyMethod m) {
  switch (m) {
    case VerifyMethod::ExactClass: return "exact-class";
    case VerifyMethod::ParametricScan: return "parametric-scan";
    case VerifyMethod::Grid: return "grid";
  }
  return "?";
}

std::string tightness_name(Tightness t) {
  switch (t) {
    case Tightness::Tight: return "tight";
    case Tightness::HalfSlack: return "half-slack";
    case Tightness::Slack: return "slack";
  }
  return "?";
}

double DeviationWitness::min_gain() const {
  double m = kInf;
  for (const auto& [v, gain] : gains) m = std::min(m, gain);
  return m;
}

namespace {

// Replays candidate moves; returns a witness only if every deviator strictly gains.
std::optional<DeviationWitness> replay_witness(const Game& g, const Profile& s,
                                               const std::map<int, std::map<int, double>>& moves,
                                               double tol) {
  Profile after = s;
  for (const auto& [v, alloc] : moves) after = apply_allocation(g, after, v, alloc);
  if (!after.feasible(g, tol)) return std::nullopt;
  DeviationWitness w;
  w.moves = moves;
  for (const auto& [v, alloc] : moves) {
    double gain = node_utility(g, after, v) - node_utility(g, s, v);
    if (!(gain > tol)) return std::nullopt;
    w.nodes.push_back(v);
    w.gains[v] = gain;
  }
  return w;
}

std::map<int, double> full_allocation(const Game& g, int v, int edge, double amount) {
  std::map<int, double> a;
  for (int e : g.incident(v)) a[e] = 0.0;
  if (edge >= 0) a[edge] = amount;
  return a;
}

std::map<int, double> current_allocation(const Game& g, const Profile& s, int v) {
  std::map<int, double> a;
  for (int e : g.incident(v)) a[e] = s.effort(g, v, e);
  return a;
}

void keep_better(std::optional<DeviationWitness>& best,
                 const std::optional<DeviationWitness>& cand) {
  if (!cand) return;
  if (!best || cand->min_gain() > best->min_gain()) best = cand;
}

// Closed-form test for games where every reward is c_e * (x + y): a bilateral
// move onto e improves both endpoints iff (c_u - c_e)(c_v - c_e) < c_e^2 and
// both have effort to shift.
std::optional<DeviationWitness> weighted_sum_edge_deviation(const Game& g, const Profile& s,
                                                            int e, double tol) {
  int u = g.edge(e).u, v = g.edge(e).v;
  auto max_slope = [&](int x) {
    double c = 0;
    for (int ee : g.incident(x)) c = std::max(c, g.reward(ee).coef());
    return c;
  };
  double ce = g.reward(e).coef();
  double cu = max_slope(u), cv = max_slope(v);
  double au = g.budget(u) - s.effort(g, u, e);
  double av = g.budget(v) - s.effort(g, v, e);
  if (au <= tol || av <= tol) return std::nullopt;
  if ((cu - ce) * (cv - ce) >= ce * ce - tol) return std::nullopt;

  // Pick the added amounts: ratio r = eps_v / eps_u inside the improving window.
  double lo = (cu - ce) / ce;
  double hi = cv > ce ? ce / (cv - ce) : kInf;
  double r;
  if (lo <= 0 && !std::isfinite(hi)) r = 1;
  else if (lo <= 0) r = hi / 2;
  else if (!std::isfinite(hi)) r = 2 * lo;
  else r = std::sqrt(lo * hi);
  double eps_u = std::min(au, av / r);
  double eps_v = r * eps_u;

  auto shifted = [&](int x, double eps) {
    auto alloc = current_allocation(g, s, x);
    double need = eps;
    for (int ee : g.incident(x)) {
      if (ee == e || need <= 0) continue;
      double take = std::min(alloc[ee], need);
      alloc[ee] -= take;
      need -= take;
    }
    alloc[e] += eps - need;
    return alloc;
  };
  std::map<int, std::map<int, double>> moves{{u, shifted(u, eps_u)}, {v, shifted(v, eps_v)}};
  return replay_witness(g, s, moves, tol);
}

// Class-C edges: the deviations used in the paper's arguments are pairs of
// single-edge reallocations, including both endpoints going all-in on e.
std::optional<DeviationWitness> vertex_pair_deviation(const Game& g, const Profile& s, int e,
                                                      double tol) {
  int u = g.edge(e).u, v = g.edge(e).v;
  std::optional<DeviationWitness> best;
  for (int a : g.incident(u)) {
    for (int b : g.incident(v)) {
      std::map<int, std::map<int, double>> moves{
          {u, full_allocation(g, u, a, g.budget(u))},
          {v, full_allocation(g, v, b, g.budget(v))}};
      keep_better(best, replay_witness(g, s, moves, tol));
    }
  }
  return best;
}

// Both endpoints raise the shared min-effort edge to a joint target t and
// re-optimize the remainder of their budgets.
std::optional<DeviationWitness> min_effort_scan_deviation(const Game& g, const Profile& s, int e,
                                                          double tol, bool* exact_ok) {
  int u = g.edge(e).u, v = g.edge(e).v;
  const ScalarFn& h = g.reward(e).scalar();
  double se = edge_min_effort(g, s, e);
  double t_max = std::min(g.budget(u), g.budget(v));
  *exact_ok = true;
  if (t_max <= se + tol) return std::nullopt;

  std::vector<int> others_u, others_v;
  for (int ee : g.incident(u))
    if (ee != e) others_u.push_back(ee);
  for (int ee : g.incident(v))
    if (ee != e) others_v.push_back(ee);

  double wu = node_utility(g, s, u), wv = node_utility(g, s, v);
  auto gain = [&](int node, const std::vector<int>& others, double w0, double t) {
    RestValue rest = best_partial_allocation(g, s, node, others, g.budget(node) - t, tol);
    if (!rest.exact) *exact_ok = false;
    return h(t) + rest.value - w0;
  };
  auto q = [&](double t) { return std::min(gain(u, others_u, wu, t), gain(v, others_v, wv, t)); };

  std::vector<double> candidates{t_max};
  for (double bp : h.breakpoints())
    if (bp > se + tol && bp <= t_max) candidates.push_back(bp);
  for (int i = 1; i < 32; ++i) candidates.push_back(se + (t_max - se) * i / 32.0);

  double best_t = t_max, best_q = -kInf;
  for (double t : candidates) {
    double val = q(t);
    if (val > best_q) {
      best_q = val;
      best_t = t;
    }
  }
  if (!*exact_ok) return std::nullopt;
  // Golden-section refinement around the best candidate.
  double lo = std::max(se, best_t - (t_max - se) / 16.0);
  double hi = std::min(t_max, best_t + (t_max - se) / 16.0);
  const double phi = 0.5 * (std::sqrt(5.0) - 1);
  double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
  double q1 = q(x1), q2 = q(x2);
  for (int it = 0; it < 60; ++it) {
    if (q1 < q2) {
      lo = x1;
      x1 = x2;
      q1 = q2;
      x2 = lo + phi * (hi - lo);
      q2 = q(x2);
    } else {
      hi = x2;
      x2 = x1;
      q2 = q1;
      x1 = hi - phi * (hi - lo);
      q1 = q(x1);
    }
  }
  for (double t : {x1, x2})
    if (q(t) > best_q) {
      best_q = q(t);
      best_t = t;
    }
  if (!(best_q > tol)) return std::nullopt;

  auto move_of = [&](int node, const std::vector<int>& others, double t) {
    RestValue rest = best_partial_allocation(g, s, node, others, g.budget(node) - t, tol);
    std::map<int, double> alloc = rest.allocation;
    alloc[e] = t;
    return alloc;
  };
  std::map<int, std::map<int, double>> moves{{u, move_of(u, others_u, best_t)},
                                             {v, move_of(v, others_v, best_t)}};
  return replay_witness(g, s, moves, tol);
}

int adaptive_pair_resolution(const Game& g, int e, int grid) {
  int u = g.edge(e).u, v = g.edge(e).v;
  int r = std::max(2, grid);
  while (r > 2 && lattice_count(r, g.degree(u)) * lattice_count(r, g.degree(v)) > 250000.0)
    r /= 2;
  return r;
}

std::optional<DeviationWitness> grid_pair_deviation(const Game& g, const Profile& s, int e,
                                                    double tol, int grid, int* used_resolution) {
  int u = g.edge(e).u, v = g.edge(e).v;
  int r = adaptive_pair_resolution(g, e, grid);
  *used_resolution = r;
  auto allocs_u = lattice_allocations(r, g.degree(u));
  auto allocs_v = lattice_allocations(r, g.degree(v));
  double bu = g.budget(u) / r, bv = g.budget(v) / r;
  double cur_u = node_utility(g, s, u), cur_v = node_utility(g, s, v);

  std::optional<DeviationWitness> best;
  Profile scratch = s;
  for (const auto& au : allocs_u) {
    for (size_t i = 0; i < au.size(); ++i) scratch.row(u)[i] = au[i] * bu;
    for (const auto& av : allocs_v) {
      for (size_t i = 0; i < av.size(); ++i) scratch.row(v)[i] = av[i] * bv;
      double gu = node_utility(g, scratch, u) - cur_u;
      double gv = node_utility(g, scratch, v) - cur_v;
      if (gu > tol && gv > tol) {
        double mg = std::min(gu, gv);
        if (!best || mg > best->min_gain()) {
          std::map<int, std::map<int, double>> moves{{u, current_allocation(g, scratch, u)},
                                                     {v, current_allocation(g, scratch, v)}};
          best = replay_witness(g, s, moves, tol);
        }
      }
    }
    scratch.row(v) = s.row(v);
  }
  return best;
}

}  // namespace

VerifyReport verify_nash(const Game& g, const Profile& s, const VerifyOptions& opts) {
  s.check_feasible(g, opts.tol);
  VerifyReport rep;
  std::optional<DeviationWitness> best;
  bool all_exact = true;
  for (int v = 0; v < g.node_count(); ++v) {
    BestResponse br = best_response(g, s, v, opts.tol, opts.grid);
    if (!br.exact) all_exact = false;
    double gain = br.value - node_utility(g, s, v);
    if (gain > opts.tol) {
      std::map<int, std::map<int, double>> moves{{v, br.allocation}};
      keep_better(best, replay_witness(g, s, moves, opts.tol));
    }
  }
  rep.method = all_exact ? VerifyMethod::ExactClass : VerifyMethod::Grid;
  if (!all_exact) rep.resolution = opts.grid;
  if (best) {
    rep.verdict = Verdict::UnilateralDeviation;
    rep.witness = best;
  } else {
    rep.verdict = all_exact ? Verdict::Stable : Verdict::StableAtResolution;
  }
  return rep;
}

VerifyReport verify_pairwise(const Game& g, const Profile& s, const VerifyOptions& opts) {
  VerifyReport nash = verify_nash(g, s, opts);
  if (nash.verdict == Verdict::UnilateralDeviation) return nash;

  VerifyReport rep;
  rep.method = nash.method;
  rep.resolution = nash.resolution;
  bool grid_used = nash.method == VerifyMethod::Grid;
  bool scan_used = false;
  const bool all_sum = g.all_weighted_sum();
  const bool all_max = g.all_max_effort();
  std::optional<DeviationWitness> best;

  for (int e = 0; e < g.edge_count(); ++e) {
    const RewardSpec& r = g.reward(e);
    if (all_sum) {
      keep_better(best, weighted_sum_edge_deviation(g, s, e, opts.tol));
    } else if (all_max) {
      // Bilateral deviations reduce to unilateral ones; the Nash verdict is final.
      continue;
    } else if (r.in_class_c()) {
      keep_better(best, vertex_pair_deviation(g, s, e, opts.tol));
    } else if (r.kind() == RewardSpec::Kind::MinEffort) {
      bool exact_ok = true;
      auto cand = min_effort_scan_deviation(g, s, e, opts.tol, &exact_ok);
      if (exact_ok) {
        scan_used = true;
        keep_better(best, cand);
      } else {
        int used = 0;
        keep_better(best, grid_pair_deviation(g, s, e, opts.tol, opts.grid, &used));
        grid_used = true;
        rep.resolution = rep.resolution == 0 ? used : std::min(rep.resolution, used);
      }
    } else {
      int used = 0;
      keep_better(best, grid_pair_deviation(g, s, e, opts.tol, opts.grid, &used));
      grid_used = true;
      rep.resolution = rep.resolution == 0 ? used : std::min(rep.resolution, used);
    }
  }

  rep.method = grid_used ? VerifyMethod::Grid
                         : (scan_used ? VerifyMethod::ParametricScan : VerifyMethod::ExactClass);
  if (best) {
    rep.verdict = Verdict::BilateralDeviation;
    rep.witness = best;
  } else {
    rep.verdict = grid_used ? Verdict::StableAtResolution : Verdict::Stable;
  }
  return rep;
}

double approximation_factor(const Game& g, const Profile& s, const VerifyOptions& opts) {
  s.check_feasible(g, opts.tol);
  double factor = 1.0;
  // Unilateral: the best response maximizes the ratio (same denominator).
  for (int v = 0; v < g.node_count(); ++v) {
    double pre = node_utility(g, s, v);
    BestResponse br = best_response(g, s, v, opts.tol, opts.grid);
    if (br.value > pre + opts.tol) {
      if (pre <= opts.tol) return kInf;
      factor = std::max(factor, br.value / pre);
    }
  }
  // Bilateral: deviations count at the worse of the two ratios.
  for (int e = 0; e < g.edge_count(); ++e) {
    int u = g.edge(e).u, v = g.edge(e).v;
    double pre_u = node_utility(g, s, u), pre_v = node_utility(g, s, v);
    auto ratio_of = [&](const DeviationWitness& w) {
      double ru = (pre_u <= opts.tol) ? kInf : 1.0 + w.gains.at(u) / pre_u;
      double rv = (pre_v <= opts.tol) ? kInf : 1.0 + w.gains.at(v) / pre_v;
      return std::min(ru, rv);
    };
    if (g.reward(e).in_class_c() || g.all_weighted_sum()) {
      for (int a : g.incident(u)) {
        for (int b : g.incident(v)) {
          std::map<int, std::map<int, double>> moves{
              {u, full_allocation(g, u, a, g.budget(u))},
              {v, full_allocation(g, v, b, g.budget(v))}};
          if (auto w = replay_witness(g, s, moves, opts.tol)) factor = std::max(factor, ratio_of(*w));
        }
      }
    }
    if (g.all_weighted_sum())
      if (auto w = weighted_sum_edge_deviation(g, s, e, opts.tol))
        factor = std::max(factor, ratio_of(*w));
    if (g.reward(e).kind() == RewardSpec::Kind::MinEffort) {
      bool exact_ok = true;
      if (auto w = min_effort_scan_deviation(g, s, e, opts.tol, &exact_ok))
        factor = std::max(factor, ratio_of(*w));
    }
    int used = 0;
    if (auto w = grid_pair_deviation(g, s, e, opts.tol, std::min(opts.grid, 8), &used))
      factor = std::max(factor, ratio_of(*w));
    if (!std::isfinite(factor)) return kInf;
  }
  return factor;
}

std::vector<Tightness> classify_tightness(const Game& g, const Profile& s, double tol) {
  std::vector<Tightness> out(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [xu, xv] = edge_state(g, s, e);
    auto extreme = [&](double x, double b) { return x <= tol || x >= b - tol; };
    bool tu = extreme(xu, g.budget(g.edge(e).u));
    bool tv = extreme(xv, g.budget(g.edge(e).v));
    out[e] = tu && tv ? Tightness::Tight : (tu || tv ? Tightness::HalfSlack : Tightness::Slack);
  }
  return out;
}

Profile eliminate_slack(const Game& g, const Profile& s, const VerifyOptions& opts) {
  for (int e = 0; e < g.edge_count(); ++e) {
    const RewardSpec& r = g.reward(e);
    if (!r.in_class_c() || !r.nonneg_mixed_partial())
      throw UnsupportedClassError(
          "eliminate_slack requires class-C rewards with nonnegative mixed partials");
  }
  VerifyReport check = verify_pairwise(g, s, opts);
  if (!check.stable())
    throw InfeasibleError("eliminate_slack requires a pairwise-stable profile");

  Profile cur = s;
  double scale = 1.0;
  for (int e = 0; e < g.edge_count(); ++e) scale = std::max(scale, edge_reward(g, cur, e));
  double tol_w = opts.tol * scale * 16;

  // A move is accepted only if it provably rides an indifference direction:
  // both touched edge rewards stay constant.
  auto try_move = [&](int mover, int e) -> bool {
    double have = cur.effort(g, mover, e);
    double room = g.budget(mover) - have;
    if (room <= opts.tol) return false;
    double before_e = edge_reward(g, cur, e);
    double free = cur.free_budget(g, mover);
    if (free > opts.tol) {
      double delta = std::min(free, room);
      Profile next = cur;
      next.set_effort(g, mover, e, have + delta);
      if (std::fabs(edge_reward(g, next, e) - before_e) <= tol_w) {
        cur = next;
        return true;
      }
      return false;
    }
    for (int e2 : g.incident(mover)) {
      if (e2 == e) continue;
      double avail = cur.effort(g, mover, e2);
      if (avail <= opts.tol) continue;
      double delta = std::min(avail, room);
      for (int halving = 0; halving < 24 && delta > opts.tol; ++halving, delta /= 2) {
        Profile next = cur;
        next.set_effort(g, mover, e, have + delta);
        next.set_effort(g, mover, e2, avail - delta);
        if (std::fabs(edge_reward(g, next, e) - before_e) <= tol_w &&
            std::fabs(edge_reward(g, next, e2) - edge_reward(g, cur, e2)) <= tol_w) {
          cur = next;
          return true;
        }
      }
    }
    return false;
  };

  int guard = 8 * (g.node_count() + g.edge_count() + 2) * (g.edge_count() + 2);
  while (guard-- > 0) {
    int slack_edge = -1;
    auto labels = classify_tightness(g, cur, opts.tol);
    for (int e = 0; e < g.edge_count(); ++e)
      if (labels[e] == Tightness::Slack) {
        slack_edge = e;
        break;
      }
    if (slack_edge < 0) return cur;
    int u = g.edge(slack_edge).u, v = g.edge(slack_edge).v;
    if (!try_move(u, slack_edge) && !try_move(v, slack_edge))
      throw InternalError("eliminate_slack cannot make progress on edge " +
                          g.edge(slack_edge).name);
  }
  throw InternalError("eliminate_slack failed to reduce slack within its round budget");
}

nlohmann::json verify_report_to_json(const Game& g, const VerifyReport& r) {
  nlohmann::json j;
  j["verdict"] = verdict_name(r.verdict);
  j["method"] = method_name(r.method);
  if (r.resolution > 0) j["resolution"] = r.resolution;
  if (r.witness) {
    nlohmann::json w;
    nlohmann::json nodes = nlohmann::json::array();
    for (int v : r.witness->nodes) nodes.push_back(g.node(v).name);
    w["nodes"] = nodes;
    nlohmann::json moves = nlohmann::json::object();
    for (const auto& [v, alloc] : r.witness->moves) {
      nlohmann::json a = nlohmann::json::object();
      for (const auto& [e, x] : alloc)
        if (x != 0.0) a[g.edge(e).name] = x;
      moves[g.node(v).name] = a;
    }
    w["strategies"] = moves;
    nlohmann::json gains = nlohmann::json::object();
    for (const auto& [v, gain] : r.witness->gains) gains[g.node(v).name] = gain;
    w["gains"] = gains;
    j["witness"] = w;
  }
  return j;
}

}  // namespace contrib
