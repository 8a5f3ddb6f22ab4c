#include "contrib/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "contrib/allocation.hpp"
#include "contrib/json_io.hpp"
#include "contrib/oracle.hpp"
#include "contrib/rng.hpp"

namespace contrib {

namespace {

// Vertex best response with a preferred edge on ties (the shared edge attracts
// effort in the virtual-response phase).
std::map<int, double> vertex_br_prefer(const Game& g, const Profile& s, int v, int prefer,
                                       double tol, double* value) {
  std::map<int, double> zero;
  for (int e : g.incident(v)) zero[e] = 0.0;
  std::vector<int> order;
  if (prefer >= 0) order.push_back(prefer);
  for (int e : g.incident(v))
    if (e != prefer) order.push_back(e);
  double best_val = utility_with_allocation(g, s, v, zero);
  std::map<int, double> best = zero;
  if (g.budget(v) > 0) {
    for (int e : order) {
      auto alloc = zero;
      alloc[e] = g.budget(v);
      double val = utility_with_allocation(g, s, v, alloc);
      if (val > best_val + tol) {
        best_val = val;
        best = alloc;
      }
    }
    // Preference on exact ties: if the preferred edge ties the winner, take it.
    if (prefer >= 0 && best[prefer] == 0.0) {
      auto alloc = zero;
      alloc[prefer] = g.budget(v);
      if (utility_with_allocation(g, s, v, alloc) >= best_val - tol) {
        best = alloc;
        best_val = utility_with_allocation(g, s, v, alloc);
      }
    }
  }
  *value = best_val;
  return best;
}

bool is_unilateral_br(const Game& g, const Profile& s, int v, double tol, int grid) {
  BestResponse br = best_response(g, s, v, tol, grid);
  return node_utility(g, s, v) >= br.value - tol;
}

std::optional<BilateralMove> finish_pair(const Game& g, const Profile& s, int u, int v,
                                         const std::map<int, double>& mu,
                                         const std::map<int, double>& mv, double tol, int grid,
                                         bool approximate) {
  Profile after = apply_allocation(g, s, u, mu);
  after = apply_allocation(g, after, v, mv);
  if (!after.feasible(g, tol)) return std::nullopt;
  double gu = node_utility(g, after, u) - node_utility(g, s, u);
  double gv = node_utility(g, after, v) - node_utility(g, s, v);
  if (!(gu > tol && gv > tol)) return std::nullopt;
  if (!is_unilateral_br(g, after, u, tol, grid) || !is_unilateral_br(g, after, v, tol, grid))
    return std::nullopt;
  BilateralMove m;
  m.move_u = mu;
  m.move_v = mv;
  m.gain_u = gu;
  m.gain_v = gv;
  m.approximate = approximate;
  return m;
}

// Three-form procedure for coordinate-convex games with f(x,0) = 0.
std::optional<BilateralMove> bilateral_c0(const Game& g, const Profile& s, int u, int v, int e,
                                          double tol, int grid) {
  Profile stripped = s;
  stripped.set_effort(g, u, e, 0.0);
  stripped.set_effort(g, v, e, 0.0);
  double val_u, val_v;
  auto virt_u = vertex_br_prefer(g, stripped, u, e, tol, &val_u);
  auto virt_v = vertex_br_prefer(g, stripped, v, e, tol, &val_v);

  auto full_u = virt_u, full_v = virt_v;
  for (auto& [k, x] : full_u) x = 0;
  for (auto& [k, x] : full_v) x = 0;
  full_u[e] = g.budget(u);
  full_v[e] = g.budget(v);

  // Mutual consistency of the virtual pair.
  Profile virt_state = apply_allocation(g, s, u, virt_u);
  virt_state = apply_allocation(g, virt_state, v, virt_v);
  bool mutual = is_unilateral_br(g, virt_state, u, tol, grid) &&
                is_unilateral_br(g, virt_state, v, tol, grid);
  if (!mutual) return finish_pair(g, s, u, v, full_u, full_v, tol, grid, false);

  // Virtual pair is mutual; take both-full instead when it dominates for both.
  Profile full_state = apply_allocation(g, s, u, full_u);
  full_state = apply_allocation(g, full_state, v, full_v);
  double fu = node_utility(g, full_state, u), fv = node_utility(g, full_state, v);
  double vu = node_utility(g, virt_state, u), vv = node_utility(g, virt_state, v);
  if (fu >= vu - tol && fv >= vv - tol)
    if (auto m = finish_pair(g, s, u, v, full_u, full_v, tol, grid, false)) return m;
  return finish_pair(g, s, u, v, virt_u, virt_v, tol, grid, false);
}

// Min-effort concave: fix the endpoint that wants the smaller joint level,
// then let the other re-optimize against it.
std::optional<BilateralMove> bilateral_min_concave(const Game& g, const Profile& s, int u, int v,
                                                   int e, double tol, int grid) {
  BestResponse bru = controlled_best_response(g, s, u, {v}, tol);
  BestResponse brv = controlled_best_response(g, s, v, {u}, tol);
  double tu = bru.allocation.at(e), tv = brv.allocation.at(e);
  int lower = tu <= tv ? u : v;
  const BestResponse& br_lower = tu <= tv ? bru : brv;
  int other = lower == u ? v : u;

  Profile fixed = apply_allocation(g, s, lower, br_lower.allocation);
  BestResponse br_other = best_response(g, fixed, other, tol, grid);
  const auto& mu = lower == u ? br_lower.allocation : br_other.allocation;
  const auto& mv = lower == u ? br_other.allocation : br_lower.allocation;
  return finish_pair(g, s, u, v, mu, mv, tol, grid, false);
}

// Min-effort with arbitrary scalar fns: scan joint targets on the shared edge,
// each side re-optimizing its remainder exactly; keep the best mutual pair.
std::optional<BilateralMove> bilateral_min_scan(const Game& g, const Profile& s, int u, int v,
                                                int e, double tol, int grid) {
  double t_max = std::min(g.budget(u), g.budget(v));
  if (t_max <= tol) return std::nullopt;
  std::vector<int> others_u, others_v;
  for (int ee : g.incident(u))
    if (ee != e) others_u.push_back(ee);
  for (int ee : g.incident(v))
    if (ee != e) others_v.push_back(ee);

  std::vector<double> ts{t_max};
  for (double bp : g.reward(e).scalar().breakpoints())
    if (bp > tol && bp <= t_max) ts.push_back(bp);
  // Kinks of the remainder value: where freeing budget stops being free.
  for (auto [node, others] : {std::pair(u, &others_u), std::pair(v, &others_v)}) {
    for (int ee : *others) {
      double o = s.effort(g, g.other_end(ee, node), ee);
      double t = g.budget(node) - o;
      if (t > tol && t <= t_max) ts.push_back(t);
    }
  }
  for (int i = 1; i < 16; ++i) ts.push_back(t_max * i / 16.0);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  double wu = node_utility(g, s, u), wv = node_utility(g, s, v);
  const ScalarFn& h = g.reward(e).scalar();
  struct Cand {
    double t, min_gain;
    bool exact;
  };
  std::vector<Cand> cands;
  for (double t : ts) {
    RestValue ru = best_partial_allocation(g, s, u, others_u, g.budget(u) - t, tol, grid);
    RestValue rv = best_partial_allocation(g, s, v, others_v, g.budget(v) - t, tol, grid);
    double gu = h(t) + ru.value - wu, gv = h(t) + rv.value - wv;
    if (gu > tol && gv > tol) cands.push_back({t, std::min(gu, gv), ru.exact && rv.exact});
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return a.min_gain > b.min_gain;
  });
  int tries = 0;
  for (const auto& c : cands) {
    if (++tries > 6) break;
    RestValue ru = best_partial_allocation(g, s, u, others_u, g.budget(u) - c.t, tol, grid);
    RestValue rv = best_partial_allocation(g, s, v, others_v, g.budget(v) - c.t, tol, grid);
    auto mu = ru.allocation;
    mu[e] = c.t;
    auto mv = rv.allocation;
    mv[e] = c.t;
    if (auto m = finish_pair(g, s, u, v, mu, mv, tol, grid, !c.exact)) return m;
  }
  return std::nullopt;
}

std::optional<BilateralMove> bilateral_grid(const Game& g, const Profile& s, int u, int v,
                                            double tol, int grid) {
  int r = std::max(2, grid);
  while (r > 2 && lattice_count(r, g.degree(u)) * lattice_count(r, g.degree(v)) > 100000.0) r /= 2;
  auto allocs_u = lattice_allocations(r, g.degree(u));
  auto allocs_v = lattice_allocations(r, g.degree(v));
  double bu = g.budget(u) / r, bv = g.budget(v) / r;
  double cur_u = node_utility(g, s, u), cur_v = node_utility(g, s, v);
  Profile scratch = s;
  double best_min_gain = tol;
  std::optional<std::pair<std::map<int, double>, std::map<int, double>>> best;
  const auto& inc_u = g.incident(u);
  const auto& inc_v = g.incident(v);
  for (const auto& au : allocs_u) {
    for (size_t i = 0; i < au.size(); ++i) scratch.row(u)[i] = au[i] * bu;
    for (const auto& av : allocs_v) {
      for (size_t i = 0; i < av.size(); ++i) scratch.row(v)[i] = av[i] * bv;
      double gu = node_utility(g, scratch, u) - cur_u;
      double gv = node_utility(g, scratch, v) - cur_v;
      double mg = std::min(gu, gv);
      if (mg > best_min_gain) {
        best_min_gain = mg;
        std::map<int, double> mu, mv;
        for (size_t i = 0; i < au.size(); ++i) mu[inc_u[i]] = au[i] * bu;
        for (size_t i = 0; i < av.size(); ++i) mv[inc_v[i]] = av[i] * bv;
        best = {mu, mv};
      }
    }
    scratch.row(v) = s.row(v);
  }
  if (!best) return std::nullopt;
  return finish_pair(g, s, u, v, best->first, best->second, tol, grid, true);
}

int shared_edge(const Game& g, int u, int v) {
  for (int e : g.incident(u))
    if (g.other_end(e, u) == v) return e;
  return -1;
}

}  // namespace

std::optional<BilateralMove> bilateral_best_response(const Game& g, const Profile& s, int u, int v,
                                                     double tol, int grid) {
  int e = shared_edge(g, u, v);
  if (e < 0) throw InfeasibleError("bilateral best response requires adjacent nodes");
  bool c0 = g.all_in_class_c0();
  if (c0) return bilateral_c0(g, s, u, v, e, tol, grid);
  if (g.all_min_effort()) {
    bool all_concave = true;
    for (int ee = 0; ee < g.edge_count(); ++ee)
      if (!g.reward(ee).scalar().concave()) all_concave = false;
    if (all_concave) return bilateral_min_concave(g, s, u, v, e, tol, grid);
    return bilateral_min_scan(g, s, u, v, e, tol, grid);
  }
  return bilateral_grid(g, s, u, v, tol, grid);
}

namespace {

struct Step {
  std::string unit, kind;
  std::vector<double> gains;
  bool moved = false;
};

class Runner {
 public:
  Runner(const Game& g, const Profile& start, uint64_t seed, DynamicsMode mode,
         const DynamicsOptions& opts)
      : g_(g), state_(start), rng_(seed), opts_(opts) {
    traj_.seed = seed;
    traj_.mode = mode;
    traj_.rng_algorithm = Rng::kAlgorithm;
    traj_.game_hash = g.hash();
  }

  Trajectory run() {
    state_.check_feasible(g_, opts_.tol);
    fingerprints_[state_.fingerprint()] = 0;
    if (opts_.record_profiles) traj_.profile_trace.push_back(state_);
    if (!any_move_exists()) return conclude_converged();

    int lull = 0;
    const int lull_limit = 2 * (g_.node_count() + g_.edge_count());
    for (int round = 1; round <= opts_.max_rounds; ++round) {
      Step step = traj_.mode == DynamicsMode::Random ? random_round() : concurrent_round();
      TrajectoryRound rec;
      rec.round = round;
      rec.unit = step.unit;
      rec.kind = step.kind;
      rec.gains = step.gains;
      rec.fingerprint = state_.fingerprint();
      traj_.rounds.push_back(rec);
      if (opts_.record_profiles) traj_.profile_trace.push_back(state_);
      if (step.moved) {
        last_move_round_ = round;
        lull = 0;
        auto [it, fresh] = fingerprints_.try_emplace(rec.fingerprint, round);
        if (!fresh) {
          traj_.verdict = TrajectoryVerdict::CycleDetected;
          traj_.final_round = round;
          traj_.cycle_first_visit = it->second;
          traj_.cycle_period = round - it->second;
          traj_.final_profile = state_;
          return traj_;
        }
      } else if (++lull >= lull_limit) {
        lull = 0;
        if (!any_move_exists()) return conclude_converged();
      }
    }
    traj_.verdict = TrajectoryVerdict::RoundBudgetExhausted;
    traj_.final_round = opts_.max_rounds;
    traj_.final_profile = state_;
    return traj_;
  }

 private:
  bool any_move_exists() {
    for (int v = 0; v < g_.node_count(); ++v) {
      BestResponse br = best_response(g_, state_, v, opts_.tol, opts_.grid);
      if (br.value > node_utility(g_, state_, v) + opts_.tol) return true;
    }
    for (int e = 0; e < g_.edge_count(); ++e)
      if (bilateral_best_response(g_, state_, g_.edge(e).u, g_.edge(e).v, opts_.tol, opts_.grid))
        return true;
    return false;
  }

  Trajectory conclude_converged() {
    traj_.final_round = std::max(last_move_round_, 0);
    traj_.final_report = verify_pairwise(g_, state_, {opts_.tol, opts_.grid});
    traj_.pairwise_verified = traj_.final_report.stable();
    traj_.verdict = traj_.pairwise_verified ? TrajectoryVerdict::Converged
                                            : TrajectoryVerdict::StalledUnstable;
    traj_.final_profile = state_;
    return traj_;
  }

  bool apply_unilateral(int v, Step* step) {
    BestResponse br = best_response(g_, state_, v, opts_.tol, opts_.grid);
    double cur = node_utility(g_, state_, v);
    if (br.value <= cur + opts_.tol) return false;
    double phi_before = potential(g_, state_);
    state_ = apply_allocation(g_, state_, v, br.allocation);
    double gain = node_utility(g_, state_, v) - cur;
    double phi_gain = potential(g_, state_) - phi_before;
    if (std::fabs(phi_gain - gain) > 1e-6 * (1 + std::fabs(gain)))
      throw InternalError("unilateral move broke the exact-potential identity");
    step->gains.push_back(gain);
    return true;
  }

  Step random_round() {
    Step step;
    int n = g_.node_count(), m = g_.edge_count();
    uint64_t pick = rng_.below(static_cast<uint64_t>(n + m));
    if (pick < static_cast<uint64_t>(n)) {
      int v = static_cast<int>(pick);
      step.unit = "node:" + g_.node(v).name;
      step.moved = apply_unilateral(v, &step);
      step.kind = step.moved ? "unilateral-BR" : "none";
    } else {
      int e = static_cast<int>(pick - n);
      int u = g_.edge(e).u, v = g_.edge(e).v;
      step.unit = "pair:" + g_.node(u).name + "," + g_.node(v).name;
      auto bm = bilateral_best_response(g_, state_, u, v, opts_.tol, opts_.grid);
      if (bm) {
        state_ = apply_allocation(g_, state_, u, bm->move_u);
        state_ = apply_allocation(g_, state_, v, bm->move_v);
        step.gains = {bm->gain_u, bm->gain_v};
        step.moved = true;
      }
      step.kind = step.moved ? "bilateral-BR" : "none";
    }
    return step;
  }

  Step concurrent_round() {
    Step step;
    int n = g_.node_count();
    std::vector<int> choice(n);  // 0 = unilateral, else 1 + neighbor slot
    for (int v = 0; v < n; ++v)
      choice[v] = static_cast<int>(rng_.below(static_cast<uint64_t>(g_.degree(v) + 1)));

    auto partner = [&](int v) -> int {
      if (choice[v] == 0) return -1;
      int e = g_.incident(v)[choice[v] - 1];
      return g_.other_end(e, v);
    };

    const Profile start = state_;
    std::vector<std::string> units;
    for (int v = 0; v < n; ++v) {
      int w = partner(v);
      if (w == -1) {
        BestResponse br = best_response(g_, start, v, opts_.tol, opts_.grid);
        double cur = node_utility(g_, start, v);
        if (br.value > cur + opts_.tol) {
          state_ = apply_allocation(g_, state_, v, br.allocation);
          step.gains.push_back(br.value - cur);
          step.moved = true;
          units.push_back("node:" + g_.node(v).name);
        }
      } else if (v < w && partner(w) == v) {
        auto bm = bilateral_best_response(g_, start, v, w, opts_.tol, opts_.grid);
        if (bm) {
          state_ = apply_allocation(g_, state_, v, bm->move_u);
          state_ = apply_allocation(g_, state_, w, bm->move_v);
          step.gains.push_back(bm->gain_u);
          step.gains.push_back(bm->gain_v);
          step.moved = true;
          units.push_back("pair:" + g_.node(v).name + "," + g_.node(w).name);
        }
      }
    }
    step.unit = units.empty() ? "none" : units[0];
    for (size_t i = 1; i < units.size(); ++i) step.unit += ";" + units[i];
    step.kind = step.moved ? "concurrent" : "none";
    return step;
  }

  const Game& g_;
  Profile state_;
  Rng rng_;
  DynamicsOptions opts_;
  Trajectory traj_;
  std::unordered_map<uint64_t, int> fingerprints_;
  int last_move_round_ = 0;
};

}  // namespace

Trajectory run_random(const Game& g, const Profile& start, uint64_t seed,
                      const DynamicsOptions& opts) {
  return Runner(g, start, seed, DynamicsMode::Random, opts).run();
}

Trajectory run_concurrent(const Game& g, const Profile& start, uint64_t seed,
                          const DynamicsOptions& opts) {
  return Runner(g, start, seed, DynamicsMode::Concurrent, opts).run();
}

std::string trajectory_verdict_name(TrajectoryVerdict v) {
  switch (v) {
    case TrajectoryVerdict::Converged: return "converged";
    case TrajectoryVerdict::CycleDetected: return "cycle_detected";
    case TrajectoryVerdict::RoundBudgetExhausted: return "round_budget_exhausted";
    case TrajectoryVerdict::StalledUnstable: return "stalled_unstable";
  }
  return "?";
}

std::string trajectory_to_jsonl(const Game& g, const Trajectory& t) {
  std::string out;
  nlohmann::json header{{"type", "header"},
                        {"seed", t.seed},
                        {"mode", t.mode == DynamicsMode::Random ? "random" : "concurrent"},
                        {"rng", t.rng_algorithm},
                        {"game_hash", t.game_hash}};
  out += header.dump() + "\n";
  for (const auto& r : t.rounds) {
    nlohmann::json j{{"type", "round"},
                     {"round", r.round},
                     {"unit", r.unit},
                     {"kind", r.kind},
                     {"fingerprint", r.fingerprint}};
    nlohmann::json gains = nlohmann::json::array();
    for (double x : r.gains) gains.push_back(round_sig(x));
    j["gains"] = gains;
    out += j.dump() + "\n";
  }
  out += trajectory_summary_json(g, t).dump() + "\n";
  return out;
}

nlohmann::json trajectory_summary_json(const Game& g, const Trajectory& t) {
  nlohmann::json j{{"type", "verdict"},
                   {"verdict", trajectory_verdict_name(t.verdict)},
                   {"round", t.final_round},
                   {"rounds_recorded", t.rounds.size()}};
  if (t.verdict == TrajectoryVerdict::CycleDetected) {
    j["period"] = t.cycle_period;
    j["first_visit"] = t.cycle_first_visit;
  }
  if (t.verdict == TrajectoryVerdict::Converged ||
      t.verdict == TrajectoryVerdict::StalledUnstable) {
    j["pairwise_verified"] = t.pairwise_verified;
    if (!t.pairwise_verified) j["discrepancy"] = verify_report_to_json(g, t.final_report);
    j["final_profile"] = profile_to_json(g, t.final_profile);
    j["welfare"] = round_sig(social_welfare(g, t.final_profile));
  }
  return j;
}

}  // namespace contrib
