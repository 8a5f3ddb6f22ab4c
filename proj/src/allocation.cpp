#include "contrib/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <tuple>

namespace contrib {
namespace {

// One coordinate of a separable allocation objective: net gain g(x) with
// g(0) = 0, nonnegative non-increasing-to-zero marginal beyond `cap`.
struct Fill1D {
  int key = 0;
  int priority = 0;
  double cap = 0;
  // Piecewise-constant marginal (slope, length), slopes non-increasing,
  // lengths summing to cap. Empty means "smooth": use marg().
  std::vector<std::pair<double, double>> segments;
  std::function<double(double)> value;
  std::function<double(double)> marg;  // right marginal, non-increasing
};

enum class OwnShape { Both, Concave, Convex, ConvexCapped, Neither };

// Shape of the edge reward as a function of v's own effort, other side fixed.
OwnShape own_shape(const RewardSpec& r) {
  switch (r.kind()) {
    case RewardSpec::Kind::WeightedSum:
    case RewardSpec::Kind::WeightedProduct:
      return OwnShape::Both;
    case RewardSpec::Kind::PolyCompose:
      if (r.scalar().is_linear() && r.poly().multilinear()) return OwnShape::Both;
      if (r.in_class_c()) return OwnShape::Convex;
      if (r.coordinate_concave()) return OwnShape::Concave;
      return OwnShape::Neither;
    case RewardSpec::Kind::MinEffort:
      if (r.scalar().is_linear() || r.scalar().concave()) return OwnShape::Concave;
      if (r.scalar().convex()) return OwnShape::ConvexCapped;
      return OwnShape::Neither;
    case RewardSpec::Kind::MaxEffort:
      return r.scalar().convex() ? OwnShape::Convex : OwnShape::Neither;
  }
  return OwnShape::Neither;
}

std::vector<std::pair<double, double>> scalar_segments(const ScalarFn& h, double cap) {
  std::vector<std::pair<double, double>> segs;
  if (cap <= 0) return segs;
  if (h.kind() == ScalarFn::Kind::Linear) {
    segs.emplace_back(h.coef_a(), cap);
    return segs;
  }
  const auto& pts = h.points();
  double covered = 0;
  for (size_t i = 1; i < pts.size() && covered < cap; ++i) {
    double slope = (pts[i].second - pts[i - 1].second) / (pts[i].first - pts[i - 1].first);
    double len = std::min(pts[i].first, cap) - covered;
    if (len > 0) segs.emplace_back(slope, len);
    covered = std::min(pts[i].first, cap);
  }
  if (covered < cap) {  // final slope extends to the right
    const auto& a = pts[pts.size() - 2];
    const auto& b = pts.back();
    segs.emplace_back((b.second - a.second) / (b.first - a.first), cap - covered);
  }
  return segs;
}

Fill1D fill_from_scalar(const ScalarFn& h, double cap, int key, int priority) {
  Fill1D f;
  f.key = key;
  f.priority = priority;
  double eff_cap = std::min(cap, h.cap());
  f.cap = std::max(0.0, eff_cap);
  f.value = [h, eff_cap](double x) { return h(std::min(x, eff_cap)); };
  f.marg = [h, eff_cap](double x) { return x >= eff_cap ? 0.0 : h.right_deriv(x); };
  if (h.kind() != ScalarFn::Kind::Power) f.segments = scalar_segments(h, f.cap);
  return f;
}

// v's one-dimensional problem on edge e with everyone else fixed as in s.
// The value function is the net gain over x = 0.
Fill1D fill_for_edge(const Game& g, const Profile& s, int v, int e, double budget) {
  const RewardSpec& r = g.reward(e);
  int w = g.other_end(e, v);
  double o = s.effort(g, w, e);
  switch (r.kind()) {
    case RewardSpec::Kind::WeightedSum:
      return fill_from_scalar(ScalarFn::linear(r.coef()), budget, e, 0);
    case RewardSpec::Kind::WeightedProduct: {
      if (r.coef() * o <= 0) {
        Fill1D f;
        f.key = e;
        f.cap = 0;
        f.value = [](double) { return 0.0; };
        f.marg = [](double) { return 0.0; };
        return f;
      }
      return fill_from_scalar(ScalarFn::linear(r.coef() * o), budget, e, 0);
    }
    case RewardSpec::Kind::MinEffort:
      return fill_from_scalar(r.scalar(), o, e, 0);
    case RewardSpec::Kind::MaxEffort: {
      Fill1D f;
      f.key = e;
      f.cap = budget;
      ScalarFn h = r.scalar();
      f.value = [h, o](double x) { return h(std::max(x, o)) - h(o); };
      f.marg = [h, o](double x) { return x < o ? 0.0 : h.right_deriv(x); };
      return f;
    }
    case RewardSpec::Kind::PolyCompose: {
      Fill1D f;
      f.key = e;
      f.cap = budget;
      RewardSpec rr = r;
      f.value = [rr, o](double x) { return rr(x, o) - rr(0, o); };
      f.marg = [rr, o](double x) { return rr.dx_right(x, o); };
      return f;
    }
  }
  throw InternalError("unreachable reward kind");
}

double seg_x_at_level(const Fill1D& f, double lambda, bool inclusive) {
  double x = 0;
  for (const auto& [slope, len] : f.segments) {
    if (slope > lambda || (inclusive && slope >= lambda)) x += len;
  }
  return std::min(x, f.cap);
}

double smooth_x_at_level(const Fill1D& f, double lambda, bool inclusive) {
  double lam = inclusive ? lambda * (1 - 1e-12) : lambda;
  if (f.cap <= 0) return 0;
  if (f.marg(f.cap * (1 - 1e-15)) > lam) return f.cap;
  if (!(f.marg(0) > lam) && !(f.marg(1e-300) > lam)) return 0;
  double lo = 0, hi = f.cap;  // marg(lo) > lam >= marg(hi)
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    (f.marg(mid) > lam ? lo : hi) = mid;
  }
  return lo;
}

double x_at_level(const Fill1D& f, double lambda, bool inclusive) {
  return f.segments.empty() ? smooth_x_at_level(f, lambda, inclusive)
                            : seg_x_at_level(f, lambda, inclusive);
}

FillResult fill_concave(const std::vector<Fill1D>& edges, double budget, double tol) {
  FillResult res;
  res.x.assign(edges.size(), 0.0);
  if (budget <= tol || edges.empty()) return res;

  bool all_segments = std::all_of(edges.begin(), edges.end(),
                                  [](const Fill1D& f) { return !f.segments.empty() || f.cap <= 0; });
  if (all_segments) {
    struct Piece {
      double slope, len;
      size_t idx;
      int priority, key, ord;
    };
    std::vector<Piece> pieces;
    for (size_t i = 0; i < edges.size(); ++i) {
      int ord = 0;
      for (const auto& [slope, len] : edges[i].segments) {
        if (slope > 0 && len > 0) pieces.push_back({slope, len, i, edges[i].priority, edges[i].key, ord});
        ++ord;
      }
    }
    std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
      if (a.slope != b.slope) return a.slope > b.slope;
      return std::tie(a.priority, a.key, a.ord) < std::tie(b.priority, b.key, b.ord);
    });
    double remaining = budget;
    for (const auto& p : pieces) {
      if (remaining <= 0) break;
      double take = std::min(p.len, remaining);
      res.x[p.idx] += take;
      remaining -= take;
    }
  } else {
    auto total_at = [&](double lam, bool inclusive) {
      double t = 0;
      for (const auto& f : edges) t += x_at_level(f, lam, inclusive);
      return t;
    };
    double lambda = 0;
    if (total_at(0, false) > budget) {
      double hi = 1;
      int guard = 0;
      while (total_at(hi, false) > budget && guard++ < 200) hi *= 2;
      double lo = 0;
      for (int it = 0; it < 120; ++it) {
        double mid = 0.5 * (lo + hi);
        (total_at(mid, false) > budget ? lo : hi) = mid;
      }
      lambda = hi;
    }
    for (size_t i = 0; i < edges.size(); ++i) res.x[i] = x_at_level(edges[i], lambda, false);
    double leftover = budget;
    for (double x : res.x) leftover -= x;
    if (leftover > 0 && lambda > 0) {
      std::vector<size_t> order(edges.size());
      for (size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return std::tie(edges[a].priority, edges[a].key) < std::tie(edges[b].priority, edges[b].key);
      });
      for (size_t i : order) {
        if (leftover <= 0) break;
        double room = x_at_level(edges[i], lambda, true) - res.x[i];
        double take = std::min(room, leftover);
        if (take > 0) {
          res.x[i] += take;
          leftover -= take;
        }
      }
    }
  }
  for (size_t i = 0; i < edges.size(); ++i) res.value += edges[i].value(res.x[i]);
  return res;
}

FillResult fill_convex(const std::vector<Fill1D>& edges, double budget, double tol) {
  size_t d = edges.size();
  if (d > 20) throw InternalError("convex fill limited to 20 edges");
  FillResult best;
  best.x.assign(d, 0.0);
  best.value = 0;
  for (uint64_t mask = 0; mask < (1ull << d); ++mask) {
    double used = 0, base = 0;
    bool ok = true;
    for (size_t i = 0; i < d && ok; ++i) {
      if (mask >> i & 1) {
        double fill = std::min(edges[i].cap, budget);
        used += fill;
        base += edges[i].value(fill);
        if (used > budget + tol) ok = false;
      }
    }
    if (!ok) continue;
    double rem = std::max(0.0, budget - used);
    auto consider = [&](int partial) {
      double val = base;
      if (partial >= 0) val += edges[partial].value(std::min(edges[partial].cap, rem));
      if (val > best.value + tol) {
        best.value = val;
        best.x.assign(d, 0.0);
        for (size_t i = 0; i < d; ++i)
          if (mask >> i & 1) best.x[i] = std::min(edges[i].cap, budget);
        if (partial >= 0) best.x[partial] = std::min(edges[partial].cap, rem);
      }
    };
    consider(-1);
    if (rem > tol)
      for (size_t p = 0; p < d; ++p)
        if (!(mask >> p & 1) && edges[p].cap > 0) consider(static_cast<int>(p));
  }
  return best;
}

std::vector<Fill1D> public_to_fill(const std::vector<FillEdge>& edges) {
  std::vector<Fill1D> out;
  out.reserve(edges.size());
  for (const auto& e : edges) out.push_back(fill_from_scalar(e.h, e.cap, e.key, e.priority));
  return out;
}

}  // namespace

FillResult water_fill(const std::vector<FillEdge>& edges, double budget, double tol) {
  for (const auto& e : edges)
    if (!e.h.concave()) throw UnsupportedClassError("water_fill requires concave scalar fns");
  return fill_concave(public_to_fill(edges), budget, tol);
}

FillResult convex_cap_fill(const std::vector<FillEdge>& edges, double budget, double tol) {
  for (const auto& e : edges)
    if (!e.h.convex()) throw UnsupportedClassError("convex_cap_fill requires convex scalar fns");
  return fill_convex(public_to_fill(edges), budget, tol);
}

Profile apply_allocation(const Game& g, const Profile& s, int v,
                         const std::map<int, double>& allocation) {
  Profile out = s;
  const auto& inc = g.incident(v);
  for (size_t i = 0; i < inc.size(); ++i) {
    auto it = allocation.find(inc[i]);
    out.row(v)[i] = it == allocation.end() ? 0.0 : it->second;
  }
  return out;
}

double utility_with_allocation(const Game& g, const Profile& s, int v,
                               const std::map<int, double>& allocation) {
  Profile patched = apply_allocation(g, s, v, allocation);
  return node_utility(g, patched, v);
}

std::vector<std::vector<int>> lattice_allocations(int units, int d) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d, 0);
  std::function<void(int, int)> rec = [&](int slot, int left) {
    if (slot == d) {
      out.push_back(cur);
      return;
    }
    for (int a = 0; a <= left; ++a) {
      cur[slot] = a;
      rec(slot + 1, left - a);
    }
    cur[slot] = 0;
  };
  rec(0, units);
  return out;
}

RestValue best_partial_allocation(const Game& g, const Profile& s, int v,
                                  const std::vector<int>& edges, double budget, double tol,
                                  int grid) {
  RestValue out;
  double base = 0;  // reward collected even at zero own effort
  for (int e : edges) {
    int w = g.other_end(e, v);
    base += g.reward(e)(0.0, s.effort(g, w, e));
    out.allocation[e] = 0.0;
  }
  out.value = base;
  if (budget <= tol || edges.empty()) return out;

  bool concave_ok = true, convex_ok = true;
  for (int e : edges) {
    OwnShape sh = own_shape(g.reward(e));
    if (sh != OwnShape::Concave && sh != OwnShape::Both) concave_ok = false;
    if (sh != OwnShape::Convex && sh != OwnShape::ConvexCapped && sh != OwnShape::Both)
      convex_ok = false;
  }

  std::vector<Fill1D> fills;
  fills.reserve(edges.size());
  for (int e : edges) fills.push_back(fill_for_edge(g, s, v, e, budget));

  if (concave_ok) {
    FillResult r = fill_concave(fills, budget, tol);
    for (size_t i = 0; i < edges.size(); ++i) out.allocation[edges[i]] = r.x[i];
    out.value = base + r.value;
    return out;
  }
  if (convex_ok && edges.size() <= 16) {
    FillResult r = fill_convex(fills, budget, tol);
    for (size_t i = 0; i < edges.size(); ++i) out.allocation[edges[i]] = r.x[i];
    out.value = base + r.value;
    return out;
  }

  // Mixed shapes: lattice search.
  out.exact = false;
  auto allocs = lattice_allocations(grid, static_cast<int>(edges.size()));
  double unit = budget / grid;
  for (const auto& a : allocs) {
    double val = base;
    for (size_t i = 0; i < edges.size(); ++i) val += fills[i].value(a[i] * unit);
    if (val > out.value + tol) {
      out.value = val;
      for (size_t i = 0; i < edges.size(); ++i) out.allocation[edges[i]] = a[i] * unit;
    }
  }
  return out;
}

BestResponse best_response(const Game& g, const Profile& s, int v, double tol, int grid) {
  BestResponse br;
  const auto& inc = g.incident(v);
  double budget = g.budget(v);
  if (inc.empty() || budget <= 0) {
    for (int e : inc) br.allocation[e] = 0.0;
    br.value = utility_with_allocation(g, s, v, br.allocation);
    return br;
  }

  bool vertex_ok = true, concave_ok = true, convex_ok = true;
  for (int e : inc) {
    OwnShape sh = own_shape(g.reward(e));
    if (sh != OwnShape::Convex && sh != OwnShape::Both) vertex_ok = false;
    if (sh != OwnShape::Concave && sh != OwnShape::Both) concave_ok = false;
    if (sh != OwnShape::Convex && sh != OwnShape::ConvexCapped && sh != OwnShape::Both)
      convex_ok = false;
  }

  if (vertex_ok) {
    // Separable convex objective over the budget simplex peaks at a vertex.
    br.kind = BrKind::SingleEdgeVertex;
    std::map<int, double> zero;
    for (int e : inc) zero[e] = 0.0;
    double best_val = utility_with_allocation(g, s, v, zero);
    int best_edge = -1;
    std::vector<std::pair<int, double>> vals;
    for (int e : inc) {
      std::map<int, double> alloc = zero;
      alloc[e] = budget;
      double val = utility_with_allocation(g, s, v, alloc);
      vals.emplace_back(e, val);
      if (val > best_val + tol) {
        best_val = val;
        best_edge = e;
      }
    }
    br.allocation = zero;
    if (best_edge >= 0) br.allocation[best_edge] = budget;
    for (auto& [e, val] : vals)
      if (e != best_edge && std::fabs(val - best_val) <= tol) br.tied_edges.push_back(e);
    br.value = utility_with_allocation(g, s, v, br.allocation);
    return br;
  }

  RestValue rest = best_partial_allocation(g, s, v, inc, budget, tol, grid);
  br.allocation = rest.allocation;
  br.kind = concave_ok ? BrKind::WaterFilling
                       : (convex_ok && inc.size() <= 16 ? BrKind::ArgmaxSpread
                                                        : BrKind::GridApproximate);
  br.exact = rest.exact;
  br.value = utility_with_allocation(g, s, v, br.allocation);
  return br;
}

BestResponse controlled_best_response(const Game& g, const Profile& s, int v,
                                      const std::set<int>& controlled, double tol) {
  for (int e = 0; e < g.edge_count(); ++e) {
    const RewardSpec& r = g.reward(e);
    if (r.kind() != RewardSpec::Kind::MinEffort || !r.scalar().concave())
      throw UnsupportedClassError("controlled_best_response requires a min-effort concave game");
  }
  BestResponse br;
  br.kind = BrKind::WaterFilling;
  const auto& inc = g.incident(v);
  std::vector<Fill1D> fills;
  for (int e : inc) {
    int w = g.other_end(e, v);
    double cap;
    int priority;
    if (controlled.count(w)) {
      cap = std::min(g.budget(v), g.budget(w));
      priority = 1;
    } else {
      // Fixed neighbor: cap at its current contribution; filling these first
      // at equal marginal realizes the exact-matching selection.
      cap = s.effort(g, w, e);
      priority = 0;
    }
    fills.push_back(fill_from_scalar(g.reward(e).scalar(), cap, e, priority));
  }
  FillResult r = fill_concave(fills, g.budget(v), tol);
  for (size_t i = 0; i < inc.size(); ++i) br.allocation[inc[i]] = r.x[i];
  br.value = r.value;  // reward if controlled nodes match, fixed nodes stay
  return br;
}

double removal_loss(const Game& g, const Profile& s, int v, double amount, int excluded_edge,
                    double tol) {
  if (amount <= 0) return 0.0;
  std::vector<int> edges;
  std::vector<double> current;
  double removable = 0;
  for (int e : g.incident(v)) {
    if (e == excluded_edge) continue;
    double x = s.effort(g, v, e);
    if (x > 0) {
      edges.push_back(e);
      current.push_back(x);
      removable += x;
    }
  }
  if (amount > removable + tol)
    throw InfeasibleError("removal amount exceeds effort placed on other edges");
  amount = std::min(amount, removable);

  bool concave_ok = true, convex_ok = true;
  for (int e : edges) {
    OwnShape sh = own_shape(g.reward(e));
    if (sh != OwnShape::Concave && sh != OwnShape::Both) concave_ok = false;
    if (sh != OwnShape::Convex && sh != OwnShape::ConvexCapped && sh != OwnShape::Both)
      convex_ok = false;
  }
  std::vector<Fill1D> fills;
  for (int e : edges) fills.push_back(fill_for_edge(g, s, v, e, g.budget(v)));

  if (concave_ok) {
    // Remove from the cheapest marginals first (reverse water-filling).
    bool all_segments = true;
    for (size_t i = 0; i < fills.size(); ++i)
      if (fills[i].segments.empty() && std::min(current[i], fills[i].cap) > 0) all_segments = false;
    if (all_segments) {
      struct Piece {
        double slope, len;
        size_t idx;
      };
      std::vector<Piece> pieces;
      for (size_t i = 0; i < fills.size(); ++i) {
        double level = std::min(current[i], fills[i].cap);
        if (current[i] > level)  // effort above the cap is free to remove
          pieces.push_back({0.0, current[i] - level, i});
        double covered = 0;
        for (const auto& [slope, len] : fills[i].segments) {
          double upper = std::min(covered + len, level);
          if (upper > covered) pieces.push_back({slope, upper - covered, i});
          covered += len;
          if (covered >= level) break;
        }
      }
      std::sort(pieces.begin(), pieces.end(),
                [](const Piece& a, const Piece& b) { return a.slope < b.slope; });
      double left = amount, loss = 0;
      for (const auto& p : pieces) {
        if (left <= 0) break;
        double take = std::min(p.len, left);
        loss += take * p.slope;
        left -= take;
      }
      return loss;
    }
    // Smooth marginals: find the removal level by bisection.
    auto removed_at = [&](double lam) {
      double t = 0;
      for (size_t i = 0; i < fills.size(); ++i) {
        double keep = std::min(x_at_level(fills[i], lam, false), current[i]);
        t += current[i] - keep;
      }
      return t;
    };
    double lo = 0, hi = 1;
    int guard = 0;
    while (removed_at(hi) < amount && guard++ < 200) hi *= 2;
    for (int it = 0; it < 120; ++it) {
      double mid = 0.5 * (lo + hi);
      (removed_at(mid) < amount ? lo : hi) = mid;
    }
    double loss = 0, removed = 0;
    std::vector<double> kept(fills.size());
    for (size_t i = 0; i < fills.size(); ++i) {
      kept[i] = std::min(x_at_level(fills[i], hi, false), current[i]);
      removed += current[i] - kept[i];
    }
    // Trim overshoot from the highest-marginal removal back.
    for (size_t i = 0; i < fills.size() && removed > amount + tol; ++i) {
      double give_back = std::min(removed - amount, current[i] - kept[i]);
      kept[i] += give_back;
      removed -= give_back;
    }
    for (size_t i = 0; i < fills.size(); ++i)
      loss += fills[i].value(std::min(current[i], fills[i].cap)) - fills[i].value(kept[i]);
    return std::max(0.0, loss);
  }
  if (convex_ok && edges.size() <= 16) {
    // Loss is concave in the removal vector; some minimizer drains a set of
    // edges fully plus at most one partially.
    double best = kInf;
    size_t d = edges.size();
    for (uint64_t mask = 0; mask < (1ull << d); ++mask) {
      double drained = 0, loss = 0;
      for (size_t i = 0; i < d; ++i)
        if (mask >> i & 1) {
          drained += current[i];
          loss += fills[i].value(std::min(current[i], fills[i].cap));
        }
      if (drained > amount + tol) continue;
      double rem = amount - drained;
      if (rem <= tol) {
        best = std::min(best, loss);
        continue;
      }
      for (size_t p = 0; p < d; ++p) {
        if (mask >> p & 1) continue;
        if (current[p] + tol < rem) continue;
        double cur_capped = std::min(current[p], fills[p].cap);
        double after = std::min(current[p] - rem, fills[p].cap);
        best = std::min(best, loss + fills[p].value(cur_capped) - fills[p].value(after));
      }
    }
    if (best == kInf) throw InternalError("no feasible removal found");
    return best;
  }
  throw UnsupportedClassError("removal_loss requires a concave or convex edge bundle");
}

}  // namespace contrib
