#pragma once

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "contrib/game.hpp"

namespace contrib {

enum class BrKind { SingleEdgeVertex, WaterFilling, ArgmaxSpread, GridApproximate };

struct BestResponse {
  std::map<int, double> allocation;  // edge id -> effort
  double value = 0;                  // node utility after applying the allocation
  BrKind kind = BrKind::SingleEdgeVertex;
  std::vector<int> tied_edges;       // vertex enumeration: edges tied with the winner
  bool exact = true;
};

// One summand of a separable allocation problem: reward(x) for effort x on an
// edge, useful only up to `cap` (beyond it the marginal is zero).
struct FillEdge {
  int key = 0;       // edge id; ascending key breaks ties
  int priority = 0;  // lower fills first at equal marginal
  ScalarFn h = ScalarFn::linear(1.0);
  double cap = 0;
};

struct FillResult {
  std::vector<double> x;  // aligned with input edges
  double value = 0;
};

// Maximize sum h_i(min(x_i, cap_i)) subject to sum x_i <= budget for concave
// (or linear) h_i. Breakpoint-exact for piecewise-linear, marginal-level
// bisection otherwise. Never allocates above cap.
FillResult water_fill(const std::vector<FillEdge>& edges, double budget, double tol = kDefaultTol);

// Same objective for convex (or linear) h_i: some optimum fills a set of edges
// to their caps plus at most one partial edge. Exact subset enumeration.
FillResult convex_cap_fill(const std::vector<FillEdge>& edges, double budget,
                           double tol = kDefaultTol);

// Maximum utility node v can get from the given incident edges with `budget`
// to spread, everyone else fixed as in `s`. Exact for all-concave/linear and
// all-convex/linear edge bundles; grid fallback otherwise (exact=false).
struct RestValue {
  double value = 0;
  std::map<int, double> allocation;
  bool exact = true;
};
RestValue best_partial_allocation(const Game& g, const Profile& s, int v,
                                  const std::vector<int>& edges, double budget,
                                  double tol = kDefaultTol, int grid = 16);

BestResponse best_response(const Game& g, const Profile& s, int v, double tol = kDefaultTol,
                           int grid = 16);

// Water-filling best response for min-effort concave games where v may control
// the strategies of nodes in `controlled` (their edges are uncapped up to
// min of the budgets); among optima prefers matching the fixed nodes exactly.
BestResponse controlled_best_response(const Game& g, const Profile& s, int v,
                                      const std::set<int>& controlled, double tol = kDefaultTol);

// Minimal utility loss for node v from removing `amount` total effort from its
// edges other than `excluded_edge` (no re-allocation).
double removal_loss(const Game& g, const Profile& s, int v, double amount, int excluded_edge,
                    double tol = kDefaultTol);

// Lattice allocations of `units` effort quanta over d slots (sum <= units).
std::vector<std::vector<int>> lattice_allocations(int units, int d);

// Utility of node v if it plays `allocation` (edge id -> effort) while everyone
// else stays as in s.
double utility_with_allocation(const Game& g, const Profile& s, int v,
                               const std::map<int, double>& allocation);
Profile apply_allocation(const Game& g, const Profile& s, int v,
                         const std::map<int, double>& allocation);

}  // namespace contrib
