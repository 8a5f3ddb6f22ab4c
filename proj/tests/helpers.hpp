#pragma once

#include <map>
#include <vector>

#include "contrib/allocation.hpp"
#include "contrib/game.hpp"
#include "contrib/rng.hpp"

namespace contrib::test {

inline Game single_edge(RewardSpec r, double bu = 1, double bv = 1) {
  Game g;
  int u = g.add_node("u", bu), v = g.add_node("v", bv);
  g.add_edge("e", u, v, std::move(r));
  return g;
}

// Star: center c with one edge to each leaf, reward[i] on edge i.
inline Game star(std::vector<RewardSpec> rewards, double center_budget = 1,
                 double leaf_budget = 1) {
  Game g;
  int c = g.add_node("c", center_budget);
  for (size_t i = 0; i < rewards.size(); ++i) {
    int leaf = g.add_node("l" + std::to_string(i), leaf_budget);
    g.add_edge("e" + std::to_string(i), c, leaf, std::move(rewards[i]));
  }
  return g;
}

// Path with edge i joining node i and i+1.
inline Game path(std::vector<RewardSpec> rewards, std::vector<double> budgets) {
  Game g;
  for (size_t i = 0; i < budgets.size(); ++i) g.add_node("n" + std::to_string(i), budgets[i]);
  for (size_t i = 0; i < rewards.size(); ++i)
    g.add_edge("e" + std::to_string(i), static_cast<int>(i), static_cast<int>(i + 1),
               std::move(rewards[i]));
  return g;
}

// Exhaustive lattice search for the best reallocation of node v's own budget;
// an independent check of best responses.
inline double grid_br_value(const Game& g, const Profile& s, int v, int resolution) {
  auto allocs = lattice_allocations(resolution, g.degree(v));
  double unit = g.budget(v) / resolution;
  double best = -1;
  for (const auto& a : allocs) {
    std::map<int, double> alloc;
    const auto& inc = g.incident(v);
    for (size_t i = 0; i < inc.size(); ++i) alloc[inc[i]] = a[i] * unit;
    best = std::max(best, utility_with_allocation(g, s, v, alloc));
  }
  return best;
}

}  // namespace contrib::test
