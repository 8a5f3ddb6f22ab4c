#pragma once

#include <vector>

#include "contrib/util.hpp"

namespace contrib {

struct WeightedEdge {
  int u, v;
  double weight;
};

// Maximum-weight matching on a general graph (blossom algorithm).
// Returns mate[v] = partner vertex or -1.
std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge>& edges);

// Greedy matching: scan edges in the given order, keep those that fit.
std::vector<int> greedy_matching(int n, const std::vector<int>& edge_order,
                                 const std::vector<WeightedEdge>& edges);

// Exact O(2^n) reference, for cross-checks and small n.
std::vector<int> max_weight_matching_brute(int n, const std::vector<WeightedEdge>& edges);

double matching_weight(const std::vector<int>& mate, const std::vector<WeightedEdge>& edges);

}  // namespace contrib
