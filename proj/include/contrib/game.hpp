#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "contrib/reward.hpp"
#include "contrib/util.hpp"

namespace contrib {

// Immutable after construction; shareable across threads.
class Game {
 public:
  struct Node {
    std::string name;
    double budget;
  };
  struct Edge {
    std::string name;
    int u, v;
    RewardSpec reward;
  };

  int add_node(std::string name, double budget);
  int add_edge(std::string name, int u, int v, RewardSpec reward);

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const Node& node(int v) const { return nodes_[v]; }
  const Edge& edge(int e) const { return edges_[e]; }
  double budget(int v) const { return nodes_[v].budget; }
  const RewardSpec& reward(int e) const { return edges_[e].reward; }
  // Incident edge ids in ascending order.
  const std::vector<int>& incident(int v) const { return incident_[v]; }
  int degree(int v) const { return static_cast<int>(incident_[v].size()); }
  int other_end(int e, int v) const { return edges_[e].u == v ? edges_[e].v : edges_[e].u; }
  // Position of edge e in incident(v); -1 if not incident.
  int incident_index(int v, int e) const;

  std::optional<int> find_node(const std::string& name) const;
  std::optional<int> find_edge(const std::string& name) const;

  bool uniform_budgets(double tol = kDefaultTol) const;
  double max_budget() const;

  bool all_weighted_sum() const;
  bool all_min_effort() const;
  bool all_max_effort() const;
  bool all_in_class_c() const;
  bool all_in_class_c0() const;

  uint64_t hash() const;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> incident_;
  std::unordered_map<std::string, int> node_index_;
  std::unordered_map<std::string, int> edge_index_;
};

// Per-node effort over incident edges; a value type, copied per worker.
class Profile {
 public:
  Profile() = default;
  static Profile zeros(const Game& g);

  double effort(const Game& g, int v, int e) const;
  void set_effort(const Game& g, int v, int e, double value);
  // Efforts of node v aligned with g.incident(v).
  const std::vector<double>& row(int v) const { return eff_[v]; }
  std::vector<double>& row(int v) { return eff_[v]; }
  void set_row(int v, std::vector<double> values) { eff_[v] = std::move(values); }

  double spent(int v) const;
  double free_budget(const Game& g, int v) const { return g.budget(v) - spent(v); }

  // Budget feasibility and incidence; throws InfeasibleError with the violated node.
  void check_feasible(const Game& g, double tol = kDefaultTol) const;
  bool feasible(const Game& g, double tol = kDefaultTol) const;

  uint64_t fingerprint(double quantum = 1e-9) const;
  bool approx_equal(const Profile& o, double tol = kDefaultTol) const;

 private:
  std::vector<std::vector<double>> eff_;
};

// Efforts of both endpoints of edge e.
struct EdgeState {
  double at_u, at_v;
};
EdgeState edge_state(const Game& g, const Profile& s, int e);
// min(s_u(e), s_v(e)); the reduced coordinate of min-effort games.
double edge_min_effort(const Game& g, const Profile& s, int e);

double edge_reward(const Game& g, const Profile& s, int e);
double node_utility(const Game& g, const Profile& s, int v);
// Computed as 2 * sum of edge rewards; agreement with the node sum is an invariant.
double social_welfare(const Game& g, const Profile& s);
double social_welfare_node_sum(const Game& g, const Profile& s);
double potential(const Game& g, const Profile& s);

}  // namespace contrib
