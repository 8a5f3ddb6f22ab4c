#include "contrib/game.hpp"

#include <algorithm>
#include <cmath>

namespace contrib {

int Game::add_node(std::string name, double budget) {
  if (node_index_.count(name)) throw ParseError("duplicate node id", name);
  if (budget < 0 || !std::isfinite(budget)) throw ParseError("negative budget", name);
  int id = node_count();
  node_index_[name] = id;
  nodes_.push_back({std::move(name), budget});
  incident_.emplace_back();
  return id;
}

int Game::add_edge(std::string name, int u, int v, RewardSpec reward) {
  if (edge_index_.count(name)) throw ParseError("duplicate edge id", name);
  if (u < 0 || u >= node_count() || v < 0 || v >= node_count())
    throw ParseError("edge endpoint out of range", name);
  if (u == v) throw ParseError("self-loop", name);
  for (int e : incident_[u])
    if (other_end(e, u) == v) throw ParseError("duplicate edge", name + " and " + edges_[e].name);
  int id = edge_count();
  edge_index_[name] = id;
  edges_.push_back({std::move(name), u, v, std::move(reward)});
  incident_[u].push_back(id);
  incident_[v].push_back(id);
  return id;
}

int Game::incident_index(int v, int e) const {
  const auto& inc = incident_[v];
  auto it = std::lower_bound(inc.begin(), inc.end(), e);
  if (it == inc.end() || *it != e) return -1;
  return static_cast<int>(it - inc.begin());
}

std::optional<int> Game::find_node(const std::string& name) const {
  auto it = node_index_.find(name);
  if (it == node_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Game::find_edge(const std::string& name) const {
  auto it = edge_index_.find(name);
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

bool Game::uniform_budgets(double tol) const {
  for (int v = 1; v < node_count(); ++v)
    if (std::fabs(budget(v) - budget(0)) > tol) return false;
  return true;
}

double Game::max_budget() const {
  double b = 0;
  for (const auto& n : nodes_) b = std::max(b, n.budget);
  return b;
}

bool Game::all_weighted_sum() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.reward.kind() == RewardSpec::Kind::WeightedSum; });
}
bool Game::all_min_effort() const {
  return !edges_.empty() &&
         std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.reward.kind() == RewardSpec::Kind::MinEffort; });
}
bool Game::all_max_effort() const {
  return !edges_.empty() &&
         std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.reward.kind() == RewardSpec::Kind::MaxEffort; });
}
bool Game::all_in_class_c() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.reward.in_class_c(); });
}
bool Game::all_in_class_c0() const {
  return std::all_of(edges_.begin(), edges_.end(),
                     [](const Edge& e) { return e.reward.in_class_c0(); });
}

uint64_t Game::hash() const {
  Fnv64 h;
  for (const auto& n : nodes_) {
    h.add_string(n.name);
    h.add_double(n.budget);
  }
  for (const auto& e : edges_) {
    h.add_string(e.name);
    h.add_i64(e.u);
    h.add_i64(e.v);
    h.add_string(e.reward.kind_name());
    switch (e.reward.kind()) {
      case RewardSpec::Kind::WeightedSum:
      case RewardSpec::Kind::WeightedProduct:
        h.add_double(e.reward.coef());
        break;
      case RewardSpec::Kind::PolyCompose:
        for (const auto& t : e.reward.poly().terms()) {
          h.add_i64(t.i);
          h.add_i64(t.j);
          h.add_double(t.coef);
        }
        [[fallthrough]];
      case RewardSpec::Kind::MinEffort:
      case RewardSpec::Kind::MaxEffort: {
        const ScalarFn& f = e.reward.scalar();
        h.add_i64(static_cast<int64_t>(f.kind()));
        h.add_double(f.coef_a());
        h.add_double(f.exponent_k());
        h.add_double(std::isfinite(f.cap()) ? f.cap() : -1.0);
        for (const auto& [x, y] : f.points()) {
          h.add_double(x);
          h.add_double(y);
        }
        break;
      }
    }
  }
  return h.h;
}

Profile Profile::zeros(const Game& g) {
  Profile p;
  p.eff_.resize(g.node_count());
  for (int v = 0; v < g.node_count(); ++v) p.eff_[v].assign(g.incident(v).size(), 0.0);
  return p;
}

double Profile::effort(const Game& g, int v, int e) const {
  int i = g.incident_index(v, e);
  return i < 0 ? 0.0 : eff_[v][i];
}

void Profile::set_effort(const Game& g, int v, int e, double value) {
  int i = g.incident_index(v, e);
  if (i < 0) throw InfeasibleError("effort on non-incident edge " + g.edge(e).name);
  eff_[v][i] = value;
}

double Profile::spent(int v) const {
  double s = 0;
  for (double x : eff_[v]) s += x;
  return s;
}

void Profile::check_feasible(const Game& g, double tol) const {
  if (static_cast<int>(eff_.size()) != g.node_count())
    throw InfeasibleError("profile node count mismatch");
  for (int v = 0; v < g.node_count(); ++v) {
    if (eff_[v].size() != g.incident(v).size())
      throw InfeasibleError("profile edge count mismatch at node " + g.node(v).name);
    double total = 0;
    for (double x : eff_[v]) {
      if (x < -tol || !std::isfinite(x))
        throw InfeasibleError("negative effort at node " + g.node(v).name);
      total += x;
    }
    if (total > g.budget(v) + tol)
      throw InfeasibleError("budget exceeded at node " + g.node(v).name + ": " +
                            format_sig(total) + " > " + format_sig(g.budget(v)));
  }
}

bool Profile::feasible(const Game& g, double tol) const {
  try {
    check_feasible(g, tol);
    return true;
  } catch (const InfeasibleError&) {
    return false;
  }
}

uint64_t Profile::fingerprint(double quantum) const {
  Fnv64 h;
  for (const auto& row : eff_) {
    for (double x : row) h.add_i64(quantize(x, quantum));
    h.add_byte(0xfe);
  }
  return h.h;
}

bool Profile::approx_equal(const Profile& o, double tol) const {
  if (eff_.size() != o.eff_.size()) return false;
  for (size_t v = 0; v < eff_.size(); ++v) {
    if (eff_[v].size() != o.eff_[v].size()) return false;
    for (size_t i = 0; i < eff_[v].size(); ++i)
      if (std::fabs(eff_[v][i] - o.eff_[v][i]) > tol) return false;
  }
  return true;
}

EdgeState edge_state(const Game& g, const Profile& s, int e) {
  return {s.effort(g, g.edge(e).u, e), s.effort(g, g.edge(e).v, e)};
}

double edge_min_effort(const Game& g, const Profile& s, int e) {
  auto [x, y] = edge_state(g, s, e);
  return std::min(x, y);
}

double edge_reward(const Game& g, const Profile& s, int e) {
  auto [x, y] = edge_state(g, s, e);
  return g.reward(e)(x, y);
}

double node_utility(const Game& g, const Profile& s, int v) {
  double w = 0;
  for (int e : g.incident(v)) w += edge_reward(g, s, e);
  return w;
}

double social_welfare(const Game& g, const Profile& s) {
  double w = 0;
  for (int e = 0; e < g.edge_count(); ++e) w += edge_reward(g, s, e);
  return 2 * w;
}

double social_welfare_node_sum(const Game& g, const Profile& s) {
  double w = 0;
  for (int v = 0; v < g.node_count(); ++v) w += node_utility(g, s, v);
  return w;
}

double potential(const Game& g, const Profile& s) { return social_welfare(g, s) / 2; }

}  // namespace contrib
