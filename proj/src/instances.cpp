#include "contrib/instances.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>
#include <sstream>

#include "contrib/rng.hpp"

namespace contrib {

namespace {

double param(const std::map<std::string, double>& params, const std::string& key, double dflt) {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

CanonicalInstance make_triangle_noeq() {
  Game g;
  int u1 = g.add_node("u1", 1), u2 = g.add_node("u2", 1), u3 = g.add_node("u3", 1);
  int e1 = g.add_edge("e1", u1, u2, RewardSpec::weighted_sum(3));
  g.add_edge("e2", u2, u3, RewardSpec::weighted_sum(3));
  int e3 = g.add_edge("e3", u3, u1, RewardSpec::weighted_sum(2));
  (void)e3;
  Profile s = Profile::zeros(g);
  s.set_effort(g, u1, e1, 1);
  s.set_effort(g, u3, g.find_edge("e2").value(), 1);
  s.set_effort(g, u2, e1, 1);  // u2 may sit anywhere; pin it for determinism
  return {std::move(g), std::move(s)};
}

CanonicalInstance make_path_classc(double eps) {
  Game g;
  int u = g.add_node("u", 1), v = g.add_node("v", 1), w = g.add_node("w", 1),
      z = g.add_node("z", 1);
  g.add_edge("e1", u, v, RewardSpec::weighted_product(1));
  int e2 = g.add_edge("e2", v, w, RewardSpec::weighted_product(1 + eps));
  g.add_edge("e3", w, z, RewardSpec::weighted_product(1));
  Profile s = Profile::zeros(g);
  s.set_effort(g, v, e2, 1);
  s.set_effort(g, w, e2, 1);
  return {std::move(g), std::move(s)};
}

CanonicalInstance make_sqrt_triangle() {
  Game g;
  int u1 = g.add_node("u1", 1), u2 = g.add_node("u2", 1), u3 = g.add_node("u3", 1);
  auto sqrt_xy = [] {
    return RewardSpec::poly_compose(SymPoly({{1, 1, 1.0}}), ScalarFn::power(1.0, 0.5));
  };
  g.add_edge("e1", u1, u2, sqrt_xy());
  g.add_edge("e2", u2, u3, sqrt_xy());
  g.add_edge("e3", u3, u1, sqrt_xy());
  Profile s = Profile::zeros(g);
  for (int v = 0; v < 3; ++v)
    for (int e : g.incident(v)) s.set_effort(g, v, e, 0.5);
  return {std::move(g), std::move(s)};
}

CanonicalInstance make_min_noeq() {
  Game g;
  int u = g.add_node("u", 2), v = g.add_node("v", 2), w = g.add_node("w", 2),
      z = g.add_node("z", 1);
  int e1 = g.add_edge("uv", u, v, RewardSpec::min_effort(ScalarFn::power(2, 2)));
  int e2 = g.add_edge("vw", v, w, RewardSpec::min_effort(ScalarFn::linear(5)));
  int e3 = g.add_edge("wz", w, z, RewardSpec::min_effort(ScalarFn::linear(6)));
  Profile s = Profile::zeros(g);
  s.set_effort(g, u, e1, 2);
  s.set_effort(g, v, e2, 2);
  s.set_effort(g, w, e2, 2);
  s.set_effort(g, z, e3, 1);
  return {std::move(g), std::move(s)};
}

CanonicalInstance make_min_linear_path(double eps) {
  Game g;
  int u1 = g.add_node("u1", 1), u2 = g.add_node("u2", 1), u3 = g.add_node("u3", 1),
      u4 = g.add_node("u4", 1);
  g.add_edge("e1", u1, u2, RewardSpec::min_effort(ScalarFn::linear(1)));
  int e2 = g.add_edge("e2", u2, u3, RewardSpec::min_effort(ScalarFn::linear(1 + eps)));
  g.add_edge("e3", u3, u4, RewardSpec::min_effort(ScalarFn::linear(1)));
  Profile s = Profile::zeros(g);
  s.set_effort(g, u2, e2, 1);
  s.set_effort(g, u3, e2, 1);
  return {std::move(g), std::move(s)};
}

CanonicalInstance make_max_path(double eps) {
  Game g;
  int u1 = g.add_node("u1", 0), u2 = g.add_node("u2", 1), u3 = g.add_node("u3", 1),
      u4 = g.add_node("u4", 0);
  g.add_edge("e1", u1, u2, RewardSpec::max_effort(ScalarFn::power(1, 2)));
  int e2 = g.add_edge("e2", u2, u3, RewardSpec::max_effort(ScalarFn::power(1, 2)));
  int e3 = g.add_edge("e3", u3, u4, RewardSpec::max_effort(ScalarFn::power(eps, 2)));
  Profile s = Profile::zeros(g);
  s.set_effort(g, u2, e2, 1);
  s.set_effort(g, u3, e3, 1);
  return {std::move(g), std::move(s)};
}

CanonicalInstance make_noconverge() {
  Game g;
  int u1 = g.add_node("u1", 2), v1 = g.add_node("v1", 2), w1 = g.add_node("w1", 2),
      z1 = g.add_node("z1", 2);
  int u2 = g.add_node("u2", 2), v2 = g.add_node("v2", 2), w2 = g.add_node("w2", 2),
      z2 = g.add_node("z2", 2);
  int vc = g.add_node("vc", 2);
  g.add_edge("u1v1", u1, v1, RewardSpec::min_effort(ScalarFn::power(2, 2)));
  g.add_edge("v1w1", v1, w1, RewardSpec::min_effort(ScalarFn::linear(5)));
  g.add_edge("w1z1", w1, z1, RewardSpec::min_effort(ScalarFn::linear(6)));
  int a1 = g.add_edge("z1vc", z1, vc, RewardSpec::min_effort(ScalarFn::linear(1000)));
  int a2 = g.add_edge("vcz2", vc, z2, RewardSpec::min_effort(ScalarFn::linear(1000)));
  g.add_edge("z2w2", z2, w2, RewardSpec::min_effort(ScalarFn::linear(6)));
  g.add_edge("w2v2", w2, v2, RewardSpec::min_effort(ScalarFn::linear(5)));
  g.add_edge("v2u2", v2, u2, RewardSpec::min_effort(ScalarFn::power(2, 2)));
  Profile s = Profile::zeros(g);
  s.set_effort(g, z1, a1, 1);
  s.set_effort(g, vc, a1, 1);
  s.set_effort(g, vc, a2, 1);
  s.set_effort(g, z2, a2, 1);
  return {std::move(g), std::move(s)};
}

}  // namespace

CanonicalInstance canonical(const std::string& name,
                            const std::map<std::string, double>& params) {
  if (name == "triangle-noeq") return make_triangle_noeq();
  if (name == "path-classC") return make_path_classc(param(params, "eps", 0.1));
  if (name == "sqrt-triangle") return make_sqrt_triangle();
  if (name == "min-noeq") return make_min_noeq();
  if (name == "min-linear-path") return make_min_linear_path(param(params, "eps", 0.1));
  if (name == "max-path") return make_max_path(param(params, "eps", 0.01));
  if (name == "noconverge") return make_noconverge();
  throw ParseError("unknown canonical instance '" + name + "'", "");
}

std::vector<std::string> canonical_names() {
  return {"triangle-noeq", "path-classC", "sqrt-triangle", "min-noeq",
          "min-linear-path", "max-path", "noconverge"};
}

CnfFormula parse_dimacs(const std::string& text) {
  CnfFormula cnf;
  std::istringstream in(text);
  std::string line;
  int declared_clauses = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      ls >> p >> fmt >> cnf.variables >> declared_clauses;
      if (fmt != "cnf") throw ParseError("expected 'p cnf' header", line);
      continue;
    }
    std::vector<int> lits;
    int lit;
    while (ls >> lit) {
      if (lit == 0) break;
      lits.push_back(lit);
    }
    if (lits.empty()) continue;
    if (lits.size() != 3) throw ParseError("clauses must have exactly 3 literals", line);
    for (int l : lits)
      if (std::abs(l) < 1 || std::abs(l) > cnf.variables)
        throw ParseError("literal out of range", line);
    cnf.clauses.push_back({lits[0], lits[1], lits[2]});
  }
  if (cnf.variables <= 0 || cnf.clauses.empty())
    throw ParseError("empty or missing CNF", "");
  if (declared_clauses >= 0 && declared_clauses != static_cast<int>(cnf.clauses.size()))
    throw ParseError("clause count does not match header", "");
  return cnf;
}

namespace {

std::string var_node(int i, bool positive) {
  return (positive ? "xt" : "xf") + std::to_string(i);
}

}  // namespace

Game sat_gadget_xy_sum(const CnfFormula& cnf) {
  if (cnf.variables < 3) throw InfeasibleError("gadget assumes at least 3 variables");
  int k = cnf.variables, l = static_cast<int>(cnf.clauses.size());
  double big = static_cast<double>(k) * l;
  Game g;
  for (int i = 1; i <= k; ++i) {
    g.add_node("d" + std::to_string(i), 1);
    g.add_node(var_node(i, true), big);
    g.add_node(var_node(i, false), big);
  }
  for (int a = 0; a < l; ++a) {
    std::string c = "c" + std::to_string(a);
    g.add_node(c + "t1", 1);
    g.add_node(c + "t2", 1);
    g.add_node(c + "t3", 1);
  }
  for (int i = 1; i <= k; ++i) {
    std::string d = "d" + std::to_string(i);
    g.add_edge(d + "-" + var_node(i, true), g.find_node(d).value(),
               g.find_node(var_node(i, true)).value(), RewardSpec::weighted_product(7));
    g.add_edge(d + "-" + var_node(i, false), g.find_node(d).value(),
               g.find_node(var_node(i, false)).value(), RewardSpec::weighted_product(7));
  }
  for (int a = 0; a < l; ++a) {
    std::string c = "c" + std::to_string(a);
    int t1 = g.find_node(c + "t1").value(), t2 = g.find_node(c + "t2").value(),
        t3 = g.find_node(c + "t3").value();
    g.add_edge(c + "e1", t1, t2, RewardSpec::weighted_sum(3));
    g.add_edge(c + "e2", t2, t3, RewardSpec::weighted_sum(3));
    g.add_edge(c + "e3", t3, t1, RewardSpec::weighted_sum(2));
    for (int lit : cnf.clauses[a]) {
      std::string p = var_node(std::abs(lit), lit > 0);
      int pn = g.find_node(p).value();
      bool dup = false;
      for (int e : g.incident(pn))
        if (g.other_end(e, pn) == t3) dup = true;
      if (!dup)
        g.add_edge(p + "-" + c, pn, t3, RewardSpec::weighted_product(3));
    }
  }
  return g;
}

Game sat_gadget_min(const CnfFormula& cnf, bool uniform) {
  int k = cnf.variables, l = static_cast<int>(cnf.clauses.size());
  double big = static_cast<double>(k) * l;
  Game g;
  auto budget_of = [&](double normal) { return uniform ? big : normal; };
  for (int i = 1; i <= k; ++i) {
    g.add_node("d" + std::to_string(i), big);
    g.add_node(var_node(i, true), big);
    g.add_node(var_node(i, false), big);
  }
  for (int a = 0; a < l; ++a) {
    std::string c = "c" + std::to_string(a);
    g.add_node(c + "u", budget_of(2));
    g.add_node(c + "v", budget_of(2));
    g.add_node(c + "w", budget_of(2));
    g.add_node(c + "z", budget_of(1));
    if (uniform) {
      g.add_node(c + "u'", big);
      g.add_node(c + "v'", big);
      g.add_node(c + "w'", big);
      g.add_node(c + "z'", big);
    }
  }
  for (int i = 1; i <= k; ++i) {
    std::string d = "d" + std::to_string(i);
    for (bool side : {true, false})
      g.add_edge(d + "-" + var_node(i, side), g.find_node(d).value(),
                 g.find_node(var_node(i, side)).value(),
                 RewardSpec::min_effort(ScalarFn::power(10, 2)));
  }
  for (int a = 0; a < l; ++a) {
    std::string c = "c" + std::to_string(a);
    int u = g.find_node(c + "u").value(), v = g.find_node(c + "v").value(),
        w = g.find_node(c + "w").value(), z = g.find_node(c + "z").value();
    g.add_edge(c + "uv", u, v, RewardSpec::min_effort(ScalarFn::power(2, 2)));
    g.add_edge(c + "vw", v, w, RewardSpec::min_effort(ScalarFn::linear(5)));
    g.add_edge(c + "wz", w, z, RewardSpec::min_effort(ScalarFn::linear(6)));
    if (uniform) {
      double cap2 = big - 2, cap1 = big - 1;
      auto anchor = [](double cap) {
        return RewardSpec::min_effort(
            ScalarFn::power_capped(10 * std::pow(cap, 1.5), 0.5, cap));
      };
      g.add_edge(c + "uu'", u, g.find_node(c + "u'").value(), anchor(cap2));
      g.add_edge(c + "vv'", v, g.find_node(c + "v'").value(), anchor(cap2));
      g.add_edge(c + "ww'", w, g.find_node(c + "w'").value(), anchor(cap2));
      g.add_edge(c + "zz'", z, g.find_node(c + "z'").value(), anchor(cap1));
    }
    for (int lit : cnf.clauses[a]) {
      std::string p = var_node(std::abs(lit), lit > 0);
      int pn = g.find_node(p).value();
      bool dup = false;
      for (int e : g.incident(pn))
        if (g.other_end(e, pn) == z) dup = true;
      if (!dup) g.add_edge(p + "-" + c, pn, z, RewardSpec::min_effort(ScalarFn::linear(7)));
    }
  }
  return g;
}

namespace {

// Maximum bipartite matching (anchors -> free assignment players), then
// attach leftover anchors to any adjacent free player, per the proofs.
std::map<int, int> anchor_assignment(const Game& g, const std::vector<int>& anchors,
                                     const std::set<int>& free_players) {
  std::map<int, int> anchor_to_player;
  std::map<int, int> player_match;  // free player -> anchor (for the matching phase)
  std::function<bool(int, std::set<int>&)> augment = [&](int anchor, std::set<int>& seen) {
    for (int e : g.incident(anchor)) {
      int p = g.other_end(e, anchor);
      if (!free_players.count(p) || seen.count(p)) continue;
      seen.insert(p);
      auto it = player_match.find(p);
      if (it == player_match.end() || augment(it->second, seen)) {
        player_match[p] = anchor;
        anchor_to_player[anchor] = p;
        return true;
      }
    }
    return false;
  };
  for (int a : anchors) {
    std::set<int> seen;
    augment(a, seen);
  }
  for (int a : anchors) {
    if (anchor_to_player.count(a)) continue;
    for (int e : g.incident(a)) {
      int p = g.other_end(e, a);
      if (free_players.count(p)) {
        anchor_to_player[a] = p;
        break;
      }
    }
    if (!anchor_to_player.count(a))
      throw InfeasibleError("assignment does not satisfy clause anchored at " + g.node(a).name);
  }
  return anchor_to_player;
}

void spread_evenly(const Game& g, Profile& s, int player, const std::vector<int>& edges) {
  if (edges.empty()) return;
  double each = g.budget(player) / edges.size();
  for (int e : edges) s.set_effort(g, player, e, each);
}

}  // namespace

Profile gadget_equilibrium_xy_sum(const Game& g, const CnfFormula& cnf,
                                  const std::vector<bool>& assignment) {
  int k = cnf.variables, l = static_cast<int>(cnf.clauses.size());
  Profile s = Profile::zeros(g);
  std::set<int> free_players;
  for (int i = 1; i <= k; ++i) {
    int d = g.find_node("d" + std::to_string(i)).value();
    int committed = g.find_node(var_node(i, !assignment[i - 1])).value();
    int free_p = g.find_node(var_node(i, assignment[i - 1])).value();
    int e = -1;
    for (int ee : g.incident(d))
      if (g.other_end(ee, d) == committed) e = ee;
    s.set_effort(g, d, e, g.budget(d));
    s.set_effort(g, committed, e, g.budget(committed));
    free_players.insert(free_p);
  }
  std::vector<int> anchors;
  for (int a = 0; a < l; ++a)
    anchors.push_back(g.find_node("c" + std::to_string(a) + "t3").value());
  auto plan = anchor_assignment(g, anchors, free_players);

  std::map<int, std::vector<int>> player_edges;
  for (auto [anchor, p] : plan) {
    int e = -1;
    for (int ee : g.incident(anchor))
      if (g.other_end(ee, anchor) == p) e = ee;
    s.set_effort(g, anchor, e, g.budget(anchor));
    player_edges[p].push_back(e);
  }
  for (auto& [p, edges] : player_edges) spread_evenly(g, s, p, edges);

  for (int a = 0; a < l; ++a) {
    std::string c = "c" + std::to_string(a);
    int t1 = g.find_node(c + "t1").value(), t2 = g.find_node(c + "t2").value();
    int e = g.find_edge(c + "e1").value();
    s.set_effort(g, t1, e, g.budget(t1));
    s.set_effort(g, t2, e, g.budget(t2));
  }
  return s;
}

Profile gadget_equilibrium_min(const Game& g, const CnfFormula& cnf,
                               const std::vector<bool>& assignment) {
  int k = cnf.variables, l = static_cast<int>(cnf.clauses.size());
  Profile s = Profile::zeros(g);
  std::set<int> free_players;
  for (int i = 1; i <= k; ++i) {
    int d = g.find_node("d" + std::to_string(i)).value();
    int committed = g.find_node(var_node(i, !assignment[i - 1])).value();
    int e = -1;
    for (int ee : g.incident(d))
      if (g.other_end(ee, d) == committed) e = ee;
    s.set_effort(g, d, e, g.budget(d));
    s.set_effort(g, committed, e, g.budget(committed));
    free_players.insert(g.find_node(var_node(i, assignment[i - 1])).value());
  }
  std::vector<int> anchors;
  for (int a = 0; a < l; ++a)
    anchors.push_back(g.find_node("c" + std::to_string(a) + "z").value());
  auto plan = anchor_assignment(g, anchors, free_players);
  std::map<int, std::vector<int>> player_edges;
  for (auto [anchor, p] : plan) {
    int e = -1;
    for (int ee : g.incident(anchor))
      if (g.other_end(ee, anchor) == p) e = ee;
    s.set_effort(g, anchor, e, g.budget(anchor));
    player_edges[p].push_back(e);
  }
  for (auto& [p, edges] : player_edges) spread_evenly(g, s, p, edges);

  for (int a = 0; a < l; ++a) {
    std::string c = "c" + std::to_string(a);
    int u = g.find_node(c + "u").value(), v = g.find_node(c + "v").value(),
        w = g.find_node(c + "w").value();
    int evw = g.find_edge(c + "vw").value(), euv = g.find_edge(c + "uv").value();
    s.set_effort(g, v, evw, 2);
    s.set_effort(g, w, evw, 2);
    s.set_effort(g, u, euv, 2);
  }
  return s;
}

std::optional<RandomClass> random_class_from_name(const std::string& name) {
  if (name == "c0-product") return RandomClass::C0Product;
  if (name == "poly-convex") return RandomClass::PolyConvex;
  if (name == "weighted-sum") return RandomClass::WeightedSum;
  if (name == "min-linear") return RandomClass::MinLinear;
  if (name == "min-convex-uniform") return RandomClass::MinConvexUniform;
  if (name == "min-concave") return RandomClass::MinConcave;
  if (name == "max-convex") return RandomClass::MaxConvex;
  if (name == "concave-general") return RandomClass::ConcaveGeneral;
  return std::nullopt;
}

std::vector<std::string> random_class_names() {
  return {"c0-product",         "poly-convex", "weighted-sum",   "min-linear",
          "min-convex-uniform", "min-concave", "max-convex", "concave-general"};
}

namespace {

ScalarFn random_decreasing_pwl(Rng& rng) {
  int segs = 2 + static_cast<int>(rng.below(3));  // 2..4 decreasing slopes
  double slope = rng.log_uniform(2.0, 10.0);
  double x = 0, y = 0;
  std::vector<std::pair<double, double>> pts{{0, 0}};
  for (int i = 0; i < segs; ++i) {
    double len = rng.uniform(0.2, 0.8);
    x += len;
    y += slope * len;
    pts.emplace_back(x, y);
    slope *= rng.uniform(0.3, 0.8);
  }
  return ScalarFn::piecewise_linear(std::move(pts));
}

}  // namespace

Game random_family(RandomClass cls, int n, double density, uint64_t seed) {
  Rng rng(seed);
  Game g;
  bool uniform = cls == RandomClass::MinConvexUniform;
  for (int v = 0; v < n; ++v)
    g.add_node("n" + std::to_string(v), uniform ? 1.0 : rng.uniform(0.5, 2.0));
  int e = 0;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (!rng.bernoulli(density)) continue;
      std::string name = "e" + std::to_string(e++);
      double c = rng.log_uniform(0.1, 10.0);
      switch (cls) {
        case RandomClass::C0Product:
          g.add_edge(name, u, v, RewardSpec::weighted_product(c));
          break;
        case RandomClass::PolyConvex:
          g.add_edge(name, u, v,
                     RewardSpec::poly_compose(SymPoly({{1, 1, c}}),
                                              ScalarFn::power(1.0, rng.uniform(1.2, 2.5))));
          break;
        case RandomClass::WeightedSum:
          g.add_edge(name, u, v, RewardSpec::weighted_sum(c));
          break;
        case RandomClass::MinLinear:
          g.add_edge(name, u, v, RewardSpec::min_effort(ScalarFn::linear(c)));
          break;
        case RandomClass::MinConvexUniform:
          g.add_edge(name, u, v,
                     RewardSpec::min_effort(ScalarFn::power(c, rng.uniform(1.1, 3.0))));
          break;
        case RandomClass::MinConcave:
          g.add_edge(name, u, v, RewardSpec::min_effort(random_decreasing_pwl(rng)));
          break;
        case RandomClass::MaxConvex:
          g.add_edge(name, u, v,
                     RewardSpec::max_effort(rng.bernoulli(0.3)
                                                ? ScalarFn::linear(c)
                                                : ScalarFn::power(c, rng.uniform(1.1, 2.5))));
          break;
        case RandomClass::ConcaveGeneral: {
          double pick = rng.uniform01();
          if (pick < 0.4) {
            g.add_edge(name, u, v, RewardSpec::min_effort(random_decreasing_pwl(rng)));
          } else if (pick < 0.8) {
            g.add_edge(name, u, v,
                       RewardSpec::poly_compose(SymPoly({{1, 1, c}}),
                                                ScalarFn::power(1.0, rng.uniform(0.3, 0.8))));
          } else {
            g.add_edge(name, u, v, RewardSpec::weighted_sum(c));
          }
          break;
        }
      }
    }
  }
  return g;
}

Profile random_profile(const Game& g, uint64_t seed) {
  Rng rng(seed);
  Profile s = Profile::zeros(g);
  for (int v = 0; v < g.node_count(); ++v) {
    int d = g.degree(v);
    if (d == 0) continue;
    double share = rng.uniform(0.0, 1.0) * g.budget(v);
    std::vector<double> w(d);
    double total = 0;
    for (int i = 0; i < d; ++i) {
      w[i] = -std::log(std::max(rng.uniform01(), 1e-12));
      total += w[i];
    }
    for (int i = 0; i < d; ++i) s.row(v)[i] = share * w[i] / total;
  }
  return s;
}

}  // namespace contrib
