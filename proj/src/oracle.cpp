#include "contrib/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "contrib/allocation.hpp"

namespace contrib {

double lattice_count(int resolution, int degree) {
  double c = 1;
  for (int i = 1; i <= degree; ++i) c *= static_cast<double>(resolution + i) / i;
  return c;
}

double lattice_profile_count(const Game& g, int resolution) {
  double c = 1;
  for (int v = 0; v < g.node_count(); ++v) c *= lattice_count(resolution, g.degree(v));
  return c;
}

namespace {

Profile profile_from_units(const Game& g, const std::vector<std::vector<int>>& units, int res) {
  Profile p = Profile::zeros(g);
  for (int v = 0; v < g.node_count(); ++v) {
    double unit = g.budget(v) / res;
    for (size_t i = 0; i < units[v].size(); ++i) p.row(v)[i] = units[v][i] * unit;
  }
  return p;
}

}  // namespace

std::vector<Profile> grid_equilibria(const Game& g, const GridSpec& spec) {
  double count = lattice_profile_count(g, spec.resolution);
  if (count > spec.cap)
    throw InfeasibleError("grid enumeration needs " + format_sig(count, 3) +
                          " profiles, cap is " + format_sig(spec.cap, 3));
  int n = g.node_count();
  std::vector<std::vector<std::vector<int>>> node_allocs(n);
  for (int v = 0; v < n; ++v) node_allocs[v] = lattice_allocations(spec.resolution, g.degree(v));

  std::vector<Profile> stable;
  std::vector<size_t> idx(n, 0);
  std::vector<std::vector<int>> units(n);
  for (int v = 0; v < n; ++v) units[v] = node_allocs[v][0];

  auto utilities_patched = [&](Profile& p, int v, const std::vector<int>& alt) {
    double unit = g.budget(v) / spec.resolution;
    for (size_t i = 0; i < alt.size(); ++i) p.row(v)[i] = alt[i] * unit;
    return node_utility(g, p, v);
  };

  while (true) {
    Profile p = profile_from_units(g, units, spec.resolution);
    bool ok = true;
    for (int v = 0; v < n && ok; ++v) {
      double cur = node_utility(g, p, v);
      Profile scratch = p;
      for (const auto& alt : node_allocs[v]) {
        if (utilities_patched(scratch, v, alt) > cur + spec.tol) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      for (int e = 0; e < g.edge_count() && ok; ++e) {
        int u = g.edge(e).u, v = g.edge(e).v;
        double cur_u = node_utility(g, p, u), cur_v = node_utility(g, p, v);
        Profile scratch = p;
        for (const auto& au : node_allocs[u]) {
          utilities_patched(scratch, u, au);
          for (const auto& av : node_allocs[v]) {
            utilities_patched(scratch, v, av);
            if (node_utility(g, scratch, u) > cur_u + spec.tol &&
                node_utility(g, scratch, v) > cur_v + spec.tol) {
              ok = false;
              break;
            }
          }
          if (!ok) break;
          scratch.row(v) = p.row(v);
        }
      }
    }
    if (ok) stable.push_back(p);

    int v = n - 1;
    while (v >= 0) {
      if (++idx[v] < node_allocs[v].size()) {
        units[v] = node_allocs[v][idx[v]];
        break;
      }
      idx[v] = 0;
      units[v] = node_allocs[v][0];
      --v;
    }
    if (v < 0) break;
  }
  return stable;
}

std::pair<Profile, double> grid_optimum(const Game& g, const GridSpec& spec) {
  int n = g.node_count(), m = g.edge_count(), res = spec.resolution;
  if (res < 1 || res > 120) throw InfeasibleError("grid resolution must be in [1, 120]");
  if (m == 0) return {Profile::zeros(g), 0.0};

  // Edge order: by the later endpoint, so nodes close as early as possible.
  std::vector<int> edge_order(m);
  for (int e = 0; e < m; ++e) edge_order[e] = e;
  std::sort(edge_order.begin(), edge_order.end(), [&](int a, int b) {
    auto key = [&](int e) {
      return std::pair(std::max(g.edge(e).u, g.edge(e).v), std::min(g.edge(e).u, g.edge(e).v));
    };
    return key(a) < key(b);
  });
  std::vector<int> last_edge_pos(n, -1);
  for (int pos = 0; pos < m; ++pos) {
    last_edge_pos[g.edge(edge_order[pos]).u] = pos;
    last_edge_pos[g.edge(edge_order[pos]).v] = pos;
  }

  struct State {
    std::vector<int> rem;  // remaining units of open nodes, by node id order
    double value;
    int parent;
    int take_u, take_v;
  };
  auto key_of = [](const std::vector<int>& rem) {
    std::string k;
    k.reserve(rem.size());
    for (int r : rem) k.push_back(static_cast<char>(r));
    return k;
  };

  std::vector<int> open_nodes;  // sorted node ids currently open
  std::vector<State> layer{{{}, 0.0, -1, 0, 0}};
  std::vector<std::vector<State>> history;
  double states_estimate = 0;

  for (int pos = 0; pos < m; ++pos) {
    int e = edge_order[pos];
    int u = g.edge(e).u, v = g.edge(e).v;
    for (int w : {std::min(u, v), std::max(u, v)}) {
      if (std::find(open_nodes.begin(), open_nodes.end(), w) == open_nodes.end()) {
        auto it = std::lower_bound(open_nodes.begin(), open_nodes.end(), w);
        size_t at = it - open_nodes.begin();
        open_nodes.insert(it, w);
        for (auto& st : layer) st.rem.insert(st.rem.begin() + at, res);
      }
    }
    size_t iu = std::lower_bound(open_nodes.begin(), open_nodes.end(), u) - open_nodes.begin();
    size_t iv = std::lower_bound(open_nodes.begin(), open_nodes.end(), v) - open_nodes.begin();

    history.push_back(layer);
    const auto& prev = history.back();
    std::unordered_map<std::string, size_t> seen;
    std::vector<State> next;
    double bu = g.budget(u) / res, bv = g.budget(v) / res;

    bool close_u = last_edge_pos[u] == pos, close_v = last_edge_pos[v] == pos;
    for (size_t si = 0; si < prev.size(); ++si) {
      const State& st = prev[si];
      for (int a = 0; a <= st.rem[iu]; ++a) {
        for (int b = 0; b <= st.rem[iv]; ++b) {
          double val = st.value + 2 * g.reward(e)(a * bu, b * bv);
          std::vector<int> rem = st.rem;
          rem[iu] -= a;
          rem[iv] -= b;
          // Drop closed nodes (larger index first so the smaller stays valid).
          for (size_t drop : {std::max(iu, iv), std::min(iu, iv)}) {
            if ((drop == iu && close_u) || (drop == iv && close_v))
              rem.erase(rem.begin() + drop);
          }
          std::string k = key_of(rem);
          auto it = seen.find(k);
          if (it == seen.end()) {
            seen.emplace(std::move(k), next.size());
            next.push_back({std::move(rem), val, static_cast<int>(si), a, b});
          } else if (val > next[it->second].value) {
            next[it->second] = {std::move(rem), val, static_cast<int>(si), a, b};
          }
        }
      }
    }
    if (close_u) open_nodes.erase(std::find(open_nodes.begin(), open_nodes.end(), u));
    if (close_v) open_nodes.erase(std::find(open_nodes.begin(), open_nodes.end(), v));
    layer = std::move(next);
    states_estimate += static_cast<double>(layer.size()) * (res + 1) * (res + 1);
    if (states_estimate > spec.cap)
      throw InfeasibleError("grid optimum needs " + format_sig(states_estimate, 3) +
                            " transitions, cap is " + format_sig(spec.cap, 3));
  }

  size_t best = 0;
  for (size_t i = 1; i < layer.size(); ++i)
    if (layer[i].value > layer[best].value) best = i;
  double best_welfare = layer.empty() ? 0.0 : layer[best].value;

  // Backtrack the per-edge unit choices.
  std::vector<std::pair<int, int>> takes(m);
  int cur = static_cast<int>(best);
  std::vector<State> final_layer = layer;
  for (int pos = m - 1; pos >= 0; --pos) {
    const State& st = pos == m - 1 ? final_layer[cur] : history[pos + 1][cur];
    takes[pos] = {st.take_u, st.take_v};
    cur = st.parent;
  }

  Profile p = Profile::zeros(g);
  for (int pos = 0; pos < m; ++pos) {
    int e = edge_order[pos];
    int u = g.edge(e).u, v = g.edge(e).v;
    p.set_effort(g, u, e, takes[pos].first * g.budget(u) / res);
    p.set_effort(g, v, e, takes[pos].second * g.budget(v) / res);
  }
  return {p, best_welfare};
}

}  // namespace contrib
