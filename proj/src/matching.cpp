#include "contrib/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace contrib {

namespace {

// Maximum-weight matching via the blossom algorithm, following the classic
// O(n^3) primal-dual formulation (endpoints, nested blossoms, slack duals).
class BlossomMatcher {
 public:
  BlossomMatcher(int n, const std::vector<WeightedEdge>& edges)
      : nvertex_(n), edges_(edges), nedge_(static_cast<int>(edges.size())) {
    maxweight_ = 0;
    for (const auto& e : edges_) maxweight_ = std::max(maxweight_, e.weight);
    eps_ = 1e-12 * std::max(1.0, maxweight_);
    endpoint_.resize(2 * nedge_);
    neighbend_.assign(nvertex_, {});
    for (int k = 0; k < nedge_; ++k) {
      endpoint_[2 * k] = edges_[k].u;
      endpoint_[2 * k + 1] = edges_[k].v;
      neighbend_[edges_[k].u].push_back(2 * k + 1);
      neighbend_[edges_[k].v].push_back(2 * k);
    }
    mate_.assign(nvertex_, -1);
    label_.assign(2 * nvertex_, 0);
    labelend_.assign(2 * nvertex_, -1);
    inblossom_.resize(nvertex_);
    for (int v = 0; v < nvertex_; ++v) inblossom_[v] = v;
    blossomparent_.assign(2 * nvertex_, -1);
    blossomchilds_.assign(2 * nvertex_, {});
    blossombase_.resize(2 * nvertex_);
    for (int v = 0; v < nvertex_; ++v) blossombase_[v] = v;
    for (int b = nvertex_; b < 2 * nvertex_; ++b) blossombase_[b] = -1;
    blossomendps_.assign(2 * nvertex_, {});
    bestedge_.assign(2 * nvertex_, -1);
    blossombestedges_.assign(2 * nvertex_, {});
    for (int b = 2 * nvertex_ - 1; b >= nvertex_; --b) unusedblossoms_.push_back(b);
    dualvar_.assign(2 * nvertex_, 0.0);
    for (int v = 0; v < nvertex_; ++v) dualvar_[v] = maxweight_;
    allowedge_.assign(nedge_, false);
  }

  std::vector<int> run() {
    for (int t = 0; t < nvertex_; ++t) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (int b = nvertex_; b < 2 * nvertex_; ++b) blossombestedges_[b].clear();
      std::fill(allowedge_.begin(), allowedge_.end(), false);
      queue_.clear();

      for (int v = 0; v < nvertex_; ++v)
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

      bool augmented = false;
      while (true) {
        while (!queue_.empty() && !augmented) {
          int v = queue_.back();
          queue_.pop_back();
          for (int p : neighbend_[v]) {
            int k = p / 2;
            int w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            double kslack = 0;
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= eps_) allowedge_[k] = true;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                int base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              int b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        int deltatype = 1;
        double delta = 0;
        int deltaedge = -1, deltablossom = -1;
        delta = kInf;
        for (int v = 0; v < nvertex_; ++v) delta = std::min(delta, dualvar_[v]);
        delta = std::max(0.0, delta);

        for (int v = 0; v < nvertex_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            double d = slack(bestedge_[v]);
            if (d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (int b = 0; b < 2 * nvertex_; ++b) {
          if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
            double d = slack(bestedge_[b]) / 2;
            if (d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (int b = nvertex_; b < 2 * nvertex_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
              dualvar_[b] < delta) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }

        for (int v = 0; v < nvertex_; ++v) {
          if (label_[inblossom_[v]] == 1) dualvar_[v] -= delta;
          else if (label_[inblossom_[v]] == 2) dualvar_[v] += delta;
        }
        for (int b = nvertex_; b < 2 * nvertex_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
            if (label_[b] == 1) dualvar_[b] += delta;
            else if (label_[b] == 2) dualvar_[b] -= delta;
          }
        }

        if (deltatype == 1) break;
        if (deltatype == 2) {
          allowedge_[deltaedge] = true;
          int i = edges_[deltaedge].u;
          if (label_[inblossom_[i]] == 0) i = edges_[deltaedge].v;
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = true;
          queue_.push_back(edges_[deltaedge].u);
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;

      for (int b = nvertex_; b < 2 * nvertex_; ++b)
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 &&
            dualvar_[b] <= eps_)
          expand_blossom(b, true);
    }

    std::vector<int> mate(nvertex_, -1);
    for (int v = 0; v < nvertex_; ++v)
      if (mate_[v] >= 0) mate[v] = endpoint_[mate_[v]];
    return mate;
  }

 private:
  double slack(int k) const {
    return dualvar_[edges_[k].u] + dualvar_[edges_[k].v] - 2 * edges_[k].weight;
  }

  void blossom_leaves(int b, std::vector<int>& out) const {
    if (b < nvertex_) {
      out.push_back(b);
    } else {
      for (int t : blossomchilds_[b]) blossom_leaves(t, out);
    }
  }

  void assign_label(int w, int t, int p) {
    int b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      std::vector<int> leaves;
      blossom_leaves(b, leaves);
      for (int v : leaves) queue_.push_back(v);
    } else {
      int base = blossombase_[b];
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  int scan_blossom(int v, int w) {
    std::vector<int> path;
    int base = -1;
    while (v != -1 || w != -1) {
      int b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      path.push_back(b);
      label_[b] = label_[b] | 4;
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (int b : path) label_[b] = label_[b] & ~4;
    return base;
  }

  void add_blossom(int base, int k) {
    int v = edges_[k].u, w = edges_[k].v;
    int bb = inblossom_[base], bv = inblossom_[v], bw = inblossom_[w];
    int b = unusedblossoms_.back();
    unusedblossoms_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    std::vector<int> path;
    std::vector<int> endps;
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    blossomchilds_[b] = path;
    blossomendps_[b] = endps;
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    std::vector<int> leaves;
    blossom_leaves(b, leaves);
    for (int leaf : leaves) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    }
    std::vector<double> bestedgeto(2 * nvertex_, -1);
    std::vector<int> bestedgeto_k(2 * nvertex_, -1);
    for (int bv2 : path) {
      std::vector<std::vector<int>> nblists;
      if (bv2 >= nvertex_ && !blossombestedges_[bv2].empty()) {
        nblists.push_back(blossombestedges_[bv2]);
      } else {
        std::vector<int> leaves2;
        blossom_leaves(bv2, leaves2);
        for (int leaf : leaves2) {
          std::vector<int> ks;
          for (int p : neighbend_[leaf]) ks.push_back(p / 2);
          nblists.push_back(ks);
        }
      }
      for (const auto& nblist : nblists) {
        for (int k2 : nblist) {
          int i = edges_[k2].u, j = edges_[k2].v;
          if (inblossom_[j] == b) std::swap(i, j);
          int bj = inblossom_[j];
          if (bj != b && label_[bj] == 1 &&
              (bestedgeto_k[bj] == -1 || slack(k2) < bestedgeto[bj])) {
            bestedgeto_k[bj] = k2;
            bestedgeto[bj] = slack(k2);
          }
        }
      }
      blossombestedges_[bv2].clear();
      bestedge_[bv2] = -1;
    }
    blossombestedges_[b].clear();
    for (int bj = 0; bj < 2 * nvertex_; ++bj)
      if (bestedgeto_k[bj] != -1) blossombestedges_[b].push_back(bestedgeto_k[bj]);
    bestedge_[b] = -1;
    for (int k2 : blossombestedges_[b])
      if (bestedge_[b] == -1 || slack(k2) < slack(bestedge_[b])) bestedge_[b] = k2;
  }

  void expand_blossom(int b, bool endstage) {
    for (int s : blossomchilds_[b]) {
      blossomparent_[s] = -1;
      if (s < nvertex_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] <= eps_) {
        expand_blossom(s, endstage);
      } else {
        std::vector<int> leaves;
        blossom_leaves(s, leaves);
        for (int v : leaves) inblossom_[v] = s;
      }
    }
    if (!endstage && label_[b] == 2) {
      int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      int j = static_cast<int>(std::find(blossomchilds_[b].begin(), blossomchilds_[b].end(),
                                         entrychild) -
                               blossomchilds_[b].begin());
      int jstep, endptrick;
      if (j & 1) {
        j -= static_cast<int>(blossomchilds_[b].size());
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      int p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        int idx = ((j - endptrick) % static_cast<int>(blossomchilds_[b].size()) +
                   static_cast<int>(blossomchilds_[b].size())) %
                  static_cast<int>(blossomchilds_[b].size());
        label_[endpoint_[blossomendps_[b][idx] ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[blossomendps_[b][idx] / 2] = true;
        j += jstep;
        int idx2 = ((j - endptrick) % static_cast<int>(blossomchilds_[b].size()) +
                    static_cast<int>(blossomchilds_[b].size())) %
                   static_cast<int>(blossomchilds_[b].size());
        p = blossomendps_[b][idx2] ^ endptrick;
        allowedge_[p / 2] = true;
        j += jstep;
      }
      int bv = blossomchilds_[b][((j % static_cast<int>(blossomchilds_[b].size())) +
                                  static_cast<int>(blossomchilds_[b].size())) %
                                 static_cast<int>(blossomchilds_[b].size())];
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (blossomchilds_[b][((j % static_cast<int>(blossomchilds_[b].size())) +
                                static_cast<int>(blossomchilds_[b].size())) %
                               static_cast<int>(blossomchilds_[b].size())] != entrychild) {
        bv = blossomchilds_[b][((j % static_cast<int>(blossomchilds_[b].size())) +
                                static_cast<int>(blossomchilds_[b].size())) %
                               static_cast<int>(blossomchilds_[b].size())];
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        std::vector<int> leaves;
        blossom_leaves(bv, leaves);
        int v = 0;
        for (int leaf : leaves) {
          v = leaf;
          if (label_[leaf] != 0) break;
        }
        if (label_[v] != 0) {
          label_[v] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(v, 2, labelend_[v]);
        }
        j += jstep;
      }
    }
    label_[b] = labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    bestedge_[b] = -1;
    unusedblossoms_.push_back(b);
  }

  void augment_blossom(int b, int v) {
    int t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nvertex_) augment_blossom(t, v);
    int i = static_cast<int>(std::find(blossomchilds_[b].begin(), blossomchilds_[b].end(), t) -
                             blossomchilds_[b].begin());
    int j = i;
    int jstep, endptrick;
    int len = static_cast<int>(blossomchilds_[b].size());
    if (i & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    while (j != 0) {
      j += jstep;
      int idx = ((j % len) + len) % len;
      t = blossomchilds_[b][idx];
      int idx2 = (((j - endptrick) % len) + len) % len;
      int p = blossomendps_[b][idx2] ^ endptrick;
      if (t >= nvertex_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      int idx3 = ((j % len) + len) % len;
      t = blossomchilds_[b][idx3];
      if (t >= nvertex_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(blossomchilds_[b].begin(), blossomchilds_[b].begin() + i, blossomchilds_[b].end());
    std::rotate(blossomendps_[b].begin(), blossomendps_[b].begin() + i, blossomendps_[b].end());
    blossombase_[b] = blossombase_[blossomchilds_[b][0]];
  }

  void augment_matching(int k) {
    int v = edges_[k].u, w = edges_[k].v;
    for (auto [s, p] : {std::pair(v, 2 * k + 1), std::pair(w, 2 * k)}) {
      while (true) {
        int bs = inblossom_[s];
        if (bs >= nvertex_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        int t = endpoint_[labelend_[bs]];
        int bt = inblossom_[t];
        int next_v = endpoint_[labelend_[bt]];
        int next_w = endpoint_[labelend_[bt] ^ 1];
        if (bt >= nvertex_) augment_blossom(bt, next_w);
        mate_[next_w] = labelend_[bt];
        p = labelend_[bt] ^ 1;
        s = next_v;
      }
    }
  }

  int nvertex_;
  std::vector<WeightedEdge> edges_;
  int nedge_;
  double maxweight_, eps_;
  std::vector<int> endpoint_;
  std::vector<std::vector<int>> neighbend_;
  std::vector<int> mate_;
  std::vector<int> label_, labelend_, inblossom_, blossomparent_, blossombase_, bestedge_;
  std::vector<std::vector<int>> blossomchilds_, blossomendps_, blossombestedges_;
  std::vector<int> unusedblossoms_;
  std::vector<double> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<int> queue_;
};

}  // namespace

std::vector<int> max_weight_matching(int n, const std::vector<WeightedEdge>& edges) {
  if (edges.empty()) return std::vector<int>(n, -1);
  return BlossomMatcher(n, edges).run();
}

std::vector<int> greedy_matching(int n, const std::vector<int>& edge_order,
                                 const std::vector<WeightedEdge>& edges) {
  std::vector<int> mate(n, -1);
  for (int k : edge_order) {
    int u = edges[k].u, v = edges[k].v;
    if (mate[u] == -1 && mate[v] == -1) {
      mate[u] = v;
      mate[v] = u;
    }
  }
  return mate;
}

std::vector<int> max_weight_matching_brute(int n, const std::vector<WeightedEdge>& edges) {
  if (n > 22) throw InternalError("brute-force matching limited to 22 vertices");
  std::vector<std::vector<std::pair<int, double>>> adj(n);
  for (const auto& e : edges) {
    adj[e.u].emplace_back(e.v, e.weight);
    adj[e.v].emplace_back(e.u, e.weight);
  }
  std::vector<double> memo(1 << n, -1.0);
  std::vector<int> take(1 << n, -2);
  std::function<double(int)> f = [&](int mask) -> double {
    if (mask == 0) return 0.0;
    if (take[mask] != -2) return memo[mask];
    int v = 0;
    while (!(mask >> v & 1)) ++v;
    double bestval = f(mask & ~(1 << v));
    int bestpick = -1;
    for (auto [w, wt] : adj[v]) {
      if (w != v && (mask >> w & 1)) {
        double val = wt + f(mask & ~(1 << v) & ~(1 << w));
        if (val > bestval) {
          bestval = val;
          bestpick = w;
        }
      }
    }
    memo[mask] = bestval;
    take[mask] = bestpick;
    return bestval;
  };
  int full = (1 << n) - 1;
  f(full);
  std::vector<int> mate(n, -1);
  int mask = full;
  while (mask) {
    int v = 0;
    while (!(mask >> v & 1)) ++v;
    int w = take[mask];
    if (w == -1) {
      mask &= ~(1 << v);
    } else {
      mate[v] = w;
      mate[w] = v;
      mask &= ~(1 << v) & ~(1 << w);
    }
  }
  return mate;
}

double matching_weight(const std::vector<int>& mate, const std::vector<WeightedEdge>& edges) {
  double total = 0;
  for (const auto& e : edges)
    if (mate[e.u] == e.v) total += e.weight;
  return total;
}

}  // namespace contrib
