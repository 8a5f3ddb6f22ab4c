#include "contrib/lp.hpp"

#include <cmath>

namespace contrib {

LpResult simplex_solve(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                       const std::vector<double>& c) {
  const size_t m = a.size(), n = c.size();
  for (double bi : b)
    if (bi < 0) throw InfeasibleError("simplex requires b >= 0");

  // Tableau: rows 0..m-1 constraints (with slacks), row m objective.
  // Columns 0..n-1 structural, n..n+m-1 slacks, last column rhs.
  const size_t cols = n + m + 1;
  std::vector<std::vector<double>> t(m + 1, std::vector<double>(cols, 0.0));
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][cols - 1] = b[i];
    basis[i] = n + i;
  }
  for (size_t j = 0; j < n; ++j) t[m][j] = -c[j];

  const double eps = 1e-11;
  size_t guard = 8000 + 64 * (m + n) * (m + n);
  while (guard-- > 0) {
    // Bland: entering = smallest index with negative reduced cost.
    size_t enter = cols - 1;
    for (size_t j = 0; j + 1 < cols; ++j)
      if (t[m][j] < -eps) {
        enter = j;
        break;
      }
    if (enter == cols - 1) break;  // optimal

    size_t leave = m;
    double best_ratio = kInf;
    for (size_t i = 0; i < m; ++i) {
      if (t[i][enter] > eps) {
        double ratio = t[i][cols - 1] / t[i][enter];
        if (ratio < best_ratio - eps ||
            (ratio < best_ratio + eps && (leave == m || basis[i] < basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave == m) throw InternalError("simplex: unbounded program");

    double piv = t[leave][enter];
    for (size_t j = 0; j < cols; ++j) t[leave][j] /= piv;
    for (size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double f = t[i][enter];
      if (f == 0.0) continue;
      for (size_t j = 0; j < cols; ++j) t[i][j] -= f * t[leave][j];
    }
    basis[leave] = enter;
  }
  if (guard == 0) throw InternalError("simplex: pivot budget exhausted");

  LpResult res;
  res.x.assign(n, 0.0);
  for (size_t i = 0; i < m; ++i)
    if (basis[i] < n) res.x[basis[i]] = t[i][cols - 1];
  res.dual.assign(m, 0.0);
  for (size_t i = 0; i < m; ++i) res.dual[i] = t[m][n + i];  // slack reduced costs
  res.value = t[m][cols - 1];
  return res;
}

}  // namespace contrib
