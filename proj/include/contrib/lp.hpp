#pragma once

#include <vector>

#include "contrib/util.hpp"

namespace contrib {

// maximize c'x  s.t.  A x <= b, x >= 0, with b >= 0.
// Dense tableau simplex with Bland's rule; sized for desk-scale instances.
struct LpResult {
  std::vector<double> x;
  std::vector<double> dual;  // one multiplier per row
  double value = 0;
};

LpResult simplex_solve(const std::vector<std::vector<double>>& a, const std::vector<double>& b,
                       const std::vector<double>& c);

}  // namespace contrib
