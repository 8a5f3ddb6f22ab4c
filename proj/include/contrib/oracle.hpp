#pragma once

#include <vector>

#include "contrib/game.hpp"

namespace contrib {

// Efforts restricted to multiples of B_v / resolution per node.
struct GridSpec {
  int resolution = 4;
  // Bound on the number of enumerated profiles.
  double cap = 5e6;
  double tol = kDefaultTol;
};

// Number of lattice strategies of a single node: C(g + deg, deg).
double lattice_count(int resolution, int degree);
// Estimated profile count for the whole game.
double lattice_profile_count(const Game& g, int resolution);

// All grid profiles with no improving grid-unilateral and no improving
// grid-bilateral deviation, in lexicographic enumeration order.
std::vector<Profile> grid_equilibria(const Game& g, const GridSpec& spec);

// Lattice profile of maximum welfare (exact over the lattice, found by
// dynamic programming over an edge elimination order).
std::pair<Profile, double> grid_optimum(const Game& g, const GridSpec& spec);

}  // namespace contrib
