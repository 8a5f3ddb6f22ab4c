#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "contrib/game.hpp"

namespace contrib {

struct CanonicalInstance {
  Game game;
  std::optional<Profile> start;  // prescribed start or known equilibrium
};

// Registry of canonical instances; parameters (eps) have instance-specific
// defaults. Names: triangle-noeq, path-classC, sqrt-triangle, min-noeq,
// min-linear-path, max-path, noconverge.
CanonicalInstance canonical(const std::string& name,
                            const std::map<std::string, double>& params = {});
std::vector<std::string> canonical_names();

// 3-CNF formula; clauses hold signed 1-based literals, exactly 3 each.
struct CnfFormula {
  int variables = 0;
  std::vector<std::array<int, 3>> clauses;
};
CnfFormula parse_dimacs(const std::string& text);

// Reduction with c*(x+y) / c*(xy) rewards: a no-equilibrium triangle per
// clause, decision/assignment players per variable.
Game sat_gadget_xy_sum(const CnfFormula& cnf);
// Min-effort reduction: a no-equilibrium path per clause. `uniform` switches to
// the uniform-budget variant with capped-sqrt anchor edges.
Game sat_gadget_min(const CnfFormula& cnf, bool uniform = false);

// The proofs' satisfying-assignment-to-equilibrium construction.
// assignment[i] = truth value of variable i+1.
Profile gadget_equilibrium_xy_sum(const Game& g, const CnfFormula& cnf,
                                  const std::vector<bool>& assignment);
Profile gadget_equilibrium_min(const Game& g, const CnfFormula& cnf,
                               const std::vector<bool>& assignment);

enum class RandomClass {
  C0Product,
  PolyConvex,
  WeightedSum,
  MinLinear,
  MinConvexUniform,
  MinConcave,
  MaxConvex,
  ConcaveGeneral
};
std::optional<RandomClass> random_class_from_name(const std::string& name);
std::vector<std::string> random_class_names();

Game random_family(RandomClass cls, int n, double density, uint64_t seed);

// Seeded feasible profile: every node spreads a random share of its budget.
Profile random_profile(const Game& g, uint64_t seed);

}  // namespace contrib
