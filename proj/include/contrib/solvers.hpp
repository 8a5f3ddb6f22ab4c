#pragma once

#include <map>
#include <optional>
#include <string>

#include <json.hpp>

#include "contrib/equilibria.hpp"
#include "contrib/game.hpp"
#include "contrib/oracle.hpp"

namespace contrib {

enum class SolveStatus { Equilibrium, NoEquilibrium, Unsupported };
std::string solve_status_name(SolveStatus s);

struct SolveOutcome {
  SolveStatus status = SolveStatus::Unsupported;
  std::optional<Profile> profile;
  double welfare = 0;
  std::string algorithm;
  std::string witness;  // failing condition, rendered with numeric values
  bool strong_equilibrium = false;
  bool unique = false;
  bool approximate = false;  // a grid best response was involved
  std::string notes;
};

// Greedy matching on max rewards f_e(B_u, B_v); works whenever f(x,0) = 0 and
// rewards are coordinate-convex.
SolveOutcome solve_greedy_c0(const Game& g, const VerifyOptions& opts = {});

// Three-phase decision procedure for games where every reward is c_e (x + y).
SolveOutcome solve_weighted_sum(const Game& g, const VerifyOptions& opts = {});

// Wake-pair greedy for min-effort games with convex h and uniform budgets.
SolveOutcome solve_min_convex_uniform(const Game& g, const VerifyOptions& opts = {});

// Iterative wake-up for min-effort games with concave h.
SolveOutcome solve_min_concave(const Game& g, const VerifyOptions& opts = {});

// Iterated unilateral best response from the zero profile for max-effort games.
SolveOutcome solve_max_effort(const Game& g, const VerifyOptions& opts = {});

enum class SolveMethod { Auto, GreedyC0, WeightedSum, MinConvexUniform, MinConcave, MaxEffort };
std::optional<SolveMethod> solve_method_from_name(const std::string& name);
std::string solve_method_name(SolveMethod m);
// Class-based inference; Unsupported outcome when classes are mixed.
SolveOutcome solve(const Game& g, SolveMethod method, const VerifyOptions& opts = {});

enum class OptimumMethod { TightMatching, Lp, Grid };
std::optional<OptimumMethod> optimum_method_from_name(const std::string& name);
struct OptimumResult {
  Profile profile;
  double welfare = 0;
  std::string method;
};
OptimumResult social_optimum(const Game& g, OptimumMethod method, const GridSpec& grid = {});

struct DualCertificate {
  std::vector<double> y;        // per node
  std::vector<double> y_doubled;
  double primal_value = 0;  // LP objective of the equilibrium contributions = w(s)
  double dual_value = 0;    // sum B_u * y'_u
  bool dual_feasible = false;
  std::vector<int> infinite_nodes;  // zero-budget nodes with positive incident value
};
DualCertificate dual_certificate(const Game& g, const Profile& s, const VerifyOptions& opts = {},
                                 bool force = false);

struct PoaResult {
  double ratio = 1;
  bool infinite = false;
};
PoaResult price_of_anarchy(const Game& g, const Profile& equilibrium, const Profile& optimum,
                           const VerifyOptions& opts = {}, bool force = false);

nlohmann::json solve_outcome_to_json(const Game& g, const SolveOutcome& o);
nlohmann::json dual_certificate_to_json(const Game& g, const DualCertificate& c);

}  // namespace contrib
