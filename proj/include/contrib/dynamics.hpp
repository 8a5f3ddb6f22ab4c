#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "contrib/equilibria.hpp"
#include "contrib/game.hpp"

namespace contrib {

// A bilateral best response: a strictly improving joint move by an adjacent
// pair in which each strategy is a unilateral best response to the other's.
struct BilateralMove {
  std::map<int, double> move_u, move_v;  // full allocations
  double gain_u = 0, gain_v = 0;
  bool approximate = false;
};
std::optional<BilateralMove> bilateral_best_response(const Game& g, const Profile& s, int u, int v,
                                                     double tol = kDefaultTol, int grid = 16);

enum class DynamicsMode { Random, Concurrent };
// StalledUnstable: no unilateral or bilateral best response applies, yet the
// state fails pairwise verification (such states are a strict superset of
// pairwise equilibria). The discrepancy witness is attached to the report.
enum class TrajectoryVerdict { Converged, CycleDetected, RoundBudgetExhausted, StalledUnstable };

struct TrajectoryRound {
  int round = 0;
  std::string unit;        // "node:<name>" or "pair:<name>,<name>"
  std::string kind;        // unilateral-BR | bilateral-BR | none
  std::vector<double> gains;
  uint64_t fingerprint = 0;
};

struct Trajectory {
  uint64_t seed = 0;
  DynamicsMode mode = DynamicsMode::Random;
  std::string rng_algorithm;
  uint64_t game_hash = 0;
  std::vector<TrajectoryRound> rounds;
  TrajectoryVerdict verdict = TrajectoryVerdict::RoundBudgetExhausted;
  int final_round = 0;
  int cycle_period = 0;
  int cycle_first_visit = 0;
  // Converged states are re-verified; a best-response-stalled state that
  // fails pairwise verification is reported rather than silently accepted.
  bool pairwise_verified = false;
  VerifyReport final_report;
  Profile final_profile;
  std::vector<Profile> profile_trace;  // only when options.record_profiles
};

struct DynamicsOptions {
  double tol = kDefaultTol;
  int grid = 16;
  int max_rounds = 10000;
  bool record_profiles = false;
};

Trajectory run_random(const Game& g, const Profile& start, uint64_t seed,
                      const DynamicsOptions& opts = {});
Trajectory run_concurrent(const Game& g, const Profile& start, uint64_t seed,
                          const DynamicsOptions& opts = {});

std::string trajectory_verdict_name(TrajectoryVerdict v);
// JSONL: header object, one object per round, terminal verdict object.
std::string trajectory_to_jsonl(const Game& g, const Trajectory& t);
nlohmann::json trajectory_summary_json(const Game& g, const Trajectory& t);

}  // namespace contrib
