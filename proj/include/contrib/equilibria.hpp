#pragma once

#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "contrib/game.hpp"

namespace contrib {

enum class Verdict { Stable, UnilateralDeviation, BilateralDeviation, StableAtResolution };
enum class VerifyMethod { ExactClass, ParametricScan, Grid };

std::string verdict_name(Verdict v);
std::string method_name(VerifyMethod m);

// A concrete improving deviation; gains are replayed, never trusted.
struct DeviationWitness {
  std::vector<int> nodes;                         // one or two deviators
  std::map<int, std::map<int, double>> moves;     // node -> full new allocation
  std::map<int, double> gains;                    // node -> strict utility gain
  double min_gain() const;
};

struct VerifyReport {
  Verdict verdict = Verdict::Stable;
  std::optional<DeviationWitness> witness;
  VerifyMethod method = VerifyMethod::ExactClass;
  int resolution = 0;  // finest per-node grid used, when the grid fallback ran
  bool stable() const {
    return verdict == Verdict::Stable || verdict == Verdict::StableAtResolution;
  }
};

struct VerifyOptions {
  double tol = kDefaultTol;
  int grid = 16;
};

VerifyReport verify_nash(const Game& g, const Profile& s, const VerifyOptions& opts = {});
VerifyReport verify_pairwise(const Game& g, const Profile& s, const VerifyOptions& opts = {});

// Supremum utility ratio any deviator (pair: the worse of the two) can reach,
// over the pairwise candidate deviations plus the grid; 1 when stable,
// +inf when a zero-utility player can gain.
double approximation_factor(const Game& g, const Profile& s, const VerifyOptions& opts = {});

enum class Tightness { Tight, HalfSlack, Slack };
std::string tightness_name(Tightness t);
std::vector<Tightness> classify_tightness(const Game& g, const Profile& s,
                                          double tol = kDefaultTol);

// Pairwise-stable profile in class C with nonnegative mixed partials:
// shifts effort onto slack edges along indifference directions until none
// remains, preserving welfare and stability.
Profile eliminate_slack(const Game& g, const Profile& s, const VerifyOptions& opts = {});

nlohmann::json verify_report_to_json(const Game& g, const VerifyReport& r);

}  // namespace contrib
