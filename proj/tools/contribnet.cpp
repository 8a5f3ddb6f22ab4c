#include <chrono>
#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "contrib/dynamics.hpp"
#include "contrib/instances.hpp"
#include "contrib/json_io.hpp"
#include "contrib/solvers.hpp"

using namespace contrib;

namespace {

// Payloads print with 12 significant digits and no timestamps, so identical
// inputs and seeds reproduce identical stdout bytes.
json round_numbers(const json& j) {
  if (j.is_number_float()) return round_sig(j.get<double>());
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [k, v] : j.items()) out[k] = round_numbers(v);
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& v : j) out.push_back(round_numbers(v));
    return out;
  }
  return j;
}

struct Report {
  std::string command;
  json inputs = json::object();
  json config = json::object();
  json result = json::object();
};

int emit(const Report& r, int exit_code, std::chrono::steady_clock::time_point t0) {
  json payload{{"command", r.command},
               {"inputs", r.inputs},
               {"config", r.config},
               {"result", round_numbers(r.result)}};
  std::cout << payload.dump(2) << "\n";
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                std::chrono::steady_clock::now() - t0)
                .count();
  std::cerr << "wall_time_ms=" << ms << "\n";
  return exit_code;
}

std::string hash_hex(uint64_t h) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

double env_tol() {
  if (const char* s = std::getenv("CONTRIBNET_TOL")) {
    double v = std::strtod(s, nullptr);
    if (v > 0) return v;
  }
  return kDefaultTol;
}

}  // namespace

int main(int argc, char** argv) {
  auto t0 = std::chrono::steady_clock::now();
  CLI::App app{"contribnet: solvers, verifiers, and dynamics for network contribution games"};
  app.require_subcommand(1);
  app.fallthrough();  // accept global flags after the subcommand too

  double tol = env_tol();
  int grid = 16;
  int jobs = 1;
  app.add_option("--tol", tol, "comparison tolerance")->capture_default_str();
  app.add_option("--grid", grid, "grid resolution for approximate searches")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads for oracle enumeration")->capture_default_str();

  std::string game_path, profile_path, start_path, out_path, cnf_path;
  std::string method = "auto", mode = "pairwise", dmode = "random", omethod = "grid";
  std::string gen_name, gen_class = "c0-product";
  bool approx = false, force = false, uniform = false;
  uint64_t seed = 1;
  int max_rounds = 10000, gen_n = 6;
  double density = 0.5, eps = -1;
  double cap = 5e6;

  auto* solve_cmd = app.add_subcommand("solve", "construct or refute a pairwise equilibrium");
  solve_cmd->add_option("game", game_path)->required();
  solve_cmd->add_option("--method", method,
                        "auto|greedy-c0|weighted-sum|min-convex-uniform|min-concave|max-effort");

  auto* verify_cmd = app.add_subcommand("verify", "verify stability of a profile");
  verify_cmd->add_option("game", game_path)->required();
  verify_cmd->add_option("profile", profile_path)->required();
  verify_cmd->add_option("--mode", mode, "nash|pairwise");
  verify_cmd->add_flag("--approx", approx, "also print the approximation factor");

  auto* dyn_cmd = app.add_subcommand("dynamics", "run best-response dynamics");
  dyn_cmd->add_option("game", game_path)->required();
  dyn_cmd->add_option("--mode", dmode, "random|concurrent");
  dyn_cmd->add_option("--seed", seed);
  dyn_cmd->add_option("--max-rounds", max_rounds);
  dyn_cmd->add_option("--start", start_path, "start profile (default: all zeros)");
  dyn_cmd->add_option("--out", out_path, "write the trajectory as JSONL");

  auto* opt_cmd = app.add_subcommand("optimum", "compute a social optimum");
  opt_cmd->add_option("game", game_path)->required();
  opt_cmd->add_option("--method", omethod, "tight-matching|lp|grid");
  opt_cmd->add_option("--cap", cap, "profile cap for grid enumeration");

  auto* poa_cmd = app.add_subcommand("poa", "solve, compute the optimum, report the ratio");
  poa_cmd->add_option("game", game_path)->required();
  poa_cmd->add_option("--method", method, "solver method (default auto)");
  poa_cmd->add_option("--optimum", omethod, "optimum method (default auto by class)");

  auto* dual_cmd = app.add_subcommand("dual", "LP-duality certificate for min-linear games");
  dual_cmd->add_option("game", game_path)->required();
  dual_cmd->add_option("profile", profile_path)->required();
  dual_cmd->add_flag("--force", force, "skip the stability check");

  auto* oracle_cmd = app.add_subcommand("oracle", "exhaustive grid enumeration");
  oracle_cmd->add_option("game", game_path)->required();
  oracle_cmd->add_option("--mode", mode, "equilibria|optimum");
  oracle_cmd->add_option("--cap", cap, "profile cap");

  auto* gen_cmd = app.add_subcommand("gen", "generate canonical, random, or gadget games");
  gen_cmd->add_option("name", gen_name, "canonical name, 'random', 'gadget-xy', or 'gadget-min'")
      ->required();
  gen_cmd->add_option("--eps", eps, "epsilon for parameterized canonical instances");
  gen_cmd->add_option("--class", gen_class, "random family class");
  gen_cmd->add_option("--n", gen_n);
  gen_cmd->add_option("--density", density);
  gen_cmd->add_option("--seed", seed);
  gen_cmd->add_option("--cnf", cnf_path, "DIMACS file for gadget constructions");
  gen_cmd->add_flag("--uniform", uniform, "uniform-budget variant of gadget-min");
  gen_cmd->add_option("--out", out_path, "also write the game JSON to a file");

  CLI11_PARSE(app, argc, argv);
  if (grid < 1) grid = 1;
  VerifyOptions vopts{tol, grid};

  try {
    if (solve_cmd->parsed()) {
      Report rep;
      rep.command = "solve";
      Game g = load_game_file(game_path);
      rep.inputs["game"] = hash_hex(g.hash());
      rep.config = {{"tol", tol}, {"grid", grid}, {"method", method}};
      auto m = solve_method_from_name(method);
      if (!m) throw ParseError("unknown solve method '" + method + "'", "");
      SolveOutcome o = solve(g, *m, vopts);
      rep.result = solve_outcome_to_json(g, o);
      int code = o.status == SolveStatus::Equilibrium ? 0
                 : o.status == SolveStatus::NoEquilibrium ? 2 : 3;
      return emit(rep, code, t0);
    }

    if (verify_cmd->parsed()) {
      Report rep;
      rep.command = "verify";
      Game g = load_game_file(game_path);
      Profile s = load_profile_file(g, profile_path);
      s.check_feasible(g, tol);
      rep.inputs = {{"game", hash_hex(g.hash())}, {"profile", hash_hex(s.fingerprint())}};
      rep.config = {{"tol", tol}, {"grid", grid}, {"mode", mode}};
      VerifyReport r = mode == "nash" ? verify_nash(g, s, vopts) : verify_pairwise(g, s, vopts);
      rep.result = verify_report_to_json(g, r);
      if (approx) rep.result["approximation_factor"] = approximation_factor(g, s, vopts);
      int code = r.verdict == Verdict::Stable ? 0
                 : r.verdict == Verdict::StableAtResolution ? 4 : 2;
      return emit(rep, code, t0);
    }

    if (dyn_cmd->parsed()) {
      Report rep;
      rep.command = "dynamics";
      Game g = load_game_file(game_path);
      Profile start = start_path.empty() ? Profile::zeros(g) : load_profile_file(g, start_path);
      rep.inputs = {{"game", hash_hex(g.hash())}, {"start", hash_hex(start.fingerprint())}};
      rep.config = {{"tol", tol}, {"grid", grid}, {"seed", seed},
                    {"mode", dmode}, {"max_rounds", max_rounds}};
      DynamicsOptions dopts;
      dopts.tol = tol;
      dopts.grid = grid;
      dopts.max_rounds = max_rounds;
      Trajectory t = dmode == "concurrent" ? run_concurrent(g, start, seed, dopts)
                                           : run_random(g, start, seed, dopts);
      if (!out_path.empty()) write_file(out_path, trajectory_to_jsonl(g, t));
      rep.result = trajectory_summary_json(g, t);
      int code = 4;  // round budget exhausted or stalled short of an equilibrium
      if (t.verdict == TrajectoryVerdict::Converged) code = 0;
      if (t.verdict == TrajectoryVerdict::CycleDetected) code = 2;
      return emit(rep, code, t0);
    }

    if (opt_cmd->parsed()) {
      Report rep;
      rep.command = "optimum";
      Game g = load_game_file(game_path);
      rep.inputs["game"] = hash_hex(g.hash());
      rep.config = {{"tol", tol}, {"grid", grid}, {"method", omethod}, {"cap", cap}};
      auto m = optimum_method_from_name(omethod);
      if (!m) throw ParseError("unknown optimum method '" + omethod + "'", "");
      OptimumResult o = social_optimum(g, *m, {grid, cap, tol});
      rep.result = {{"method", o.method},
                    {"welfare", o.welfare},
                    {"profile", profile_to_json(g, o.profile)}};
      return emit(rep, 0, t0);
    }

    if (poa_cmd->parsed()) {
      Report rep;
      rep.command = "poa";
      Game g = load_game_file(game_path);
      rep.inputs["game"] = hash_hex(g.hash());
      rep.config = {{"tol", tol}, {"grid", grid}, {"method", method}, {"optimum", omethod}};
      auto m = solve_method_from_name(method);
      if (!m) throw ParseError("unknown solve method '" + method + "'", "");
      SolveOutcome o = solve(g, *m, vopts);
      rep.result["solve"] = solve_outcome_to_json(g, o);
      if (o.status != SolveStatus::Equilibrium)
        return emit(rep, o.status == SolveStatus::NoEquilibrium ? 2 : 3, t0);
      OptimumMethod om;
      if (auto known = optimum_method_from_name(omethod); known && poa_cmd->count("--optimum")) {
        om = *known;
      } else if (g.all_in_class_c0()) {
        om = OptimumMethod::TightMatching;
      } else if (g.all_min_effort() && [&] {
                   for (int e = 0; e < g.edge_count(); ++e)
                     if (!g.reward(e).scalar().is_linear()) return false;
                   return true;
                 }()) {
        om = OptimumMethod::Lp;
      } else {
        om = OptimumMethod::Grid;
      }
      OptimumResult opt = social_optimum(g, om, {grid, cap, tol});
      rep.result["optimum"] = {{"method", opt.method}, {"welfare", opt.welfare}};
      PoaResult r = price_of_anarchy(g, *o.profile, opt.profile, vopts);
      rep.result["price_of_anarchy"] = r.infinite ? json("inf") : json(r.ratio);
      return emit(rep, 0, t0);
    }

    if (dual_cmd->parsed()) {
      Report rep;
      rep.command = "dual";
      Game g = load_game_file(game_path);
      Profile s = load_profile_file(g, profile_path);
      rep.inputs = {{"game", hash_hex(g.hash())}, {"profile", hash_hex(s.fingerprint())}};
      rep.config = {{"tol", tol}, {"force", force}};
      DualCertificate c = dual_certificate(g, s, vopts, force);
      rep.result = dual_certificate_to_json(g, c);
      return emit(rep, 0, t0);
    }

    if (oracle_cmd->parsed()) {
      Report rep;
      rep.command = "oracle";
      Game g = load_game_file(game_path);
      rep.inputs["game"] = hash_hex(g.hash());
      std::string omode = mode == "pairwise" ? "equilibria" : mode;  // default
      rep.config = {{"tol", tol}, {"grid", grid}, {"cap", cap}, {"mode", omode}, {"jobs", jobs}};
      GridSpec spec{grid, cap, tol};
      if (omode == "optimum") {
        auto [p, welfare] = grid_optimum(g, spec);
        rep.result = {{"welfare", welfare}, {"profile", profile_to_json(g, p)}};
      } else {
        auto eqs = grid_equilibria(g, spec);
        json list = json::array();
        for (const auto& p : eqs)
          list.push_back({{"profile", profile_to_json(g, p)},
                          {"welfare", social_welfare(g, p)}});
        rep.result = {{"count", eqs.size()}, {"equilibria", list}};
      }
      return emit(rep, 0, t0);
    }

    if (gen_cmd->parsed()) {
      Report rep;
      rep.command = "gen";
      Game g;
      json extra = json::object();
      if (gen_name == "random") {
        auto cls = random_class_from_name(gen_class);
        if (!cls) throw ParseError("unknown random class '" + gen_class + "'", "");
        g = random_family(*cls, gen_n, density, seed);
        rep.config = {{"class", gen_class}, {"n", gen_n}, {"density", density}, {"seed", seed}};
      } else if (gen_name == "gadget-xy" || gen_name == "gadget-min") {
        if (cnf_path.empty()) throw ParseError("gadget generation needs --cnf", "");
        CnfFormula cnf = parse_dimacs(read_file(cnf_path));
        g = gen_name == "gadget-xy" ? sat_gadget_xy_sum(cnf) : sat_gadget_min(cnf, uniform);
        rep.config = {{"cnf", cnf_path}, {"uniform", uniform}};
      } else {
        std::map<std::string, double> params;
        if (eps >= 0) params["eps"] = eps;
        CanonicalInstance inst = canonical(gen_name, params);
        g = std::move(inst.game);
        rep.config = {{"name", gen_name}};
        if (eps >= 0) rep.config["eps"] = eps;
        if (inst.start) extra["start_profile"] = profile_to_json(g, *inst.start);
      }
      std::string text = save_game(g);
      if (!out_path.empty()) write_file(out_path, text);
      rep.inputs = json::object();
      rep.result = {{"game", game_to_json(g)}, {"hash", hash_hex(g.hash())}};
      for (const auto& [k, v] : extra.items()) rep.result[k] = v;
      return emit(rep, 0, t0);
    }
  } catch (const UnsupportedClassError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
