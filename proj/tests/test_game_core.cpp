#include <doctest.h>

#include <cmath>

#include "contrib/instances.hpp"
#include "contrib/json_io.hpp"
#include "contrib/rng.hpp"
#include "helpers.hpp"

using namespace contrib;
using namespace contrib::test;

TEST_CASE("edge_reward basics") {
  {
    Game g = single_edge(RewardSpec::weighted_sum(3));
    Profile s = Profile::zeros(g);
    s.set_effort(g, 0, 0, 1.0);
    s.set_effort(g, 1, 0, 0.5);
    CHECK(edge_reward(g, s, 0) == doctest::Approx(4.5));
  }
  {
    Game g = single_edge(RewardSpec::min_effort(ScalarFn::linear(5)), 2, 2);
    Profile s = Profile::zeros(g);
    s.set_effort(g, 0, 0, 2.0);
    s.set_effort(g, 1, 0, 1.0);
    CHECK(edge_reward(g, s, 0) == doctest::Approx(5.0));
  }
  {
    Game g = single_edge(RewardSpec::weighted_product(1));
    Profile s = Profile::zeros(g);
    s.set_effort(g, 0, 0, 1.0);
    CHECK(edge_reward(g, s, 0) == 0.0);  // f(x, 0) = 0 in C0
  }
}

TEST_CASE("node utility on the canonical triangle") {
  auto [g, start] = canonical("triangle-noeq");
  for (double a : {0.0, 0.3, 1.0}) {
    Profile s = Profile::zeros(g);
    s.set_effort(g, 0, 0, 1.0);                          // u1 on e1
    s.set_effort(g, 2, g.find_edge("e2").value(), 1.0);  // u3 on e2
    s.set_effort(g, 1, 0, a);                            // u2 puts a on e1
    CHECK(node_utility(g, s, 0) == doctest::Approx(3 + 3 * a));
  }
  Game iso;
  iso.add_node("x", 1);
  Profile empty = Profile::zeros(iso);
  CHECK(node_utility(iso, empty, 0) == 0.0);
}

TEST_CASE("welfare on canonical instances") {
  {
    auto [g, start] = canonical("path-classC", {{"eps", 0.1}});
    CHECK(social_welfare(g, *start) == doctest::Approx(2.2));
    CHECK(social_welfare_node_sum(g, *start) == doctest::Approx(2.2));
  }
  {
    auto [g, start] = canonical("triangle-noeq");
    Profile s = *start;  // s1(e1)=s2(e1)=s3(e2)=1
    CHECK(social_welfare(g, s) == doctest::Approx(18.0));
  }
  {
    Game g = single_edge(RewardSpec::weighted_product(2));
    CHECK(social_welfare(g, Profile::zeros(g)) == 0.0);
  }
}

TEST_CASE("welfare identity and exact potential on random games") {
  int checked = 0;
  for (uint64_t seed = 1; seed <= 10; ++seed) {
    for (auto cls : {RandomClass::C0Product, RandomClass::MinConcave, RandomClass::WeightedSum,
                     RandomClass::MaxConvex, RandomClass::ConcaveGeneral}) {
      Game g = random_family(cls, 6, 0.6, seed * 97 + static_cast<int>(cls));
      for (int k = 0; k < 20; ++k) {
        Profile s = random_profile(g, seed * 1000 + k);
        double w_edges = social_welfare(g, s);
        double w_nodes = social_welfare_node_sum(g, s);
        CHECK(std::fabs(w_nodes - w_edges) <= 1e-9 * (1 + w_edges));
        CHECK(potential(g, s) == doctest::Approx(w_edges / 2));
        ++checked;
      }
    }
  }
  CHECK(checked == 1000);

  // Unilateral move: potential change equals the mover's utility change.
  Rng rng(99);
  for (uint64_t seed = 1; seed <= 20; ++seed) {
    Game g = random_family(RandomClass::ConcaveGeneral, 5, 0.7, seed);
    if (g.edge_count() == 0) continue;
    Profile s = random_profile(g, seed);
    int v = static_cast<int>(rng.below(g.node_count()));
    Profile s2 = random_profile(g, seed + 500);
    Profile moved = s;
    moved.row(v) = s2.row(v);
    double dphi = potential(g, moved) - potential(g, s);
    double dw = node_utility(g, moved, v) - node_utility(g, s, v);
    CHECK(std::fabs(dphi - dw) <= 1e-9 * (1 + std::fabs(dw)));
  }
}

TEST_CASE("game json round trip") {
  for (const auto& name : canonical_names()) {
    Game g = canonical(name).game;
    Game g2 = load_game(save_game(g));
    CHECK(g2.node_count() == g.node_count());
    CHECK(g2.edge_count() == g.edge_count());
    CHECK(g2.hash() == g.hash());
  }
  Game g = random_family(RandomClass::MinConcave, 7, 0.5, 4242);
  CHECK(load_game(save_game(g)).hash() == g.hash());
}

TEST_CASE("profile json round trip") {
  auto [g, start] = canonical("noconverge");
  Profile s = *start;
  Profile s2 = load_profile(g, save_profile(g, s));
  CHECK(s2.approx_equal(s, 0.0));
}

TEST_CASE("parse errors carry a reason") {
  CHECK_THROWS_WITH_AS(
      load_game(R"({"nodes":[{"id":"a","budget":-1}],"edges":[]})"),
      doctest::Contains("negative budget"), ParseError);
  CHECK_THROWS_WITH_AS(
      load_game(R"({"nodes":[{"id":"a","budget":1},{"id":"b","budget":1}],
        "edges":[{"id":"e1","u":"a","v":"b","reward":{"type":"weighted_sum","c":1}},
                 {"id":"e2","u":"b","v":"a","reward":{"type":"weighted_sum","c":1}}]})"),
      doctest::Contains("duplicate edge"), ParseError);
  CHECK_THROWS_WITH_AS(
      load_game(R"({"nodes":[{"id":"a","budget":1},{"id":"b","budget":1}],
        "edges":[{"id":"e","u":"a","v":"b","reward":{"type":"min_effort",
          "h":{"kind":"piecewise_linear","points":[[0,0],[1,2],[0.5,1]]}}}]})"),
      doctest::Contains("non-monotone piecewise breakpoints"), ParseError);
  CHECK_THROWS_AS(
      load_game(R"({"nodes":[{"id":"a","budget":1}],
        "edges":[{"id":"e","u":"a","v":"a","reward":{"type":"weighted_sum","c":1}}]})"),
      ParseError);
  CHECK_THROWS_AS(load_game("{"), ParseError);
}

TEST_CASE("uniform budget detection and feasibility checks") {
  Game g = path({RewardSpec::weighted_sum(1), RewardSpec::weighted_sum(2)}, {1, 1, 1});
  CHECK(g.uniform_budgets());
  Game h = path({RewardSpec::weighted_sum(1)}, {1, 2});
  CHECK_FALSE(h.uniform_budgets());

  Profile s = Profile::zeros(g);
  s.set_effort(g, 1, 0, 0.7);
  s.set_effort(g, 1, 1, 0.7);
  CHECK_THROWS_AS(s.check_feasible(g), InfeasibleError);
}
