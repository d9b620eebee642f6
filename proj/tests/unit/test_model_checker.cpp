#include "support/generators.hpp"
#include "tg/domination.hpp"
#include "tg/model_checker.hpp"
#include "tg/witness.hpp"

#include <doctest.h>

#include <set>

using namespace tg;

namespace {

bool subset(const StateSet& a, const StateSet& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] && !b[k]) return false;
  }
  return true;
}

StateSet meet(StateSet a, const StateSet& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = a[k] && b[k];
  return a;
}

// Direct reading of CB: intersect E^k(event) for k = 1, 2, ... until the
// sequence of sets repeats.
StateSet common_belief_by_powers(const ModelChecker& mc, const StateSet& event) {
  std::set<StateSet> seen;
  StateSet power = mc.everyone_believes(event);
  StateSet all(event.size(), true);
  while (seen.insert(power).second) {
    all = meet(all, power);
    power = mc.everyone_believes(power);
  }
  return all;
}

}  // namespace

TEST_CASE("rationality at the pd witness") {
  Game pd = builtin::pd(1, 2);
  auto w = build_ccbr_witness(pd, {0, 0}, Restriction::full(pd));
  ModelChecker mc(w.structure);
  CHECK(mc.rat_holds(w.designated, 0));
  CHECK(mc.rat_holds(w.designated, 1));
  CHECK(mc.satisfies(w.designated, parse_formula("RAT_1 & play(C, C)", pd)));

  // With unilateral deviations and point beliefs, defection pays.
  auto lifted = lift_unilateral(pd, {{0, 0}}, {{Distribution::point(0)}, {Distribution::point(0)}});
  CHECK_FALSE(rat_holds(lifted.structure, lifted.state_map[0], 0));
}

TEST_CASE("both forms of rationality agree") {
  testing::Rng rng(53);
  for (int t = 0; t < 200; ++t) {
    Game g = testing::random_game(rng);
    auto m = testing::random_structure(rng, g);
    ModelChecker mc(m);
    for (StateIndex w = 0; w < m.num_states(); ++w) {
      for (PlayerIndex i = 0; i < g.num_players(); ++i) {
        CHECK(mc.rat_holds(w, i) == mc.rat_holds_via_closest(w, i));
        StrategyIndex own = m.strategy(w, i);
        CHECK(mc.satisfies(w, fm::believes(i, fm::play(i, own))));
      }
    }
  }
}

TEST_CASE("single-strategy games") {
  Game g = Game::from_function({"A", "B"}, {{"x"}, {"y"}}, [](const Profile&) { return std::vector<Rational>{3, 1}; });
  testing::Rng rng(59);
  auto m = testing::random_structure(rng, g, {5, 0.0, false, 0.0});
  ModelChecker mc(m);
  for (StateIndex w = 0; w < m.num_states(); ++w) {
    CHECK(mc.rat_holds(w, 0));
    auto r = mc.ccbr_check(w);
    CHECK(r.holds);
    CHECK(r.stabilization_k == 1u);
  }
}

TEST_CASE("common belief") {
  Game pd = builtin::pd(1, 2);
  auto ir = build_ir_witness(pd, {0, 0});
  ModelChecker mc(ir.structure);
  CHECK(members(mc.extension(fm::common_belief(fm::truth()))) == std::vector<StateIndex>{0, 1, 2, 3});
  CHECK(mc.satisfies(ir.designated, fm::common_belief(fm::rat_all())));
  CHECK(mc.satisfies(ir.designated, parse_formula("KW & CB RAT", pd)));

  testing::Rng rng(61);
  for (int t = 0; t < 150; ++t) {
    Game g = testing::random_game(rng);
    auto m = testing::random_structure(rng, g, {8, 0.2, false, 0.3});
    ModelChecker check(m);
    Formula phi = testing::random_formula(rng, g, {2, true, true});
    const StateSet& event = check.extension(phi);
    StateSet cb = check.common_belief(event);
    CHECK(check.last_fixpoint_iterations() <= m.num_states());
    CHECK(cb == common_belief_by_powers(check, event));
    CHECK(cb == check.extension(fm::common_belief(phi)));
    StateSet cbs = check.common_cf_belief(event);
    CHECK(check.last_fixpoint_iterations() <= m.num_states());
    CHECK(subset(cbs, check.everyone_cf_believes(event)));
  }
}

TEST_CASE("ccbr at the reverse traveler witness") {
  Game rt = builtin::reverse_traveler(10, Rational(1, 2));
  auto z = nsd_fixpoint(rt).survivors();
  auto w = build_ccbr_witness(rt, {9, 9}, z);
  CHECK(ccbr_check(w.structure, w.designated).holds);

  testing::Rng rng(67);
  for (int t = 0; t < 100; ++t) {
    auto m = testing::random_structure(rng, rt, {12, 0.2, false, 0.3});
    ModelChecker mc(m);
    for (StateIndex s = 0; s < m.num_states(); ++s) {
      for (PlayerIndex i = 0; i < 2; ++i) {
        if (m.strategy(s, i) == 0) CHECK_FALSE(mc.ccbr_check(s).holds);
      }
    }
  }
}

TEST_CASE("validities on random structures") {
  testing::Rng rng(71);
  for (int t = 0; t < 150; ++t) {
    Game g = testing::random_game(rng);
    auto m = testing::random_structure(rng, g, {10, 0.3, t % 2 == 0, 0.3});
    ModelChecker mc(m);
    Formula phi = testing::random_formula(rng, g, {2, true, true});
    for (PlayerIndex i = 0; i < g.num_players(); ++i) {
      auto k = fm::knows(i, phi);
      CHECK(subset(mc.extension(k), mc.extension(fm::believes(i, k))));
      CHECK(subset(mc.extension(k), mc.extension(fm::believes(i, phi))));
      for (StateIndex a = 0; a < m.num_states(); ++a) {
        for (StateIndex b = 0; b < m.num_states(); ++b) {
          if (m.belief(i, a) == m.belief(i, b)) CHECK(mc.extension(k)[a] == mc.extension(k)[b]);
        }
      }
    }
    CHECK(subset(mc.kw_extension(), mc.kr_extension()));
    CHECK(subset(mc.kr_extension(), mc.ks_extension()));

    auto weak = mc.rationality_levels(false);
    auto strong = mc.rationality_levels(true);
    for (std::size_t lv = 0; lv + 1 < strong.size(); ++lv) {
      for (PlayerIndex i = 0; i < g.num_players(); ++i) {
        CHECK(subset(strong[lv + 1][i], strong[lv][i]));
        CHECK(strong[lv][i] == mc.extension(fm::strong_rat(lv, i)));
      }
    }
    for (std::size_t lv = 0; lv + 1 < weak.size(); ++lv) {
      StateSet all = mc.extension(fm::weak_rat(lv));
      CHECK(subset(mc.extension(fm::weak_rat(lv + 1)), all));
      for (PlayerIndex i = 0; i < g.num_players(); ++i) {
        CHECK(weak[lv][i] == mc.extension(fm::weak_rat(lv, i)));
        CHECK(subset(weak[lv][i], mc.believes(i, weak[lv][i])));
        CHECK(subset(mc.extension(fm::weak_rat(lv + 1)), mc.believes(i, all)));
      }
    }
  }
}

// Level-k weak rationality need not be believed at level k: everyone is
// rational here, but player 1 believes player 2 is playing C, which is not
// rational for player 2 when deviations are unilateral.
TEST_CASE("weak level one is not believed at level one") {
  Game pd = builtin::pd(1, 2);
  auto lifted = lift_unilateral(pd, {{1, 1}, {1, 0}},
                                {{Distribution::point(1), Distribution::point(1)},
                                 {Distribution::point(0), Distribution::point(1)}});
  ModelChecker mc(lifted.structure);
  StateIndex w = lifted.state_map[0];
  StateSet level1 = mc.extension(fm::weak_rat(1));
  CHECK(level1[w]);
  CHECK_FALSE(mc.believes(0, level1)[w]);
  CHECK(mc.believes(0, mc.extension(fm::weak_rat(0)))[w]);
}

TEST_CASE("common belief of rationality is the limit of the weak tower") {
  testing::Rng rng(73);
  for (int t = 0; t < 100; ++t) {
    Game g = testing::random_game(rng);
    auto m = testing::random_structure(rng, g, {10, 0.3, false, 0.4});
    ModelChecker mc(m);
    auto weak = mc.rationality_levels(false);
    StateSet limit(m.num_states(), true);
    for (const auto& level : weak) {
      for (const auto& per_player : level) limit = meet(limit, per_player);
    }
    CHECK(mc.extension(fm::common_belief(fm::rat_all())) == limit);
  }
}

TEST_CASE("surviving the strong tower means surviving deletion") {
  testing::Rng rng(79);
  for (int t = 0; t < 100; ++t) {
    Game g = testing::random_game(rng);
    auto trace = nsd_fixpoint(g);
    auto m = testing::random_structure(rng, g, {12, 0.3, t % 3 == 0, 0.4});
    ModelChecker mc(m);
    auto strong = mc.rationality_levels(true);
    for (std::size_t k = 0; k < strong.size(); ++k) {
      for (PlayerIndex i = 0; i < g.num_players(); ++i) {
        for (StateIndex w : members(strong[k][i])) CHECK(trace.survivors_at(k).contains(i, m.strategy(w, i)));
      }
    }
  }
}
