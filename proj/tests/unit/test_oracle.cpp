#include "support/generators.hpp"
#include "tg/domination.hpp"
#include "tg/oracle.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace tg;

TEST_CASE("oracle matches the library on fixtures and random games") {
  std::vector<Game> games;
  for (const char* name : {"pd.json", "ex2.json", "reverse_traveler_10.json"}) {
    std::ifstream in(std::string(TG_FIXTURES) + "/" + name);
    std::ostringstream buf;
    buf << in.rdbuf();
    games.push_back(parse_game(buf.str()));
  }
  testing::Rng rng(97);
  for (int t = 0; t < 100; ++t) games.push_back(testing::random_game(rng));
  for (const auto& g : games) {
    auto rounds = oracle::nsd_rounds(g);
    auto trace = nsd_fixpoint(g);
    CHECK(rounds.size() == trace.rounds.size() + 2);
    CHECK(rounds.back() == trace.survivors().sets());
    for (std::size_t k = 0; k + 1 < rounds.size(); ++k) CHECK(rounds[k] == trace.survivors_at(k).sets());
    CHECK(oracle::individually_rational(g, g.full_sets(), g.full_sets()) == ir_set(g));
    CHECK(oracle::individually_rational(g, rounds.back(), g.full_sets()) == ir_prime(g, trace.survivors()));
  }
}

TEST_CASE("oracle on the worked examples") {
  auto rounds = oracle::nsd_rounds(builtin::reverse_traveler(10, Rational(1, 2)));
  CHECK(rounds.size() == 11);
  CHECK(rounds.back() == StrategySets{{9}, {9}});
  Game ex2 = builtin::ex2();
  CHECK(oracle::individually_rational(ex2, ex2.full_sets(), ex2.full_sets()).size() == 3);
  auto report = oracle::report(builtin::pd(1, 2));
  CHECK(report["nsd"]["rounds"] == 0);
  CHECK(report["ir"].size() == 2);
}
