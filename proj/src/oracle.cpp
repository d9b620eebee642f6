#include "tg/oracle.hpp"

namespace tg::oracle {

namespace {

// All profiles of a product, player 0 most significant.
std::vector<Profile> product(const StrategySets& sets) {
  std::vector<Profile> out;
  std::vector<std::size_t> digit(sets.size(), 0);
  while (true) {
    Profile p(sets.size());
    for (std::size_t i = 0; i < sets.size(); ++i) p[i] = sets[i][digit[i]];
    out.push_back(p);
    std::size_t i = sets.size();
    while (i > 0) {
      --i;
      if (++digit[i] < sets[i].size()) break;
      digit[i] = 0;
      if (i == 0) return out;
    }
    if (sets.empty()) return out;
  }
}

StrategySets with_own(StrategySets sets, PlayerIndex player, StrategyIndex s) {
  sets[player] = {s};
  return sets;
}

Rational worst(const Game& g, PlayerIndex i, StrategyIndex s, const StrategySets& sets) {
  auto ps = product(with_own(sets, i, s));
  Rational v = g.utility(ps[0], i);
  for (const auto& p : ps) v = std::min(v, g.utility(p, i));
  return v;
}

Rational best(const Game& g, PlayerIndex i, StrategyIndex s, const StrategySets& sets) {
  auto ps = product(with_own(sets, i, s));
  Rational v = g.utility(ps[0], i);
  for (const auto& p : ps) v = std::max(v, g.utility(p, i));
  return v;
}

}  // namespace

std::vector<StrategySets> nsd_rounds(const Game& game) {
  std::vector<StrategySets> rounds{game.full_sets()};
  while (true) {
    const StrategySets& cur = rounds.back();
    StrategySets next(cur.size());
    for (PlayerIndex i = 0; i < cur.size(); ++i) {
      for (StrategyIndex s : cur[i]) {
        bool dominated = false;
        for (StrategyIndex t = 0; t < game.num_strategies(i) && !dominated; ++t) {
          dominated = worst(game, i, t, cur) > best(game, i, s, cur);
        }
        if (!dominated) next[i].push_back(s);
      }
    }
    bool same = next == cur;
    rounds.push_back(std::move(next));
    if (same) return rounds;
  }
}

std::vector<Profile> individually_rational(const Game& game, const StrategySets& sets,
                                           const StrategySets& deviations) {
  std::vector<Rational> level;
  for (PlayerIndex i = 0; i < sets.size(); ++i) {
    Rational v = worst(game, i, deviations[i][0], sets);
    for (StrategyIndex t : deviations[i]) v = std::max(v, worst(game, i, t, sets));
    level.push_back(v);
  }
  std::vector<Profile> out;
  for (const auto& p : product(sets)) {
    bool ok = true;
    for (PlayerIndex i = 0; i < p.size(); ++i) ok = ok && game.utility(p, i) >= level[i];
    if (ok) out.push_back(p);
  }
  return out;
}

nlohmann::json report(const Game& game) {
  auto rounds = nsd_rounds(game);
  const auto& fix = rounds.back();
  nlohmann::json ir = nlohmann::json::array();
  for (const auto& p : individually_rational(game, game.full_sets(), game.full_sets())) ir.push_back(p);
  nlohmann::json ir_nsd = nlohmann::json::array();
  for (const auto& p : individually_rational(game, fix, game.full_sets())) ir_nsd.push_back(p);
  return {{"nsd", {{"rounds", rounds.size() - 2}, {"survivors", fix}}},
          {"ir", std::move(ir)},
          {"ir_prime_nsd", std::move(ir_nsd)}};
}

}  // namespace tg::oracle
