#pragma once

#include "tg/game.hpp"
#include "tg/trace.hpp"

#include <json.hpp>

#include <optional>
#include <utility>
#include <vector>

namespace tg {

// Mixture over all of `player`'s strategies (dense, one weight per strategy).
struct MixedStrategy {
  PlayerIndex player = 0;
  std::vector<Rational> weights;
};

// Correlated belief of `player` over opponent sub-profiles. Each entry holds
// the opponents' strategies in player order with `player` left out. Only
// positive weights are stored.
struct Belief {
  PlayerIndex player = 0;
  std::vector<std::pair<std::vector<StrategyIndex>, Rational>> weights;
};

// A belief with support in `opponents` under which `sigma` earns at least as
// much expected utility as every other pure strategy of `player`, or nullopt
// if none exists. Solved exactly as a linear feasibility problem.
std::optional<Belief> best_response_to_some_belief(const Game& game, PlayerIndex player,
                                                   StrategyIndex sigma, const StrategySets& opponents);

// A mixture that strictly beats `sigma` against every opponent sub-profile
// in `opponents`, or nullopt if none exists.
std::optional<MixedStrategy> mixed_dominance_certificate(const Game& game, PlayerIndex player,
                                                         StrategyIndex sigma,
                                                         const StrategySets& opponents);

// Iterated deletion of never-best-responses. Each record carries the
// dominating mixture as its certificate.
DeletionTrace rationalizable_set(const Game& game);

// Expected utility of `sigma` for `belief.player` under `belief`.
Rational expected_utility(const Game& game, const Belief& belief, StrategyIndex sigma);

// Expected utility of `mix` against the opponent sub-profile `opponents_of`
// (the full profile; the mixing player's entry is ignored).
Rational expected_utility(const Game& game, const MixedStrategy& mix, const Profile& opponents_of);

nlohmann::json to_json(const Belief& belief);
nlohmann::json to_json(const MixedStrategy& mix);

}  // namespace tg
