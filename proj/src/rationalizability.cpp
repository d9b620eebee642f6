#include "tg/rationalizability.hpp"

#include "tg/errors.hpp"
#include "tg/lp.hpp"

namespace tg {
namespace {

std::vector<StrategyIndex> drop_player(const Profile& profile, PlayerIndex player) {
  std::vector<StrategyIndex> out;
  for (std::size_t j = 0; j < profile.size(); ++j) {
    if (j != player) out.push_back(profile[j]);
  }
  return out;
}

Profile insert_player(const std::vector<StrategyIndex>& others, PlayerIndex player, StrategyIndex own) {
  Profile profile(others.begin(), others.end());
  profile.insert(profile.begin() + static_cast<std::ptrdiff_t>(player), own);
  return profile;
}

void check_query(const Game& game, PlayerIndex player, StrategyIndex sigma) {
  if (player >= game.num_players()) throw PreconditionError("player index out of range");
  if (sigma >= game.num_strategies(player)) {
    throw PreconditionError("strategy does not belong to player " + std::to_string(player));
  }
}

}  // namespace

std::optional<Belief> best_response_to_some_belief(const Game& game, PlayerIndex player,
                                                   StrategyIndex sigma, const StrategySets& opponents) {
  check_query(game, player, sigma);
  const auto support = opponent_profiles(game, player, sigma, opponents);
  const std::size_t vars = support.size();

  std::vector<lp::Constraint> constraints;
  constraints.push_back({std::vector<Rational>(vars, Rational(1)), lp::Relation::kEqual, 1});
  for (StrategyIndex alt = 0; alt < game.num_strategies(player); ++alt) {
    if (alt == sigma) continue;
    std::vector<Rational> row(vars);
    for (std::size_t k = 0; k < vars; ++k) {
      Profile deviated = support[k];
      deviated[player] = alt;
      row[k] = game.payoff(support[k], player) - game.payoff(deviated, player);
    }
    constraints.push_back({std::move(row), lp::Relation::kGreaterEqual, 0});
  }

  const auto solution = lp::find_feasible_point(vars, constraints);
  if (!solution) return std::nullopt;
  Belief belief{player, {}};
  for (std::size_t k = 0; k < vars; ++k) {
    if ((*solution)[k] > 0) belief.weights.emplace_back(drop_player(support[k], player), (*solution)[k]);
  }
  return belief;
}

std::optional<MixedStrategy> mixed_dominance_certificate(const Game& game, PlayerIndex player,
                                                         StrategyIndex sigma,
                                                         const StrategySets& opponents) {
  check_query(game, player, sigma);
  const auto columns = opponent_profiles(game, player, sigma, opponents);
  const std::size_t vars = game.num_strategies(player);

  // Unnormalized weights v >= 0 with sum_s v_s (u(s,t) - u(sigma,t)) >= 1 for
  // every t; any strict dominator rescales into one of these and back.
  std::vector<lp::Constraint> constraints;
  for (const auto& column : columns) {
    std::vector<Rational> row(vars);
    for (StrategyIndex s = 0; s < vars; ++s) {
      Profile alt = column;
      alt[player] = s;
      row[s] = game.payoff(alt, player) - game.payoff(column, player);
    }
    constraints.push_back({std::move(row), lp::Relation::kGreaterEqual, 1});
  }

  const auto solution = lp::find_feasible_point(vars, constraints);
  if (!solution) return std::nullopt;
  Rational total = 0;
  for (const auto& v : *solution) total += v;
  MixedStrategy mix{player, {}};
  for (const auto& v : *solution) mix.weights.push_back(v / total);
  return mix;
}

DeletionTrace rationalizable_set(const Game& game) {
  DeletionTrace trace{Restriction::full(game), {}};
  while (true) {
    const Restriction& current = trace.survivors();
    std::vector<DeletionRecord> deleted;
    for (PlayerIndex i = 0; i < game.num_players(); ++i) {
      for (auto s : current.of(i)) {
        if (best_response_to_some_belief(game, i, s, current.sets())) continue;
        DeletionRecord record{i, s, std::nullopt, {}};
        if (auto mix = mixed_dominance_certificate(game, i, s, current.sets())) {
          record.certificate = std::move(mix->weights);
        }
        deleted.push_back(std::move(record));
      }
    }
    if (deleted.empty()) break;
    StrategySets sets = current.sets();
    for (const auto& d : deleted) std::erase(sets[d.player], d.strategy);
    Restriction next(game, std::move(sets));
    trace.rounds.push_back(DeletionRound{current, std::move(deleted), std::move(next)});
  }
  return trace;
}

Rational expected_utility(const Game& game, const Belief& belief, StrategyIndex sigma) {
  Rational total = 0;
  for (const auto& [others, weight] : belief.weights) {
    total += weight * game.payoff(insert_player(others, belief.player, sigma), belief.player);
  }
  return total;
}

Rational expected_utility(const Game& game, const MixedStrategy& mix, const Profile& opponents_of) {
  Rational total = 0;
  Profile profile = opponents_of;
  for (StrategyIndex s = 0; s < mix.weights.size(); ++s) {
    if (mix.weights[s] == 0) continue;
    profile[mix.player] = s;
    total += mix.weights[s] * game.payoff(profile, mix.player);
  }
  return total;
}

nlohmann::json to_json(const Belief& belief) {
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& [others, weight] : belief.weights) {
    weights.push_back({{"opponents", others}, {"weight", to_string(weight)}});
  }
  return {{"player", belief.player}, {"weights", std::move(weights)}};
}

nlohmann::json to_json(const MixedStrategy& mix) {
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& w : mix.weights) weights.push_back(to_string(w));
  return {{"player", mix.player}, {"weights", std::move(weights)}};
}

}  // namespace tg
