#include "tg/domination.hpp"

#include "tg/errors.hpp"

#include <algorithm>
#include <random>

namespace tg {
namespace {

struct Range {
  Rational worst;
  Rational best;
};

Range payoff_range(const Game& game, PlayerIndex player, StrategyIndex own,
                   const StrategySets& opponents) {
  const auto profiles = opponent_profiles(game, player, own, opponents);
  Range range{game.payoff(profiles.front(), player), game.payoff(profiles.front(), player)};
  for (const auto& p : profiles) {
    const auto& u = game.payoff(p, player);
    if (u < range.worst) range.worst = u;
    if (u > range.best) range.best = u;
  }
  return range;
}

void check_player(const Game& game, PlayerIndex player) {
  if (player >= game.num_players()) throw PreconditionError("player index out of range");
}

void check_strategy(const Game& game, PlayerIndex player, StrategyIndex s) {
  if (s >= game.num_strategies(player)) {
    throw PreconditionError("strategy " + std::to_string(s) + " does not belong to player " +
                            std::to_string(player));
  }
}

// Ranges of every strategy of every player against `current`.
std::vector<std::vector<Range>> all_ranges(const Game& game, const Restriction& current) {
  std::vector<std::vector<Range>> ranges(game.num_players());
  for (PlayerIndex i = 0; i < game.num_players(); ++i) {
    for (StrategyIndex s = 0; s < game.num_strategies(i); ++s) {
      ranges[i].push_back(payoff_range(game, i, s, current.sets()));
    }
  }
  return ranges;
}

// Strategies in `current` dominated by some member of `dominators`, each
// paired with the dominator holding the highest worst case (lowest index on
// ties).
std::vector<DeletionRecord> dominated_strategies(const Game& game, const Restriction& current,
                                                 const StrategySets& dominators) {
  const auto ranges = all_ranges(game, current);
  std::vector<DeletionRecord> out;
  for (PlayerIndex i = 0; i < game.num_players(); ++i) {
    StrategyIndex strongest = dominators[i].front();
    for (auto d : dominators[i]) {
      if (ranges[i][d].worst > ranges[i][strongest].worst) strongest = d;
    }
    for (auto s : current.of(i)) {
      if (ranges[i][strongest].worst > ranges[i][s].best) {
        out.push_back(DeletionRecord{i, s, strongest, {}});
      }
    }
  }
  return out;
}

Restriction remove(const Game& game, const Restriction& current,
                   const std::vector<DeletionRecord>& deleted) {
  StrategySets sets = current.sets();
  for (const auto& d : deleted) {
    auto& set = sets[d.player];
    set.erase(std::remove(set.begin(), set.end(), d.strategy), set.end());
  }
  return Restriction(game, std::move(sets));
}

DeletionTrace run_maximal(const Game& game, bool restricted_dominators) {
  DeletionTrace trace{Restriction::full(game), {}};
  const StrategySets full = game.full_sets();
  while (true) {
    const Restriction& current = trace.survivors();
    auto deleted = dominated_strategies(game, current, restricted_dominators ? current.sets() : full);
    if (deleted.empty()) break;
    Restriction next = remove(game, current, deleted);
    trace.rounds.push_back(DeletionRound{current, std::move(deleted), std::move(next)});
  }
  return trace;
}

}  // namespace

bool minimax_dominates(const Game& game, PlayerIndex player, StrategyIndex dominator,
                       StrategyIndex dominated, const StrategySets& opponents) {
  check_player(game, player);
  check_strategy(game, player, dominator);
  check_strategy(game, player, dominated);
  const Range top = payoff_range(game, player, dominator, opponents);
  const Range bottom = payoff_range(game, player, dominated, opponents);
  return top.worst > bottom.best;
}

MaximinReport maximin(const Game& game, PlayerIndex player, const StrategySets& opponents) {
  check_player(game, player);
  MaximinReport report{player, opponents, {}, 0};
  for (StrategyIndex s = 0; s < game.num_strategies(player); ++s) {
    Range range = payoff_range(game, player, s, opponents);
    if (s == 0 || range.worst > report.value) {
      report.value = std::move(range.worst);
      report.argmax_strategy = s;
    }
  }
  return report;
}

DeletionStep nsd_step(const Game& game, const Restriction& current) {
  auto deleted = dominated_strategies(game, current, game.full_sets());
  Restriction next = deleted.empty() ? current : remove(game, current, deleted);
  return DeletionStep{std::move(next), std::move(deleted)};
}

DeletionTrace nsd_fixpoint(const Game& game) { return run_maximal(game, false); }

DeletionTrace nsd_fixpoint_restricted_dominators(const Game& game) { return run_maximal(game, true); }

DeletionPolicy seeded_policy(std::uint64_t seed) {
  auto rng = std::make_shared<std::mt19937_64>(seed);
  return [rng](const std::vector<DeletionRecord>& candidates) {
    std::vector<std::size_t> chosen;
    std::bernoulli_distribution coin(0.5);
    for (std::size_t k = 0; k < candidates.size(); ++k) {
      if (coin(*rng)) chosen.push_back(k);
    }
    if (chosen.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
      chosen.push_back(pick(*rng));
    }
    return chosen;
  };
}

DeletionTrace nsd_fixpoint_with_order(const Game& game, const DeletionPolicy& policy) {
  DeletionTrace trace{Restriction::full(game), {}};
  const StrategySets full = game.full_sets();
  while (true) {
    const Restriction& current = trace.survivors();
    auto candidates = dominated_strategies(game, current, full);
    if (candidates.empty()) break;
    auto chosen = policy(candidates);
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
    if (chosen.empty() || chosen.back() >= candidates.size()) {
      throw PreconditionError("deletion policy must choose a nonempty subset of the dominated strategies");
    }
    std::vector<DeletionRecord> deleted;
    for (auto k : chosen) deleted.push_back(candidates[k]);
    Restriction next = remove(game, current, deleted);
    trace.rounds.push_back(DeletionRound{current, std::move(deleted), std::move(next)});
  }
  return trace;
}

DeletionTrace nsd_fixpoint_with_order(const Game& game, std::uint64_t seed) {
  return nsd_fixpoint_with_order(game, seeded_policy(seed));
}

namespace {

std::vector<Profile> ir_filter(const Game& game, const Restriction& z, bool full_deviations) {
  const StrategySets full = game.full_sets();
  std::vector<Rational> threshold;
  for (PlayerIndex i = 0; i < game.num_players(); ++i) {
    const auto& candidates = full_deviations ? full[i] : z.of(i);
    std::optional<Rational> best;
    for (auto s : candidates) {
      Range range = payoff_range(game, i, s, z.sets());
      if (!best || range.worst > *best) best = std::move(range.worst);
    }
    threshold.push_back(*best);
  }
  std::vector<Profile> out;
  for (auto& profile : z.profiles()) {
    bool ok = true;
    for (PlayerIndex i = 0; i < game.num_players() && ok; ++i) {
      ok = game.payoff(profile, i) >= threshold[i];
    }
    if (ok) out.push_back(std::move(profile));
  }
  return out;
}

}  // namespace

std::vector<Profile> ir_set(const Game& game) { return ir_filter(game, Restriction::full(game), true); }

std::vector<Profile> ir_relative(const Game& game, const Restriction& z) {
  return ir_filter(game, z, false);
}

std::vector<Profile> ir_prime(const Game& game, const Restriction& z) { return ir_filter(game, z, true); }

ZSetCheck check_z_sets(const Game& game, const Profile& profile, const Restriction& z) {
  game.check_profile(profile);
  if (z.num_players() != game.num_players()) return {false, "restriction does not match the game"};
  for (PlayerIndex i = 0; i < game.num_players(); ++i) {
    if (!z.contains(i, profile[i])) {
      return {false, "condition 1: strategy " + game.strategy_name(i, profile[i]) + " of player " +
                         game.player_name(i) + " is not in Z_" + std::to_string(i)};
    }
  }
  for (PlayerIndex i = 0; i < game.num_players(); ++i) {
    Rational strongest_worst;
    StrategyIndex strongest = 0;
    for (StrategyIndex s = 0; s < game.num_strategies(i); ++s) {
      Range range = payoff_range(game, i, s, z.sets());
      if (s == 0 || range.worst > strongest_worst) {
        strongest_worst = std::move(range.worst);
        strongest = s;
      }
    }
    for (auto s : z.of(i)) {
      const Range range = payoff_range(game, i, s, z.sets());
      if (range.best < strongest_worst) {
        return {false, "condition 2: " + game.strategy_name(i, s) + " of player " +
                           game.player_name(i) + " is minimax dominated by " +
                           game.strategy_name(i, strongest) + " w.r.t. Z_-" + std::to_string(i)};
      }
    }
  }
  return {};
}

std::optional<Restriction> minimax_rationalizable(const Game& game, const Profile& profile) {
  game.check_profile(profile);
  const auto trace = nsd_fixpoint(game);
  if (!trace.survivors().contains(profile)) return std::nullopt;
  return trace.survivors();
}

}  // namespace tg
