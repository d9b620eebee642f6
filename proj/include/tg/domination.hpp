#pragma once

#include "tg/game.hpp"
#include "tg/trace.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace tg {

// True iff the worst case of `dominator` strictly beats the best case of
// `dominated` when the other players are confined to `opponents` (the
// entry for `player` is ignored). Throws PreconditionError on an empty
// opponent set or strategies that do not belong to `player`.
bool minimax_dominates(const Game& game, PlayerIndex player, StrategyIndex dominator,
                       StrategyIndex dominated, const StrategySets& opponents);

struct MaximinReport {
  PlayerIndex player = 0;
  StrategySets opponents;
  Rational value;
  StrategyIndex argmax_strategy = 0;
};

// Pure-strategy maximin of `player` against `opponents`, maximizing over
// every strategy of the player. Ties go to the lowest index.
MaximinReport maximin(const Game& game, PlayerIndex player, const StrategySets& opponents);

struct DeletionStep {
  Restriction next;
  std::vector<DeletionRecord> deleted;
};

// One round of maximal deletion: every strategy in `current` that some
// strategy of the full game minimax-dominates w.r.t. `current` goes. The
// recorded dominator is the player's maximin strategy against `current`.
DeletionStep nsd_step(const Game& game, const Restriction& current);

// Iterates nsd_step from the full game to its fixpoint.
DeletionTrace nsd_fixpoint(const Game& game);

// Same fixpoint, but only strategies still alive may act as dominators.
DeletionTrace nsd_fixpoint_restricted_dominators(const Game& game);

// Given the currently dominated strategies, returns the indices (into that
// list) to delete this round. Must pick a nonempty subset.
using DeletionPolicy = std::function<std::vector<std::size_t>(const std::vector<DeletionRecord>&)>;

DeletionPolicy seeded_policy(std::uint64_t seed);

// Deletes policy-chosen subsets of the dominated strategies until none
// remain dominated. Throws PreconditionError if the policy misbehaves.
DeletionTrace nsd_fixpoint_with_order(const Game& game, const DeletionPolicy& policy);
DeletionTrace nsd_fixpoint_with_order(const Game& game, std::uint64_t seed);

// Individually rational profiles of the whole game.
std::vector<Profile> ir_set(const Game& game);

// IR(Z, game): profiles of z meeting each player's maximin inside the subgame z.
std::vector<Profile> ir_relative(const Game& game, const Restriction& z);

// IR'(Z, game): as ir_relative, but the maximizing strategy ranges over the
// player's full strategy set.
std::vector<Profile> ir_prime(const Game& game, const Restriction& z);

struct ZSetCheck {
  bool ok = true;
  std::string failure;
};

// Checks the two conditions defining minimax rationalizability of `profile`
// with witness sets `z`: each profile entry lies in its set, and no member
// of Z_i has a best case (over Z_-i) below any strategy's worst case.
ZSetCheck check_z_sets(const Game& game, const Profile& profile, const Restriction& z);

// Witness sets NSD^inf when the profile survives deletion, nullopt otherwise.
std::optional<Restriction> minimax_rationalizable(const Game& game, const Profile& profile);

}  // namespace tg
