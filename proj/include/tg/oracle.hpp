#pragma once

#include "tg/game.hpp"

#include <json.hpp>

#include <vector>

// Brute-force recomputations for cross-checking. Nothing here shares code
// with the deletion or IR routines; everything is plain enumeration.
namespace tg::oracle {

// Survivor sets after 0, 1, ... rounds of maximal minimax deletion, up to
// and including the fixpoint (so the last two entries are equal).
std::vector<StrategySets> nsd_rounds(const Game& game);

// Profiles of the product of `sets` where every player gets at least
// max over `deviations`_i of the min over the opponents' part of `sets`.
// ir_set: sets = deviations = full; IR(Z): both Z; IR'(Z): deviations full.
std::vector<Profile> individually_rational(const Game& game, const StrategySets& sets,
                                           const StrategySets& deviations);

// {"nsd": {"rounds": n, "survivors": ...}, "ir": [...]} for the CLI.
nlohmann::json report(const Game& game);

}  // namespace tg::oracle
