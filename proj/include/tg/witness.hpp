#pragma once

#include "tg/game.hpp"
#include "tg/kripke.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace tg {

// Tie-breaking order for the extremal-response choices in the constructions.
// The chosen element is the maximum of the tied set under the order;
// kLexicographic compares profiles by player, then strategy index.
enum class TotalOrder { kLexicographic, kReverseLexicographic };

// True iff `a` is strictly below `b` under `order`.
bool precedes(TotalOrder order, const Profile& a, const Profile& b);

struct TaggedState {
  enum class Kind { kW0, kWi, kLifted, kFlat };
  Kind kind = Kind::kFlat;
  // Deviating player for kWi.
  PlayerIndex deviator = 0;
  Profile profile;
  // For kLifted: the base state paired with `profile`, and whether that base
  // state was added to give every profile a self-believing state.
  std::optional<StateIndex> base_state;
  bool augmented = false;
};

struct Witness {
  CounterfactualStructure structure;
  StateIndex designated = 0;
  std::vector<TaggedState> tags;
};

// Counterfactual structure in which `profile` is played under common
// counterfactual belief of rationality. States are W0 = Z x {0} (everyone
// believes the opponents play what is best for them) and, per player i,
// Wi = (Z_-i x Sigma_i) x {i}, reached when i deviates and believes the
// worst. Throws PreconditionError if `z` fails check_z_sets; throws
// std::logic_error if the result does not verify.
Witness build_ccbr_witness(const Game& game, const Profile& profile, const Restriction& z,
                           TotalOrder order = TotalOrder::kLexicographic);

// As build_ccbr_witness, with every player certain of the designated state
// there, so KW holds as well. Requires `profile` in ir_prime(game, z).
Witness build_kw_witness(const Game& game, const Profile& profile, const Restriction& z,
                         TotalOrder order = TotalOrder::kLexicographic);

// One state per profile, self point-mass beliefs, and deviations answered by
// the worst response over the full game. KW & play(profile) & CB RAT hold at
// the designated state. Requires `profile` in ir_set(game).
Witness build_ir_witness(const Game& game, const Profile& profile,
                         TotalOrder order = TotalOrder::kLexicographic);

struct LiftResult {
  CounterfactualStructure structure;
  // state_map[w] is the lifted copy (s(w), w) of base state w.
  std::vector<StateIndex> state_map;
  std::vector<TaggedState> tags;
};

// Lifts a probability structure (the closest-state table of `base` is
// ignored) to a strongly appropriate counterfactual structure over
// Sigma x Omega that respects unilateral deviations. Base formulas without
// counterfactual operators keep their truth value at state_map[w] when the
// base is read with classical rationality. Throws PreconditionError when
// `base` violates P1 or P2.
LiftResult lift_unilateral(const CounterfactualStructure& base);

// Same, for a plain probability structure given by its strategy map and
// beliefs[player][state].
LiftResult lift_unilateral(const Game& game, std::vector<Profile> strategy_map,
                           std::vector<std::vector<Distribution>> beliefs);

nlohmann::json sidecar_json(const Witness& witness);
nlohmann::json to_json(const TaggedState& tag);

}  // namespace tg
