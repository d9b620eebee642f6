#pragma once

#include "tg/game.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tg {

using StateIndex = std::size_t;

// Finite probability distribution over states. Stores only positive
// weights, sorted by state; the weights sum to exactly 1.
class Distribution {
 public:
  using Entry = std::pair<StateIndex, Rational>;

  Distribution() = default;

  // Merges repeated states and drops zeros. Throws StructuralError on a
  // negative weight or when the weights do not sum to 1.
  explicit Distribution(std::vector<Entry> weights);

  static Distribution point(StateIndex state);

  const std::vector<Entry>& entries() const noexcept { return entries_; }
  std::vector<StateIndex> support() const;
  Rational weight(StateIndex state) const;
  bool empty() const noexcept { return entries_.empty(); }

  // Probability of the event given as a membership vector.
  Rational mass(const std::vector<bool>& event) const;
  // True iff the event has probability 1.
  bool certain(const std::vector<bool>& event) const;

  friend bool operator==(const Distribution&, const Distribution&) = default;
  friend bool operator<(const Distribution& a, const Distribution& b) { return a.entries_ < b.entries_; }

 private:
  std::vector<Entry> entries_;
};

// (Omega, s, f, PR_1..PR_n) over a game. The constructor checks only that
// the tables are total and in range; the appropriateness conditions are
// checked by the validators below.
class CounterfactualStructure {
 public:
  // closest[state][player][strategy] is f(state, player, strategy);
  // beliefs[player][state] is PR_player(state).
  CounterfactualStructure(Game game, std::vector<Profile> strategy_map,
                          std::vector<std::vector<std::vector<StateIndex>>> closest,
                          std::vector<std::vector<Distribution>> beliefs);

  const Game& game() const noexcept { return game_; }
  std::size_t num_states() const noexcept { return strategy_map_.size(); }
  std::size_t num_players() const noexcept { return game_.num_players(); }

  const Profile& profile(StateIndex state) const { return strategy_map_.at(state); }
  StrategyIndex strategy(StateIndex state, PlayerIndex player) const {
    return strategy_map_.at(state).at(player);
  }
  StateIndex closest(StateIndex state, PlayerIndex player, StrategyIndex s) const {
    return closest_[state][player][s];
  }
  const Distribution& belief(PlayerIndex player, StateIndex state) const {
    return beliefs_.at(player).at(state);
  }

  // States with the same belief_class(player, .) carry equal PR_player.
  std::size_t belief_class(PlayerIndex player, StateIndex state) const {
    return belief_class_[player][state];
  }

  const std::vector<Profile>& strategy_map() const noexcept { return strategy_map_; }

 private:
  Game game_;
  std::vector<Profile> strategy_map_;
  std::vector<std::vector<std::vector<StateIndex>>> closest_;
  std::vector<std::vector<Distribution>> beliefs_;
  std::vector<std::vector<std::size_t>> belief_class_;
};

enum class Condition { kP1, kP2, kF1, kF2, kSA };

std::string_view to_string(Condition condition);

struct Violation {
  Condition condition;
  StateIndex state = 0;
  PlayerIndex player = 0;
  std::optional<StrategyIndex> strategy;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

// P1 (own strategy believed), P2 (own beliefs believed), F1 (f lands on the
// requested strategy), F2 (f fixes the state when nothing changes). Every
// violation is reported.
ValidationReport validate_appropriate(const CounterfactualStructure& m);

// Everything validate_appropriate checks, plus SA: each PR^c_{i,s}(w) puts
// probability 1 on states where PR^c_{i,s} equals PR^c_{i,s}(w).
ValidationReport validate_strongly_appropriate(const CounterfactualStructure& m);

// PR^c_{player,s}(state): pushforward of PR_player(state) along f(., player, s).
Distribution counterfactual_belief(const CounterfactualStructure& m, StateIndex state,
                                   PlayerIndex player, StrategyIndex s);

// In every closest state the other players keep their strategies and beliefs.
bool respects_unilateral_deviations(const CounterfactualStructure& m);

// Largest total-variation distance between PR^c_{i,s}(w) and PR_i(w) after
// projecting each state onto the other players' strategies and beliefs.
Rational epsilon_closeness(const CounterfactualStructure& m);

// Structure JSON (see README). parse_structure ignores any "game" member and
// uses `game`; game_from_structure_json resolves it (inline object or path
// relative to `base_dir`).
CounterfactualStructure parse_structure(std::string_view text, const Game& game);
Game game_from_structure_json(std::string_view text, const std::string& base_dir);
nlohmann::json structure_to_json(const CounterfactualStructure& m);
std::string serialize_structure(const CounterfactualStructure& m);

nlohmann::json to_json(const ValidationReport& report);

}  // namespace tg
