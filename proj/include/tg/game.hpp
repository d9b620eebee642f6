#pragma once

#include "tg/rational.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tg {

using PlayerIndex = std::size_t;
using StrategyIndex = std::size_t;

// One strategy index per player, in player order.
using Profile = std::vector<StrategyIndex>;

// Per-player strategy index sets. Used directly for opponent restrictions,
// where the entry of the player under consideration is ignored.
using StrategySets = std::vector<std::vector<StrategyIndex>>;

// Finite normal-form game with exact payoffs. Players and strategies are
// identified by dense indices; names are display metadata only.
class Game {
 public:
  using PayoffFunction = std::function<std::vector<Rational>(const Profile&)>;

  // `payoffs` is profile-major (last player's strategy varies fastest) with
  // one entry per player inside each profile block.
  Game(std::vector<std::string> player_names,
       std::vector<std::vector<std::string>> strategy_names,
       std::vector<Rational> payoffs);

  static Game from_function(std::vector<std::string> player_names,
                            std::vector<std::vector<std::string>> strategy_names,
                            const PayoffFunction& payoff);

  std::size_t num_players() const noexcept { return player_names_.size(); }
  std::size_t num_strategies(PlayerIndex player) const { return strategy_names_.at(player).size(); }
  std::size_t num_profiles() const noexcept { return num_profiles_; }

  const std::string& player_name(PlayerIndex player) const { return player_names_.at(player); }
  const std::string& strategy_name(PlayerIndex player, StrategyIndex s) const {
    return strategy_names_.at(player).at(s);
  }
  const std::vector<std::string>& player_names() const noexcept { return player_names_; }
  const std::vector<std::vector<std::string>>& strategy_names() const noexcept {
    return strategy_names_;
  }

  std::optional<StrategyIndex> find_strategy(PlayerIndex player, std::string_view name) const;

  // Throws StructuralError when the profile does not fit the game.
  void check_profile(const Profile& profile) const;

  // u_player(profile). Throws StructuralError on a malformed profile.
  const Rational& utility(const Profile& profile, PlayerIndex player) const;

  // Unchecked variant for hot loops; the profile must be valid.
  const Rational& payoff(const Profile& profile, PlayerIndex player) const noexcept {
    return payoffs_[profile_index(profile) * num_players() + player];
  }

  std::size_t profile_index(const Profile& profile) const noexcept;
  Profile profile_at(std::size_t index) const;
  std::vector<Profile> all_profiles() const;

  StrategySets full_sets() const;

  friend bool operator==(const Game&, const Game&) = default;

 private:
  std::vector<std::string> player_names_;
  std::vector<std::vector<std::string>> strategy_names_;
  std::vector<Rational> payoffs_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_ = 0;
};

// Per-player nonempty strategy subsets of a game (Z_1 x ... x Z_n).
class Restriction {
 public:
  // Sorts and deduplicates each set. Throws StructuralError when a set is
  // empty or names a strategy the player does not have.
  Restriction(const Game& game, StrategySets sets);

  static Restriction full(const Game& game);
  static Restriction single(const Game& game, const Profile& profile);

  std::size_t num_players() const noexcept { return sets_.size(); }
  const std::vector<StrategyIndex>& of(PlayerIndex player) const { return sets_.at(player); }
  const StrategySets& sets() const noexcept { return sets_; }

  bool contains(PlayerIndex player, StrategyIndex s) const;
  bool contains(const Profile& profile) const;
  std::size_t total_strategies() const;
  std::size_t num_profiles() const;
  std::vector<Profile> profiles() const;

  friend bool operator==(const Restriction&, const Restriction&) = default;

 private:
  Restriction() = default;
  StrategySets sets_;
};

// Visits every profile of the product of `sets`, lexicographically with
// player 0 most significant. Every set must be nonempty.
void for_each_profile(const StrategySets& sets, const std::function<void(const Profile&)>& visit);

// Opponent sub-profiles of `player` inside `opponents`, with the player's own
// slot fixed to `own`. Throws PreconditionError when an opponent set is empty.
std::vector<Profile> opponent_profiles(const Game& game, PlayerIndex player, StrategyIndex own,
                                       const StrategySets& opponents);

// JSON game file (see README for the schema).
Game parse_game(std::string_view text);
std::string serialize_game(const Game& game);

namespace builtin {

// Translucent prisoner's dilemma, strategies {C, S}:
// u(C,C)=(0,0), u(C,S)=(-p,r), u(S,C)=(r,-p), u(S,S)=(r-p,r-p).
Game pd(const Rational& r, const Rational& p);

// Both players announce 1..k; the lower value is paid to both and the player
// announcing the larger value gets an extra p.
Game reverse_traveler(int k, const Rational& p);

// 2x2 game with rows {a,b}, columns {c,d}: a guarantees the row player 100.
Game ex2();

}  // namespace builtin

}  // namespace tg
