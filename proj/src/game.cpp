#include "tg/game.hpp"

#include "tg/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <set>

namespace tg {

using nlohmann::json;

Game::Game(std::vector<std::string> player_names,
           std::vector<std::vector<std::string>> strategy_names, std::vector<Rational> payoffs)
    : player_names_(std::move(player_names)),
      strategy_names_(std::move(strategy_names)),
      payoffs_(std::move(payoffs)) {
  if (player_names_.empty()) throw StructuralError("a game needs at least one player");
  if (strategy_names_.size() != player_names_.size()) {
    throw StructuralError("strategy list count does not match player count");
  }
  strides_.assign(num_players(), 1);
  num_profiles_ = 1;
  for (std::size_t i = num_players(); i-- > 0;) {
    if (strategy_names_[i].empty()) {
      throw StructuralError("player " + std::to_string(i) + " has no strategies");
    }
    strides_[i] = num_profiles_;
    num_profiles_ *= strategy_names_[i].size();
  }
  if (payoffs_.size() != num_profiles_ * num_players()) {
    throw StructuralError("payoff tensor is not total: expected " +
                          std::to_string(num_profiles_ * num_players()) + " entries, got " +
                          std::to_string(payoffs_.size()));
  }
}

Game Game::from_function(std::vector<std::string> player_names,
                         std::vector<std::vector<std::string>> strategy_names,
                         const PayoffFunction& payoff) {
  StrategySets sets;
  for (const auto& names : strategy_names) {
    std::vector<StrategyIndex> all(names.size());
    for (std::size_t s = 0; s < names.size(); ++s) all[s] = s;
    sets.push_back(std::move(all));
  }
  std::vector<Rational> flat;
  const std::size_t n = player_names.size();
  if (!sets.empty() && std::all_of(sets.begin(), sets.end(), [](auto& s) { return !s.empty(); })) {
    for_each_profile(sets, [&](const Profile& profile) {
      auto row = payoff(profile);
      if (row.size() != n) throw StructuralError("payoff function returned wrong arity");
      for (auto& v : row) flat.push_back(std::move(v));
    });
  }
  return Game(std::move(player_names), std::move(strategy_names), std::move(flat));
}

std::optional<StrategyIndex> Game::find_strategy(PlayerIndex player, std::string_view name) const {
  const auto& names = strategy_names_.at(player);
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) return std::nullopt;
  return static_cast<StrategyIndex>(it - names.begin());
}

void Game::check_profile(const Profile& profile) const {
  if (profile.size() != num_players()) {
    throw StructuralError("profile has " + std::to_string(profile.size()) + " entries, game has " +
                          std::to_string(num_players()) + " players");
  }
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (profile[i] >= num_strategies(i)) {
      throw StructuralError("strategy " + std::to_string(profile[i]) + " out of range for player " +
                            std::to_string(i));
    }
  }
}

const Rational& Game::utility(const Profile& profile, PlayerIndex player) const {
  check_profile(profile);
  if (player >= num_players()) throw StructuralError("player index out of range");
  return payoff(profile, player);
}

std::size_t Game::profile_index(const Profile& profile) const noexcept {
  std::size_t index = 0;
  for (std::size_t i = 0; i < profile.size(); ++i) index += profile[i] * strides_[i];
  return index;
}

Profile Game::profile_at(std::size_t index) const {
  Profile profile(num_players());
  for (std::size_t i = 0; i < num_players(); ++i) {
    profile[i] = (index / strides_[i]) % num_strategies(i);
  }
  return profile;
}

std::vector<Profile> Game::all_profiles() const {
  std::vector<Profile> out;
  out.reserve(num_profiles_);
  for (std::size_t k = 0; k < num_profiles_; ++k) out.push_back(profile_at(k));
  return out;
}

StrategySets Game::full_sets() const {
  StrategySets sets(num_players());
  for (std::size_t i = 0; i < num_players(); ++i) {
    sets[i].resize(num_strategies(i));
    for (std::size_t s = 0; s < sets[i].size(); ++s) sets[i][s] = s;
  }
  return sets;
}

// --- Restriction ---

Restriction::Restriction(const Game& game, StrategySets sets) : sets_(std::move(sets)) {
  if (sets_.size() != game.num_players()) {
    throw StructuralError("restriction has " + std::to_string(sets_.size()) + " sets, game has " +
                          std::to_string(game.num_players()) + " players");
  }
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    auto& set = sets_[i];
    if (set.empty()) throw StructuralError("restriction set for player " + std::to_string(i) + " is empty");
    std::sort(set.begin(), set.end());
    set.erase(std::unique(set.begin(), set.end()), set.end());
    if (set.back() >= game.num_strategies(i)) {
      throw StructuralError("restriction names unknown strategy " + std::to_string(set.back()) +
                            " of player " + std::to_string(i));
    }
  }
}

Restriction Restriction::full(const Game& game) { return Restriction(game, game.full_sets()); }

Restriction Restriction::single(const Game& game, const Profile& profile) {
  game.check_profile(profile);
  StrategySets sets;
  for (auto s : profile) sets.push_back({s});
  return Restriction(game, std::move(sets));
}

bool Restriction::contains(PlayerIndex player, StrategyIndex s) const {
  const auto& set = sets_.at(player);
  return std::binary_search(set.begin(), set.end(), s);
}

bool Restriction::contains(const Profile& profile) const {
  if (profile.size() != sets_.size()) return false;
  for (std::size_t i = 0; i < profile.size(); ++i) {
    if (!contains(i, profile[i])) return false;
  }
  return true;
}

std::size_t Restriction::total_strategies() const {
  std::size_t total = 0;
  for (const auto& set : sets_) total += set.size();
  return total;
}

std::size_t Restriction::num_profiles() const {
  std::size_t total = 1;
  for (const auto& set : sets_) total *= set.size();
  return total;
}

std::vector<Profile> Restriction::profiles() const {
  std::vector<Profile> out;
  out.reserve(num_profiles());
  for_each_profile(sets_, [&](const Profile& p) { out.push_back(p); });
  return out;
}

void for_each_profile(const StrategySets& sets, const std::function<void(const Profile&)>& visit) {
  const std::size_t n = sets.size();
  for (const auto& set : sets) {
    if (set.empty()) throw PreconditionError("cannot enumerate profiles of an empty strategy set");
  }
  std::vector<std::size_t> cursor(n, 0);
  Profile profile(n);
  for (std::size_t i = 0; i < n; ++i) profile[i] = sets[i][0];
  while (true) {
    visit(profile);
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (++cursor[i] < sets[i].size()) {
        profile[i] = sets[i][cursor[i]];
        break;
      }
      cursor[i] = 0;
      profile[i] = sets[i][0];
      if (i == 0) return;
    }
    if (n == 0) return;
  }
}

std::vector<Profile> opponent_profiles(const Game& game, PlayerIndex player, StrategyIndex own,
                                       const StrategySets& opponents) {
  if (opponents.size() != game.num_players()) {
    throw PreconditionError("opponent restriction has the wrong number of players");
  }
  StrategySets sets = opponents;
  for (std::size_t j = 0; j < sets.size(); ++j) {
    if (j == player) continue;
    if (sets[j].empty()) {
      throw PreconditionError("opponent set of player " + std::to_string(j) + " is empty");
    }
    for (auto s : sets[j]) {
      if (s >= game.num_strategies(j)) throw PreconditionError("opponent strategy out of range");
    }
  }
  sets[player] = {own};
  std::vector<Profile> out;
  for_each_profile(sets, [&](const Profile& p) { out.push_back(p); });
  return out;
}

// --- JSON ---

namespace {

std::string index_path(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

Rational rational_from_json(const json& value, const std::string& path) {
  if (value.is_number_integer()) {
    if (value.is_number_unsigned()) return Rational(Integer(value.get<std::uint64_t>()));
    return Rational(Integer(value.get<std::int64_t>()));
  }
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(path, e.what());
    }
  }
  throw ParseError(path, "expected a \"num/den\" string or an integer");
}

std::vector<std::string> string_list(const json& value, const std::string& path) {
  if (!value.is_array()) throw ParseError(path, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t k = 0; k < value.size(); ++k) {
    if (!value[k].is_string()) throw ParseError(index_path(path, k), "expected a string");
    out.push_back(value[k].get<std::string>());
  }
  return out;
}

void read_payoffs(const json& node, const std::string& path, std::size_t depth,
                  const std::vector<std::vector<std::string>>& strategies, Profile& prefix,
                  std::vector<Rational>& out) {
  const std::size_t n = strategies.size();
  if (!node.is_array()) throw ParseError(path, "expected an array");
  if (depth == n) {
    if (node.size() != n) {
      throw ParseError(path, "expected " + std::to_string(n) + " utilities, got " +
                                 std::to_string(node.size()));
    }
    for (std::size_t i = 0; i < n; ++i) out.push_back(rational_from_json(node[i], index_path(path, i)));
    return;
  }
  const std::size_t expected = strategies[depth].size();
  if (node.size() != expected) {
    throw ParseError(path, "expected " + std::to_string(expected) + " entries for player " +
                               std::to_string(depth) + ", got " + std::to_string(node.size()));
  }
  for (std::size_t s = 0; s < expected; ++s) {
    prefix.push_back(s);
    read_payoffs(node[s], index_path(path, s), depth + 1, strategies, prefix, out);
    prefix.pop_back();
  }
}

json payoff_tree(const Game& game, std::size_t depth, Profile& prefix) {
  json node = json::array();
  if (depth == game.num_players()) {
    for (std::size_t i = 0; i < game.num_players(); ++i) node.push_back(to_string(game.payoff(prefix, i)));
    return node;
  }
  for (std::size_t s = 0; s < game.num_strategies(depth); ++s) {
    prefix.push_back(s);
    node.push_back(payoff_tree(game, depth + 1, prefix));
    prefix.pop_back();
  }
  return node;
}

}  // namespace

Game parse_game(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", e.what());
  }
  if (!doc.is_object()) throw ParseError("$", "expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "players" && key != "strategies" && key != "payoffs") {
      throw ParseError("$." + key, "unknown field");
    }
  }
  for (const char* key : {"players", "strategies", "payoffs"}) {
    if (!doc.contains(key)) throw ParseError(std::string("$.") + key, "missing field");
  }
  auto players = string_list(doc["players"], "$.players");
  if (players.empty()) throw ParseError("$.players", "a game needs at least one player");

  const auto& strat_node = doc["strategies"];
  if (!strat_node.is_array()) throw ParseError("$.strategies", "expected an array");
  if (strat_node.size() != players.size()) {
    throw ParseError("$.strategies", "expected one strategy list per player");
  }
  std::vector<std::vector<std::string>> strategies;
  for (std::size_t i = 0; i < strat_node.size(); ++i) {
    auto names = string_list(strat_node[i], index_path("$.strategies", i));
    if (names.empty()) throw ParseError(index_path("$.strategies", i), "player has no strategies");
    strategies.push_back(std::move(names));
  }

  std::vector<Rational> payoffs;
  Profile prefix;
  read_payoffs(doc["payoffs"], "$.payoffs", 0, strategies, prefix, payoffs);
  return Game(std::move(players), std::move(strategies), std::move(payoffs));
}

std::string serialize_game(const Game& game) {
  json doc;
  doc["players"] = game.player_names();
  doc["strategies"] = game.strategy_names();
  Profile prefix;
  doc["payoffs"] = payoff_tree(game, 0, prefix);
  return doc.dump();
}

// --- builtins ---

namespace builtin {

Game pd(const Rational& r, const Rational& p) {
  if (r <= 0 || p <= 0) throw PreconditionError("pd requires r > 0 and p > 0");
  return Game::from_function({"P1", "P2"}, {{"C", "S"}, {"C", "S"}}, [&](const Profile& x) {
    const bool s1 = x[0] == 1;
    const bool s2 = x[1] == 1;
    if (!s1 && !s2) return std::vector<Rational>{0, 0};
    if (!s1 && s2) return std::vector<Rational>{-p, r};
    if (s1 && !s2) return std::vector<Rational>{r, -p};
    return std::vector<Rational>{r - p, r - p};
  });
}

Game reverse_traveler(int k, const Rational& p) {
  if (k < 1) throw PreconditionError("reverse_traveler requires k >= 1");
  if (p <= 0 || p >= 1) throw PreconditionError("reverse_traveler requires 0 < p < 1");
  std::vector<std::string> names;
  for (int v = 1; v <= k; ++v) names.push_back(std::to_string(v));
  return Game::from_function({"P1", "P2"}, {names, names}, [&](const Profile& profile) {
    const Rational x = static_cast<int>(profile[0]) + 1;
    const Rational y = static_cast<int>(profile[1]) + 1;
    if (x > y) return std::vector<Rational>{y + p, y};
    if (y > x) return std::vector<Rational>{x, x + p};
    return std::vector<Rational>{x, x};
  });
}

Game ex2() {
  return Game::from_function({"row", "column"}, {{"a", "b"}, {"c", "d"}}, [](const Profile& x) {
    static const int row[2][2] = {{100, 100}, {150, 50}};
    return std::vector<Rational>{row[x[0]][x[1]], 0};
  });
}

}  // namespace builtin

}  // namespace tg
