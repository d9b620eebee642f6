#include "tg/kripke.hpp"

#include "tg/errors.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace tg {

using nlohmann::json;

// --- Distribution ---

Distribution::Distribution(std::vector<Entry> weights) {
  std::sort(weights.begin(), weights.end(),
            [](const Entry& a, const Entry& b) { return a.first < b.first; });
  Rational total = 0;
  for (auto& [state, w] : weights) {
    if (w < 0) {
      throw StructuralError("negative weight " + tg::to_string(w) + " on state " + std::to_string(state));
    }
    total += w;
    if (w == 0) continue;
    if (!entries_.empty() && entries_.back().first == state) {
      entries_.back().second += w;
    } else {
      entries_.emplace_back(state, std::move(w));
    }
  }
  if (total != 1) throw StructuralError("weights sum " + tg::to_string(total) + " ≠ 1");
}

Distribution Distribution::point(StateIndex state) { return Distribution({{state, Rational(1)}}); }

std::vector<StateIndex> Distribution::support() const {
  std::vector<StateIndex> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

Rational Distribution::weight(StateIndex state) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), state,
                             [](const Entry& e, StateIndex s) { return e.first < s; });
  if (it == entries_.end() || it->first != state) return 0;
  return it->second;
}

Rational Distribution::mass(const std::vector<bool>& event) const {
  Rational total = 0;
  for (const auto& [state, w] : entries_) {
    if (event[state]) total += w;
  }
  return total;
}

bool Distribution::certain(const std::vector<bool>& event) const {
  return std::all_of(entries_.begin(), entries_.end(), [&](const Entry& e) { return event[e.first]; });
}

// --- CounterfactualStructure ---

CounterfactualStructure::CounterfactualStructure(Game game, std::vector<Profile> strategy_map,
                                                 std::vector<std::vector<std::vector<StateIndex>>> closest,
                                                 std::vector<std::vector<Distribution>> beliefs)
    : game_(std::move(game)),
      strategy_map_(std::move(strategy_map)),
      closest_(std::move(closest)),
      beliefs_(std::move(beliefs)) {
  const std::size_t n = game_.num_players();
  const std::size_t states = strategy_map_.size();
  if (states == 0) throw StructuralError("a structure needs at least one state");
  for (StateIndex w = 0; w < states; ++w) game_.check_profile(strategy_map_[w]);

  if (closest_.size() != states) throw StructuralError("closest-state table is not total over states");
  for (StateIndex w = 0; w < states; ++w) {
    if (closest_[w].size() != n) {
      throw StructuralError("closest-state table at state " + std::to_string(w) + " is not total over players");
    }
    for (PlayerIndex i = 0; i < n; ++i) {
      if (closest_[w][i].size() != game_.num_strategies(i)) {
        throw StructuralError("closest-state table at state " + std::to_string(w) + ", player " +
                              std::to_string(i) + " is not total over strategies");
      }
      for (auto target : closest_[w][i]) {
        if (target >= states) {
          throw StructuralError("closest state " + std::to_string(target) + " out of range");
        }
      }
    }
  }

  if (beliefs_.size() != n) throw StructuralError("need one belief assignment per player");
  belief_class_.assign(n, std::vector<std::size_t>(states));
  for (PlayerIndex i = 0; i < n; ++i) {
    if (beliefs_[i].size() != states) {
      throw StructuralError("belief assignment of player " + std::to_string(i) + " is not total");
    }
    std::map<Distribution, std::size_t> classes;
    for (StateIndex w = 0; w < states; ++w) {
      const auto& d = beliefs_[i][w];
      if (d.empty()) throw StructuralError("empty belief at state " + std::to_string(w));
      if (d.entries().back().first >= states) {
        throw StructuralError("belief at state " + std::to_string(w) + " names a state out of range");
      }
      auto [it, _] = classes.emplace(d, classes.size());
      belief_class_[i][w] = it->second;
    }
  }
}

std::string_view to_string(Condition condition) {
  switch (condition) {
    case Condition::kP1: return "P1";
    case Condition::kP2: return "P2";
    case Condition::kF1: return "F1";
    case Condition::kF2: return "F2";
    case Condition::kSA: return "SA";
  }
  return "?";
}

ValidationReport validate_appropriate(const CounterfactualStructure& m) {
  ValidationReport report;
  const auto& game = m.game();
  for (StateIndex w = 0; w < m.num_states(); ++w) {
    for (PlayerIndex i = 0; i < m.num_players(); ++i) {
      for (const auto& [other, weight] : m.belief(i, w).entries()) {
        if (m.strategy(other, i) != m.strategy(w, i)) {
          report.violations.push_back({Condition::kP1, w, i, std::nullopt,
                                       "belief puts " + to_string(weight) + " on state " +
                                           std::to_string(other) + " where the player plays " +
                                           game.strategy_name(i, m.strategy(other, i))});
        }
        if (m.belief_class(i, other) != m.belief_class(i, w)) {
          report.violations.push_back({Condition::kP2, w, i, std::nullopt,
                                       "belief puts " + to_string(weight) + " on state " +
                                           std::to_string(other) + " where the player's beliefs differ"});
        }
      }
      for (StrategyIndex s = 0; s < game.num_strategies(i); ++s) {
        const StateIndex target = m.closest(w, i, s);
        if (m.strategy(target, i) != s) {
          report.violations.push_back({Condition::kF1, w, i, s,
                                       "f points to state " + std::to_string(target) + " where the player plays " +
                                           game.strategy_name(i, m.strategy(target, i))});
        }
        if (s == m.strategy(w, i) && target != w) {
          report.violations.push_back({Condition::kF2, w, i, s,
                                       "f moves to state " + std::to_string(target) +
                                           " although the strategy is unchanged"});
        }
      }
    }
  }
  return report;
}

Distribution counterfactual_belief(const CounterfactualStructure& m, StateIndex state, PlayerIndex player,
                                   StrategyIndex s) {
  std::vector<Distribution::Entry> pushed;
  for (const auto& [other, weight] : m.belief(player, state).entries()) {
    pushed.emplace_back(m.closest(other, player, s), weight);
  }
  return Distribution(std::move(pushed));
}

ValidationReport validate_strongly_appropriate(const CounterfactualStructure& m) {
  ValidationReport report = validate_appropriate(m);
  for (PlayerIndex i = 0; i < m.num_players(); ++i) {
    for (StrategyIndex s = 0; s < m.game().num_strategies(i); ++s) {
      std::vector<Distribution> cf;
      cf.reserve(m.num_states());
      for (StateIndex w = 0; w < m.num_states(); ++w) cf.push_back(counterfactual_belief(m, w, i, s));
      for (StateIndex w = 0; w < m.num_states(); ++w) {
        for (const auto& [other, weight] : cf[w].entries()) {
          if (cf[other] != cf[w]) {
            report.violations.push_back({Condition::kSA, w, i, s,
                                         "counterfactual belief puts " + to_string(weight) + " on state " +
                                             std::to_string(other) +
                                             " whose counterfactual belief differs"});
            break;
          }
        }
      }
    }
  }
  return report;
}

bool respects_unilateral_deviations(const CounterfactualStructure& m) {
  for (StateIndex w = 0; w < m.num_states(); ++w) {
    for (PlayerIndex i = 0; i < m.num_players(); ++i) {
      for (StrategyIndex s = 0; s < m.game().num_strategies(i); ++s) {
        const StateIndex target = m.closest(w, i, s);
        for (PlayerIndex j = 0; j < m.num_players(); ++j) {
          if (j == i) continue;
          if (m.strategy(target, j) != m.strategy(w, j)) return false;
          if (m.belief_class(j, target) != m.belief_class(j, w)) return false;
        }
      }
    }
  }
  return true;
}

namespace {

using ProjectionKey = std::vector<std::size_t>;

ProjectionKey project(const CounterfactualStructure& m, PlayerIndex player, StateIndex state) {
  ProjectionKey key;
  for (PlayerIndex j = 0; j < m.num_players(); ++j) {
    if (j == player) continue;
    key.push_back(m.strategy(state, j));
    key.push_back(m.belief_class(j, state));
  }
  return key;
}

}  // namespace

Rational epsilon_closeness(const CounterfactualStructure& m) {
  Rational worst = 0;
  for (StateIndex w = 0; w < m.num_states(); ++w) {
    for (PlayerIndex i = 0; i < m.num_players(); ++i) {
      std::map<ProjectionKey, Rational> actual;
      for (const auto& [other, weight] : m.belief(i, w).entries()) actual[project(m, i, other)] += weight;
      for (StrategyIndex s = 0; s < m.game().num_strategies(i); ++s) {
        if (s == m.strategy(w, i)) continue;
        std::map<ProjectionKey, Rational> diff = actual;
        const Distribution cf = counterfactual_belief(m, w, i, s);
        for (const auto& [other, weight] : cf.entries()) {
          diff[project(m, i, other)] -= weight;
        }
        Rational l1 = 0;
        for (const auto& [_, d] : diff) l1 += d < 0 ? Rational(-d) : d;
        Rational tv = l1 / 2;
        if (tv > worst) worst = std::move(tv);
      }
    }
  }
  return worst;
}

// --- JSON ---

namespace {

std::string path_at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

std::size_t read_index(const json& value, const std::string& path, std::size_t bound, const char* what) {
  if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<std::int64_t>() >= 0)) {
    throw ParseError(path, std::string("expected a nonnegative ") + what + " index");
  }
  const auto index = value.get<std::size_t>();
  if (index >= bound) {
    throw ParseError(path, std::string(what) + " index " + std::to_string(index) + " out of range (" +
                               std::to_string(bound) + ")");
  }
  return index;
}

StrategyIndex read_strategy(const json& value, const std::string& path, const Game& game, PlayerIndex player) {
  if (value.is_string()) {
    if (auto s = game.find_strategy(player, value.get<std::string>())) return *s;
    throw ParseError(path, "unknown strategy \"" + value.get<std::string>() + "\" for player " +
                               std::to_string(player));
  }
  return read_index(value, path, game.num_strategies(player), "strategy");
}

Rational read_weight(const json& value, const std::string& path) {
  if (value.is_number_integer()) return Rational(Integer(value.get<std::int64_t>()));
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const ParseError& e) {
      throw ParseError(path, e.what());
    }
  }
  throw ParseError(path, "expected a \"num/den\" string or an integer");
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", e.what());
  }
}

}  // namespace

CounterfactualStructure parse_structure(std::string_view text, const Game& game) {
  const json doc = parse_json(text);
  if (!doc.is_object()) throw ParseError("$", "expected an object");
  for (const auto& [key, _] : doc.items()) {
    if (key != "game" && key != "states" && key != "s" && key != "f" && key != "beliefs") {
      throw ParseError("$." + key, "unknown field");
    }
  }
  for (const char* key : {"states", "s", "f", "beliefs"}) {
    if (!doc.contains(key)) throw ParseError(std::string("$.") + key, "missing field");
  }
  const auto& states_node = doc["states"];
  if (!states_node.is_number_unsigned() || states_node.get<std::size_t>() == 0) {
    throw ParseError("$.states", "expected a positive state count");
  }
  const std::size_t states = states_node.get<std::size_t>();
  const std::size_t n = game.num_players();

  const auto& s_node = doc["s"];
  if (!s_node.is_array() || s_node.size() != states) {
    throw ParseError("$.s", "expected one profile per state");
  }
  std::vector<Profile> strategy_map;
  for (std::size_t w = 0; w < states; ++w) {
    const auto& p = s_node[w];
    const auto path = path_at("$.s", w);
    if (!p.is_array() || p.size() != n) throw ParseError(path, "expected a profile with one entry per player");
    Profile profile;
    for (PlayerIndex i = 0; i < n; ++i) profile.push_back(read_strategy(p[i], path_at(path, i), game, i));
    strategy_map.push_back(std::move(profile));
  }

  constexpr StateIndex kUnset = static_cast<StateIndex>(-1);
  std::vector<std::vector<std::vector<StateIndex>>> closest(states);
  for (auto& per_state : closest) {
    per_state.resize(n);
    for (PlayerIndex i = 0; i < n; ++i) per_state[i].assign(game.num_strategies(i), kUnset);
  }
  const auto& f_node = doc["f"];
  if (!f_node.is_array()) throw ParseError("$.f", "expected an array");
  for (std::size_t k = 0; k < f_node.size(); ++k) {
    const auto& e = f_node[k];
    const auto path = path_at("$.f", k);
    if (!e.is_object()) throw ParseError(path, "expected an object");
    for (const char* key : {"state", "player", "strategy", "to"}) {
      if (!e.contains(key)) throw ParseError(path + "." + key, "missing field");
    }
    const auto w = read_index(e["state"], path + ".state", states, "state");
    const auto i = read_index(e["player"], path + ".player", n, "player");
    const auto s = read_strategy(e["strategy"], path + ".strategy", game, i);
    const auto to = read_index(e["to"], path + ".to", states, "state");
    if (closest[w][i][s] != kUnset) throw ParseError(path, "duplicate f entry");
    closest[w][i][s] = to;
  }
  for (StateIndex w = 0; w < states; ++w) {
    for (PlayerIndex i = 0; i < n; ++i) {
      for (StrategyIndex s = 0; s < game.num_strategies(i); ++s) {
        if (closest[w][i][s] == kUnset) {
          throw ParseError("$.f", "missing entry for state " + std::to_string(w) + ", player " +
                                      std::to_string(i) + ", strategy " + std::to_string(s));
        }
      }
    }
  }

  const auto& b_node = doc["beliefs"];
  if (!b_node.is_array() || b_node.size() != n) throw ParseError("$.beliefs", "expected one entry per player");
  std::vector<std::vector<Distribution>> beliefs(n);
  for (PlayerIndex i = 0; i < n; ++i) {
    const auto ppath = path_at("$.beliefs", i);
    if (!b_node[i].is_array() || b_node[i].size() != states) {
      throw ParseError(ppath, "expected one distribution per state");
    }
    for (StateIndex w = 0; w < states; ++w) {
      const auto& d = b_node[i][w];
      const auto dpath = path_at(ppath, w);
      if (!d.is_object()) throw ParseError(dpath, "expected an object of state weights");
      std::vector<Distribution::Entry> weights;
      for (const auto& [key, value] : d.items()) {
        std::size_t target = 0;
        try {
          std::size_t used = 0;
          target = std::stoul(key, &used);
          if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
          throw ParseError(dpath + "." + key, "state keys must be integers");
        }
        if (target >= states) throw ParseError(dpath + "." + key, "state index out of range");
        weights.emplace_back(target, read_weight(value, dpath + "." + key));
      }
      try {
        beliefs[i].push_back(Distribution(std::move(weights)));
      } catch (const StructuralError& e) {
        throw ParseError(dpath, e.what());
      }
    }
  }
  return CounterfactualStructure(game, std::move(strategy_map), std::move(closest), std::move(beliefs));
}

Game game_from_structure_json(std::string_view text, const std::string& base_dir) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("game")) throw ParseError("$.game", "missing field");
  const auto& g = doc["game"];
  if (g.is_object()) return parse_game(g.dump());
  if (g.is_string()) {
    std::filesystem::path path = g.get<std::string>();
    if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
    std::ifstream in(path);
    if (!in) throw ParseError("$.game", "cannot open " + path.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_game(buffer.str());
  }
  throw ParseError("$.game", "expected an inline game object or a path");
}

json structure_to_json(const CounterfactualStructure& m) {
  json doc;
  doc["game"] = json::parse(serialize_game(m.game()));
  doc["states"] = m.num_states();
  doc["s"] = m.strategy_map();
  json f = json::array();
  for (StateIndex w = 0; w < m.num_states(); ++w) {
    for (PlayerIndex i = 0; i < m.num_players(); ++i) {
      for (StrategyIndex s = 0; s < m.game().num_strategies(i); ++s) {
        f.push_back({{"state", w}, {"player", i}, {"strategy", s}, {"to", m.closest(w, i, s)}});
      }
    }
  }
  doc["f"] = std::move(f);
  json beliefs = json::array();
  for (PlayerIndex i = 0; i < m.num_players(); ++i) {
    json per_state = json::array();
    for (StateIndex w = 0; w < m.num_states(); ++w) {
      json d = json::object();
      for (const auto& [state, weight] : m.belief(i, w).entries()) d[std::to_string(state)] = to_string(weight);
      per_state.push_back(std::move(d));
    }
    beliefs.push_back(std::move(per_state));
  }
  doc["beliefs"] = std::move(beliefs);
  return doc;
}

std::string serialize_structure(const CounterfactualStructure& m) { return structure_to_json(m).dump(); }

json to_json(const ValidationReport& report) {
  json violations = json::array();
  for (const auto& v : report.violations) {
    json entry{{"condition", std::string(to_string(v.condition))},
               {"state", v.state},
               {"player", v.player},
               {"detail", v.detail}};
    if (v.strategy) entry["strategy"] = *v.strategy;
    violations.push_back(std::move(entry));
  }
  return {{"ok", report.ok()}, {"violations", std::move(violations)}};
}

}  // namespace tg
