#include "support/generators.hpp"

#include <algorithm>
#include <map>

namespace tg::testing {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

Game random_game(Rng& rng, const GameShape& shape) {
  std::size_t n = shape.min_players + pick(rng, shape.max_players - shape.min_players + 1);
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> strategies(n);
  for (std::size_t i = 0; i < n; ++i) {
    names.push_back("P" + std::to_string(i + 1));
    std::size_t k = shape.min_strategies + pick(rng, shape.max_strategies - shape.min_strategies + 1);
    for (std::size_t s = 0; s < k; ++s) strategies[i].push_back("s" + std::to_string(s));
  }
  std::uniform_int_distribution<int> payoff(shape.min_payoff, shape.max_payoff);
  return Game::from_function(names, strategies, [&](const Profile&) {
    std::vector<Rational> u;
    for (std::size_t i = 0; i < n; ++i) u.emplace_back(payoff(rng));
    return u;
  });
}

CounterfactualStructure random_structure(Rng& rng, const Game& game, const StructureShape& shape) {
  const std::size_t n = game.num_players();
  std::size_t widest = 1;
  for (PlayerIndex i = 0; i < n; ++i) widest = std::max(widest, game.num_strategies(i));
  const std::size_t count = std::max(widest, 1 + pick(rng, shape.max_states));

  std::vector<Profile> s(count, Profile(n));
  for (PlayerIndex i = 0; i < n; ++i) {
    std::vector<StrategyIndex> column(count);
    for (StateIndex w = 0; w < count; ++w) {
      column[w] = w < game.num_strategies(i) ? w : pick(rng, game.num_strategies(i));
    }
    std::shuffle(column.begin(), column.end(), rng);
    for (StateIndex w = 0; w < count; ++w) s[w][i] = column[w];
  }

  std::vector<std::vector<Distribution>> beliefs(n, std::vector<Distribution>(count));
  for (PlayerIndex i = 0; i < n; ++i) {
    // Class label per state: states sharing a label share beliefs.
    std::map<std::pair<Profile, std::size_t>, std::vector<StateIndex>> classes;
    for (StateIndex w = 0; w < count; ++w) {
      Profile key = shape.profile_classes ? s[w] : Profile{s[w][i]};
      std::size_t label = chance(rng, shape.self_belief) ? count + w : pick(rng, 3);
      classes[{key, label}].push_back(w);
    }
    for (const auto& [key, members] : classes) {
      Distribution d;
      if (key.second >= count) {
        d = Distribution::point(members.front());
      } else if (chance(rng, shape.point_beliefs)) {
        d = Distribution::point(members[pick(rng, members.size())]);
      } else {
        std::vector<std::pair<StateIndex, int>> raw;
        int total = 0;
        for (StateIndex w : members) {
          if (raw.empty() || chance(rng, 0.6)) {
            int weight = 1 + static_cast<int>(pick(rng, 4));
            raw.emplace_back(w, weight);
            total += weight;
          }
        }
        std::vector<Distribution::Entry> entries;
        for (auto [w, weight] : raw) entries.emplace_back(w, Rational(weight, total));
        d = Distribution(std::move(entries));
      }
      for (StateIndex w : members) beliefs[i][w] = d;
    }
  }

  std::vector<std::vector<std::vector<StateIndex>>> closest(count);
  for (StateIndex w = 0; w < count; ++w) {
    closest[w].resize(n);
    for (PlayerIndex i = 0; i < n; ++i) {
      for (StrategyIndex a = 0; a < game.num_strategies(i); ++a) {
        if (a == s[w][i]) {
          closest[w][i].push_back(w);
          continue;
        }
        std::vector<StateIndex> targets;
        for (StateIndex v = 0; v < count; ++v) {
          if (s[v][i] == a) targets.push_back(v);
        }
        closest[w][i].push_back(targets[pick(rng, targets.size())]);
      }
    }
  }
  return CounterfactualStructure(game, std::move(s), std::move(closest), std::move(beliefs));
}

namespace {

Formula atom(Rng& rng, const Game& game, const FormulaShape& shape) {
  const std::size_t n = game.num_players();
  PlayerIndex i = pick(rng, n);
  std::size_t options = shape.counterfactual ? 6 : 4;
  switch (pick(rng, options)) {
    case 0: return fm::truth();
    case 1: return fm::play(i, pick(rng, game.num_strategies(i)));
    case 2: return fm::rat(i);
    case 3: return shape.macros ? fm::weak_rat(pick(rng, 3), i) : fm::rat(i);
    case 4: return chance(rng, 0.5) ? fm::ks() : fm::kw();
    default: return shape.macros ? fm::strong_rat(pick(rng, 3), i) : fm::kr();
  }
}

}  // namespace

Formula random_formula(Rng& rng, const Game& game, const FormulaShape& shape) {
  if (shape.depth == 0 || chance(rng, 0.25)) return atom(rng, game, shape);
  FormulaShape inner = shape;
  inner.depth = shape.depth - 1;
  PlayerIndex i = pick(rng, game.num_players());
  std::size_t options = shape.counterfactual ? 9 : 6;
  switch (pick(rng, options)) {
    case 0: return fm::negate(random_formula(rng, game, inner));
    case 1:
    case 2: return fm::conj(random_formula(rng, game, inner), random_formula(rng, game, inner));
    case 3: return fm::believes(i, random_formula(rng, game, inner));
    case 4: return fm::everyone_believes(random_formula(rng, game, inner));
    case 5: return fm::common_belief(random_formula(rng, game, inner));
    case 6: return fm::knows(i, random_formula(rng, game, inner));
    case 7: return fm::everyone_cf_believes(random_formula(rng, game, inner));
    default: return fm::common_cf_belief(random_formula(rng, game, inner));
  }
}

}  // namespace tg::testing
