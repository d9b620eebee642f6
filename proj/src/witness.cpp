#include "tg/witness.hpp"

#include "tg/domination.hpp"
#include "tg/errors.hpp"
#include "tg/model_checker.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace tg {

bool precedes(TotalOrder order, const Profile& a, const Profile& b) {
  return order == TotalOrder::kLexicographic ? a < b : b < a;
}

namespace {

// Order-maximum of the profiles in `candidates` (own slot fixed) that attain
// the extreme of u_player.
Profile extremal_response(const Game& game, PlayerIndex player, StrategyIndex own,
                          const StrategySets& opponents, bool maximize, TotalOrder order) {
  auto candidates = opponent_profiles(game, player, own, opponents);
  const Profile* best = nullptr;
  for (const auto& p : candidates) {
    if (best == nullptr) {
      best = &p;
      continue;
    }
    const Rational& u = game.payoff(p, player);
    const Rational& b = game.payoff(*best, player);
    bool better = maximize ? u > b : u < b;
    if (better || (u == b && precedes(order, *best, p))) best = &p;
  }
  return *best;
}

std::string kind_name(TaggedState::Kind kind) {
  switch (kind) {
    case TaggedState::Kind::kW0: return "W0";
    case TaggedState::Kind::kWi: return "Wi";
    case TaggedState::Kind::kLifted: return "Lifted";
    case TaggedState::Kind::kFlat: return "Flat";
  }
  return "?";
}

// States of the W0/Wi construction, keyed by (profile, block).
class BlockIndex {
 public:
  StateIndex add(const Profile& p, std::size_t block) {
    auto [it, inserted] = index_.emplace(std::make_pair(p, block), profiles_.size());
    if (inserted) {
      profiles_.push_back(p);
      blocks_.push_back(block);
    }
    return it->second;
  }
  StateIndex at(const Profile& p, std::size_t block) const { return index_.at({p, block}); }
  std::size_t size() const { return profiles_.size(); }
  const std::vector<Profile>& profiles() const { return profiles_; }
  std::size_t block(StateIndex w) const { return blocks_[w]; }

 private:
  std::map<std::pair<Profile, std::size_t>, StateIndex> index_;
  std::vector<Profile> profiles_;
  std::vector<std::size_t> blocks_;
};

Witness build_blocks(const Game& game, const Profile& profile, const Restriction& z,
                     TotalOrder order, bool self_belief_at_designated) {
  const std::size_t n = game.num_players();
  const StrategySets& zs = z.sets();

  BlockIndex states;
  for (const auto& p : z.profiles()) states.add(p, 0);
  for (PlayerIndex i = 0; i < n; ++i) {
    StrategySets sets = zs;
    sets[i].resize(game.num_strategies(i));
    for (StrategyIndex s = 0; s < game.num_strategies(i); ++s) sets[i][s] = s;
    for_each_profile(sets, [&](const Profile& p) { states.add(p, i + 1); });
  }
  const StateIndex designated = states.at(profile, 0);

  // Best and worst responses inside Z_-j, per (player, own strategy).
  std::vector<std::vector<Profile>> best(n), worst(n);
  for (PlayerIndex j = 0; j < n; ++j) {
    for (StrategyIndex s = 0; s < game.num_strategies(j); ++s) {
      best[j].push_back(extremal_response(game, j, s, zs, true, order));
      worst[j].push_back(extremal_response(game, j, s, zs, false, order));
    }
  }

  const std::size_t count = states.size();
  std::vector<std::vector<std::vector<StateIndex>>> closest(count);
  std::vector<std::vector<Distribution>> beliefs(n, std::vector<Distribution>(count));
  std::vector<TaggedState> tags(count);
  for (StateIndex w = 0; w < count; ++w) {
    const Profile& p = states.profiles()[w];
    const std::size_t block = states.block(w);
    TaggedState& tag = tags[w];
    tag.kind = block == 0 ? TaggedState::Kind::kW0 : TaggedState::Kind::kWi;
    tag.deviator = block == 0 ? 0 : block - 1;
    tag.profile = p;

    closest[w].resize(n);
    for (PlayerIndex j = 0; j < n; ++j) {
      closest[w][j].resize(game.num_strategies(j));
      for (StrategyIndex s = 0; s < game.num_strategies(j); ++s) {
        // The deviator is punished relative to the strategy it moves to.
        closest[w][j][s] = s == p[j] ? w : states.at(worst[j][s], j + 1);
      }
      if (block == j + 1) {
        beliefs[j][w] = Distribution::point(states.at(worst[j][p[j]], j + 1));
      } else {
        beliefs[j][w] = Distribution::point(states.at(best[j][p[j]], 0));
      }
    }
  }
  if (self_belief_at_designated) {
    for (PlayerIndex j = 0; j < n; ++j) beliefs[j][designated] = Distribution::point(designated);
  }

  return Witness{CounterfactualStructure(game, states.profiles(), std::move(closest), std::move(beliefs)),
                 designated, std::move(tags)};
}

void require_strong(const CounterfactualStructure& m, const char* what) {
  auto report = validate_strongly_appropriate(m);
  if (!report.ok()) {
    throw std::logic_error(std::string(what) + " is not strongly appropriate: " +
                           report.violations.front().detail);
  }
}

}  // namespace

Witness build_ccbr_witness(const Game& game, const Profile& profile, const Restriction& z,
                           TotalOrder order) {
  game.check_profile(profile);
  auto check = check_z_sets(game, profile, z);
  if (!check.ok) throw PreconditionError(check.failure);

  Witness w = build_blocks(game, profile, z, order, false);
  require_strong(w.structure, "ccbr witness");
  if (!ccbr_check(w.structure, w.designated).holds) {
    throw std::logic_error("ccbr witness: CCBR fails at the designated state");
  }
  return w;
}

Witness build_kw_witness(const Game& game, const Profile& profile, const Restriction& z,
                         TotalOrder order) {
  game.check_profile(profile);
  auto check = check_z_sets(game, profile, z);
  if (!check.ok) throw PreconditionError(check.failure);
  auto strong_ir = ir_prime(game, z);
  if (std::find(strong_ir.begin(), strong_ir.end(), profile) == strong_ir.end()) {
    throw PreconditionError("profile is not in IR' of the restriction");
  }

  Witness w = build_blocks(game, profile, z, order, true);
  require_strong(w.structure, "kw witness");
  ModelChecker checker(w.structure);
  if (!checker.satisfies(w.designated, fm::conj(fm::kw(), fm::play_profile(profile))) ||
      !checker.ccbr_check(w.designated).holds) {
    throw std::logic_error("kw witness: KW & CCBR fails at the designated state");
  }
  return w;
}

Witness build_ir_witness(const Game& game, const Profile& profile, TotalOrder order) {
  game.check_profile(profile);
  auto ir = ir_set(game);
  if (std::find(ir.begin(), ir.end(), profile) == ir.end()) {
    throw PreconditionError("profile is not individually rational");
  }
  const std::size_t n = game.num_players();
  const auto full = game.full_sets();

  std::vector<std::vector<Profile>> worst(n);
  for (PlayerIndex j = 0; j < n; ++j) {
    for (StrategyIndex s = 0; s < game.num_strategies(j); ++s) {
      worst[j].push_back(extremal_response(game, j, s, full, false, order));
    }
  }

  auto profiles = game.all_profiles();
  const std::size_t count = profiles.size();
  std::vector<std::vector<std::vector<StateIndex>>> closest(count);
  std::vector<std::vector<Distribution>> beliefs(n, std::vector<Distribution>(count));
  std::vector<TaggedState> tags(count);
  for (StateIndex w = 0; w < count; ++w) {
    const Profile& p = profiles[w];
    tags[w].kind = TaggedState::Kind::kFlat;
    tags[w].profile = p;
    closest[w].resize(n);
    for (PlayerIndex j = 0; j < n; ++j) {
      beliefs[j][w] = Distribution::point(w);
      closest[w][j].resize(game.num_strategies(j));
      for (StrategyIndex s = 0; s < game.num_strategies(j); ++s) {
        closest[w][j][s] = s == p[j] ? w : game.profile_index(worst[j][s]);
      }
    }
  }

  Witness w{CounterfactualStructure(game, profiles, std::move(closest), std::move(beliefs)),
            game.profile_index(profile), std::move(tags)};
  require_strong(w.structure, "ir witness");
  auto goal = fm::conj(fm::conj(fm::kw(), fm::play_profile(profile)), fm::common_belief(fm::rat_all()));
  if (!satisfies(w.structure, w.designated, goal)) {
    throw std::logic_error("ir witness: KW & play & CB RAT fails at the designated state");
  }
  return w;
}

LiftResult lift_unilateral(const CounterfactualStructure& base) {
  auto report = validate_appropriate(base);
  for (const auto& v : report.violations) {
    if (v.condition == Condition::kP1 || v.condition == Condition::kP2) {
      throw PreconditionError("base structure violates " + std::string(to_string(v.condition)) +
                              " at state " + std::to_string(v.state) + ": " + v.detail);
    }
  }
  const Game& game = base.game();
  const std::size_t n = game.num_players();
  const std::size_t num_profiles = game.num_profiles();

  // Augment with a self-believing state for every profile that lacks one.
  std::vector<Profile> s = base.strategy_map();
  std::vector<std::vector<Distribution>> pr(n);
  for (PlayerIndex i = 0; i < n; ++i) {
    for (StateIndex w = 0; w < base.num_states(); ++w) pr[i].push_back(base.belief(i, w));
  }
  std::vector<bool> covered(num_profiles, false);
  for (StateIndex w = 0; w < base.num_states(); ++w) {
    bool self = true;
    for (PlayerIndex i = 0; i < n && self; ++i) self = base.belief(i, w).weight(w) == 1;
    if (self) covered[game.profile_index(s[w])] = true;
  }
  std::vector<bool> augmented(base.num_states(), false);
  for (std::size_t k = 0; k < num_profiles; ++k) {
    if (covered[k]) continue;
    StateIndex w = s.size();
    s.push_back(game.profile_at(k));
    augmented.push_back(true);
    for (PlayerIndex i = 0; i < n; ++i) pr[i].push_back(Distribution::point(w));
  }

  const std::size_t base_count = s.size();
  auto lifted = [&](const Profile& p, StateIndex w) { return w * num_profiles + game.profile_index(p); };

  const std::size_t count = base_count * num_profiles;
  std::vector<Profile> smap(count);
  std::vector<std::vector<std::vector<StateIndex>>> closest(count);
  std::vector<std::vector<Distribution>> beliefs(n, std::vector<Distribution>(count));
  std::vector<TaggedState> tags(count);
  for (StateIndex w = 0; w < base_count; ++w) {
    for (std::size_t k = 0; k < num_profiles; ++k) {
      const Profile p = game.profile_at(k);
      const StateIndex x = w * num_profiles + k;
      smap[x] = p;
      tags[x].kind = TaggedState::Kind::kLifted;
      tags[x].profile = p;
      tags[x].base_state = w;
      tags[x].augmented = augmented[w];
      closest[x].resize(n);
      for (PlayerIndex i = 0; i < n; ++i) {
        closest[x][i].resize(game.num_strategies(i));
        for (StrategyIndex a = 0; a < game.num_strategies(i); ++a) {
          Profile q = p;
          q[i] = a;
          closest[x][i][a] = lifted(q, w);
        }
        // i keeps its own strategy and believes the base opponents' play.
        std::vector<Distribution::Entry> entries;
        for (const auto& [v, weight] : pr[i][w].entries()) {
          Profile q = s[v];
          q[i] = p[i];
          entries.emplace_back(lifted(q, v), weight);
        }
        beliefs[i][x] = Distribution(std::move(entries));
      }
    }
  }

  std::vector<StateIndex> state_map;
  for (StateIndex w = 0; w < base.num_states(); ++w) state_map.push_back(lifted(s[w], w));

  LiftResult result{CounterfactualStructure(game, std::move(smap), std::move(closest), std::move(beliefs)),
                    std::move(state_map), std::move(tags)};
  require_strong(result.structure, "lifted structure");
  if (!respects_unilateral_deviations(result.structure)) {
    throw std::logic_error("lifted structure does not respect unilateral deviations");
  }
  return result;
}

LiftResult lift_unilateral(const Game& game, std::vector<Profile> strategy_map,
                           std::vector<std::vector<Distribution>> beliefs) {
  // f is never consulted; any in-range table will do.
  std::vector<std::vector<std::vector<StateIndex>>> closest(strategy_map.size());
  for (StateIndex w = 0; w < strategy_map.size(); ++w) {
    for (PlayerIndex i = 0; i < game.num_players(); ++i) {
      closest[w].emplace_back(game.num_strategies(i), w);
    }
  }
  return lift_unilateral(
      CounterfactualStructure(game, std::move(strategy_map), std::move(closest), std::move(beliefs)));
}

nlohmann::json to_json(const TaggedState& tag) {
  nlohmann::json j;
  j["kind"] = kind_name(tag.kind);
  j["profile"] = tag.profile;
  if (tag.kind == TaggedState::Kind::kWi) j["player"] = tag.deviator;
  if (tag.base_state) {
    j["base_state"] = *tag.base_state;
    j["augmented"] = tag.augmented;
  }
  return j;
}

nlohmann::json sidecar_json(const Witness& witness) {
  nlohmann::json tags = nlohmann::json::array();
  for (const auto& t : witness.tags) tags.push_back(to_json(t));
  return {{"designated_state", witness.designated}, {"tags", std::move(tags)}};
}

}  // namespace tg
