#include "tg/model_checker.hpp"

#include "tg/errors.hpp"

namespace tg {
namespace {

StateSet intersect(StateSet a, const StateSet& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = a[k] && b[k];
  return a;
}

}  // namespace

std::vector<StateIndex> members(const StateSet& set) {
  std::vector<StateIndex> out;
  for (std::size_t k = 0; k < set.size(); ++k) {
    if (set[k]) out.push_back(k);
  }
  return out;
}

ModelChecker::ModelChecker(const CounterfactualStructure& m, RatSemantics semantics)
    : m_(m), semantics_(semantics), rat_(m.num_players()) {}

const StateSet& ModelChecker::extension(const Formula& f) {
  const Formula core = macro_free(f) ? f : expand_macros(f, m_.game());
  if (auto it = memo_.find(core); it != memo_.end()) return it->second;
  StateSet value = evaluate(core);
  return memo_.emplace(core, std::move(value)).first->second;
}

bool ModelChecker::satisfies(StateIndex state, const Formula& f) {
  if (state >= m_.num_states()) throw PreconditionError("state index out of range");
  return extension(f)[state];
}

StateSet ModelChecker::evaluate(const Formula& f) {
  const std::size_t states = m_.num_states();
  switch (f->op) {
    case Op::kTrue:
      return StateSet(states, true);
    case Op::kPlay: {
      StateSet out(states);
      for (StateIndex w = 0; w < states; ++w) out[w] = m_.strategy(w, *f->player) == f->strategy;
      return out;
    }
    case Op::kRat:
      return rat_extension(*f->player);
    case Op::kNot: {
      StateSet out = extension(f->lhs);
      out.flip();
      return out;
    }
    case Op::kAnd:
      return intersect(extension(f->lhs), extension(f->rhs));
    case Op::kBelieves:
      return believes(*f->player, extension(f->lhs));
    case Op::kKnows:
      return knows(*f->player, extension(f->lhs));
    case Op::kCommonBelief:
      return common_belief(extension(f->lhs));
    case Op::kCommonCfBelief:
      return common_cf_belief(extension(f->lhs));
    case Op::kKS:
      return ks_extension();
    case Op::kKR:
      return kr_extension();
    case Op::kKW:
      return kw_extension();
    default:
      throw std::logic_error("abbreviation reached the evaluator");
  }
}

bool ModelChecker::rat_holds(StateIndex state, PlayerIndex player) {
  return rat_extension(player)[state];
}

const StateSet& ModelChecker::rat_extension(PlayerIndex player) {
  if (player >= m_.num_players()) throw PreconditionError("player index out of range");
  if (rat_[player]) return *rat_[player];
  const auto& game = m_.game();
  StateSet out(m_.num_states());
  for (StateIndex w = 0; w < m_.num_states(); ++w) {
    const StrategyIndex played = m_.strategy(w, player);
    Rational actual = 0;
    for (const auto& [other, weight] : m_.belief(player, w).entries()) {
      Profile p = m_.profile(other);
      p[player] = played;
      actual += weight * game.payoff(p, player);
    }
    bool rational = true;
    for (StrategyIndex alt = 0; alt < game.num_strategies(player) && rational; ++alt) {
      if (alt == played) continue;
      Rational counterfactual = 0;
      const Distribution imagined = semantics_ == RatSemantics::kClassical
                                        ? m_.belief(player, w)
                                        : counterfactual_belief(m_, w, player, alt);
      for (const auto& [other, weight] : imagined.entries()) {
        Profile p = m_.profile(other);
        p[player] = alt;
        counterfactual += weight * game.payoff(p, player);
      }
      rational = actual >= counterfactual;
    }
    out[w] = rational;
  }
  rat_[player] = std::move(out);
  return *rat_[player];
}

bool ModelChecker::rat_holds_via_closest(StateIndex state, PlayerIndex player) const {
  const auto& game = m_.game();
  const auto& belief = m_.belief(player, state);
  const StrategyIndex played = m_.strategy(state, player);
  for (StrategyIndex alt = 0; alt < game.num_strategies(player); ++alt) {
    Rational actual = 0;
    Rational counterfactual = 0;
    for (const auto& [other, weight] : belief.entries()) {
      Profile p = m_.profile(other);
      p[player] = played;
      actual += weight * game.payoff(p, player);
      Profile q = m_.profile(m_.closest(other, player, alt));
      q[player] = alt;
      counterfactual += weight * game.payoff(q, player);
    }
    if (actual < counterfactual) return false;
  }
  return true;
}

StateSet ModelChecker::believes(PlayerIndex player, const StateSet& event) const {
  StateSet out(m_.num_states());
  for (StateIndex w = 0; w < m_.num_states(); ++w) out[w] = m_.belief(player, w).certain(event);
  return out;
}

StateSet ModelChecker::knows(PlayerIndex player, const StateSet& event) const {
  // PR^c_{i,s}(w) is supported on the f-image of Supp(PR_i(w)).
  StateSet out(m_.num_states());
  const std::size_t strategies = m_.game().num_strategies(player);
  for (StateIndex w = 0; w < m_.num_states(); ++w) {
    bool all = true;
    for (const auto& entry : m_.belief(player, w).entries()) {
      for (StrategyIndex s = 0; s < strategies && all; ++s) all = event[m_.closest(entry.first, player, s)];
      if (!all) break;
    }
    out[w] = all;
  }
  return out;
}

StateSet ModelChecker::everyone_believes(const StateSet& event) const {
  StateSet out(m_.num_states(), true);
  for (PlayerIndex i = 0; i < m_.num_players(); ++i) out = intersect(std::move(out), believes(i, event));
  return out;
}

StateSet ModelChecker::everyone_cf_believes(const StateSet& event) const {
  StateSet out(m_.num_states(), true);
  for (PlayerIndex i = 0; i < m_.num_players(); ++i) out = intersect(std::move(out), knows(i, event));
  return out;
}

StateSet ModelChecker::fixpoint(const StateSet& event, bool counterfactual) const {
  // X_1 = E(event), X_{t+1} = E(X_t) & X_t equals the intersection of
  // E^1..E^{t+1}(event) because E distributes over intersection.
  auto step = [&](const StateSet& x) { return counterfactual ? everyone_cf_believes(x) : everyone_believes(x); };
  StateSet current = step(event);
  last_iterations_ = 1;
  while (true) {
    StateSet next = intersect(step(current), current);
    if (next == current) return current;
    current = std::move(next);
    ++last_iterations_;
  }
}

StateSet ModelChecker::common_belief(const StateSet& event) const { return fixpoint(event, false); }

StateSet ModelChecker::common_cf_belief(const StateSet& event) const { return fixpoint(event, true); }

StateSet ModelChecker::ks_extension() const {
  StateSet out(m_.num_states());
  for (StateIndex w = 0; w < m_.num_states(); ++w) {
    bool known = true;
    for (PlayerIndex i = 0; i < m_.num_players() && known; ++i) {
      for (const auto& entry : m_.belief(i, w).entries()) {
        for (PlayerIndex j = 0; j < m_.num_players() && known; ++j) {
          if (j != i) known = m_.strategy(entry.first, j) == m_.strategy(w, j);
        }
        if (!known) break;
      }
    }
    out[w] = known;
  }
  return out;
}

StateSet ModelChecker::kr_extension() const {
  StateSet out(m_.num_states());
  for (StateIndex w = 0; w < m_.num_states(); ++w) {
    bool known = true;
    for (PlayerIndex i = 0; i < m_.num_players() && known; ++i) {
      for (StrategyIndex s = 0; s < m_.game().num_strategies(i) && known; ++s) {
        const StateIndex target = m_.closest(w, i, s);
        for (const auto& entry : m_.belief(i, w).entries()) {
          const StateIndex imagined = m_.closest(entry.first, i, s);
          for (PlayerIndex j = 0; j < m_.num_players() && known; ++j) {
            if (j != i) known = m_.strategy(imagined, j) == m_.strategy(target, j);
          }
          if (!known) break;
        }
      }
    }
    out[w] = known;
  }
  return out;
}

StateSet ModelChecker::kw_extension() const {
  StateSet out(m_.num_states());
  for (StateIndex w = 0; w < m_.num_states(); ++w) {
    bool known = true;
    for (PlayerIndex i = 0; i < m_.num_players() && known; ++i) {
      const auto& entries = m_.belief(i, w).entries();
      known = entries.size() == 1 && entries.front().first == w;
    }
    out[w] = known;
  }
  return out;
}

std::vector<std::vector<StateSet>> ModelChecker::rationality_levels(bool strong) {
  const std::size_t n = m_.num_players();
  std::vector<std::vector<StateSet>> levels{std::vector<StateSet>(n, StateSet(m_.num_states(), true))};
  while (true) {
    const auto& previous = levels.back();
    std::vector<StateSet> next(n);
    for (PlayerIndex i = 0; i < n; ++i) {
      StateSet others(m_.num_states(), true);
      for (PlayerIndex j = 0; j < n; ++j) {
        if (j != i) others = intersect(std::move(others), previous[j]);
      }
      next[i] = intersect(rat_extension(i), strong ? knows(i, others) : believes(i, others));
    }
    const bool repeated = next == previous;
    levels.push_back(std::move(next));
    if (repeated) return levels;
  }
}

CcbrResult ModelChecker::ccbr_check(StateIndex state) {
  if (state >= m_.num_states()) throw PreconditionError("state index out of range");
  const auto levels = rationality_levels(true);
  const auto& last = levels.back();
  bool holds = true;
  for (const auto& per_player : last) holds = holds && per_player[state];
  return CcbrResult{holds, levels.size() - 1};
}

bool satisfies(const CounterfactualStructure& m, StateIndex state, const Formula& f) {
  return ModelChecker(m).satisfies(state, f);
}

Extension extension(const CounterfactualStructure& m, const Formula& f) {
  ModelChecker checker(m);
  return Extension{f, checker.extension(f)};
}

bool rat_holds(const CounterfactualStructure& m, StateIndex state, PlayerIndex player) {
  return ModelChecker(m).rat_holds(state, player);
}

CcbrResult ccbr_check(const CounterfactualStructure& m, StateIndex state) {
  return ModelChecker(m).ccbr_check(state);
}

}  // namespace tg
