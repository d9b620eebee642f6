#pragma once

#include "tg/formula.hpp"
#include "tg/kripke.hpp"

#include <optional>
#include <unordered_map>
#include <vector>

namespace tg {

using StateSet = std::vector<bool>;

struct Extension {
  Formula formula;
  StateSet states;
};

// kClassical reads RAT_i as a best response to the beliefs PR_i induces on
// the opponents' strategies, ignoring f. That is the reading for plain
// probability structures.
enum class RatSemantics { kCounterfactual, kClassical };

struct CcbrResult {
  bool holds = false;
  // Smallest k >= 1 with [[SRAT^k]] = [[SRAT^{k-1}]] per player.
  std::size_t stabilization_k = 0;
};

// Evaluates formulas over one structure. Extensions of subformulas are
// memoized by structure of the macro-free formula, so repeated queries in
// one session share work. Not thread-safe; use one checker per thread.
class ModelChecker {
 public:
  explicit ModelChecker(const CounterfactualStructure& m,
                        RatSemantics semantics = RatSemantics::kCounterfactual);

  const CounterfactualStructure& structure() const noexcept { return m_; }

  // Abbreviations are expanded before evaluation.
  const StateSet& extension(const Formula& f);
  bool satisfies(StateIndex state, const Formula& f);

  // Counterfactual rationality, comparing the played strategy's expected
  // utility under PR_i with every alternative's under PR^c.
  bool rat_holds(StateIndex state, PlayerIndex player);
  // Equivalent form that evaluates alternatives along f directly.
  bool rat_holds_via_closest(StateIndex state, PlayerIndex player) const;

  // Set-level operators.
  StateSet believes(PlayerIndex player, const StateSet& event) const;
  StateSet knows(PlayerIndex player, const StateSet& event) const;
  StateSet everyone_believes(const StateSet& event) const;
  StateSet everyone_cf_believes(const StateSet& event) const;
  // Intersection of E^k(event) over k >= 1 for E = everyone_believes.
  StateSet common_belief(const StateSet& event) const;
  StateSet common_cf_belief(const StateSet& event) const;
  // Number of refinement steps the last common_belief/common_cf_belief took.
  std::size_t last_fixpoint_iterations() const noexcept { return last_iterations_; }

  const StateSet& rat_extension(PlayerIndex player);
  StateSet ks_extension() const;
  StateSet kr_extension() const;
  StateSet kw_extension() const;

  // Per-player [[SRAT^k_i]] (strong) or [[WRAT^k_i]] for k = 0, 1, ... up to
  // and including the first repeat. levels[k][i] is the set for level k.
  std::vector<std::vector<StateSet>> rationality_levels(bool strong);

  CcbrResult ccbr_check(StateIndex state);

 private:
  StateSet evaluate(const Formula& f);
  StateSet fixpoint(const StateSet& event, bool counterfactual) const;

  const CounterfactualStructure& m_;
  RatSemantics semantics_;
  std::unordered_map<Formula, StateSet, FormulaHash, FormulaEqual> memo_;
  std::vector<std::optional<StateSet>> rat_;
  mutable std::size_t last_iterations_ = 0;
};

// One-shot conveniences over a fresh checker.
bool satisfies(const CounterfactualStructure& m, StateIndex state, const Formula& f);
Extension extension(const CounterfactualStructure& m, const Formula& f);
bool rat_holds(const CounterfactualStructure& m, StateIndex state, PlayerIndex player);
CcbrResult ccbr_check(const CounterfactualStructure& m, StateIndex state);

std::vector<StateIndex> members(const StateSet& set);

}  // namespace tg
