#pragma once

#include "tg/game.hpp"

#include <memory>
#include <optional>
#include <string>
#include <string_view>

namespace tg {

// Core operators are evaluated directly by the model checker; the remaining
// ones are abbreviations removed by expand_macros.
enum class Op {
  kTrue,
  kPlay,         // play_i(s)
  kRat,          // RAT_i
  kNot,
  kAnd,
  kBelieves,     // B_i
  kKnows,        // K_i, counterfactual belief
  kCommonBelief,
  kCommonCfBelief,
  kKS,
  kKR,
  kKW,
  // abbreviations
  kEveryoneBelieves,    // EB
  kEveryoneCfBelieves,  // EB*
  kStrongRat,           // SRAT^k or SRAT^k_i
  kWeakRat,             // WRAT^k or WRAT^k_i
  kRatAll,              // RAT
  kPlayProfile,         // play(s_1, ..., s_n)
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  Op op = Op::kTrue;
  std::optional<PlayerIndex> player;
  StrategyIndex strategy = 0;
  std::size_t level = 0;
  Profile profile;
  Formula lhs;
  Formula rhs;
  std::size_t hash = 0;
};

namespace fm {

Formula truth();
Formula play(PlayerIndex player, StrategyIndex s);
Formula rat(PlayerIndex player);
Formula negate(Formula f);
Formula conj(Formula a, Formula b);
Formula believes(PlayerIndex player, Formula f);
Formula knows(PlayerIndex player, Formula f);
Formula common_belief(Formula f);
Formula common_cf_belief(Formula f);
Formula ks();
Formula kr();
Formula kw();
Formula everyone_believes(Formula f);
Formula everyone_cf_believes(Formula f);
Formula strong_rat(std::size_t k, std::optional<PlayerIndex> player = std::nullopt);
Formula weak_rat(std::size_t k, std::optional<PlayerIndex> player = std::nullopt);
Formula rat_all();
Formula play_profile(Profile profile);

}  // namespace fm

bool is_macro(Op op) noexcept;
bool macro_free(const Formula& f);

// Structural equality; shared subterms are compared once.
bool structurally_equal(const Formula& a, const Formula& b);

struct FormulaHash {
  std::size_t operator()(const Formula& f) const noexcept { return f->hash; }
};
struct FormulaEqual {
  bool operator()(const Formula& a, const Formula& b) const { return structurally_equal(a, b); }
};

// Replaces every abbreviation by its definition, without simplification:
//   SRAT^0_i = true, SRAT^{k+1}_i = RAT_i & K_i(&_{j != i} SRAT^k_j),
//   WRAT likewise with B_i, SRAT^k = &_i SRAT^k_i, RAT = &_i RAT_i,
//   EB f = &_i B_i f, EB* f = &_i K_i f, play(s) = &_i play_i(s_i).
// Conjunctions nest to the left; an empty conjunction is `true`.
Formula expand_macros(const Formula& f, const Game& game);

// Parses the concrete syntax (players are numbered from 1 in text):
//   true | RAT | RAT_i | play_i(name) | play(name, ..., name) | B_i f | K_i f
//   | EB f | EB* f | CB f | CB* f | SRAT^k[_i] | WRAT^k[_i] | KS | KR | KW
//   | !f | (f) | f & f
// Unary operators bind tighter than '&', which associates to the left.
// Throws ParseError whose `where()` is "column N".
Formula parse_formula(std::string_view text, const Game& game);

// Prints in the same syntax; strategy names come from `game`.
std::string to_string(const Formula& f, const Game& game);

}  // namespace tg
