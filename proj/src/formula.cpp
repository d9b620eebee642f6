#include "tg/formula.hpp"

#include "tg/errors.hpp"

#include <boost/container_hash/hash.hpp>

#include <cctype>
#include <map>
#include <set>
#include <unordered_set>
#include <vector>

namespace tg {
namespace {

Formula make(FormulaNode node) {
  std::size_t h = static_cast<std::size_t>(node.op);
  boost::hash_combine(h, node.player ? *node.player + 1 : 0);
  boost::hash_combine(h, node.strategy);
  boost::hash_combine(h, node.level);
  boost::hash_range(h, node.profile.begin(), node.profile.end());
  boost::hash_combine(h, node.lhs ? node.lhs->hash : 0x9e37);
  boost::hash_combine(h, node.rhs ? node.rhs->hash : 0x7f4a);
  node.hash = h;
  return std::make_shared<const FormulaNode>(std::move(node));
}

Formula unary(Op op, std::optional<PlayerIndex> player, Formula f) {
  FormulaNode node;
  node.op = op;
  node.player = player;
  node.lhs = std::move(f);
  return make(std::move(node));
}

Formula atom(Op op) {
  FormulaNode node;
  node.op = op;
  return make(std::move(node));
}

}  // namespace

namespace fm {

Formula truth() { return atom(Op::kTrue); }

Formula play(PlayerIndex player, StrategyIndex s) {
  FormulaNode node;
  node.op = Op::kPlay;
  node.player = player;
  node.strategy = s;
  return make(std::move(node));
}

Formula rat(PlayerIndex player) {
  FormulaNode node;
  node.op = Op::kRat;
  node.player = player;
  return make(std::move(node));
}

Formula negate(Formula f) { return unary(Op::kNot, std::nullopt, std::move(f)); }

Formula conj(Formula a, Formula b) {
  FormulaNode node;
  node.op = Op::kAnd;
  node.lhs = std::move(a);
  node.rhs = std::move(b);
  return make(std::move(node));
}

Formula believes(PlayerIndex player, Formula f) { return unary(Op::kBelieves, player, std::move(f)); }
Formula knows(PlayerIndex player, Formula f) { return unary(Op::kKnows, player, std::move(f)); }
Formula common_belief(Formula f) { return unary(Op::kCommonBelief, std::nullopt, std::move(f)); }
Formula common_cf_belief(Formula f) { return unary(Op::kCommonCfBelief, std::nullopt, std::move(f)); }
Formula ks() { return atom(Op::kKS); }
Formula kr() { return atom(Op::kKR); }
Formula kw() { return atom(Op::kKW); }
Formula everyone_believes(Formula f) { return unary(Op::kEveryoneBelieves, std::nullopt, std::move(f)); }
Formula everyone_cf_believes(Formula f) { return unary(Op::kEveryoneCfBelieves, std::nullopt, std::move(f)); }

Formula strong_rat(std::size_t k, std::optional<PlayerIndex> player) {
  FormulaNode node;
  node.op = Op::kStrongRat;
  node.level = k;
  node.player = player;
  return make(std::move(node));
}

Formula weak_rat(std::size_t k, std::optional<PlayerIndex> player) {
  FormulaNode node;
  node.op = Op::kWeakRat;
  node.level = k;
  node.player = player;
  return make(std::move(node));
}

Formula rat_all() { return atom(Op::kRatAll); }

Formula play_profile(Profile profile) {
  FormulaNode node;
  node.op = Op::kPlayProfile;
  node.profile = std::move(profile);
  return make(std::move(node));
}

}  // namespace fm

bool is_macro(Op op) noexcept {
  switch (op) {
    case Op::kEveryoneBelieves:
    case Op::kEveryoneCfBelieves:
    case Op::kStrongRat:
    case Op::kWeakRat:
    case Op::kRatAll:
    case Op::kPlayProfile:
      return true;
    default:
      return false;
  }
}

bool macro_free(const Formula& f) {
  std::unordered_set<const FormulaNode*> seen;
  std::vector<const FormulaNode*> stack{f.get()};
  while (!stack.empty()) {
    const auto* node = stack.back();
    stack.pop_back();
    if (!seen.insert(node).second) continue;
    if (is_macro(node->op)) return false;
    if (node->lhs) stack.push_back(node->lhs.get());
    if (node->rhs) stack.push_back(node->rhs.get());
  }
  return true;
}

namespace {

struct PairHash {
  std::size_t operator()(const std::pair<const FormulaNode*, const FormulaNode*>& p) const noexcept {
    std::size_t h = std::hash<const void*>()(p.first);
    boost::hash_combine(h, p.second);
    return h;
  }
};

bool equal_rec(const FormulaNode* a, const FormulaNode* b,
               std::unordered_set<std::pair<const FormulaNode*, const FormulaNode*>, PairHash>& known) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->hash != b->hash || a->op != b->op || a->player != b->player || a->strategy != b->strategy ||
      a->level != b->level || a->profile != b->profile) {
    return false;
  }
  if (known.count({a, b})) return true;
  const bool same = equal_rec(a->lhs.get(), b->lhs.get(), known) && equal_rec(a->rhs.get(), b->rhs.get(), known);
  if (same) known.insert({a, b});
  return same;
}

Formula conjunction(const std::vector<Formula>& parts) {
  if (parts.empty()) return fm::truth();
  Formula out = parts.front();
  for (std::size_t k = 1; k < parts.size(); ++k) out = fm::conj(out, parts[k]);
  return out;
}

class Expander {
 public:
  explicit Expander(const Game& game) : game_(game) {}

  Formula expand(const Formula& f) {
    if (auto it = done_.find(f.get()); it != done_.end()) return it->second;
    Formula out = expand_node(f);
    done_.emplace(f.get(), out);
    return out;
  }

 private:
  std::size_t n() const { return game_.num_players(); }

  void check_player(PlayerIndex i) const {
    if (i >= n()) throw StructuralError("formula names player " + std::to_string(i + 1) + " of " + std::to_string(n()));
  }

  Formula tower(bool strong, std::size_t k, PlayerIndex i) {
    check_player(i);
    const auto key = std::make_tuple(strong, k, i);
    if (auto it = towers_.find(key); it != towers_.end()) return it->second;
    Formula out;
    if (k == 0) {
      out = fm::truth();
    } else {
      std::vector<Formula> others;
      for (PlayerIndex j = 0; j < n(); ++j) {
        if (j != i) others.push_back(tower(strong, k - 1, j));
      }
      Formula inner = conjunction(others);
      out = fm::conj(fm::rat(i), strong ? fm::knows(i, inner) : fm::believes(i, inner));
    }
    towers_.emplace(key, out);
    return out;
  }

  Formula expand_node(const Formula& f) {
    switch (f->op) {
      case Op::kTrue:
      case Op::kKS:
      case Op::kKR:
      case Op::kKW:
        return f;
      case Op::kPlay:
        check_player(*f->player);
        if (f->strategy >= game_.num_strategies(*f->player)) throw StructuralError("formula names an unknown strategy");
        return f;
      case Op::kRat:
        check_player(*f->player);
        return f;
      case Op::kNot:
        return fm::negate(expand(f->lhs));
      case Op::kAnd:
        return fm::conj(expand(f->lhs), expand(f->rhs));
      case Op::kBelieves:
        check_player(*f->player);
        return fm::believes(*f->player, expand(f->lhs));
      case Op::kKnows:
        check_player(*f->player);
        return fm::knows(*f->player, expand(f->lhs));
      case Op::kCommonBelief:
        return fm::common_belief(expand(f->lhs));
      case Op::kCommonCfBelief:
        return fm::common_cf_belief(expand(f->lhs));
      case Op::kEveryoneBelieves:
      case Op::kEveryoneCfBelieves: {
        Formula inner = expand(f->lhs);
        std::vector<Formula> parts;
        for (PlayerIndex i = 0; i < n(); ++i) {
          parts.push_back(f->op == Op::kEveryoneBelieves ? fm::believes(i, inner) : fm::knows(i, inner));
        }
        return conjunction(parts);
      }
      case Op::kStrongRat:
      case Op::kWeakRat: {
        const bool strong = f->op == Op::kStrongRat;
        if (f->player) return tower(strong, f->level, *f->player);
        std::vector<Formula> parts;
        for (PlayerIndex i = 0; i < n(); ++i) parts.push_back(tower(strong, f->level, i));
        return conjunction(parts);
      }
      case Op::kRatAll: {
        std::vector<Formula> parts;
        for (PlayerIndex i = 0; i < n(); ++i) parts.push_back(fm::rat(i));
        return conjunction(parts);
      }
      case Op::kPlayProfile: {
        game_.check_profile(f->profile);
        std::vector<Formula> parts;
        for (PlayerIndex i = 0; i < n(); ++i) parts.push_back(fm::play(i, f->profile[i]));
        return conjunction(parts);
      }
    }
    throw std::logic_error("unhandled formula operator");
  }

  const Game& game_;
  std::map<const FormulaNode*, Formula> done_;
  std::map<std::tuple<bool, std::size_t, PlayerIndex>, Formula> towers_;
};

// --- parser ---

enum class Tok { kIdent, kInt, kUnderscore, kCaret, kStar, kLParen, kRParen, kComma, kAmp, kBang, kEnd };

struct Token {
  Tok kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t k = 0;
  while (k < text.size()) {
    const char c = text[k];
    const std::size_t column = k + 1;
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++k;
    } else if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t end = k;
      while (end < text.size() && std::isalnum(static_cast<unsigned char>(text[end]))) ++end;
      out.push_back({Tok::kIdent, std::string(text.substr(k, end - k)), column});
      k = end;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t end = k;
      while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
      out.push_back({Tok::kInt, std::string(text.substr(k, end - k)), column});
      k = end;
    } else {
      Tok kind;
      switch (c) {
        case '_': kind = Tok::kUnderscore; break;
        case '^': kind = Tok::kCaret; break;
        case '*': kind = Tok::kStar; break;
        case '(': kind = Tok::kLParen; break;
        case ')': kind = Tok::kRParen; break;
        case ',': kind = Tok::kComma; break;
        case '&': kind = Tok::kAmp; break;
        case '!': kind = Tok::kBang; break;
        default:
          throw ParseError("column " + std::to_string(column), std::string("unexpected character '") + c + "'");
      }
      out.push_back({kind, std::string(1, c), column});
      ++k;
    }
  }
  out.push_back({Tok::kEnd, "", text.size() + 1});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, const Game& game) : tokens_(lex(text)), game_(game) {}

  Formula parse() {
    Formula f = conjunction_expr();
    if (peek().kind != Tok::kEnd) fail(peek(), "unexpected '" + peek().text + "'");
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] void fail(const Token& at, const std::string& what) const {
    throw ParseError("column " + std::to_string(at.column), what);
  }

  const Token& expect(Tok kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    return next();
  }

  std::size_t number(const char* what) {
    const Token& t = expect(Tok::kInt, what);
    try {
      return std::stoul(t.text);
    } catch (const std::exception&) {
      fail(t, std::string("malformed ") + what);
    }
  }

  // "_" INT with players numbered from 1.
  PlayerIndex player_subscript() {
    expect(Tok::kUnderscore, "'_' before a player number");
    const Token& at = peek();
    const std::size_t one_based = number("player number");
    if (one_based == 0 || one_based > game_.num_players()) {
      fail(at, "unknown player index " + at.text + " (game has " + std::to_string(game_.num_players()) +
                   " players)");
    }
    return one_based - 1;
  }

  StrategyIndex strategy_name(PlayerIndex player) {
    const Token& t = peek();
    if (t.kind != Tok::kIdent && t.kind != Tok::kInt) fail(t, "expected a strategy name");
    next();
    if (auto s = game_.find_strategy(player, t.text)) return *s;
    if (t.kind == Tok::kInt) {
      const auto index = std::stoul(t.text);
      if (index < game_.num_strategies(player)) return index;
    }
    fail(t, "unknown strategy name '" + t.text + "' for player " + std::to_string(player + 1));
  }

  Formula conjunction_expr() {
    Formula f = unary_expr();
    while (peek().kind == Tok::kAmp) {
      next();
      f = fm::conj(f, unary_expr());
    }
    return f;
  }

  bool starred() {
    if (peek().kind == Tok::kStar) {
      next();
      return true;
    }
    return false;
  }

  Formula tower(bool strong) {
    if (peek().kind != Tok::kCaret) fail(peek(), "malformed superscript: expected '^' and a level");
    next();
    if (peek().kind != Tok::kInt) fail(peek(), "malformed superscript: expected a level after '^'");
    const std::size_t k = number("level");
    std::optional<PlayerIndex> player;
    if (peek().kind == Tok::kUnderscore) player = player_subscript();
    return strong ? fm::strong_rat(k, player) : fm::weak_rat(k, player);
  }

  Formula unary_expr() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kBang:
        next();
        return fm::negate(unary_expr());
      case Tok::kLParen: {
        next();
        Formula f = conjunction_expr();
        expect(Tok::kRParen, "')'");
        return f;
      }
      case Tok::kIdent:
        break;
      default:
        fail(t, t.kind == Tok::kEnd ? "unexpected end of formula" : "unexpected '" + t.text + "'");
    }

    next();
    const std::string& word = t.text;
    if (word == "true") return fm::truth();
    if (word == "KS") return fm::ks();
    if (word == "KR") return fm::kr();
    if (word == "KW") return fm::kw();
    if (word == "RAT") {
      if (peek().kind == Tok::kUnderscore) return fm::rat(player_subscript());
      return fm::rat_all();
    }
    if (word == "B") {
      const auto i = player_subscript();
      return fm::believes(i, unary_expr());
    }
    if (word == "K") {
      const auto i = player_subscript();
      return fm::knows(i, unary_expr());
    }
    if (word == "EB") {
      const bool star = starred();
      Formula f = unary_expr();
      return star ? fm::everyone_cf_believes(f) : fm::everyone_believes(f);
    }
    if (word == "CB") {
      const bool star = starred();
      Formula f = unary_expr();
      return star ? fm::common_cf_belief(f) : fm::common_belief(f);
    }
    if (word == "SRAT") return tower(true);
    if (word == "WRAT") return tower(false);
    if (word == "play") {
      if (peek().kind == Tok::kUnderscore) {
        const auto i = player_subscript();
        expect(Tok::kLParen, "'('");
        const auto s = strategy_name(i);
        expect(Tok::kRParen, "')'");
        return fm::play(i, s);
      }
      expect(Tok::kLParen, "'(' or '_'");
      Profile profile;
      while (true) {
        if (profile.size() >= game_.num_players()) fail(peek(), "too many strategies in play(...)");
        profile.push_back(strategy_name(profile.size()));
        if (peek().kind == Tok::kComma) {
          next();
          continue;
        }
        break;
      }
      if (profile.size() != game_.num_players()) fail(peek(), "play(...) needs one strategy per player");
      expect(Tok::kRParen, "')'");
      return fm::play_profile(std::move(profile));
    }
    fail(t, "unknown operator '" + word + "'");
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Game& game_;
};

// Binding strength used to decide where parentheses are needed.
bool is_unary_level(const Formula& f) { return f->op != Op::kAnd; }

void print(const Formula& f, const Game& game, std::string& out) {
  auto sub = [&](const Formula& g) {
    if (is_unary_level(g)) {
      print(g, game, out);
    } else {
      out += "(";
      print(g, game, out);
      out += ")";
    }
  };
  auto player = [&](const Formula& g) { return std::to_string(*g->player + 1); };
  switch (f->op) {
    case Op::kTrue: out += "true"; return;
    case Op::kKS: out += "KS"; return;
    case Op::kKR: out += "KR"; return;
    case Op::kKW: out += "KW"; return;
    case Op::kRatAll: out += "RAT"; return;
    case Op::kRat: out += "RAT_" + player(f); return;
    case Op::kPlay:
      out += "play_" + player(f) + "(" + game.strategy_name(*f->player, f->strategy) + ")";
      return;
    case Op::kPlayProfile:
      out += "play(";
      for (std::size_t i = 0; i < f->profile.size(); ++i) {
        if (i) out += ",";
        out += game.strategy_name(i, f->profile[i]);
      }
      out += ")";
      return;
    case Op::kNot: out += "!"; sub(f->lhs); return;
    case Op::kAnd:
      print(f->lhs, game, out);
      out += " & ";
      sub(f->rhs);
      return;
    case Op::kBelieves: out += "B_" + player(f) + " "; sub(f->lhs); return;
    case Op::kKnows: out += "K_" + player(f) + " "; sub(f->lhs); return;
    case Op::kEveryoneBelieves: out += "EB "; sub(f->lhs); return;
    case Op::kEveryoneCfBelieves: out += "EB* "; sub(f->lhs); return;
    case Op::kCommonBelief: out += "CB "; sub(f->lhs); return;
    case Op::kCommonCfBelief: out += "CB* "; sub(f->lhs); return;
    case Op::kStrongRat:
    case Op::kWeakRat:
      out += f->op == Op::kStrongRat ? "SRAT^" : "WRAT^";
      out += std::to_string(f->level);
      if (f->player) out += "_" + player(f);
      return;
  }
}

}  // namespace

bool structurally_equal(const Formula& a, const Formula& b) {
  std::unordered_set<std::pair<const FormulaNode*, const FormulaNode*>, PairHash> known;
  return equal_rec(a.get(), b.get(), known);
}

Formula expand_macros(const Formula& f, const Game& game) { return Expander(game).expand(f); }

Formula parse_formula(std::string_view text, const Game& game) { return Parser(text, game).parse(); }

std::string to_string(const Formula& f, const Game& game) {
  std::string out;
  print(f, game, out);
  return out;
}

}  // namespace tg
