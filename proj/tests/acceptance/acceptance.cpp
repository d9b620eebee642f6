// One line per acceptance criterion. Exit status is nonzero if any fails.

#include "support/generators.hpp"
#include "tg/domination.hpp"
#include "tg/errors.hpp"
#include "tg/model_checker.hpp"
#include "tg/rationalizability.hpp"
#include "tg/witness.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

using namespace tg;
using testing::Rng;

namespace {

// Collects the first few failure notes of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& note) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(note);
  }
  bool ok() const { return failures_ == 0; }
  std::size_t checks() const { return checks_; }
  std::string summary() const {
    std::string s = std::to_string(failures_) + " of " + std::to_string(checks_) + " checks failed";
    for (const auto& n : notes_) s += "; " + n;
    return s;
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::vector<std::string> notes_;
};

int failed = 0;

void criterion(int id, const std::string& name, double limit_seconds,
               const std::function<std::string(Check&)>& body) {
  Check check;
  auto start = std::chrono::steady_clock::now();
  std::string detail;
  try {
    detail = body(check);
  } catch (const std::exception& e) {
    check.expect(false, std::string("exception: ") + e.what());
  }
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (limit_seconds > 0) {
    std::ostringstream note;
    note << "took " << seconds << " s, limit " << limit_seconds << " s";
    check.expect(seconds < limit_seconds, note.str());
  }
  if (!check.ok()) ++failed;
  std::printf("%s %2d %s: %s [%zu checks, %.2f s]\n", check.ok() ? "PASS" : "FAIL", id, name.c_str(),
              check.ok() ? detail.c_str() : check.summary().c_str(), check.checks(), seconds);
  std::fflush(stdout);
}

std::string profile_text(const Profile& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? "," : "") + std::to_string(p[i]);
  return s + ")";
}

bool subset(const StateSet& a, const StateSet& b) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] && !b[k]) return false;
  }
  return true;
}

StateSet meet(StateSet a, const StateSet& b) {
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = a[k] && b[k];
  return a;
}

StateSet all_players(const std::vector<StateSet>& per_player) {
  StateSet out(per_player.front().size(), true);
  for (const auto& s : per_player) out = meet(out, s);
  return out;
}

std::vector<Game> random_games(std::uint64_t seed, std::size_t count) {
  Rng rng(seed);
  std::vector<Game> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(testing::random_game(rng));
  return out;
}

// Total-variation distance between the opponents' (strategy, belief)
// marginals, computed from scratch for each (state, player, alternative).
Rational brute_force_epsilon(const CounterfactualStructure& m) {
  const std::size_t n = m.num_players();
  auto key = [&](PlayerIndex i, StateIndex v) {
    std::vector<std::pair<StrategyIndex, std::vector<std::pair<StateIndex, Rational>>>> k;
    for (PlayerIndex j = 0; j < n; ++j) {
      if (j != i) k.emplace_back(m.strategy(v, j), m.belief(j, v).entries());
    }
    return k;
  };
  Rational worst = 0;
  for (StateIndex w = 0; w < m.num_states(); ++w) {
    for (PlayerIndex i = 0; i < n; ++i) {
      for (StrategyIndex s = 0; s < m.game().num_strategies(i); ++s) {
        std::map<decltype(key(0, 0)), Rational> diff;
        for (const auto& [v, p] : m.belief(i, w).entries()) {
          diff[key(i, v)] += p;
          diff[key(i, m.closest(v, i, s))] -= p;
        }
        Rational l1 = 0;
        for (const auto& [_, d] : diff) l1 += d < 0 ? Rational(-d) : d;
        worst = std::max(worst, Rational(l1 / 2));
      }
    }
  }
  return worst;
}

}  // namespace

int main() {
  const Rational half(1, 2);

  criterion(1, "reverse traveler keeps only (k,k) after k-1 rounds", 1.0, [&](Check& c) {
    for (int k = 2; k <= 12; ++k) {
      Game g = builtin::reverse_traveler(k, half);
      auto trace = nsd_fixpoint(g);
      StrategyIndex top = k - 1;
      c.expect(trace.survivors().sets() == StrategySets{{top}, {top}}, "k=" + std::to_string(k) + " survivors");
      c.expect(trace.rounds.size() == static_cast<std::size_t>(k - 1), "k=" + std::to_string(k) + " rounds");
    }
    return std::string("k = 2..12");
  });

  criterion(2, "ex2: everything survives and only (b,d) is not IR", 0, [&](Check& c) {
    Game g = builtin::ex2();
    c.expect(nsd_fixpoint(g).survivors().num_profiles() == 4, "survivors");
    c.expect(ir_set(g) == std::vector<Profile>{{0, 0}, {0, 1}, {1, 0}}, "IR set");
    return std::string("IR = {(a,c),(a,d),(b,c)}");
  });

  criterion(3, "translucent pd: cooperation under CCBR, not classically rationalizable", 1.0, [&](Check& c) {
    Game pd = builtin::pd(1, 2);
    c.expect(nsd_fixpoint(pd).survivors() == Restriction::full(pd), "NSD");
    auto w = build_ccbr_witness(pd, {0, 0}, Restriction::full(pd));
    c.expect(validate_strongly_appropriate(w.structure).ok(), "strongly appropriate");
    auto r = ccbr_check(w.structure, w.designated);
    c.expect(r.holds, "ccbr");
    c.expect(rationalizable_set(pd).survivors().profiles() == std::vector<Profile>{{1, 1}}, "rationalizable");
    return "CCBR at (C,C), k* = " + std::to_string(r.stabilization_k) + "; rationalizable = {(S,S)}";
  });

  auto corpus200 = random_games(4001, 200);
  criterion(4, "CCBR witnesses accept exactly NSD^inf; SRAT^k implies NSD^k", 60.0, [&](Check& c) {
    std::size_t witnesses = 0, profiles = 0;
    for (std::size_t t = 0; t < corpus200.size(); ++t) {
      const Game& g = corpus200[t];
      auto z = nsd_fixpoint(g).survivors();
      auto survivors = z.profiles();
      std::set<Profile> expected(survivors.begin(), survivors.end());
      for (const auto& p : g.all_profiles()) {
        if (expected.count(p)) continue;
        bool rejected = false;
        try {
          build_ccbr_witness(g, p, z);
        } catch (const PreconditionError&) {
          rejected = true;
        }
        c.expect(rejected, "game " + std::to_string(t) + " accepted " + profile_text(p));
      }
      auto w = build_ccbr_witness(g, survivors.front(), z);
      ++witnesses;
      ModelChecker mc(w.structure);
      StateSet ccbr = all_players(mc.rationality_levels(true).back());
      std::set<Profile> accepted;
      for (StateIndex s = 0; s < w.tags.size(); ++s) {
        if (w.tags[s].kind == TaggedState::Kind::kW0 && ccbr[s]) accepted.insert(w.tags[s].profile);
      }
      c.expect(accepted == expected, "game " + std::to_string(t) + " CCBR profiles differ");
      profiles += accepted.size();
    }
    Rng rng(4002);
    std::size_t hits = 0;
    for (int t = 0; t < 200; ++t) {
      Game g = testing::random_game(rng);
      auto trace = nsd_fixpoint(g);
      auto m = testing::random_structure(rng, g, {12, 0.3, t % 2 == 0, 0.4});
      c.expect(validate_appropriate(m).ok(), "random structure not appropriate");
      ModelChecker mc(m);
      auto levels = mc.rationality_levels(true);
      for (std::size_t k = 0; k < levels.size(); ++k) {
        for (PlayerIndex i = 0; i < g.num_players(); ++i) {
          for (StateIndex s : members(levels[k][i])) {
            ++hits;
            c.expect(trace.survivors_at(k).contains(i, m.strategy(s, i)),
                     "structure " + std::to_string(t) + " state " + std::to_string(s));
          }
        }
      }
    }
    return std::to_string(witnesses) + " witnesses, " + std::to_string(profiles) + " CCBR profiles, " +
           std::to_string(hits) + " SRAT memberships checked";
  });

  auto corpus50 = random_games(5001, 50);
  criterion(5, "deletion order independence", 0, [&](Check& c) {
    for (std::size_t t = 0; t < corpus50.size(); ++t) {
      auto fix = nsd_fixpoint(corpus50[t]).survivors();
      for (std::uint64_t seed = 0; seed < 100; ++seed) {
        c.expect(nsd_fixpoint_with_order(corpus50[t], seed * 7919 + t).survivors() == fix,
                 "game " + std::to_string(t) + " seed " + std::to_string(seed));
      }
    }
    return std::string("50 games x 100 policies");
  });

  criterion(6, "restricted dominators give the same rounds", 0, [&](Check& c) {
    for (std::size_t t = 0; t < corpus50.size(); ++t) {
      auto a = nsd_fixpoint(corpus50[t]);
      auto b = nsd_fixpoint_restricted_dominators(corpus50[t]);
      bool same = a.rounds.size() == b.rounds.size();
      for (std::size_t k = 0; same && k < a.rounds.size(); ++k) same = a.rounds[k].after == b.rounds[k].after;
      c.expect(same, "game " + std::to_string(t));
    }
    return std::string("50 games");
  });

  criterion(7, "CB(RAT) equals the limit of WRAT^k", 0, [&](Check& c) {
    Rng rng(7001);
    std::size_t nonempty = 0;
    for (int t = 0; t < 100; ++t) {
      Game g = testing::random_game(rng);
      auto m = testing::random_structure(rng, g, {12, 0.3, t % 2 == 0, 0.4});
      ModelChecker mc(m);
      auto levels = mc.rationality_levels(false);
      // Stabilization: the last two levels agree.
      c.expect(levels.size() >= 2 && levels.back() == levels[levels.size() - 2], "no stabilization");
      StateSet limit(m.num_states(), true);
      for (const auto& level : levels) limit = meet(limit, all_players(level));
      const StateSet& cb = mc.extension(fm::common_belief(fm::rat_all()));
      c.expect(cb == limit, "structure " + std::to_string(t));
      nonempty += !members(cb).empty();
    }
    return "100 structures, " + std::to_string(nonempty) + " with nonempty CB(RAT)";
  });

  criterion(8, "lifted structures: WRAT^k = SRAT^k and L0 truth transfer", 0, [&](Check& c) {
    Rng rng(8001);
    std::size_t formulas = 0;
    for (int t = 0; t < 100; ++t) {
      Game g = testing::random_game(rng, {2, 3, 2, 3, -3, 3});
      auto base = testing::random_structure(rng, g, {5, 0.2, false, 0.3});
      auto lifted = lift_unilateral(base);
      c.expect(validate_strongly_appropriate(lifted.structure).ok() &&
                   respects_unilateral_deviations(lifted.structure),
               "lift " + std::to_string(t) + " invalid");
      ModelChecker after(lifted.structure);
      auto weak = after.rationality_levels(false);
      auto strong = after.rationality_levels(true);
      std::size_t depth = std::max(weak.size(), strong.size());
      for (std::size_t k = 0; k < depth; ++k) {
        const auto& wk = weak[std::min(k, weak.size() - 1)];
        const auto& sk = strong[std::min(k, strong.size() - 1)];
        c.expect(wk == sk, "lift " + std::to_string(t) + " level " + std::to_string(k));
      }
      ModelChecker before(base, RatSemantics::kClassical);
      Formula phi = testing::random_formula(rng, g, {3, false, true});
      ++formulas;
      for (StateIndex w = 0; w < base.num_states(); ++w) {
        c.expect(before.satisfies(w, phi) == after.satisfies(lifted.state_map[w], phi),
                 "transfer " + std::to_string(t) + ": " + to_string(phi, g));
      }
    }
    return "100 lifts, " + std::to_string(formulas) + " formulas";
  });

  criterion(9, "KW witnesses and IR witnesses; KS states land in IR'(NSD^inf) and IR", 0, [&](Check& c) {
    std::vector<Game> games{builtin::pd(1, 2), builtin::reverse_traveler(10, half), builtin::ex2()};
    auto extra = random_games(9001, 40);
    games.insert(games.end(), extra.begin(), extra.end());
    std::size_t kw_built = 0, ir_built = 0, reverse_hits = 0;

    auto reverse_check = [&](const CounterfactualStructure& m, const std::string& label) {
      const Game& g = m.game();
      auto trace = nsd_fixpoint(g);
      auto strong_ir = ir_prime(g, trace.survivors());
      auto ir = ir_set(g);
      std::set<Profile> ir_p(strong_ir.begin(), strong_ir.end()), ir_s(ir.begin(), ir.end());
      ModelChecker mc(m);
      auto levels = mc.rationality_levels(true);
      std::size_t big_k = std::min(trace.rounds.size() + 1, levels.size() - 1);
      StateSet srat = all_players(levels[big_k]);
      StateSet ks = mc.ks_extension();
      const StateSet& cb = mc.extension(fm::common_belief(fm::rat_all()));
      for (StateIndex s = 0; s < m.num_states(); ++s) {
        if (!ks[s]) continue;
        if (srat[s]) {
          ++reverse_hits;
          c.expect(ir_p.count(m.profile(s)) == 1, label + " SRAT state " + std::to_string(s));
        }
        if (cb[s]) {
          ++reverse_hits;
          c.expect(ir_s.count(m.profile(s)) == 1, label + " CB state " + std::to_string(s));
        }
      }
    };

    for (std::size_t t = 0; t < games.size(); ++t) {
      const Game& g = games[t];
      auto z = nsd_fixpoint(g).survivors();
      for (const auto& p : ir_prime(g, z)) {
        auto w = build_kw_witness(g, p, z);
        ++kw_built;
        ModelChecker mc(w.structure);
        auto levels = mc.rationality_levels(true);
        bool ok = mc.satisfies(w.designated, fm::conj(fm::kw(), fm::play_profile(p)));
        for (const auto& level : levels) ok = ok && all_players(level)[w.designated];
        c.expect(ok, "kw witness game " + std::to_string(t) + " " + profile_text(p));
        reverse_check(w.structure, "kw witness");
      }
      for (const auto& p : ir_set(g)) {
        auto w = build_ir_witness(g, p);
        ++ir_built;
        auto goal = fm::conj(fm::conj(fm::kw(), fm::play_profile(p)), fm::common_belief(fm::rat_all()));
        c.expect(satisfies(w.structure, w.designated, goal), "ir witness game " + std::to_string(t));
        reverse_check(w.structure, "ir witness");
      }
    }
    Rng rng(9002);
    for (int t = 0; t < 200; ++t) {
      Game g = testing::random_game(rng, {2, 3, 2, 3, -3, 3});
      auto m = testing::random_structure(rng, g, {12, 0.5, true, 0.6});
      reverse_check(m, "random " + std::to_string(t));
    }
    return std::to_string(kw_built) + " KW witnesses, " + std::to_string(ir_built) + " IR witnesses, " +
           std::to_string(reverse_hits) + " KS states checked";
  });

  criterion(10, "logic validities on 500 random structures", 0, [&](Check& c) {
    Rng rng(10001);
    for (int t = 0; t < 500; ++t) {
      Game g = testing::random_game(rng, {2, 3, 2, 3, -3, 3});
      auto m = testing::random_structure(rng, g, {10, 0.3, t % 3 == 0, 0.3});
      ModelChecker mc(m);
      Formula phi = testing::random_formula(rng, g, {2, true, true});
      std::string label = "structure " + std::to_string(t);
      for (PlayerIndex i = 0; i < g.num_players(); ++i) {
        auto k = fm::knows(i, phi);
        c.expect(subset(mc.extension(k), mc.extension(fm::believes(i, k))), label + " K => BK");
      }
      c.expect(subset(mc.kw_extension(), mc.kr_extension()), label + " KW => KR");
      c.expect(subset(mc.kr_extension(), mc.ks_extension()), label + " KR => KS");
      auto levels = mc.rationality_levels(true);
      for (std::size_t lv = 0; lv + 1 < levels.size(); ++lv) {
        for (PlayerIndex i = 0; i < g.num_players(); ++i) {
          c.expect(subset(levels[lv + 1][i], levels[lv][i]), label + " SRAT chain");
        }
      }
      for (StateIndex w = 0; w < m.num_states(); ++w) {
        for (PlayerIndex i = 0; i < g.num_players(); ++i) {
          for (StrategyIndex s = 0; s < g.num_strategies(i); ++s) {
            std::set<StateIndex> image;
            for (StateIndex v : m.belief(i, w).support()) image.insert(m.closest(v, i, s));
            auto support = counterfactual_belief(m, w, i, s).support();
            c.expect(std::set<StateIndex>(support.begin(), support.end()) == image, label + " support");
          }
        }
      }
    }
    return std::string("500 structures");
  });

  criterion(11, "exactly one of belief and dominating mixture, both verified", 0, [&](Check& c) {
    Rng rng(11001);
    std::size_t beliefs = 0;
    for (int t = 0; t < 500; ++t) {
      Game g = testing::random_game(rng);
      PlayerIndex i = testing::pick(rng, g.num_players());
      StrategyIndex s = testing::pick(rng, g.num_strategies(i));
      StrategySets opp(g.num_players());
      for (PlayerIndex j = 0; j < g.num_players(); ++j) {
        for (StrategyIndex a = 0; a < g.num_strategies(j); ++a) {
          if (opp[j].empty() || testing::chance(rng, 0.6)) opp[j].push_back(a);
        }
      }
      auto b = best_response_to_some_belief(g, i, s, opp);
      auto m = mixed_dominance_certificate(g, i, s, opp);
      std::string label = "query " + std::to_string(t);
      c.expect(b.has_value() != m.has_value(), label + " duality");
      if (b) {
        ++beliefs;
        Rational total = 0;
        bool inside = true;
        for (const auto& [sub, w] : b->weights) {
          total += w;
          inside = inside && w > 0;
          std::size_t k = 0;
          for (PlayerIndex j = 0; j < g.num_players(); ++j) {
            if (j == i) continue;
            inside = inside && std::count(opp[j].begin(), opp[j].end(), sub[k++]) == 1;
          }
        }
        c.expect(total == 1 && inside, label + " belief not a distribution on the restriction");
        Rational mine = expected_utility(g, *b, s);
        for (StrategyIndex a = 0; a < g.num_strategies(i); ++a) {
          c.expect(expected_utility(g, *b, a) <= mine, label + " not a best response");
        }
      }
      if (m) {
        Rational total = 0;
        for (const auto& w : m->weights) {
          total += w;
          c.expect(w >= 0, label + " negative weight");
        }
        c.expect(total == 1, label + " mixture weights");
        for (const auto& p : opponent_profiles(g, i, s, opp)) {
          Rational mixed = 0;
          Profile q = p;
          for (StrategyIndex a = 0; a < g.num_strategies(i); ++a) {
            q[i] = a;
            mixed += m->weights[a] * g.utility(q, i);
          }
          c.expect(mixed > g.utility(p, i), label + " mixture does not dominate");
        }
      }
    }
    return "500 queries, " + std::to_string(beliefs) + " with a belief";
  });

  criterion(12, "closeness: 0 under unilateral deviations; pinned pd values", 0, [&](Check& c) {
    Rng rng(12001);
    std::size_t respecting = 0;
    for (int t = 0; t < 100; ++t) {
      Game g = testing::random_game(rng, {2, 3, 1, 3, -3, 3});
      auto base = testing::random_structure(rng, g, {5, 0.2, false, 0.3});
      auto lifted = lift_unilateral(base);
      for (const auto* m : {&base, &lifted.structure}) {
        if (!respects_unilateral_deviations(*m)) continue;
        ++respecting;
        c.expect(epsilon_closeness(*m) == 0, "structure " + std::to_string(t));
        c.expect(brute_force_epsilon(*m) == 0, "structure " + std::to_string(t) + " brute force");
      }
    }
    Game pd = builtin::pd(1, 2);
    auto full = Restriction::full(pd);
    const std::pair<const char*, Witness> pinned[] = {
        {"ccbr", build_ccbr_witness(pd, {0, 0}, full)},
        {"kw", build_kw_witness(pd, {0, 0}, full)},
        {"ir", build_ir_witness(pd, {0, 0})},
    };
    for (const auto& [name, w] : pinned) {
      Rational eps = epsilon_closeness(w.structure);
      c.expect(eps == 1, std::string(name) + " witness epsilon " + to_string(eps));
      c.expect(brute_force_epsilon(w.structure) == eps, std::string(name) + " brute force disagrees");
    }
    return std::to_string(respecting) + " respecting structures at 0; pd witnesses (ccbr, kw, ir) at 1";
  });

  return failed == 0 ? 0 : 1;
}
