#pragma once

#include "tg/game.hpp"

#include <json.hpp>

#include <optional>
#include <vector>

namespace tg {

// One deleted strategy and the reason it went. Minimax deletion records a
// pure `dominator`; never-best-response deletion records a mixed
// `certificate` (weights over the player's strategies).
struct DeletionRecord {
  PlayerIndex player = 0;
  StrategyIndex strategy = 0;
  std::optional<StrategyIndex> dominator;
  std::vector<Rational> certificate;

  friend bool operator==(const DeletionRecord&, const DeletionRecord&) = default;
};

struct DeletionRound {
  Restriction before;
  std::vector<DeletionRecord> deleted;
  Restriction after;
};

struct DeletionTrace {
  Restriction initial;
  std::vector<DeletionRound> rounds;

  const Restriction& survivors() const { return rounds.empty() ? initial : rounds.back().after; }

  // survivors_at(k) is the restriction after k rounds; it stays at the
  // fixpoint for k past the last round.
  const Restriction& survivors_at(std::size_t k) const {
    if (k == 0 || rounds.empty()) return initial;
    return rounds[std::min(k, rounds.size()) - 1].after;
  }
};

nlohmann::json to_json(const Restriction& restriction);
nlohmann::json to_json(const DeletionTrace& trace);

}  // namespace tg
