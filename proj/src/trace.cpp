#include "tg/trace.hpp"

namespace tg {

using nlohmann::json;

json to_json(const Restriction& restriction) {
  json out = json::array();
  for (const auto& set : restriction.sets()) out.push_back(set);
  return out;
}

json to_json(const DeletionTrace& trace) {
  json rounds = json::array();
  for (const auto& round : trace.rounds) {
    json deleted = json::array();
    for (const auto& d : round.deleted) {
      json entry{{"player", d.player}, {"strategy", d.strategy}};
      if (d.dominator) entry["dominator"] = *d.dominator;
      if (!d.certificate.empty()) {
        json weights = json::array();
        for (const auto& w : d.certificate) weights.push_back(to_string(w));
        entry["certificate"] = std::move(weights);
      }
      deleted.push_back(std::move(entry));
    }
    rounds.push_back(json{{"deleted", std::move(deleted)}, {"survivors", to_json(round.after)}});
  }
  return json{{"rounds", std::move(rounds)}, {"survivors", to_json(trace.survivors())}};
}

}  // namespace tg
