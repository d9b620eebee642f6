#include "tg/cli.hpp"

#include "tg/domination.hpp"
#include "tg/errors.hpp"
#include "tg/formula.hpp"
#include "tg/kripke.hpp"
#include "tg/model_checker.hpp"
#include "tg/oracle.hpp"
#include "tg/rationalizability.hpp"
#include "tg/witness.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace tg::cli {

using nlohmann::json;

namespace {

// Input problem that is not a parse error of a known file (missing file,
// size cap, bad flag value).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t max_states() {
  const char* env = std::getenv("TG_MAX_STATES");
  if (env == nullptr || *env == '\0') return 10000;
  try {
    return std::stoul(env);
  } catch (const std::exception&) {
    throw InputError(std::string("TG_MAX_STATES is not a number: ") + env);
  }
}

void check_size(std::size_t states) {
  std::size_t cap = max_states();
  if (states > cap) {
    throw InputError(std::to_string(states) + " states exceed TG_MAX_STATES=" + std::to_string(cap));
  }
}

StrategyIndex resolve_strategy(const Game& game, PlayerIndex player, const std::string& token) {
  if (auto s = game.find_strategy(player, token)) return *s;
  if (!token.empty() && std::all_of(token.begin(), token.end(), ::isdigit)) {
    StrategyIndex s = std::stoul(token);
    if (s < game.num_strategies(player)) return s;
  }
  throw InputError("player " + std::to_string(player) + " has no strategy '" + token + "'");
}

StrategyIndex resolve_strategy(const Game& game, PlayerIndex player, const json& token) {
  if (token.is_number_unsigned()) return resolve_strategy(game, player, std::to_string(token.get<std::size_t>()));
  if (token.is_string()) return resolve_strategy(game, player, token.get<std::string>());
  throw InputError("strategy must be a name or an index, got " + token.dump());
}

Profile parse_profile(const Game& game, const std::string& text) {
  std::vector<std::string> tokens;
  std::stringstream in(text);
  std::string token;
  while (std::getline(in, token, ',')) tokens.push_back(token);
  if (tokens.size() != game.num_players()) {
    throw InputError("profile '" + text + "' needs exactly " + std::to_string(game.num_players()) +
                     " strategies");
  }
  Profile p;
  for (const auto& t : tokens) p.push_back(resolve_strategy(game, p.size(), t));
  return p;
}

// Either [[...], ...] or {"sets": [[...], ...]}; entries are names or indices.
Restriction parse_restriction(const Game& game, const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path, e.what());
  }
  const json& sets = doc.is_object() && doc.contains("sets") ? doc["sets"] : doc;
  if (!sets.is_array() || sets.size() != game.num_players()) {
    throw ParseError(path, "expected one strategy list per player");
  }
  StrategySets out(game.num_players());
  for (PlayerIndex i = 0; i < game.num_players(); ++i) {
    if (!sets[i].is_array()) throw ParseError(path + ": $[" + std::to_string(i) + "]", "expected a list");
    for (const auto& token : sets[i]) out[i].push_back(resolve_strategy(game, i, token));
  }
  return Restriction(game, std::move(out));
}

Game load_game(const std::string& path) { return parse_game(read_file(path)); }

CounterfactualStructure load_structure(const std::string& path) {
  std::string text = read_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("$", e.what());
  }
  if (doc.is_object() && doc.contains("states") && doc["states"].is_number_unsigned()) {
    check_size(doc["states"].get<std::size_t>());
  }
  std::string dir = std::filesystem::path(path).parent_path().string();
  Game game = game_from_structure_json(text, dir.empty() ? "." : dir);
  return parse_structure(text, game);
}

json profiles_json(const std::vector<Profile>& profiles) {
  json out = json::array();
  for (const auto& p : profiles) out.push_back(p);
  return out;
}

json sets_json(const StrategySets& sets) {
  json out = json::array();
  for (const auto& s : sets) out.push_back(s);
  return out;
}

struct Options {
  bool pretty = false;
  std::string input;
  std::string restrict_path;
  bool prime = false;
  bool strong = false;
  bool unilateral = false;
  bool epsilon = false;
  long long state = -1;
  std::string formula;
  bool explain = false;
  std::string profile;
  std::string kind = "ccbr";
  std::string order = "lex";
  std::string sidecar;
};

int analyze(const Options& o, json& result) {
  Game game = load_game(o.input);
  DeletionTrace trace = nsd_fixpoint(game);
  const Restriction& fix = trace.survivors();
  json profiles = json::array();
  for (const auto& p : fix.profiles()) {
    if (minimax_rationalizable(game, p)) profiles.push_back(p);
  }
  result = {{"rounds", trace.rounds.size()},
            {"survivors", to_json(fix)},
            {"trace", to_json(trace)},
            {"witness_sets", to_json(fix)},
            {"minimax_rationalizable", std::move(profiles)}};
  return kOk;
}

int ir(const Options& o, json& result) {
  Game game = load_game(o.input);
  if (o.restrict_path.empty()) {
    result = {{"kind", "IR"}, {"profiles", profiles_json(ir_set(game))}};
    return kOk;
  }
  Restriction z = parse_restriction(game, o.restrict_path);
  if (o.prime) {
    result = {{"kind", "IR'"}, {"restriction", to_json(z)}, {"profiles", profiles_json(ir_prime(game, z))}};
  } else {
    result = {{"kind", "IR(Z)"}, {"restriction", to_json(z)}, {"profiles", profiles_json(ir_relative(game, z))}};
  }
  return kOk;
}

int rationalizable(const Options& o, json& result) {
  Game game = load_game(o.input);
  DeletionTrace trace = rationalizable_set(game);
  result = to_json(trace);
  result["rounds_count"] = trace.rounds.size();
  result["profiles"] = profiles_json(trace.survivors().profiles());
  return kOk;
}

int check_structure(const Options& o, json& result) {
  CounterfactualStructure m = load_structure(o.input);
  ValidationReport report = o.strong ? validate_strongly_appropriate(m) : validate_appropriate(m);
  result = to_json(report);
  if (!report.ok()) return kInvalid;
  int code = kOk;
  if (o.unilateral) {
    bool respects = respects_unilateral_deviations(m);
    result["respects_unilateral_deviations"] = respects;
    if (!respects) code = kNegative;
  }
  if (o.epsilon) result["epsilon"] = to_string(epsilon_closeness(m));
  return code;
}

void explain(const Formula& f, const Game& game, ModelChecker& checker, json& rows, json& seen) {
  std::string text = to_string(f, game);
  if (seen.contains(text)) return;
  if (f->lhs) explain(f->lhs, game, checker, rows, seen);
  if (f->rhs) explain(f->rhs, game, checker, rows, seen);
  seen[text] = true;
  rows.push_back({{"formula", text}, {"states", members(checker.extension(f))}});
}

int model_check(const Options& o, json& result) {
  CounterfactualStructure m = load_structure(o.input);
  if (o.state < 0 || static_cast<std::size_t>(o.state) >= m.num_states()) {
    throw InputError("state " + std::to_string(o.state) + " out of range (structure has " +
                     std::to_string(m.num_states()) + " states)");
  }
  Formula f = parse_formula(o.formula, m.game());
  ValidationReport report = validate_appropriate(m);
  if (!report.ok()) {
    result = to_json(report);
    return kInvalid;
  }
  ModelChecker checker(m);
  bool holds = checker.satisfies(static_cast<StateIndex>(o.state), f);
  result = {{"state", o.state}, {"formula", to_string(f, m.game())}, {"holds", holds}};
  if (o.explain) {
    json rows = json::array();
    json seen = json::object();
    explain(f, m.game(), checker, rows, seen);
    result["subformulas"] = std::move(rows);
  }
  return holds ? kOk : kNegative;
}

int witness(const Options& o, json& result) {
  Game game = load_game(o.input);
  Profile profile = parse_profile(game, o.profile);
  TotalOrder order;
  if (o.order == "lex") {
    order = TotalOrder::kLexicographic;
  } else if (o.order == "reverse") {
    order = TotalOrder::kReverseLexicographic;
  } else {
    throw InputError("unknown order '" + o.order + "'");
  }
  std::optional<Witness> w;
  if (o.kind == "ir") {
    check_size(game.num_profiles());
    w = build_ir_witness(game, profile, order);
  } else if (o.kind == "ccbr" || o.kind == "kw") {
    Restriction z = o.restrict_path.empty() ? nsd_fixpoint(game).survivors()
                                            : parse_restriction(game, o.restrict_path);
    std::size_t states = z.num_profiles();
    for (PlayerIndex i = 0; i < game.num_players(); ++i) {
      states += z.num_profiles() / z.of(i).size() * game.num_strategies(i);
    }
    check_size(states);
    w = o.kind == "ccbr" ? build_ccbr_witness(game, profile, z, order) : build_kw_witness(game, profile, z, order);
  } else {
    throw InputError("unknown witness kind '" + o.kind + "'");
  }
  result = structure_to_json(w->structure);
  if (!o.sidecar.empty()) {
    std::ofstream side(o.sidecar, std::ios::binary);
    if (!side) throw InputError("cannot write " + o.sidecar);
    side << sidecar_json(*w).dump(o.pretty ? 2 : -1) << '\n';
  }
  return kOk;
}

int oracle_cmd(const Options& o, json& result) {
  Game game = load_game(o.input);
  result = oracle::report(game);
  DeletionTrace trace = nsd_fixpoint(game);
  bool agrees = result["nsd"]["rounds"] == trace.rounds.size() &&
                result["nsd"]["survivors"] == sets_json(trace.survivors().sets()) &&
                result["ir"] == profiles_json(ir_set(game)) &&
                result["ir_prime_nsd"] == profiles_json(ir_prime(game, trace.survivors()));
  result["agrees_with_library"] = agrees;
  return agrees ? kOk : kNegative;
}

void print_error(std::ostream& err, const std::string& type, const std::string& message,
                 const std::string& where = "") {
  json e{{"type", type}, {"message", message}};
  if (!where.empty()) e["where"] = where;
  err << json{{"error", e}}.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Analysis of games with translucent players", "tg"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  auto add_common = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", o.input, what)->required();
    sub->add_flag("--pretty", o.pretty, "Indent the JSON output");
  };
  auto* analyze_cmd = app.add_subcommand("analyze", "Iterated minimax deletion and witness sets");
  add_common(analyze_cmd, "Game JSON file");
  auto* ir_cmd = app.add_subcommand("ir", "Individually rational profiles");
  add_common(ir_cmd, "Game JSON file");
  ir_cmd->add_option("--restrict", o.restrict_path, "Restriction JSON file (per-player strategy lists)");
  ir_cmd->add_flag("--prime", o.prime, "Let deviations range over the full strategy sets");
  auto* rat_cmd = app.add_subcommand("rationalizable", "Iterated deletion of never-best responses");
  add_common(rat_cmd, "Game JSON file");
  auto* check_cmd = app.add_subcommand("check-structure", "Validate a counterfactual structure");
  add_common(check_cmd, "Structure JSON file");
  check_cmd->add_flag("--strong", o.strong, "Also check strong appropriateness");
  check_cmd->add_flag("--unilateral", o.unilateral, "Report whether deviations are unilateral");
  check_cmd->add_flag("--epsilon", o.epsilon, "Report the closeness of counterfactual beliefs");
  auto* mc_cmd = app.add_subcommand("model-check", "Evaluate a formula at a state");
  add_common(mc_cmd, "Structure JSON file");
  mc_cmd->add_option("--state", o.state, "State index")->required();
  mc_cmd->add_option("--formula", o.formula, "Formula text")->required();
  mc_cmd->add_flag("--explain", o.explain, "List the extension of every subformula");
  auto* witness_cmd = app.add_subcommand("witness", "Build a witness structure for a profile");
  add_common(witness_cmd, "Game JSON file");
  witness_cmd->add_option("--profile", o.profile, "Comma-separated strategies")->required();
  witness_cmd->add_option("--kind", o.kind, "ccbr, kw or ir")->check(CLI::IsMember({"ccbr", "kw", "ir"}));
  witness_cmd->add_option("--restrict", o.restrict_path, "Witness sets (default: the deletion fixpoint)");
  witness_cmd->add_option("--order", o.order, "Tie-breaking order: lex or reverse")
      ->check(CLI::IsMember({"lex", "reverse"}));
  witness_cmd->add_option("--sidecar", o.sidecar, "Write designated state and tags here");
  auto* oracle_sub = app.add_subcommand("oracle", "Brute-force recomputation of deletion and IR");
  add_common(oracle_sub, "Game JSON file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    print_error(err, "usage", e.what());
    return kInputError;
  }

  json result;
  int code = kOk;
  try {
    if (analyze_cmd->parsed()) {
      code = analyze(o, result);
    } else if (ir_cmd->parsed()) {
      code = ir(o, result);
    } else if (rat_cmd->parsed()) {
      code = rationalizable(o, result);
    } else if (check_cmd->parsed()) {
      code = check_structure(o, result);
    } else if (mc_cmd->parsed()) {
      code = model_check(o, result);
    } else if (witness_cmd->parsed()) {
      code = witness(o, result);
    } else {
      code = oracle_cmd(o, result);
    }
  } catch (const ParseError& e) {
    print_error(err, "parse_error", e.what(), e.where());
    return kInputError;
  } catch (const StructuralError& e) {
    print_error(err, "structural_error", e.what());
    return kInputError;
  } catch (const InputError& e) {
    print_error(err, "input_error", e.what());
    return kInputError;
  } catch (const json::exception& e) {
    print_error(err, "input_error", e.what());
    return kInputError;
  } catch (const PreconditionError& e) {
    print_error(err, "precondition_failed", e.what());
    return kNegative;
  }
  out << result.dump(o.pretty ? 2 : -1) << '\n';
  return code;
}

}  // namespace tg::cli
