// spg: command-line front end for the stochastic game toolkit.

#include "spg/arena.hpp"
#include "spg/errors.hpp"
#include "spg/fixtures.hpp"
#include "spg/mdp.hpp"
#include "spg/payoff.hpp"
#include "spg/play.hpp"
#include "spg/solve.hpp"
#include "spg/strategy.hpp"
#include "spg/verify.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>

using namespace spg;
using nlohmann::json;

namespace {

struct Common {
  std::string format = "human";
  std::uint64_t seed = 1;
};

bool structured(const Common& c) { return c.format == "structured"; }

/// `fixture:NAME` for the built-in arenas, `random:k=v,...` for a generated
/// one, anything else is a game file.
Arena load_game(const std::string& where, ColourKind kind = ColourKind::Reward) {
  if (where.rfind("fixture:", 0) == 0) {
    const auto name = where.substr(8);
    if (name == "e2") return fixtures::e2();
    if (name == "e3") return fixtures::e3_mean();
    if (name == "e3-parity") return fixtures::e3_parity();
    if (name == "e4") return fixtures::e4();
    if (name == "fig1") return fixtures::fig1();
    if (name == "one-counter") return fixtures::one_counter();
    throw ValidationError("unknown fixture '" + name + "'");
  }
  if (where.rfind("random:", 0) == 0) {
    RandomArenaParams p;
    p.kind = kind;
    std::stringstream in(where.substr(7));
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty()) continue;
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw ValidationError("random arena parameter without '=': " + item);
      const auto key = item.substr(0, eq);
      const auto value = item.substr(eq + 1);
      try {
        if (key == "seed") p.seed = std::stoull(value);
        else if (key == "states") p.num_states = std::stoul(value);
        else if (key == "actions") p.max_actions = std::stoul(value);
        else if (key == "min") p.colour_min = std::stol(value);
        else if (key == "max") p.colour_max = std::stol(value);
        else if (key == "density") p.density = parse_rational(value);
        else if (key == "dim") p.dimension = std::stoul(value);
        else if (key == "discount") p.discount = parse_rational(value);
        else throw ValidationError("unknown random arena parameter '" + key + "'");
      } catch (const std::invalid_argument&) {
        throw ValidationError("bad value for random arena parameter '" + key + "'");
      }
    }
    auto made = random_arena(p);
    for (const auto& line : made.clamped) std::cerr << "note: " << line << "\n";
    return std::move(made.arena);
  }
  return load_arena(where);
}

json rationals(const std::vector<Rational>& xs) {
  json out = json::array();
  for (const auto& x : xs) out.push_back(to_string(x));
  return out;
}

void print(const Common& c, const json& doc, const std::function<void()>& human) {
  if (structured(c)) {
    std::cout << doc.dump(2) << "\n";
  } else {
    human();
  }
}

int emit(const Common& c, const VerificationReport& report) {
  if (structured(c)) {
    std::cout << report.to_json().dump(2) << "\n";
  } else {
    std::cout << report.to_human();
  }
  return report.exit_code();
}

int cmd_solve(const Common& c, const std::string& game, const std::string& payoff, std::uint64_t budget) {
  const auto spec = PayoffSpec::parse(payoff);
  const auto arena = load_game(game, spec.required_kind());
  const auto v = brute_force_value(arena, spec, budget);
  json doc{{"payoff", spec.name()},
           {"fingerprint", v.arena_fingerprint},
           {"profiles", v.profiles},
           {"values", rationals(v.values)},
           {"sigma_star", pure_strategy_to_json(arena, v.sigma_star)}};
  json certs = json::array();
  for (StateId s = 0; s < arena.num_states(); ++s) {
    certs.push_back({{"state", arena.state_name(s)},
                     {"tau", pure_strategy_to_json(arena, v.certificate_tau[s])},
                     {"value", to_string(v.certificate_value[s])}});
  }
  doc["certificates"] = certs;
  print(c, doc, [&] {
    std::cout << spec.name() << " on " << arena.num_states() << " states, " << v.profiles << " profiles\n";
    for (StateId s = 0; s < arena.num_states(); ++s) {
      std::cout << "  " << std::left << std::setw(12) << arena.state_name(s) << to_string(v.values[s]);
      if (arena.owner(s) == Player::P1) std::cout << "  sigma*: " << arena.action(s, v.sigma_star.at(s)).name;
      std::cout << "\n";
    }
  });
  return 0;
}

int cmd_best_response(const Common& c, const std::string& game, const std::string& payoff, const std::string& sigma_file) {
  const auto spec = PayoffSpec::parse(payoff);
  const auto arena = load_game(game, spec.required_kind());
  const auto sigma = load_strategy(arena, sigma_file);
  if (sigma.player() != Player::P1) throw ValidationError("--sigma must be a P1 strategy");
  const auto guarantee = p2_guarantee(arena, spec, sigma);
  std::vector<Rational> at_initial;
  for (StateId s = 0; s < arena.num_states(); ++s) {
    at_initial.push_back(guarantee[sigma.initial() * arena.num_states() + s]);
  }
  json doc{{"payoff", spec.name()}, {"fingerprint", fingerprint(arena)}, {"values", rationals(at_initial)}};
  std::optional<PureStationaryStrategy> tau;
  if (spec.is_both_positional() && sigma.memory_size() == 1 && sigma.is_pure()) {
    PureStationaryStrategy pure{Player::P1, std::vector<std::optional<ActionIndex>>(arena.num_states())};
    for (StateId s = 0; s < arena.num_states(); ++s) {
      if (arena.owner(s) == Player::P1) pure.choice[s] = sigma.choice(0, s).front().first;
    }
    const auto br = best_response_min(arena, spec, pure);
    if (br.uniform_tau) {
      tau = br.uniform_tau;
      doc["tau"] = pure_strategy_to_json(arena, *tau);
    }
  }
  print(c, doc, [&] {
    std::cout << "P2's best response against the strategy, " << spec.name() << "\n";
    for (StateId s = 0; s < arena.num_states(); ++s) {
      std::cout << "  " << std::left << std::setw(12) << arena.state_name(s) << to_string(at_initial[s]);
      if (tau && arena.owner(s) == Player::P2) std::cout << "  tau: " << arena.action(s, tau->at(s)).name;
      std::cout << "\n";
    }
  });
  return 0;
}

int cmd_classify(const Common& c, const std::string& game, const std::string& payoff) {
  const auto spec = PayoffSpec::parse(payoff);
  const auto arena = load_game(game, spec.required_kind());
  const auto v = brute_force_value(arena, spec);
  const auto cls = classify_actions(arena, v.values);
  json rows = json::array();
  for (StateId s = 0; s < arena.num_states(); ++s) {
    for (ActionIndex a = 0; a < arena.num_actions(s); ++a) {
      const auto& x = cls.at(arena, s, a);
      rows.push_back({{"state", arena.state_name(s)},
                      {"action", arena.action(s, a).name},
                      {"value", to_string(v.values[s])},
                      {"expected_next", to_string(x.expected_value)},
                      {"value_preserving", x.value_preserving},
                      {"stable", x.stable}});
    }
  }
  json all = json::object();
  for (StateId s = 0; s < arena.num_states(); ++s) all[arena.state_name(s)] = bool(cls.all_value_preserving[s]);
  print(c, {{"payoff", spec.name()}, {"actions", rows}, {"all_value_preserving", all}}, [&] {
    std::cout << std::left << std::setw(12) << "state" << std::setw(10) << "action" << std::setw(10) << "val"
              << std::setw(12) << "E[val']" << "flags\n";
    for (const auto& r : rows) {
      std::cout << std::setw(12) << r["state"].get<std::string>() << std::setw(10) << r["action"].get<std::string>()
                << std::setw(10) << r["value"].get<std::string>() << std::setw(12)
                << r["expected_next"].get<std::string>() << (r["value_preserving"].get<bool>() ? "preserving" : "changing")
                << (r["stable"].get<bool>() ? " stable" : "") << "\n";
    }
  });
  return 0;
}

/// A strategy file, or P's first action everywhere when none is given.
FiniteMemoryStrategy strategy_or_default(const Arena& arena, const std::string& file, Player player) {
  if (file.empty()) return FiniteMemoryStrategy::from_pure(arena, first_action_strategy(arena, player));
  auto out = load_strategy(arena, file);
  if (out.player() != player) throw ValidationError(file + " is not a strategy of " + to_string(player));
  return out;
}

std::vector<StateId> sources(const Arena& arena, const std::string& source) {
  if (source.empty()) {
    std::vector<StateId> all(arena.num_states());
    for (StateId s = 0; s < all.size(); ++s) all[s] = s;
    return all;
  }
  const auto s = arena.find_state(source);
  if (!s) throw ValidationError("unknown state '" + source + "'");
  return {*s};
}

int cmd_martingale(const Common& c, const std::string& game, const std::string& payoff, const std::string& sigma_file,
                   const std::string& tau_file, const std::string& source) {
  const auto spec = PayoffSpec::parse(payoff);
  const auto arena = load_game(game, spec.required_kind());
  const auto sigma = strategy_or_default(arena, sigma_file, Player::P1);
  const auto tau = strategy_or_default(arena, tau_file, Player::P2);
  const auto values = brute_force_value(arena, spec).values;
  json per = json::array();
  bool martingale = true;
  for (StateId s : sources(arena, source)) {
    const auto r = martingale_check(arena, values, sigma, tau, s);
    auto nodes = [](const std::vector<MartingaleNode>& xs) {
      json out = json::array();
      for (const auto& n : xs) {
        out.push_back({{"node", n.node}, {"value", to_string(n.value)}, {"expected_next", to_string(n.expected_next)}});
      }
      return out;
    };
    per.push_back({{"source", arena.state_name(s)},
                   {"nodes_checked", r.nodes_checked},
                   {"martingale", r.is_martingale()},
                   {"submartingale", r.is_submartingale()},
                   {"strict", nodes(r.strict)},
                   {"violations", nodes(r.violations)}});
    martingale = martingale && r.is_martingale();
  }
  print(c, {{"payoff", spec.name()}, {"values", rationals(values)}, {"sources", per}}, [&] {
    for (const auto& p : per) {
      std::cout << p["source"].get<std::string>() << ": " << p["nodes_checked"] << " nodes, "
                << (p["martingale"].get<bool>()       ? "martingale"
                    : p["submartingale"].get<bool>() ? "submartingale only (" + std::to_string(p["strict"].size()) +
                                                           " strict nodes)"
                                                     : "violated")
                << "\n";
    }
  });
  return 0;
}

int cmd_simulate(const Common& c, const std::string& game, const std::string& sigma_file, const std::string& tau_file,
                 std::size_t horizon, std::size_t trials, const std::string& source, const std::string& payoff) {
  const auto arena = load_game(game, payoff.empty() ? ColourKind::Reward : PayoffSpec::parse(payoff).required_kind());
  const auto sigma = strategy_or_default(arena, sigma_file, Player::P1);
  const auto tau = strategy_or_default(arena, tau_file, Player::P2);
  const StateId from = sources(arena, source.empty() ? arena.state_name(0) : source).front();
  Rng rng(c.seed);
  json plays = json::array();
  std::vector<std::string> lines;
  for (std::size_t i = 0; i < trials; ++i) {
    const auto play = sample_play(arena, sigma, tau, from, horizon, rng);
    json states = json::array();
    for (auto s : play.states) states.push_back(arena.state_name(s));
    plays.push_back(states);
    lines.push_back(describe(arena, play));
  }
  json doc{{"source", arena.state_name(from)}, {"horizon", horizon}, {"seed", c.seed}, {"plays", plays}};
  std::optional<McEstimate> est;
  std::vector<Rational> values;
  if (!payoff.empty()) {
    const auto spec = PayoffSpec::parse(payoff);
    values = brute_force_value(arena, spec).values;
    est = stopped_value_mc(arena, values, sigma, tau, from, StoppingRule::at_horizon(horizon), trials, c.seed);
    doc["stopped_value"] = {{"mean", est->mean},
                            {"half_width", est->half_width},
                            {"exact_value_at_source", to_string(values[from])}};
  }
  print(c, doc, [&] {
    for (const auto& l : lines) std::cout << l << "\n";
    if (est) {
      std::cout << "E[val(S_" << horizon << ")] ~ " << est->mean << " +/- " << est->half_width << " (val = "
                << to_string(values[from]) << ")\n";
    }
  });
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic games with shift-invariant payoffs: solve, inspect and verify"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"human", "structured"}))
      ->capture_default_str();
  app.add_option("--seed", common.seed, "Root seed for anything random")->capture_default_str();

  std::string game, payoff, sigma_file, tau_file, source, epsilon_text;
  std::uint64_t budget = kDefaultPairBudget;
  std::size_t horizon = 10, trials = 10'000, memory = 2;
  std::uint64_t sigmas = 100'000;
  WordBounds bounds;

  auto* solve = app.add_subcommand("solve", "Values and certificates by profile enumeration");
  solve->add_option("game", game, "Game file, fixture:NAME or random:k=v,...")->required();
  solve->add_option("--payoff", payoff)->required();
  solve->add_option("--budget", budget, "Most strategy pairs enumerated")->capture_default_str();

  auto* br = app.add_subcommand("best-response", "What P2 can hold P1's strategy to");
  br->add_option("game", game)->required();
  br->add_option("--payoff", payoff)->required();
  br->add_option("--sigma", sigma_file)->required();

  auto* classify = app.add_subcommand("classify", "Value-preserving and stable actions");
  classify->add_option("game", game)->required();
  classify->add_option("--payoff", payoff)->required();

  auto* mart = app.add_subcommand("martingale", "Exact one-step check of val along the induced chain");
  mart->add_option("game", game)->required();
  mart->add_option("--payoff", payoff)->required();
  mart->add_option("--sigma", sigma_file, "P1 strategy file (default: first action everywhere)");
  mart->add_option("--tau", tau_file, "P2 strategy file (default: first action everywhere)");
  mart->add_option("--source", source, "Start state (default: every state)");

  auto* sim = app.add_subcommand("simulate", "Sample plays");
  sim->add_option("game", game)->required();
  sim->add_option("--sigma", sigma_file);
  sim->add_option("--tau", tau_file);
  sim->add_option("--horizon", horizon)->capture_default_str();
  sim->add_option("--trials", trials)->capture_default_str();
  sim->add_option("--source", source);
  sim->add_option("--payoff", payoff, "Also estimate E[val] at the horizon");

  auto* check = app.add_subcommand("check", "Search for payoff property violations");
  check->require_subcommand(1);
  for (const char* what : {"submixing", "shift-invariance"}) {
    auto* sub = check->add_subcommand(what);
    sub->add_option("--payoff", payoff)->required();
    sub->add_option("--max-cycle", bounds.max_cycle)->capture_default_str();
    sub->add_option("--max-block", bounds.max_block)->capture_default_str();
    sub->add_option("--random-cases", bounds.random_cases)->capture_default_str();
    sub->add_option("--max-prefix", bounds.max_prefix)->capture_default_str();
  }

  auto* verify = app.add_subcommand("verify", "Theorem harness");
  verify->require_subcommand(1);
  auto* halfpos = verify->add_subcommand("halfpos", "No finite-memory strategy beats the best positional one");
  halfpos->add_option("game", game)->required();
  halfpos->add_option("--payoff", payoff)->required();
  halfpos->add_option("--budget", budget, "Most strategy pairs enumerated")->capture_default_str();
  halfpos->add_option("--memory", memory, "Memory bound of the sweep")->capture_default_str();
  halfpos->add_option("--sigmas", sigmas, "Most finite-memory strategies examined")->capture_default_str();
  auto* subgame = verify->add_subcommand("subgame", "Reset strategy guarantees val - 2 epsilon everywhere");
  subgame->add_option("game", game)->required();
  subgame->add_option("--payoff", payoff)->required();
  subgame->add_option("--sigma", sigma_file)->required();
  subgame->add_option("--epsilon", epsilon_text)->required();

  auto* reproduce = app.add_subcommand("reproduce", "Built-in examples");
  reproduce->require_subcommand(1);
  reproduce->add_subcommand("fig1", "Suffix-target game where P1 needs memory");

  auto* doob = app.add_subcommand("doob", "Stopped martingale checks with locally optimal strategies");
  doob->add_option("game", game)->required();
  doob->add_option("--payoff", payoff)->required();
  doob->add_option("--trials", trials)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve) return cmd_solve(common, game, payoff, budget);
    if (*br) return cmd_best_response(common, game, payoff, sigma_file);
    if (*classify) return cmd_classify(common, game, payoff);
    if (*mart) return cmd_martingale(common, game, payoff, sigma_file, tau_file, source);
    if (*sim) return cmd_simulate(common, game, sigma_file, tau_file, horizon, trials, source, payoff);
    if (*check) {
      const auto spec = PayoffSpec::parse(payoff);
      if (*check->get_subcommand("submixing")) return emit(common, search_submixing_violation(spec, bounds, common.seed));
      return emit(common, search_shift_violation(spec, bounds, common.seed));
    }
    if (*halfpos) {
      const auto spec = PayoffSpec::parse(payoff);
      HalfposBudget b;
      b.pairs = budget;
      b.memory = memory;
      b.sigmas = sigmas;
      b.seed = common.seed;
      return emit(common, verify_halfpos(load_game(game, spec.required_kind()), spec, b));
    }
    if (*subgame) {
      const auto spec = PayoffSpec::parse(payoff);
      const auto arena = load_game(game, spec.required_kind());
      Rational eps;
      try {
        eps = parse_rational(epsilon_text);
      } catch (const std::invalid_argument&) {
        throw ValidationError("--epsilon must be a rational such as 1/8");
      }
      return emit(common, verify_subgame_perfect(arena, spec, load_strategy(arena, sigma_file), eps));
    }
    if (*reproduce) return emit(common, reproduce_counterexample());
    if (*doob) {
      const auto spec = PayoffSpec::parse(payoff);
      return emit(common, doob_suite(load_game(game, spec.required_kind()), spec, trials, common.seed));
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "error: " << e.what() << "\nsplit the arena or raise --budget\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
