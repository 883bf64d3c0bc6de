#include "spg/errors.hpp"
#include "spg/strategy.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace spg {

using nlohmann::json;

namespace {

StateId state_named(const Arena& arena, const json& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + ": state name must be a string");
  const auto s = arena.find_state(v.get<std::string>());
  if (!s) throw ValidationError(where + ": unknown state '" + v.get<std::string>() + "'");
  return *s;
}

ActionIndex action_named(const Arena& arena, StateId s, const json& v, const std::string& where) {
  if (!v.is_string()) throw ValidationError(where + ": action name must be a string");
  const auto a = arena.find_action(s, v.get<std::string>());
  if (!a) {
    throw ValidationError(where + ": action '" + v.get<std::string>() + "' is not available at '" +
                          arena.state_name(s) + "'");
  }
  return *a;
}

FiniteMemoryStrategy pure_from_map(const Arena& arena, const json& doc) {
  std::optional<Player> player;
  PureStationaryStrategy pure;
  pure.choice.resize(arena.num_states());
  for (const auto& [name, action] : doc.items()) {
    const auto s = state_named(arena, json(name), "strategy");
    if (player && *player != arena.owner(s)) throw ValidationError("pure strategy mixes states of both players");
    player = arena.owner(s);
    pure.choice[s] = action_named(arena, s, action, "strategy");
  }
  if (!player) throw ValidationError("empty pure strategy map");
  pure.player = *player;
  for (StateId s = 0; s < arena.num_states(); ++s) {
    if (arena.owner(s) == pure.player && !pure.choice[s]) {
      throw ValidationError("pure strategy has no action for state '" + arena.state_name(s) + "'");
    }
  }
  return FiniteMemoryStrategy::from_pure(arena, pure);
}

}  // namespace

FiniteMemoryStrategy strategy_from_json(const Arena& arena, const json& doc) {
  if (!doc.is_object()) throw ValidationError("strategy document must be an object");
  if (!doc.contains("memory_states")) return pure_from_map(arena, doc);

  const auto player_text = doc.value("player", std::string("P1"));
  if (player_text != "P1" && player_text != "P2") throw ValidationError("player must be \"P1\" or \"P2\"");
  const Player player = player_text == "P1" ? Player::P1 : Player::P2;

  std::vector<std::string> names;
  std::map<std::string, FiniteMemoryStrategy::Memory> memory_index;
  for (const auto& m : doc.at("memory_states")) {
    if (!m.is_string()) throw ValidationError("memory state names must be strings");
    if (!memory_index.emplace(m.get<std::string>(), static_cast<FiniteMemoryStrategy::Memory>(names.size())).second) {
      throw ValidationError("duplicate memory state '" + m.get<std::string>() + "'");
    }
    names.push_back(m.get<std::string>());
  }
  auto memory_named = [&](const json& v, const std::string& where) {
    if (!v.is_string() || !memory_index.count(v.get<std::string>())) {
      throw ValidationError(where + ": unknown memory state " + v.dump());
    }
    return memory_index.at(v.get<std::string>());
  };
  const auto initial = doc.contains("initial") ? memory_named(doc.at("initial"), "initial") : 0;
  FiniteMemoryStrategy out(arena, player, names, initial);

  struct Rule {
    FiniteMemoryStrategy::Memory from;
    std::optional<StateId> state;
    std::optional<std::string> action;
    std::optional<StateId> next;
    FiniteMemoryStrategy::Memory to;
  };
  std::vector<Rule> rules;
  if (doc.contains("update")) {
    std::size_t i = 0;
    for (const auto& r : doc.at("update")) {
      const std::string where = "update[" + std::to_string(i++) + "]";
      Rule rule{memory_named(r.at("from"), where), std::nullopt, std::nullopt, std::nullopt,
                memory_named(r.at("to"), where)};
      if (r.contains("state")) rule.state = state_named(arena, r.at("state"), where);
      if (r.contains("action")) rule.action = r.at("action").get<std::string>();
      if (r.contains("next")) rule.next = state_named(arena, r.at("next"), where);
      rules.push_back(rule);
    }
  }
  out.set_updates([&](FiniteMemoryStrategy::Memory m, PairIndex p, StateId next) {
    const auto s = arena.pair_state(p);
    const auto& action = arena.action(s, arena.pair_action(p)).name;
    for (const auto& rule : rules) {
      if (rule.from != m) continue;
      if (rule.state && *rule.state != s) continue;
      if (rule.action && *rule.action != action) continue;
      if (rule.next && *rule.next != next) continue;
      return rule.to;
    }
    return m;
  });

  if (doc.contains("choice")) {
    std::size_t i = 0;
    for (const auto& c : doc.at("choice")) {
      const std::string where = "choice[" + std::to_string(i++) + "]";
      const auto m = memory_named(c.at("memory"), where);
      const auto s = state_named(arena, c.at("state"), where);
      if (c.contains("action")) {
        out.set_pure_choice(m, s, action_named(arena, s, c.at("action"), where));
      } else if (c.contains("distribution")) {
        ActionDistribution dist;
        for (const auto& [name, w] : c.at("distribution").items()) {
          if (!w.is_string()) throw ValidationError(where + ": weights must be rational strings");
          dist.emplace_back(action_named(arena, s, json(name), where), parse_rational(w.get<std::string>()));
        }
        out.set_choice(m, s, std::move(dist));
      } else {
        throw ValidationError(where + ": needs 'action' or 'distribution'");
      }
    }
  }
  out.validate(arena);
  return out;
}

FiniteMemoryStrategy load_strategy(const Arena& arena, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open strategy file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return strategy_from_json(arena, doc);
  } catch (const json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

json strategy_to_json(const Arena& arena, const FiniteMemoryStrategy& strategy) {
  json doc;
  doc["player"] = to_string(strategy.player());
  doc["memory_states"] = strategy.memory_names();
  doc["initial"] = strategy.memory_name(strategy.initial());
  json update = json::array();
  for (FiniteMemoryStrategy::Memory m = 0; m < strategy.memory_size(); ++m) {
    for (PairIndex p = 0; p < arena.num_pairs(); ++p) {
      const auto s = arena.pair_state(p);
      const auto& act = arena.action(s, arena.pair_action(p));
      for (const auto& succ : act.successors) {
        const auto to = strategy.raw_update(m, p, succ.state);
        if (to == FiniteMemoryStrategy::kUnset || to == m) continue;
        update.push_back(json{{"from", strategy.memory_name(m)},
                              {"state", arena.state_name(s)},
                              {"action", act.name},
                              {"next", arena.state_name(succ.state)},
                              {"to", strategy.memory_name(to)}});
      }
    }
  }
  doc["update"] = update;
  json choice = json::array();
  for (FiniteMemoryStrategy::Memory m = 0; m < strategy.memory_size(); ++m) {
    for (StateId s = 0; s < arena.num_states(); ++s) {
      const auto& dist = strategy.choice(m, s);
      if (dist.empty()) continue;
      json entry{{"memory", strategy.memory_name(m)}, {"state", arena.state_name(s)}};
      if (dist.size() == 1 && dist[0].second == 1) {
        entry["action"] = arena.action(s, dist[0].first).name;
      } else {
        json d = json::object();
        for (const auto& [a, w] : dist) d[arena.action(s, a).name] = to_string(w);
        entry["distribution"] = d;
      }
      choice.push_back(entry);
    }
  }
  doc["choice"] = choice;
  return doc;
}

json pure_strategy_to_json(const Arena& arena, const PureStationaryStrategy& strategy) {
  json doc = json::object();
  for (StateId s = 0; s < arena.num_states(); ++s) {
    if (strategy.choice[s]) doc[arena.state_name(s)] = arena.action(s, *strategy.choice[s]).name;
  }
  return doc;
}

}  // namespace spg
