#include "spg/arena.hpp"

#include "spg/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <sstream>

namespace spg {

using nlohmann::json;

namespace {

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) throw ValidationError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string()) throw ValidationError(where + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

Arena parse_arena(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ParseError("syntax error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         e.what(),
                     line, column);
  }
  if (!doc.is_object()) throw ValidationError("game document must be an object");
  const auto& states_json = require(doc, "states", "game");
  const auto& actions_json = require(doc, "actions", "game");
  if (!states_json.is_array()) throw ValidationError("'states' must be a list");
  if (!actions_json.is_array()) throw ValidationError("'actions' must be a list");

  std::vector<StateEntry> states;
  std::map<std::string, StateId> index;
  for (std::size_t i = 0; i < states_json.size(); ++i) {
    const std::string where = "states[" + std::to_string(i) + "]";
    StateEntry st;
    st.name = require_string(states_json[i], "name", where);
    const auto owner = require_string(states_json[i], "owner", where);
    if (owner == "P1") {
      st.owner = Player::P1;
    } else if (owner == "P2") {
      st.owner = Player::P2;
    } else {
      throw ValidationError(where + ": owner must be \"P1\" or \"P2\", got \"" + owner + "\"");
    }
    if (!index.emplace(st.name, static_cast<StateId>(states.size())).second) {
      throw ValidationError("duplicate state '" + st.name + "'");
    }
    states.push_back(std::move(st));
  }

  for (std::size_t i = 0; i < actions_json.size(); ++i) {
    const auto& aj = actions_json[i];
    const std::string where = "actions[" + std::to_string(i) + "]";
    const auto state_name = require_string(aj, "state", where);
    const auto it = index.find(state_name);
    if (it == index.end()) throw ValidationError(where + ": unknown state '" + state_name + "'");
    ActionEntry act;
    act.name = require_string(aj, "action", where);
    try {
      act.colour = colour_from_json(require(aj, "colour", where));
    } catch (const ValidationError& e) {
      throw ValidationError(where + ": " + e.what());
    }
    const auto& succ_json = require(aj, "successors", where);
    if (!succ_json.is_array()) throw ValidationError(where + ": 'successors' must be a list");
    for (std::size_t k = 0; k < succ_json.size(); ++k) {
      const std::string swhere = where + ".successors[" + std::to_string(k) + "]";
      const auto target = require_string(succ_json[k], "state", swhere);
      const auto tt = index.find(target);
      if (tt == index.end()) throw ValidationError(swhere + ": unknown state '" + target + "'");
      const auto& prob = require(succ_json[k], "prob", swhere);
      if (!prob.is_string()) throw ValidationError(swhere + ": 'prob' must be a \"num/den\" string");
      Rational p;
      try {
        p = parse_rational(prob.get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ValidationError(swhere + ": " + e.what());
      }
      act.successors.push_back({tt->second, p});
    }
    states[it->second].actions.push_back(std::move(act));
  }
  return Arena::build(std::move(states));
}

Arena load_arena(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open game file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_arena(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line, e.column);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::string print_arena(const Arena& arena) {
  json doc;
  doc["states"] = json::array();
  doc["actions"] = json::array();
  for (StateId s = 0; s < arena.num_states(); ++s) {
    doc["states"].push_back(json{{"name", arena.state_name(s)}, {"owner", to_string(arena.owner(s))}});
  }
  for (StateId s = 0; s < arena.num_states(); ++s) {
    for (ActionIndex a = 0; a < arena.num_actions(s); ++a) {
      const auto& act = arena.action(s, a);
      json succ = json::array();
      for (const auto& x : act.successors) {
        succ.push_back(json{{"state", arena.state_name(x.state)}, {"prob", to_string(x.prob)}});
      }
      doc["actions"].push_back(json{{"state", arena.state_name(s)},
                                    {"action", act.name},
                                    {"colour", colour_to_json(act.colour)},
                                    {"successors", succ}});
    }
  }
  return doc.dump(2) + "\n";
}

std::string fingerprint(const Arena& arena) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : print_arena(arena)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  std::ostringstream out;
  out << std::hex;
  out.width(16);
  out.fill('0');
  out << h;
  return out.str();
}

}  // namespace spg
