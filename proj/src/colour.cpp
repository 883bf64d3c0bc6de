#include "spg/colour.hpp"

#include "spg/errors.hpp"

#include <sstream>

namespace spg {

using nlohmann::json;

std::string to_string(ColourKind kind) {
  switch (kind) {
    case ColourKind::Reward: return "reward";
    case ColourKind::Discounted: return "discounted";
    case ColourKind::Priority: return "priority";
    case ColourKind::Vector: return "vector";
    case ColourKind::Letter: return "letter";
    case ColourKind::Increment: return "increment";
    case ColourKind::FlaggedReward: return "flagged-reward";
  }
  return "?";
}

ColourKind kind_of(const ColourToken& token) { return static_cast<ColourKind>(token.index()); }

Rational scalar_of(const ColourToken& token) {
  struct Visitor {
    Rational operator()(const Reward& c) const { return c.value; }
    Rational operator()(const DiscountedReward& c) const { return c.value; }
    Rational operator()(const Priority& c) const { return Rational(c.value); }
    Rational operator()(const RewardVector&) const { throw KindMismatch("vector colour has no scalar value"); }
    Rational operator()(const Letter&) const { throw KindMismatch("letter colour has no scalar value"); }
    Rational operator()(const Increment& c) const { return Rational(c.value); }
    Rational operator()(const FlaggedReward& c) const { return c.value; }
  };
  return std::visit(Visitor{}, token);
}

std::size_t dimension_of(const ColourToken& token) {
  if (const auto* v = std::get_if<RewardVector>(&token)) return v->values.size();
  return 0;
}

namespace {

Rational rational_from_json(const json& value, const char* what) {
  if (value.is_number_integer()) return Rational(static_cast<long>(value.get<std::int64_t>()));
  if (value.is_string()) {
    try {
      return parse_rational(value.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string(what) + ": " + e.what());
    }
  }
  throw ValidationError(std::string(what) + " must be an integer or a rational string");
}

long integer_from_json(const json& value, const char* what) {
  const Rational r = rational_from_json(value, what);
  if (r.get_den() != 1 || !r.get_num().fits_slong_p()) {
    throw ValidationError(std::string(what) + " must be an integer");
  }
  return r.get_num().get_si();
}

}  // namespace

json colour_to_json(const ColourToken& token) {
  struct Visitor {
    json operator()(const Reward& c) const { return json{{"reward", to_string(c.value)}}; }
    json operator()(const DiscountedReward& c) const {
      return json{{"reward", to_string(c.value)}, {"discount", to_string(c.discount)}};
    }
    json operator()(const Priority& c) const { return json{{"priority", c.value}}; }
    json operator()(const RewardVector& c) const {
      json values = json::array();
      for (const auto& v : c.values) values.push_back(to_string(v));
      return json{{"vector", values}};
    }
    json operator()(const Letter& c) const { return json{{"letter", c.value}}; }
    json operator()(const Increment& c) const { return json{{"increment", c.value}}; }
    json operator()(const FlaggedReward& c) const {
      return json{{"reward", to_string(c.value)}, {"buchi", c.buchi}};
    }
  };
  return std::visit(Visitor{}, token);
}

ColourToken colour_from_json(const json& value) {
  if (value.is_number_integer() || value.is_string()) return Reward{rational_from_json(value, "colour")};
  if (!value.is_object()) throw ValidationError("colour must be a number, a rational string or an object");
  if (value.contains("discount")) {
    DiscountedReward c{rational_from_json(value.at("reward"), "reward"), rational_from_json(value.at("discount"), "discount")};
    if (c.discount < 0 || c.discount >= 1) {
      throw ValidationError("discount " + to_string(c.discount) + " outside [0,1)");
    }
    return c;
  }
  if (value.contains("buchi")) {
    if (!value.at("buchi").is_boolean()) throw ValidationError("buchi flag must be a boolean");
    return FlaggedReward{rational_from_json(value.at("reward"), "reward"), value.at("buchi").get<bool>()};
  }
  if (value.contains("reward")) return Reward{rational_from_json(value.at("reward"), "reward")};
  if (value.contains("priority")) {
    const long p = integer_from_json(value.at("priority"), "priority");
    if (p < 0) throw ValidationError("priority must be non-negative");
    return Priority{p};
  }
  if (value.contains("increment")) return Increment{integer_from_json(value.at("increment"), "increment")};
  if (value.contains("letter")) {
    if (!value.at("letter").is_string()) throw ValidationError("letter must be a string");
    return Letter{value.at("letter").get<std::string>()};
  }
  if (value.contains("vector")) {
    const auto& arr = value.at("vector");
    if (!arr.is_array() || arr.empty()) throw ValidationError("vector colour must be a non-empty array");
    RewardVector c;
    for (const auto& v : arr) c.values.push_back(rational_from_json(v, "vector entry"));
    return c;
  }
  throw ValidationError("unrecognised colour object " + value.dump());
}

std::string describe(const ColourToken& token) {
  struct Visitor {
    std::string operator()(const Reward& c) const { return to_string(c.value); }
    std::string operator()(const DiscountedReward& c) const {
      return "(" + to_string(c.value) + ", " + to_string(c.discount) + ")";
    }
    std::string operator()(const Priority& c) const { return "p" + std::to_string(c.value); }
    std::string operator()(const RewardVector& c) const {
      std::string out = "(";
      for (std::size_t i = 0; i < c.values.size(); ++i) out += (i ? "," : "") + to_string(c.values[i]);
      return out + ")";
    }
    std::string operator()(const Letter& c) const { return c.value.empty() ? "eps" : c.value; }
    std::string operator()(const Increment& c) const { return (c.value >= 0 ? "+" : "") + std::to_string(c.value); }
    std::string operator()(const FlaggedReward& c) const { return to_string(c.value) + (c.buchi ? "!" : ""); }
  };
  return std::visit(Visitor{}, token);
}

}  // namespace spg
