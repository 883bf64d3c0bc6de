#pragma once

#include "spg/rational.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spg {

enum class ColourKind { Reward, Discounted, Priority, Vector, Letter, Increment, FlaggedReward };

std::string to_string(ColourKind kind);

struct Reward {
  Rational value;
  bool operator==(const Reward&) const = default;
};

/// Reward paid now, and the factor applied to everything after it.
struct DiscountedReward {
  Rational value;
  Rational discount;
  bool operator==(const DiscountedReward&) const = default;
};

struct Priority {
  long value = 0;
  bool operator==(const Priority&) const = default;
};

struct RewardVector {
  std::vector<Rational> values;
  bool operator==(const RewardVector&) const = default;
};

/// Letter of a finite alphabet; the empty string stands for the silent
/// colour (skipped when building the letter word).
struct Letter {
  std::string value;
  bool operator==(const Letter&) const = default;
};

struct Increment {
  long value = 0;
  bool operator==(const Increment&) const = default;
};

/// Reward together with a Büchi flag.
struct FlaggedReward {
  Rational value;
  bool buchi = false;
  bool operator==(const FlaggedReward&) const = default;
};

using ColourToken = std::variant<Reward, DiscountedReward, Priority, RewardVector, Letter, Increment, FlaggedReward>;

ColourKind kind_of(const ColourToken& token);

/// Scalar carried by the token: reward, priority or increment. Throws
/// KindMismatch for vectors and letters.
Rational scalar_of(const ColourToken& token);

/// Dimension of a RewardVector token, 0 otherwise.
std::size_t dimension_of(const ColourToken& token);

nlohmann::json colour_to_json(const ColourToken& token);

/// Accepts a bare number or rational string (a reward), or one of the
/// tagged objects {"reward"}, {"reward","discount"}, {"priority"},
/// {"vector"}, {"letter"}, {"increment"}, {"reward","buchi"}.
ColourToken colour_from_json(const nlohmann::json& value);

std::string describe(const ColourToken& token);

}  // namespace spg
