#pragma once

#include "spg/errors.hpp"

#include <string>
#include <utility>
#include <vector>

namespace spg {

/// Ultimately periodic word prefix . cycle^omega. The cycle is non-empty.
template <class Letter>
struct LassoWord {
  std::vector<Letter> prefix;
  std::vector<Letter> cycle;

  /// Letter at position i of the infinite word.
  const Letter& at(std::size_t i) const {
    return i < prefix.size() ? prefix[i] : cycle[(i - prefix.size()) % cycle.size()];
  }

  /// The word with its first letter removed.
  LassoWord tail() const {
    LassoWord out;
    if (!prefix.empty()) {
      out.prefix.assign(prefix.begin() + 1, prefix.end());
      out.cycle = cycle;
    } else {
      out.cycle.assign(cycle.begin() + 1, cycle.end());
      out.cycle.push_back(cycle.front());
    }
    return out;
  }

  bool operator==(const LassoWord&) const = default;
};

/// Block lengths of an interleaving u0 v0 u1 v1 ...: a finite list of
/// (u-length, v-length) blocks followed by a list repeated forever.
struct ShufflePattern {
  std::vector<std::pair<std::size_t, std::size_t>> prefix_blocks;
  std::vector<std::pair<std::size_t, std::size_t>> repeated_blocks;

  bool operator==(const ShufflePattern&) const = default;
};

/// Pattern alternating blocks of `u_len` letters of u and `v_len` of v.
inline ShufflePattern alternating_pattern(std::size_t u_len, std::size_t v_len) {
  return ShufflePattern{{}, {{u_len, v_len}}};
}

/// Interleaves u and v along `pattern`. Every letter of both words is placed
/// exactly once and in order, so the repeated blocks must take at least one
/// letter from each word per period; otherwise the pattern leaves letters
/// unplaced and ValidationError is thrown. The result is found as a lasso by
/// detecting the first repeated (position in u, position in v) at the start
/// of a period, which always happens since both inputs are lassos.
template <class Letter>
LassoWord<Letter> shuffle(const LassoWord<Letter>& u, const LassoWord<Letter>& v, const ShufflePattern& pattern) {
  if (u.cycle.empty() || v.cycle.empty()) throw ValidationError("shuffle operands must have non-empty cycles");
  std::size_t per_u = 0;
  std::size_t per_v = 0;
  for (const auto& [a, b] : pattern.repeated_blocks) {
    per_u += a;
    per_v += b;
  }
  if (per_u == 0 || per_v == 0) {
    throw ValidationError(std::string("shuffle pattern leaves letters of ") + (per_u == 0 ? "u" : "v") +
                          " unplaced: its repeated blocks take none of them");
  }
  auto normalise = [](const LassoWord<Letter>& w, std::size_t i) {
    return i < w.prefix.size() ? i : w.prefix.size() + (i - w.prefix.size()) % w.cycle.size();
  };
  std::vector<Letter> out;
  std::size_t iu = 0;
  std::size_t iv = 0;
  auto emit = [&](std::size_t a, std::size_t b) {
    for (std::size_t k = 0; k < a; ++k) out.push_back(u.at(iu++));
    for (std::size_t k = 0; k < b; ++k) out.push_back(v.at(iv++));
  };
  for (const auto& [a, b] : pattern.prefix_blocks) emit(a, b);
  // Output position at which each (position in u, position in v) pair
  // started a period.
  const std::size_t width = v.prefix.size() + v.cycle.size();
  constexpr std::size_t unseen = static_cast<std::size_t>(-1);
  std::vector<std::size_t> seen((u.prefix.size() + u.cycle.size()) * width, unseen);
  while (true) {
    std::size_t& start = seen[normalise(u, iu) * width + normalise(v, iv)];
    if (start != unseen) {
      LassoWord<Letter> w;
      w.prefix.assign(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(start));
      w.cycle.assign(out.begin() + static_cast<std::ptrdiff_t>(start), out.end());
      return w;
    }
    start = out.size();
    for (const auto& [a, b] : pattern.repeated_blocks) emit(a, b);
  }
}

}  // namespace spg
