#include "spg/errors.hpp"
#include "spg/random.hpp"
#include "spg/verify.hpp"

#include <chrono>

namespace spg {

namespace {

using Clock = std::chrono::steady_clock;

nlohmann::json word_json(const ColourWord& w) {
  nlohmann::json prefix = nlohmann::json::array(), cycle = nlohmann::json::array();
  for (const auto& c : w.prefix) prefix.push_back(colour_to_json(c));
  for (const auto& c : w.cycle) cycle.push_back(colour_to_json(c));
  return {{"prefix", prefix}, {"cycle", cycle}, {"text", describe(w)}};
}

nlohmann::json pattern_json(const ShufflePattern& p) {
  nlohmann::json pre = nlohmann::json::array(), rep = nlohmann::json::array();
  for (const auto& [a, b] : p.prefix_blocks) pre.push_back({a, b});
  for (const auto& [a, b] : p.repeated_blocks) rep.push_back({a, b});
  return {{"prefix_blocks", pre}, {"repeated_blocks", rep}};
}

/// Cycles of length 1..max_len over `size` letters that are their own
/// least rotation.
std::vector<std::vector<std::size_t>> necklaces(std::size_t size, std::size_t max_len) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::size_t> w(len, 0);
    while (true) {
      bool least = true;
      for (std::size_t r = 1; r < len && least; ++r) {
        std::vector<std::size_t> rot(w.begin() + static_cast<std::ptrdiff_t>(r), w.end());
        rot.insert(rot.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(r));
        if (rot < w) least = false;
      }
      if (least) out.push_back(w);
      std::size_t i = 0;
      while (i < len && ++w[i] == size) w[i++] = 0;
      if (i == len) break;
    }
  }
  return out;
}

ColourWord random_word(const std::vector<ColourToken>& alphabet, const WordBounds& bounds, Rng& rng) {
  ColourWord w;
  const auto pre = uniform_below(rng, bounds.max_prefix + 1);
  const auto cyc = 1 + uniform_below(rng, bounds.max_cycle + 2);
  for (std::uint64_t i = 0; i < pre; ++i) w.prefix.push_back(alphabet[uniform_below(rng, alphabet.size())]);
  for (std::uint64_t i = 0; i < cyc; ++i) w.cycle.push_back(alphabet[uniform_below(rng, alphabet.size())]);
  return w;
}

ShufflePattern random_pattern(Rng& rng) {
  ShufflePattern p;
  const auto pre = uniform_below(rng, 3);
  for (std::uint64_t i = 0; i < pre; ++i) p.prefix_blocks.push_back({uniform_below(rng, 4), uniform_below(rng, 4)});
  while (true) {
    p.repeated_blocks.clear();
    const auto rep = 1 + uniform_below(rng, 3);
    std::size_t su = 0, sv = 0;
    for (std::uint64_t i = 0; i < rep; ++i) {
      const std::size_t a = uniform_below(rng, 4), b = uniform_below(rng, 4);
      su += a;
      sv += b;
      p.repeated_blocks.push_back({a, b});
    }
    if (su > 0 && sv > 0) return p;
  }
}

VerificationReport finish(VerificationReport report, const PayoffSpec& spec, std::uint64_t seed,
                          Clock::time_point started) {
  report.fingerprint = spec.name() + "/seed=" + std::to_string(seed);
  report.quantities["seed"] = seed;
  report.wall_seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return report;
}

}  // namespace

std::vector<ColourToken> search_alphabet(const PayoffSpec& spec) {
  std::vector<ColourToken> out;
  switch (spec.required_kind()) {
    case ColourKind::Reward:
      if (spec.kind == PayoffKind::GeometricFirstOne) return {Reward{0}, Reward{1}};
      for (long r = -2; r <= 2; ++r) out.push_back(Reward{Rational(r)});
      return out;
    case ColourKind::Discounted:
      for (long r = -2; r <= 2; ++r) out.push_back(DiscountedReward{Rational(r), Rational(1, 2)});
      return out;
    case ColourKind::Priority:
      for (long p = 0; p <= 4; ++p) out.push_back(Priority{p});
      return out;
    case ColourKind::Increment:
      for (long r = -2; r <= 2; ++r) out.push_back(Increment{r});
      return out;
    case ColourKind::FlaggedReward:
      for (long r = -1; r <= 2; ++r) out.push_back(FlaggedReward{Rational(r), false});
      out.push_back(FlaggedReward{Rational(1), true});
      return out;
    case ColourKind::Letter: return {Letter{"a"}, Letter{"b"}};
    case ColourKind::Vector: {
      const std::size_t k = spec.dimension;
      if (k == 2) {
        for (auto [x, y] : std::vector<std::pair<long, long>>{{2, -1}, {-1, 2}, {-1, -1}, {1, 0}, {0, 1}}) {
          out.push_back(RewardVector{{Rational(x), Rational(y)}});
        }
        return out;
      }
      for (long j = 0; j < 5; ++j) {
        RewardVector v;
        for (std::size_t d = 0; d < k; ++d) v.values.push_back(Rational((j + static_cast<long>(d)) % 5 - 2));
        out.push_back(std::move(v));
      }
      return out;
    }
  }
  return out;
}

VerificationReport search_submixing_violation(const PayoffSpec& spec, const WordBounds& bounds, std::uint64_t seed) {
  const auto started = Clock::now();
  const auto alphabet = search_alphabet(spec);
  VerificationReport report;
  report.claim = "submixing";
  report.quantities["flagged_submixing"] = spec.is_submixing();
  report.quantities["alphabet_size"] = alphabet.size();
  report.quantities["max_cycle"] = bounds.max_cycle;
  report.quantities["max_block"] = bounds.max_block;
  std::uint64_t checks = 0;
  auto found = [&](const SubmixingWitness& w) {
    report.verdict = Verdict::Refuted;
    report.quantities["checks"] = checks;
    report.quantities["witness"] = {{"u", word_json(w.u)},      {"v", word_json(w.v)},
                                    {"pattern", pattern_json(w.pattern)}, {"w", word_json(w.w)},
                                    {"f_u", to_string(w.fu)},   {"f_v", to_string(w.fv)},
                                    {"f_w", to_string(w.fw)}};
    return finish(report, spec, seed, started);
  };

  // Exhaustive part: rotation classes of short cycles. The shuffles run on
  // letter indices and only the result is spelled out in colours.
  std::vector<LassoWord<std::size_t>> codes;
  std::vector<ColourWord> words;
  std::vector<Rational> values;
  // Assigning into existing tokens reuses their storage.
  auto spell_into = [&](const LassoWord<std::size_t>& code, ColourWord& w) {
    w.prefix.resize(code.prefix.size());
    w.cycle.resize(code.cycle.size());
    for (std::size_t k = 0; k < code.prefix.size(); ++k) w.prefix[k] = alphabet[code.prefix[k]];
    for (std::size_t k = 0; k < code.cycle.size(); ++k) w.cycle[k] = alphabet[code.cycle[k]];
  };
  for (const auto& cycle : necklaces(alphabet.size(), bounds.max_cycle)) {
    codes.push_back({{}, cycle});
    spell_into(codes.back(), words.emplace_back());
    values.push_back(evaluate_lasso(spec, words.back()));
  }
  std::vector<ShufflePattern> patterns;
  for (std::size_t a = 1; a <= bounds.max_block; ++a) {
    for (std::size_t b = 1; b <= bounds.max_block; ++b) patterns.push_back(alternating_pattern(a, b));
  }
  ColourWord w;
  for (std::size_t i = 0; i < codes.size(); ++i) {
    for (std::size_t j = 0; j < codes.size(); ++j) {
      const Rational& top = std::max(values[i], values[j]);
      for (const auto& pattern : patterns) {
        ++checks;
        spell_into(shuffle(codes[i], codes[j], pattern), w);
        const Rational fw = evaluate_lasso(spec, w);
        if (fw > top) return found({words[i], words[j], pattern, w, values[i], values[j], fw});
      }
    }
  }
  report.quantities["exhaustive_words"] = words.size();
  // Randomised part: prefixes and multi-block patterns.
  Rng rng(seed);
  for (std::size_t k = 0; k < bounds.random_cases; ++k) {
    const auto u = random_word(alphabet, bounds, rng);
    const auto v = random_word(alphabet, bounds, rng);
    const auto pattern = random_pattern(rng);
    ++checks;
    if (auto w = check_submixing(spec, u, v, pattern)) return found(*w);
  }
  report.quantities["checks"] = checks;
  report.verdict = Verdict::Confirmed;
  return finish(report, spec, seed, started);
}

VerificationReport search_shift_violation(const PayoffSpec& spec, const WordBounds& bounds, std::uint64_t seed) {
  const auto started = Clock::now();
  const auto alphabet = search_alphabet(spec);
  VerificationReport report;
  report.claim = "shift-invariance";
  report.quantities["flagged_shift_invariant"] = spec.is_shift_invariant();
  report.quantities["alphabet_size"] = alphabet.size();
  std::uint64_t checks = 0;
  auto check = [&](const ColourWord& w) {
    ++checks;
    if (auto hit = check_shift_invariance(spec, w, w.prefix.size() + w.cycle.size())) {
      report.verdict = Verdict::Refuted;
      report.quantities["witness"] = {{"word", word_json(w)},
                                      {"shift", hit->shift},
                                      {"f_word", to_string(hit->original)},
                                      {"f_suffix", to_string(hit->shifted)}};
      return true;
    }
    return false;
  };
  // Exhaustive: prefixes of length <= 1 in front of every short necklace,
  // shortest words first.
  const auto cycles = necklaces(alphabet.size(), bounds.max_cycle);
  for (std::size_t pre = 0; pre <= std::min<std::size_t>(bounds.max_prefix, 1); ++pre) {
    for (const auto& code : cycles) {
      for (std::size_t first = 0; first < (pre ? alphabet.size() : 1); ++first) {
        ColourWord w;
        if (pre) w.prefix.push_back(alphabet[first]);
        for (auto i : code) w.cycle.push_back(alphabet[i]);
        if (check(w)) {
          report.quantities["checks"] = checks;
          return finish(report, spec, seed, started);
        }
      }
    }
  }
  Rng rng(seed);
  for (std::size_t k = 0; k < bounds.random_cases; ++k) {
    if (check(random_word(alphabet, bounds, rng))) {
      report.quantities["checks"] = checks;
      return finish(report, spec, seed, started);
    }
  }
  report.quantities["checks"] = checks;
  report.verdict = Verdict::Confirmed;
  return finish(report, spec, seed, started);
}

}  // namespace spg
