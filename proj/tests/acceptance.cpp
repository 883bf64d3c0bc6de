// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.

#include "support.hpp"

#include "spg/fixtures.hpp"
#include "spg/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>

using namespace spg;
using namespace spg::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
std::string only;

void run(const char* id, const char* title, const std::function<Outcome()>& body) {
  if (!only.empty() && only != id) return;
  const auto t0 = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %s: %s (%s; %.2f s)\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
}

// 1. Exact saddle points on the grid and certified sigma* for both-positional specs.
Outcome both_positional() {
  const auto t0 = Clock::now();
  std::size_t instances = 0, bad = 0;
  std::string first_bad;
  for (const char* text : {"mean", "parity", "limsup", "liminf", "discounted"}) {
    const auto spec = PayoffSpec::parse(text);
    for (std::uint64_t i = 0; i < 200; ++i) {
      auto p = corpus_params(kCorpusSeed, i, 4, 3, spec.required_kind());
      p.discount = make_rational(1, 2);
      const auto arena = random_arena(p).arena;
      ++instances;
      bool ok = true;
      try {
        const auto v = brute_force_value(arena, spec);
        const auto br = best_response_min(arena, spec, v.sigma_star);
        ok = br.values == v.values;
      } catch (const Error&) {
        ok = false;
      }
      if (!ok && bad++ == 0) first_bad = std::string(text) + " #" + std::to_string(i);
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << instances << " instances, " << bad << " failures" << (bad ? " first " + first_bad : "") << ", " << secs
    << " s of 60";
  return {bad == 0 && secs < 60, d.str()};
}

// 2. The memory-2 sweep never beats the best positional strategy.
Outcome half_positional() {
  std::size_t refuted = 0, confirmed = 0, inconclusive = 0;
  std::string first;
  for (const char* text : {"posavg", "optgenmean:2", "meancobuchi:100"}) {
    const auto spec = PayoffSpec::parse(text);
    for (std::uint64_t i = 0; i < 100; ++i) {
      const auto r = verify_halfpos(corpus_arena(i, spec), spec, HalfposBudget{});
      if (r.verdict == Verdict::Refuted) {
        if (refuted++ == 0) first = std::string(text) + " #" + std::to_string(i);
      } else if (r.verdict == Verdict::Confirmed) {
        ++confirmed;
      } else {
        ++inconclusive;
      }
    }
  }
  std::ostringstream d;
  d << confirmed << " confirmed, " << inconclusive << " sampled within budget, " << refuted << " refuted"
    << (refuted ? " first " + first : "");
  return {refuted == 0, d.str()};
}

ColourWord word_from(const nlohmann::json& j) {
  ColourWord w;
  for (const auto& c : j.at("prefix")) w.prefix.push_back(colour_from_json(c));
  for (const auto& c : j.at("cycle")) w.cycle.push_back(colour_from_json(c));
  return w;
}

// 3. Submixing search: confirmed for the submixing catalog, replayable refutation for genmean:2.
Outcome submixing() {
  const auto t0 = Clock::now();
  std::string detail;
  bool ok = true;
  for (const char* text : {"mean", "limsup", "liminf", "parity", "posavg", "optgenmean:2"}) {
    const auto r = search_submixing_violation(PayoffSpec::parse(text));
    if (r.verdict != Verdict::Confirmed) {
      ok = false;
      detail += std::string(text) + " " + to_string(r.verdict) + "; ";
    }
  }
  const auto spec = PayoffSpec::parse("genmean:2");
  const auto r = search_submixing_violation(spec);
  bool replayed = false;
  if (r.verdict == Verdict::Refuted) {
    const auto& w = r.quantities.at("witness");
    ShufflePattern pattern;
    for (const auto& b : w.at("pattern").at("prefix_blocks")) pattern.prefix_blocks.emplace_back(b[0], b[1]);
    for (const auto& b : w.at("pattern").at("repeated_blocks")) pattern.repeated_blocks.emplace_back(b[0], b[1]);
    const auto u = word_from(w.at("u")), v = word_from(w.at("v"));
    const auto mixed = spg::shuffle(u, v, pattern);
    const auto fw = evaluate_lasso(spec, mixed);
    replayed = mixed == word_from(w.at("w")) && fw > evaluate_lasso(spec, u) && fw > evaluate_lasso(spec, v) &&
               to_string(fw) == w.at("f_w").get<std::string>();
  }
  if (!replayed) {
    ok = false;
    detail += "genmean:2 not refuted with a replayable witness; ";
  }
  const double secs = seconds_since(t0);
  detail += "6 confirmed, genmean:2 refuted and replayed, " + std::to_string(secs) + " s of 30";
  return {ok && secs < 30, detail};
}

// 4. Counter-example triple.
Outcome counterexample() {
  const auto t0 = Clock::now();
  const auto a = reproduce_counterexample();
  const auto b = reproduce_counterexample();
  const double secs = seconds_since(t0) / 2;
  const auto triple = a.quantities.at("triple");
  const bool ok = triple == nlohmann::json{0, 0, 1} && a.to_json() == b.to_json() && a.verdict == Verdict::Confirmed;
  return {ok && secs < 1, "triple " + triple.dump() + ", identical reruns " + (a.to_json() == b.to_json() ? "yes" : "no")};
}

// 5. Reset strategy on the crafted fixture and on weakened random bases.
Outcome reset_check() {
  const auto spec = PayoffSpec::parse("mean");
  const auto e4 = fixtures::e4();
  const auto crafted = verify_subgame_perfect(e4, spec, fixtures::e4_sigma(e4), make_rational(1, 8));
  const bool crafted_ok = crafted.verdict == Verdict::Confirmed &&
                          crafted.quantities.at("base_sigma_passes") == false &&
                          crafted.quantities.at("sigma_epsilon_optimal") == true;
  std::size_t confirmed = 0, with_weak = 0, preconditions = 0;
  Rng rng(derive_seed(kCorpusSeed, 5));
  for (std::uint64_t i = 0; i < 50; ++i) {
    const auto arena = corpus_arena(i, spec);
    const auto value = brute_force_value(arena, spec);
    const Rational eps = i % 2 == 0 ? make_rational(1, 8) : make_rational(1, 4);
    const auto sigma = weakened_base(arena, spec, value, eps, rng);
    const auto r = verify_subgame_perfect(arena, spec, sigma, eps, value.values);
    if (r.quantities.at("sigma_epsilon_optimal") == true && r.quantities.at("sigma_locally_optimal") == true) {
      ++preconditions;
    }
    if (!r.quantities.at("weak_pairs").empty()) ++with_weak;
    if (r.verdict == Verdict::Confirmed) ++confirmed;
  }
  std::ostringstream d;
  d << "fixture " << (crafted_ok ? "reset confirmed, base fails" : "unexpected: " + to_string(crafted.verdict))
    << "; random " << confirmed << "/50 confirmed, " << with_weak << " with weak pairs, " << preconditions
    << "/50 meet the preconditions";
  return {crafted_ok && confirmed == 50 && preconditions == 50, d.str()};
}

// 6. Martingale equality on the corpus and stopped-value coverage.
Outcome martingale() {
  std::size_t pairs = 0, equal = 0;
  for (const char* text : {"mean", "parity", "limsup", "liminf"}) {
    const auto spec = PayoffSpec::parse(text);
    for (std::uint64_t i = 0; i < 200; ++i) {
      const auto arena = corpus_arena(i, spec);
      const auto values = brute_force_value(arena, spec).values;
      const auto cls = classify_actions(arena, values);
      Rng rng(derive_seed(kCorpusSeed, 600 + i));
      const auto sigma = FiniteMemoryStrategy::from_pure(arena, random_preserving(arena, cls, Player::P1, rng));
      const auto tau = FiniteMemoryStrategy::from_pure(arena, random_preserving(arena, cls, Player::P2, rng));
      bool all = true;
      for (StateId s = 0; s < arena.num_states(); ++s) all = all && martingale_check(arena, values, sigma, tau, s).is_martingale();
      ++pairs;
      equal += all;
    }
  }
  const auto spec = PayoffSpec::parse("mean");
  std::size_t covered = 0;
  for (std::uint64_t run = 0; run < 100; ++run) {
    const auto arena = corpus_arena(run, spec);
    const auto values = brute_force_value(arena, spec).values;
    const auto cls = classify_actions(arena, values);
    Rng rng(derive_seed(kCorpusSeed, 900 + run));
    const auto sigma = FiniteMemoryStrategy::from_pure(arena, random_preserving(arena, cls, Player::P1, rng));
    const auto tau = FiniteMemoryStrategy::from_pure(arena, random_preserving(arena, cls, Player::P2, rng));
    std::vector<bool> target(arena.num_states());
    for (StateId t = 1; t < arena.num_states(); ++t) target[t] = uniform_below(rng, 2) == 1;
    const auto est = stopped_value_mc(arena, values, sigma, tau, 0, StoppingRule::first_hit(target), 10'000, rng());
    covered += est.covers(to_double(values[0]));
  }
  std::ostringstream d;
  d << equal << "/" << pairs << " locally optimal pairs are exact martingales; CI covered val in " << covered
    << "/100 runs";
  return {equal == pairs && covered >= 99, d.str()};
}

// Independent oracles over a 1000-letter unroll.
Rational unrolled_mean(const ColourWord& w) {
  const std::size_t len = w.cycle.size(), start = w.prefix.size();
  const std::size_t count = (1000 - start) / len * len;
  Rational total = 0;
  for (std::size_t i = start; i < start + count; ++i) total += scalar_of(w.at(i));
  return total / Rational(static_cast<long>(count));
}

Outcome oracle_equivalence() {
  Rng rng(derive_seed(kCorpusSeed, 7));
  std::size_t disagreements = 0;
  const auto mean = PayoffSpec::parse("mean"), limsup = PayoffSpec::parse("limsup"),
             liminf = PayoffSpec::parse("liminf"), parity = PayoffSpec::parse("parity"),
             posavg = PayoffSpec::parse("posavg");
  for (int k = 0; k < 1000; ++k) {
    ColourWord rewards, priorities;
    const std::size_t pre = uniform_below(rng, 6), cyc = 1 + uniform_below(rng, 6);
    for (std::size_t i = 0; i < pre + cyc; ++i) {
      const Rational r(static_cast<long>(uniform_below(rng, 5)) - 2, 1 + static_cast<unsigned long>(uniform_below(rng, 3)));
      const Priority p{static_cast<long>(uniform_below(rng, 5))};
      (i < pre ? rewards.prefix : rewards.cycle).push_back(Reward{r});
      (i < pre ? priorities.prefix : priorities.cycle).push_back(p);
    }
    Rational hi = scalar_of(rewards.at(500)), lo = hi;
    long top = 0;
    for (std::size_t i = 500; i < 1000; ++i) {
      hi = std::max(hi, scalar_of(rewards.at(i)));
      lo = std::min(lo, scalar_of(rewards.at(i)));
      top = std::max(top, std::get<Priority>(priorities.at(i)).value);
    }
    const Rational avg = unrolled_mean(rewards);
    auto close = [](const Rational& a, const Rational& b) { return std::abs(to_double(a) - to_double(b)) <= 1e-6; };
    bool ok = close(evaluate_lasso(mean, rewards), avg) && close(evaluate_lasso(limsup, rewards), hi) &&
              close(evaluate_lasso(liminf, rewards), lo) &&
              evaluate_lasso(parity, priorities) == Rational(top % 2 == 1 ? 1 : 0) &&
              evaluate_lasso(posavg, rewards) == Rational(avg > 0 ? 1 : 0);
    disagreements += !ok;
  }
  return {disagreements == 0, std::to_string(1000 - disagreements) + "/1000 lassos agree"};
}

}  // namespace

/// With an argument such as C2 only that criterion runs.
int main(int argc, char** argv) {
  if (argc > 1) only = argv[1];
  run("C1", "both-positional saddle points", both_positional);
  run("C2", "half-positional memory sweep", half_positional);
  run("C3", "submixing classification", submixing);
  run("C4", "counter-example triple", counterexample);
  run("C5", "reset strategy", reset_check);
  run("C6", "martingale suite", martingale);
  run("C7", "lasso oracle equivalence", oracle_equivalence);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
