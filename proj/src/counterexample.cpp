#include "spg/errors.hpp"
#include "spg/fixtures.hpp"
#include "spg/verify.hpp"

#include <chrono>
#include <map>
#include <set>

namespace spg {

namespace {

using Memory = FiniteMemoryStrategy::Memory;
using Mask = std::uint64_t;
using Level = std::vector<Mask>;

struct Fig1Steps {
  /// Memory back at s after an a-excursion.
  std::vector<Memory> after_a;
  /// b letters produced by a b-excursion and the memory back at s.
  std::vector<std::size_t> b_count;
  std::vector<Memory> after_b;
};

Fig1Steps excursions(const Arena& arena, const FiniteMemoryStrategy& sigma) {
  auto state = [&](const char* name) {
    const auto s = arena.find_state(name);
    if (!s) throw ValidationError(std::string("counter-example arena lacks state ") + name);
    return *s;
  };
  const StateId s = state("s"), c1 = state("c1"), c2 = state("c2"), c3 = state("c3");
  if (arena.owner(s) != Player::P2 || arena.num_actions(s) != 2 || arena.num_actions(c1) != 2) {
    throw ValidationError("arena does not have the counter-example shape");
  }
  const auto to_c1 = arena.pair_index(s, *arena.find_action(s, "1"));
  const auto to_c3 = arena.pair_index(s, *arena.find_action(s, "2"));
  const auto short_b = *arena.find_action(c1, "1");
  const auto long_b = *arena.find_action(c1, "2");
  Fig1Steps out;
  for (Memory m = 0; m < sigma.memory_size(); ++m) {
    out.after_a.push_back(sigma.update(sigma.update(m, to_c3, c3), arena.pair_index(c3, 0), s));
    const Memory x = sigma.update(m, to_c1, c1);
    const auto& law = sigma.choice(x, c1);
    if (law.size() != 1) throw ValidationError("the run-length analysis needs a pure strategy at c1");
    if (law.front().first == short_b) {
      out.b_count.push_back(1);
      out.after_b.push_back(sigma.update(x, arena.pair_index(c1, short_b), s));
    } else {
      const Memory y = sigma.update(x, arena.pair_index(c1, long_b), c2);
      out.b_count.push_back(2);
      out.after_b.push_back(sigma.update(y, arena.pair_index(c2, 0), s));
    }
  }
  return out;
}

}  // namespace

Fig1Analysis analyse_fig1(const Arena& arena, const FiniteMemoryStrategy& sigma, std::size_t checked_runs) {
  const std::size_t k = sigma.memory_size();
  if (k > 64) throw UnsupportedSpec("run-length analysis supports at most 64 memory states");
  const auto steps = excursions(arena, sigma);
  Fig1Analysis out;

  // Memories seen at s.
  std::vector<bool> seen(k, false);
  std::vector<Memory> stack{sigma.initial()};
  seen[sigma.initial()] = true;
  while (!stack.empty()) {
    const Memory m = stack.back();
    stack.pop_back();
    for (Memory next : {steps.after_a[m], steps.after_b[m]}) {
      if (!seen[next]) {
        seen[next] = true;
        stack.push_back(next);
      }
    }
  }
  for (Memory m = 0; m < k; ++m) {
    if (seen[m]) out.reachable.push_back(m);
  }

  // levels[L][m]: memories at s after exactly L letters b starting from m.
  std::vector<Level> levels;
  levels.push_back(Level(k));
  for (Memory m = 0; m < k; ++m) levels[0][m] = Mask{1} << m;
  auto extend = [&] {
    const std::size_t len = levels.size();
    Level next(k, 0);
    for (Memory m = 0; m < k; ++m) {
      for (std::size_t back = 1; back <= 2 && back <= len; ++back) {
        const Mask from = levels[len - back][m];
        for (Memory x = 0; x < k; ++x) {
          if ((from >> x & 1) && steps.b_count[x] == back) next[m] |= Mask{1} << steps.after_b[x];
        }
      }
    }
    levels.push_back(std::move(next));
  };
  extend();
  std::map<std::pair<Level, Level>, std::size_t> first_seen;
  first_seen[{levels[0], levels[1]}] = 0;
  while (true) {
    extend();
    const std::size_t L = levels.size() - 2;
    const auto [it, fresh] = first_seen.emplace(std::make_pair(levels[L], levels[L + 1]), L);
    if (!fresh) {
      out.preperiod = it->second;
      out.period = L - it->second;
      break;
    }
  }
  auto level_at = [&](std::size_t L) -> const Level& {
    while (levels.size() <= L) extend();
    return levels[L];
  };

  out.achievable_runs.assign(k, {});
  for (Memory m = 0; m < k; ++m) {
    for (std::size_t L = 1; L <= checked_runs; ++L) {
      if (level_at(L)[m] != 0) out.achievable_runs[m].push_back(L);
    }
  }

  // Nodes (memory, k mod period) where the next target run has length 2k.
  const std::size_t p = out.period;
  const std::size_t base = std::max<std::size_t>(1, (out.preperiod + 1) / 2);
  std::vector<std::vector<std::size_t>> succ(k * p);
  for (Memory m = 0; m < k; ++m) {
    for (std::size_t r = 0; r < p; ++r) {
      std::size_t run = base;
      while (run % p != r) ++run;
      const Mask after = level_at(2 * run)[steps.after_a[m]];
      for (Memory x = 0; x < k; ++x) {
        if (after >> x & 1) succ[m * p + r].push_back(x * p + (r + 1) % p);
      }
    }
  }
  std::vector<bool> alive(k * p, true);
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t v = 0; v < k * p; ++v) {
      if (!alive[v]) continue;
      bool any = false;
      for (auto w : succ[v]) any = any || alive[w];
      if (!any) {
        alive[v] = false;
        changed = true;
      }
    }
  }
  out.payoff = 1;
  for (Memory m : out.reachable) {
    for (std::size_t r = 0; r < p && out.payoff == 1; ++r) {
      if (alive[m * p + r]) {
        out.payoff = 0;
        out.start = std::make_pair(m, r);
      }
    }
  }
  return out;
}

std::vector<Rational> fig1_random_run_probabilities(std::size_t max_length) {
  std::vector<Rational> h{Rational(1), make_rational(1, 2)};
  while (h.size() <= max_length) h.push_back((h[h.size() - 1] + h[h.size() - 2]) / 2);
  h.resize(max_length + 1);
  return h;
}

VerificationReport reproduce_counterexample() {
  const auto started = std::chrono::steady_clock::now();
  const Arena arena = fixtures::fig1();
  VerificationReport report;
  report.claim = "counterexample-fig1";
  report.fingerprint = fingerprint(arena) + "/suffixtarget";

  auto describe_analysis = [&](const FiniteMemoryStrategy& sigma, const Fig1Analysis& a) {
    nlohmann::json runs = nlohmann::json::object();
    nlohmann::json residues = nlohmann::json::object();
    for (Memory m = 0; m < sigma.memory_size(); ++m) {
      runs[sigma.memory_name(m)] = a.achievable_runs[m];
      std::set<std::size_t> mod3{0};
      for (auto L : a.achievable_runs[m]) mod3.insert(L % 3);
      residues[sigma.memory_name(m)] = mod3;
    }
    nlohmann::json out = {{"payoff", a.payoff},
                          {"achievable_runs", runs},
                          {"run_residues_mod_3", residues},
                          {"table_preperiod", a.preperiod},
                          {"table_period", a.period}};
    if (a.start) out["forcing_starts_in_memory"] = sigma.memory_name(a.start->first);
    return out;
  };

  const auto one = fixtures::fig1_stationary(arena, "1");
  const auto two = fixtures::fig1_stationary(arena, "2");
  const auto alt = fixtures::fig1_alternating(arena);
  const auto plain = fixtures::fig1_alternating_no_reset(arena);
  const auto a1 = analyse_fig1(arena, one);
  const auto a2 = analyse_fig1(arena, two);
  const auto a3 = analyse_fig1(arena, alt);
  const auto a4 = analyse_fig1(arena, plain);

  // P2's schedule against a stationary strategy producing c letters b per
  // visit to c1: 2k / c visits for the k-th run, which needs c | 2k.
  auto schedule = [](std::size_t c) {
    nlohmann::json visits = nlohmann::json::array();
    bool exact = true;
    for (std::size_t k = 1; k <= 30; ++k) {
      exact = exact && (2 * k) % c == 0;
      visits.push_back(2 * k / c);
    }
    return nlohmann::json{{"visits_to_c1_per_run", visits}, {"matches_target", exact}};
  };
  auto q1 = describe_analysis(one, a1);
  q1["schedule"] = schedule(1);
  auto q2 = describe_analysis(two, a2);
  q2["schedule"] = schedule(2);

  nlohmann::json h = nlohmann::json::array();
  for (const auto& x : fig1_random_run_probabilities(10)) h.push_back(to_string(x));

  report.quantities["stationary_1"] = q1;
  report.quantities["stationary_2"] = q2;
  report.quantities["alternating"] = describe_analysis(alt, a3);
  report.quantities["alternating_without_reset"] = describe_analysis(plain, a4);
  report.quantities["random_c1_run_probability"] = {
      {"h", h},
      {"limit", "2/3"},
      {"note", "every target run succeeds with probability at most 3/4, so matching all of them has probability 0"}};
  report.quantities["triple"] = {a1.payoff, a2.payoff, a3.payoff};
  report.verdict =
      a1.payoff == 0 && a2.payoff == 0 && a3.payoff == 1 ? Verdict::Confirmed : Verdict::Refuted;
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace spg
