#include "spg/payoff.hpp"

#include "spg/errors.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

namespace spg {

namespace {

std::size_t parse_count(std::string_view text, std::string_view what) {
  std::size_t out = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end || out == 0) {
    throw ValidationError("payoff " + std::string(what) + ": expected a positive integer, got '" + std::string(text) +
                          "'");
  }
  return out;
}

Rational mean_of(const std::vector<ColourToken>& cycle) {
  Rational total = 0;
  for (const auto& c : cycle) total += scalar_of(c);
  return total / Rational(static_cast<long>(cycle.size()));
}

std::vector<Rational> vector_mean_of(const std::vector<ColourToken>& cycle, std::size_t dim) {
  std::vector<Rational> total(dim);
  for (const auto& c : cycle) {
    const auto& v = std::get<RewardVector>(c).values;
    for (std::size_t i = 0; i < dim; ++i) total[i] += v[i];
  }
  for (auto& t : total) t /= Rational(static_cast<long>(cycle.size()));
  return total;
}

Rational indicator(bool b) { return b ? Rational(1) : Rational(0); }

}  // namespace

PayoffSpec PayoffSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  const std::string_view head = text.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view() : text.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;
  PayoffSpec spec;
  auto no_arg = [&](PayoffKind kind) {
    if (has_arg) throw ValidationError("payoff '" + std::string(head) + "' takes no parameter");
    spec.kind = kind;
    return spec;
  };
  if (head == "mean") return no_arg(PayoffKind::Mean);
  if (head == "discounted") return no_arg(PayoffKind::Discounted);
  if (head == "parity") return no_arg(PayoffKind::Parity);
  if (head == "limsup") return no_arg(PayoffKind::Limsup);
  if (head == "liminf") return no_arg(PayoffKind::Liminf);
  if (head == "posavg") return no_arg(PayoffKind::PositiveAverage);
  if (head == "counter+inf") return no_arg(PayoffKind::CounterLimsupPosInf);
  if (head == "counter-inf") return no_arg(PayoffKind::CounterLiminfNegInf);
  if (head == "geomfirstone") return no_arg(PayoffKind::GeometricFirstOne);
  if (head == "genmean" || head == "optgenmean") {
    if (!has_arg) throw ValidationError("payoff '" + std::string(head) + "' needs a dimension, e.g. " +
                                        std::string(head) + ":2");
    spec.kind = head == "genmean" ? PayoffKind::GeneralizedMean : PayoffKind::OptimisticGeneralizedMean;
    spec.dimension = parse_count(arg, head);
    return spec;
  }
  if (head == "meancobuchi") {
    if (!has_arg) throw ValidationError("payoff 'meancobuchi' needs a penalty, e.g. meancobuchi:100");
    spec.kind = PayoffKind::MeanCoBuchi;
    try {
      spec.penalty = parse_rational(arg);
    } catch (const std::invalid_argument&) {
      throw ValidationError("payoff meancobuchi: bad penalty '" + std::string(arg) + "'");
    }
    return spec;
  }
  if (head == "suffixtarget") {
    spec.kind = PayoffKind::SuffixTarget;
    for (char c : arg) spec.target_prefix.emplace_back(1, c);
    return spec;
  }
  throw ValidationError("unknown payoff '" + std::string(text) + "'");
}

std::string PayoffSpec::name() const {
  switch (kind) {
    case PayoffKind::Mean: return "mean";
    case PayoffKind::Discounted: return "discounted";
    case PayoffKind::Parity: return "parity";
    case PayoffKind::Limsup: return "limsup";
    case PayoffKind::Liminf: return "liminf";
    case PayoffKind::PositiveAverage: return "posavg";
    case PayoffKind::CounterLimsupPosInf: return "counter+inf";
    case PayoffKind::CounterLiminfNegInf: return "counter-inf";
    case PayoffKind::GeneralizedMean: return "genmean:" + std::to_string(dimension);
    case PayoffKind::OptimisticGeneralizedMean: return "optgenmean:" + std::to_string(dimension);
    case PayoffKind::MeanCoBuchi: return "meancobuchi:" + to_string(penalty);
    case PayoffKind::SuffixTarget: {
      std::string out = "suffixtarget:";
      for (const auto& l : target_prefix) out += l;
      return out;
    }
    case PayoffKind::GeometricFirstOne: return "geomfirstone";
  }
  return "?";
}

ColourKind PayoffSpec::required_kind() const {
  switch (kind) {
    case PayoffKind::Discounted: return ColourKind::Discounted;
    case PayoffKind::Parity: return ColourKind::Priority;
    case PayoffKind::CounterLimsupPosInf:
    case PayoffKind::CounterLiminfNegInf: return ColourKind::Increment;
    case PayoffKind::GeneralizedMean:
    case PayoffKind::OptimisticGeneralizedMean: return ColourKind::Vector;
    case PayoffKind::MeanCoBuchi: return ColourKind::FlaggedReward;
    case PayoffKind::SuffixTarget: return ColourKind::Letter;
    default: return ColourKind::Reward;
  }
}

bool PayoffSpec::is_shift_invariant() const {
  return kind != PayoffKind::Discounted && kind != PayoffKind::GeometricFirstOne;
}

bool PayoffSpec::is_submixing() const {
  switch (kind) {
    case PayoffKind::Mean:
    case PayoffKind::Parity:
    case PayoffKind::Limsup:
    case PayoffKind::Liminf:
    case PayoffKind::PositiveAverage:
    case PayoffKind::OptimisticGeneralizedMean:
    case PayoffKind::MeanCoBuchi:
    // Partial sums of a shuffle are sums of partial sums of the two words,
    // so they stay bounded above when both do.
    case PayoffKind::CounterLimsupPosInf: return true;
    default: return false;
  }
}

bool PayoffSpec::is_class_determined() const {
  return kind != PayoffKind::Discounted && kind != PayoffKind::GeometricFirstOne && kind != PayoffKind::SuffixTarget;
}

bool PayoffSpec::is_both_positional() const {
  switch (kind) {
    case PayoffKind::Mean:
    case PayoffKind::Discounted:
    case PayoffKind::Parity:
    case PayoffKind::Limsup:
    case PayoffKind::Liminf: return true;
    default: return false;
  }
}

void check_kind(const PayoffSpec& spec, const ColourToken& token) {
  const ColourKind want = spec.required_kind();
  if (kind_of(token) != want) {
    throw KindMismatch("payoff " + spec.name() + " needs " + to_string(want) + " colours, got " +
                       to_string(kind_of(token)) + " (" + describe(token) + ")");
  }
  if (want == ColourKind::Vector && dimension_of(token) != spec.dimension) {
    throw KindMismatch("payoff " + spec.name() + " needs vectors of dimension " + std::to_string(spec.dimension) +
                       ", got " + std::to_string(dimension_of(token)));
  }
}

Rational evaluate_lasso(const PayoffSpec& spec, const ColourWord& word) {
  if (word.cycle.empty()) throw ValidationError("lasso word has an empty cycle");
  for (const auto& c : word.prefix) check_kind(spec, c);
  for (const auto& c : word.cycle) check_kind(spec, c);
  const auto& cycle = word.cycle;
  switch (spec.kind) {
    case PayoffKind::Mean: return mean_of(cycle);
    case PayoffKind::PositiveAverage: return indicator(mean_of(cycle) > 0);
    case PayoffKind::Limsup: {
      Rational best = scalar_of(cycle[0]);
      for (const auto& c : cycle) best = std::max(best, scalar_of(c));
      return best;
    }
    case PayoffKind::Liminf: {
      Rational best = scalar_of(cycle[0]);
      for (const auto& c : cycle) best = std::min(best, scalar_of(c));
      return best;
    }
    case PayoffKind::Parity: {
      long top = 0;
      for (const auto& c : cycle) top = std::max(top, std::get<Priority>(c).value);
      return indicator(top % 2 == 1);
    }
    case PayoffKind::Discounted: {
      Rational total = 0;
      Rational weight = 1;
      for (const auto& c : word.prefix) {
        const auto& d = std::get<DiscountedReward>(c);
        total += weight * d.value;
        weight *= d.discount;
      }
      Rational cycle_sum = 0;
      Rational cycle_weight = 1;
      for (const auto& c : cycle) {
        const auto& d = std::get<DiscountedReward>(c);
        cycle_sum += cycle_weight * d.value;
        cycle_weight *= d.discount;
      }
      return total + weight * cycle_sum / (Rational(1) - cycle_weight);
    }
    case PayoffKind::CounterLimsupPosInf:
    case PayoffKind::CounterLiminfNegInf: {
      long total = 0;
      for (const auto& c : cycle) total += std::get<Increment>(c).value;
      return indicator(spec.kind == PayoffKind::CounterLimsupPosInf ? total > 0 : total < 0);
    }
    case PayoffKind::GeneralizedMean: {
      const auto means = vector_mean_of(cycle, spec.dimension);
      return indicator(std::all_of(means.begin(), means.end(), [](const Rational& m) { return m > 0; }));
    }
    case PayoffKind::OptimisticGeneralizedMean: {
      const auto means = vector_mean_of(cycle, spec.dimension);
      return indicator(std::any_of(means.begin(), means.end(), [](const Rational& m) { return m >= 0; }));
    }
    case PayoffKind::MeanCoBuchi: {
      Rational total = 0;
      for (const auto& c : cycle) {
        const auto& f = std::get<FlaggedReward>(c);
        if (f.buchi) return -spec.penalty;
        total += f.value;
      }
      return total / Rational(static_cast<long>(cycle.size()));
    }
    case PayoffKind::SuffixTarget: return Rational(1);
    case PayoffKind::GeometricFirstOne: {
      const std::size_t n = word.prefix.size() + cycle.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (scalar_of(word.at(i)) == 1) {
          Rational tail(1);
          mpz_mul_2exp(tail.get_den_mpz_t(), tail.get_den_mpz_t(), i);
          return Rational(1) - tail;
        }
      }
      return Rational(0);
    }
  }
  throw UnsupportedSpec("unhandled payoff " + spec.name());
}

std::optional<ShiftWitness> check_shift_invariance(const PayoffSpec& spec, const ColourWord& word,
                                                   std::size_t shifts) {
  const Rational original = evaluate_lasso(spec, word);
  ColourWord suffix = word;
  for (std::size_t k = 1; k <= shifts; ++k) {
    suffix = suffix.tail();
    Rational value = evaluate_lasso(spec, suffix);
    if (value != original) return ShiftWitness{k, original, std::move(value)};
  }
  return std::nullopt;
}

std::optional<SubmixingWitness> check_submixing(const PayoffSpec& spec, const ColourWord& u, const ColourWord& v,
                                                const ShufflePattern& pattern) {
  ColourWord w = shuffle(u, v, pattern);
  Rational fu = evaluate_lasso(spec, u);
  Rational fv = evaluate_lasso(spec, v);
  Rational fw = evaluate_lasso(spec, w);
  if (fw > std::max(fu, fv)) {
    return SubmixingWitness{u, v, pattern, std::move(w), std::move(fu), std::move(fv), std::move(fw)};
  }
  return std::nullopt;
}

std::string describe(const ColourWord& word) {
  std::ostringstream out;
  for (const auto& c : word.prefix) out << describe(c) << ' ';
  out << '(';
  for (std::size_t i = 0; i < word.cycle.size(); ++i) out << (i ? " " : "") << describe(word.cycle[i]);
  out << ")^w";
  return out.str();
}

}  // namespace spg
