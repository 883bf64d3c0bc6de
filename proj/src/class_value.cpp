#include "spg/chain.hpp"
#include "spg/errors.hpp"
#include "spg/payoff.hpp"

#include <algorithm>

namespace spg {

namespace {

const Rational& need(const std::optional<Rational>& value, const PayoffSpec& spec) {
  if (!value) throw KindMismatch("class statistics do not fit payoff " + spec.name());
  return *value;
}

}  // namespace

Rational class_value(const PayoffSpec& spec, const RecurrentClassSummary& summary) {
  if (!spec.is_class_determined()) {
    throw UnsupportedSpec("payoff " + spec.name() + " is not determined by the recurrent class");
  }
  Rational total = 0;
  for (const auto& p : summary.stationary) {
    if (sgn(p) <= 0) throw ValidationError("class summary has a non-positive stationary weight");
    total += p;
  }
  if (total != 1) throw ValidationError("class summary weights sum to " + to_string(total));

  switch (spec.kind) {
    case PayoffKind::Mean: return need(summary.mean, spec);
    case PayoffKind::PositiveAverage: return need(summary.mean, spec) > 0 ? 1 : 0;
    case PayoffKind::Limsup: return need(summary.max_scalar, spec);
    case PayoffKind::Liminf: return need(summary.min_scalar, spec);
    case PayoffKind::Parity:
      if (!summary.max_priority) throw KindMismatch("class statistics do not fit payoff parity");
      return *summary.max_priority % 2 == 1 ? 1 : 0;
    case PayoffKind::MeanCoBuchi:
      if (summary.buchi_present) return -spec.penalty;
      return need(summary.mean, spec);
    case PayoffKind::GeneralizedMean:
    case PayoffKind::OptimisticGeneralizedMean: {
      const auto& m = summary.vector_mean;
      if (m.size() != spec.dimension) throw KindMismatch("class statistics do not fit payoff " + spec.name());
      if (spec.kind == PayoffKind::GeneralizedMean) {
        return std::all_of(m.begin(), m.end(), [](const Rational& x) { return x > 0; }) ? 1 : 0;
      }
      return std::any_of(m.begin(), m.end(), [](const Rational& x) { return x >= 0; }) ? 1 : 0;
    }
    case PayoffKind::CounterLimsupPosInf:
    case PayoffKind::CounterLiminfNegInf: {
      const int sign = sgn(need(summary.mean, spec));
      if (sign == 0) return summary.has_potential ? 0 : 1;
      return (spec.kind == PayoffKind::CounterLimsupPosInf ? sign > 0 : sign < 0) ? 1 : 0;
    }
    default: break;
  }
  throw UnsupportedSpec("payoff " + spec.name() + " has no class value");
}

}  // namespace spg
