#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace spg {

/// Exact rational number. Every probability, weight and payoff value in the
/// library is one of these; doubles only appear in Monte Carlo summaries.
using Rational = mpq_class;

/// Parses "n", "-n" or "n/d" (d > 0 after sign normalisation). The result is
/// canonical. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

/// Canonical text form: "n" for integers, "n/d" otherwise.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

inline Rational make_rational(std::int64_t num, std::int64_t den = 1) {
  Rational r(static_cast<long>(num), static_cast<unsigned long>(den < 0 ? -den : den));
  if (den < 0) r = -r;
  r.canonicalize();
  return r;
}

/// Bit size of numerator plus denominator; used as the pivot cost in
/// rational elimination.
std::size_t bit_size(const Rational& value);

Rational abs(const Rational& value);

Rational sum(const std::vector<Rational>& values);

}  // namespace spg
