#pragma once

#include "spg/colour.hpp"
#include "spg/word.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spg {

struct RecurrentClassSummary;

enum class PayoffKind {
  Mean,
  Discounted,
  Parity,
  Limsup,
  Liminf,
  PositiveAverage,
  CounterLimsupPosInf,
  CounterLiminfNegInf,
  GeneralizedMean,
  OptimisticGeneralizedMean,
  MeanCoBuchi,
  SuffixTarget,
  GeometricFirstOne,
};

/// One entry of the closed payoff catalog with its parameters.
///
/// Text forms: mean, discounted, parity, limsup, liminf, posavg,
/// counter+inf, counter-inf, genmean:k, optgenmean:k, meancobuchi:B,
/// suffixtarget:p (p a string of one-character letters), geomfirstone.
struct PayoffSpec {
  PayoffKind kind = PayoffKind::Mean;
  /// genmean / optgenmean.
  std::size_t dimension = 0;
  /// meancobuchi: value used in place of minus infinity.
  Rational penalty;
  /// suffixtarget: the finite word p.
  std::vector<std::string> target_prefix;

  static PayoffSpec parse(std::string_view text);
  std::string name() const;

  ColourKind required_kind() const;
  bool is_shift_invariant() const;
  bool is_submixing() const;
  /// Almost-sure payoff on a recurrent class depends only on the class.
  bool is_class_determined() const;
  /// Both players have pure stationary optimal strategies (mean, discounted,
  /// parity, limsup, liminf); the exact brute-force solver accepts these.
  bool is_both_positional() const;

  bool operator==(const PayoffSpec&) const = default;
};

using ColourWord = LassoWord<ColourToken>;

/// Throws KindMismatch when a token does not fit `spec`.
void check_kind(const PayoffSpec& spec, const ColourToken& token);

/// Exact value of f(prefix . cycle^omega).
///  - mean / limsup / liminf: cycle mean / max / min;
///  - discounted: closed form of the geometric series;
///  - parity: 1 iff the highest cycle priority is odd;
///  - posavg: 1 iff the cycle mean is > 0;
///  - counter+inf / counter-inf: 1 iff the cycle increment sum is > 0 / < 0
///    (a zero-sum cycle keeps the partial sums bounded);
///  - genmean / optgenmean: 1 iff every / some dimension has cycle mean
///    > 0 / >= 0;
///  - meancobuchi: -penalty if a flagged colour is on the cycle, else the
///    cycle mean;
///  - suffixtarget: always 1. The target p a b^2 a b^4 ... has unbounded
///    b-runs separated by a, so it is not ultimately periodic and no lasso
///    shares a suffix with it;
///  - geomfirstone: 0 on 0^omega, else 1 - 2^-n for the first index n
///    (0-based) holding colour 1.
Rational evaluate_lasso(const PayoffSpec& spec, const ColourWord& word);

/// Almost-sure payoff of runs absorbed in the recurrent class. Rejects
/// specs that are not class-determined.
Rational class_value(const PayoffSpec& spec, const RecurrentClassSummary& summary);

struct ShiftWitness {
  std::size_t shift = 0;
  Rational original;
  Rational shifted;
};

/// Compares f(word) with f on its first `shifts` suffixes; reports the first
/// suffix index with a different value.
std::optional<ShiftWitness> check_shift_invariance(const PayoffSpec& spec, const ColourWord& word, std::size_t shifts);

struct SubmixingWitness {
  ColourWord u;
  ColourWord v;
  ShufflePattern pattern;
  ColourWord w;
  Rational fu;
  Rational fv;
  Rational fw;
};

/// Returns a witness iff f(shuffle(u, v)) > max(f(u), f(v)).
std::optional<SubmixingWitness> check_submixing(const PayoffSpec& spec, const ColourWord& u, const ColourWord& v,
                                                const ShufflePattern& pattern);

std::string describe(const ColourWord& word);

}  // namespace spg
