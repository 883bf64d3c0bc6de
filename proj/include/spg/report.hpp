#pragma once

#include <json.hpp>

#include <string>

namespace spg {

enum class Verdict { Confirmed, Refuted, Inconclusive };

std::string to_string(Verdict v);

/// Outcome of one harness claim. `quantities` holds the exact numbers
/// (rationals as strings) and, for refutations, a replayable witness.
struct VerificationReport {
  std::string claim;
  std::string fingerprint;
  Verdict verdict = Verdict::Confirmed;
  nlohmann::json quantities = nlohmann::json::object();
  double wall_seconds = 0;

  /// Structured document; the wall clock is left out so that identical
  /// inputs give identical bytes.
  nlohmann::json to_json() const;
  std::string to_human() const;
  int exit_code() const;
};

}  // namespace spg
