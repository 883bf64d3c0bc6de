#include "spg/report.hpp"

#include <iomanip>
#include <sstream>

namespace spg {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Confirmed: return "confirmed";
    case Verdict::Refuted: return "refuted";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

nlohmann::json VerificationReport::to_json() const {
  return {{"claim", claim}, {"fingerprint", fingerprint}, {"verdict", to_string(verdict)}, {"quantities", quantities}};
}

std::string VerificationReport::to_human() const {
  std::ostringstream out;
  out << claim << ": " << to_string(verdict) << "\n";
  out << "  instance: " << fingerprint << "\n";
  for (const auto& [key, value] : quantities.items()) {
    out << "  " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
  out << "  wall clock: " << std::fixed << std::setprecision(3) << wall_seconds << " s\n";
  return out.str();
}

int VerificationReport::exit_code() const {
  switch (verdict) {
    case Verdict::Confirmed: return 0;
    case Verdict::Refuted: return 2;
    case Verdict::Inconclusive: return 3;
  }
  return 1;
}

}  // namespace spg
