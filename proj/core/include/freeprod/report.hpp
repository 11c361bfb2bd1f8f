#pragma once

#include <string>
#include <utility>
#include <vector>

namespace freeprod {

struct Witness {
  std::string input;
  double value;
};

/// Structured result of one property check. Serialization is hand-emitted
/// with fixed field order and fixed 9-decimal numbers so reports are
/// byte-identical across runs and parallelism degrees. The summary value is
/// clamped at the tolerance; the raw maximum is retained untouched.
struct VerificationReport {
  std::string check;
  std::vector<std::pair<std::string, std::string>> params;  // ordered
  double max_violation_raw = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  long long skipped = 0;
  std::vector<std::pair<std::string, double>> fitted;  // ordered
  std::vector<Witness> witnesses;

  double max_violation() const { return max_violation_raw <= tolerance ? 0.0 : max_violation_raw; }

  std::string to_json() const;
};

}  // namespace freeprod
