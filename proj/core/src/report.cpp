#include "freeprod/report.hpp"

#include "freeprod/numfmt.hpp"

namespace freeprod {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string VerificationReport::to_json() const {
  std::string out = "{\n";
  out += "  \"check\": \"" + escape(check) + "\",\n";
  out += "  \"params\": {";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + escape(params[i].first) + "\": \"" + escape(params[i].second) + "\"";
  }
  out += "},\n";
  out += "  \"tolerance\": " + fmt9(tolerance) + ",\n";
  out += "  \"max_violation\": " + fmt9(max_violation()) + ",\n";
  out += "  \"max_violation_raw\": \"" + fmt_exact(max_violation_raw) + "\",\n";
  out += "  \"pass\": " + std::string(pass ? "true" : "false") + ",\n";
  out += "  \"skipped\": " + std::to_string(skipped) + ",\n";
  out += "  \"fitted\": {";
  for (std::size_t i = 0; i < fitted.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + escape(fitted[i].first) + "\": " + fmt9(fitted[i].second);
  }
  out += "},\n";
  out += "  \"witnesses\": [";
  for (std::size_t i = 0; i < witnesses.size(); ++i) {
    if (i) out += ", ";
    out += "{\"input\": \"" + escape(witnesses[i].input) + "\", \"value\": \"" +
           fmt_exact(witnesses[i].value) + "\"}";
  }
  out += "]\n}\n";
  return out;
}

}  // namespace freeprod
