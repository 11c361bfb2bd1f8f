#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace freeprod {

/// A provider cannot satisfy the requested capability (marker counting,
/// skeleton enumeration, oracle construction on non-graph factors, ...).
class CapabilityError : public std::runtime_error {
 public:
  explicit CapabilityError(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid points, unknown ids, bad parameters, failed validation.
/// `path()` carries a JSON-ish location when the error originates from a
/// config document.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what, std::string path = "")
      : std::runtime_error(path.empty() ? what : what + " (at " + path + ")"),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Malformed input documents (unparseable JSON, broken point/word grammar).
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

class WordError : public std::runtime_error {
 public:
  enum class Kind { AlternationViolation, EpsLetter };

  WordError(Kind kind, std::size_t index)
      : std::runtime_error(kind == Kind::AlternationViolation
                               ? "alternation violation at letter " + std::to_string(index)
                               : "eps letter at position " + std::to_string(index)),
        kind_(kind),
        index_(index) {}

  Kind kind() const noexcept { return kind_; }
  std::size_t index() const noexcept { return index_; }

 private:
  Kind kind_;
  std::size_t index_;
};

/// D_* is undefined when one nonempty word strictly prefixes the other.
class PrefixPairError : public std::runtime_error {
 public:
  PrefixPairError() : std::runtime_error("word distance undefined for a strict prefix pair") {}
};

}  // namespace freeprod
