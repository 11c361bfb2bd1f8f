#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "freeprod/errors.hpp"

namespace freeprod {

enum class Side { X, Y };

inline Side opposite(Side s) { return s == Side::X ? Side::Y : Side::X; }
inline char side_char(Side s) { return s == Side::X ? 'X' : 'Y'; }

/// A non-identity element of one of the two nets. The reserved spelling
/// "eps" never names a letter; it denotes the empty word in the grammar.
struct Letter {
  Side side;
  std::string id;

  friend bool operator==(const Letter& a, const Letter& b) {
    return a.side == b.side && a.id == b.id;
  }
  friend bool operator!=(const Letter& a, const Letter& b) { return !(a == b); }
  friend bool operator<(const Letter& a, const Letter& b) {
    if (a.side != b.side) return a.side < b.side;
    return a.id < b.id;
  }
};

/// Alternating sequence of letters from the two nets; the empty word is the
/// default state. Length counts letters, so the empty word has length 0.
class NormalWord {
 public:
  NormalWord() = default;

  /// Checks alternation and rejects the reserved "eps" spelling.
  /// Throws WordError on the first offending index.
  static NormalWord validate(std::vector<Letter> letters);

  std::size_t length() const noexcept { return letters_.size(); }
  bool empty() const noexcept { return letters_.empty(); }
  const Letter& letter(std::size_t i) const { return letters_[i]; }
  const std::vector<Letter>& letters() const noexcept { return letters_; }
  const Letter& back() const { return letters_.back(); }
  const Letter& front() const { return letters_.front(); }

  /// Membership flags. The empty word lies in both W_X and W_Y; a nonempty
  /// word lies in exactly one, decided by its last letter's side.
  bool in_wx() const { return letters_.empty() || letters_.back().side != Side::X; }
  bool in_wy() const { return letters_.empty() || letters_.back().side != Side::Y; }

  /// Side of the sheet this word indexes; the empty word indexes both root
  /// sheets, so callers must supply the tag.
  Side sheet_side(Side eps_side) const {
    return letters_.empty() ? eps_side : opposite(letters_.back().side);
  }

  NormalWord append(const Letter& z) const;
  NormalWord prefix(std::size_t n) const;
  NormalWord suffix(std::size_t from) const;
  NormalWord drop_back() const { return prefix(letters_.size() - 1); }

  bool is_prefix_of(const NormalWord& other) const;

  /// "eps" for the empty word, else dot-joined letter ids.
  std::string str() const;

  friend bool operator==(const NormalWord& a, const NormalWord& b) {
    return a.letters_ == b.letters_;
  }
  friend bool operator!=(const NormalWord& a, const NormalWord& b) { return !(a == b); }
  friend bool operator<(const NormalWord& a, const NormalWord& b) {
    if (a.letters_.size() != b.letters_.size()) return a.letters_.size() < b.letters_.size();
    return a.letters_ < b.letters_;
  }

 private:
  explicit NormalWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

struct CommonPrefixSplit {
  NormalWord prefix;      // rho
  NormalWord left_rest;   // omega'
  NormalWord right_rest;  // tau'
};

CommonPrefixSplit max_common_prefix(const NormalWord& a, const NormalWord& b);

/// ||image(letter)|| in its factor, supplied by the glued space.
using LetterNormFn = std::function<double(const Letter&)>;
/// d_{X⊔Y}(image(a), image(b)) for same-side letters.
using LetterDistFn = std::function<double(const Letter&, const Letter&)>;

/// D_*(eps, w) = sum_{i>=1} ||w_i|| + n + 1 for w = w_0...w_n, and 0 for eps.
/// The first letter's norm is excluded.
double entry_cost(const NormalWord& w, const LetterNormFn& norm);

/// Word distance with an explicit infinity marker: the mixed-side branch of
/// d_{X⊔Y} is "undefined", not a float overflow.
struct ExtendedDistance {
  bool finite;
  double value;  // meaningful only when finite

  static ExtendedDistance infinite() { return {false, 0.0}; }
  static ExtendedDistance of(double v) { return {true, v}; }
};

/// General D_*. Delegates to entry_cost when one argument is empty; throws
/// PrefixPairError when one nonempty word strictly prefixes the other.
ExtendedDistance word_distance(const NormalWord& a, const NormalWord& b,
                               const LetterNormFn& norm, const LetterDistFn& dist);

}  // namespace freeprod
