#include "freeprod/words.hpp"

#include <algorithm>

namespace freeprod {

NormalWord NormalWord::validate(std::vector<Letter> letters) {
  for (std::size_t i = 0; i < letters.size(); ++i) {
    if (letters[i].id == "eps") throw WordError(WordError::Kind::EpsLetter, i);
    if (i > 0 && letters[i].side == letters[i - 1].side) {
      throw WordError(WordError::Kind::AlternationViolation, i);
    }
  }
  return NormalWord(std::move(letters));
}

NormalWord NormalWord::append(const Letter& z) const {
  std::vector<Letter> out = letters_;
  out.push_back(z);
  return validate(std::move(out));
}

NormalWord NormalWord::prefix(std::size_t n) const {
  return NormalWord(std::vector<Letter>(letters_.begin(), letters_.begin() + n));
}

NormalWord NormalWord::suffix(std::size_t from) const {
  return NormalWord(std::vector<Letter>(letters_.begin() + from, letters_.end()));
}

bool NormalWord::is_prefix_of(const NormalWord& other) const {
  if (letters_.size() > other.letters_.size()) return false;
  return std::equal(letters_.begin(), letters_.end(), other.letters_.begin());
}

std::string NormalWord::str() const {
  if (letters_.empty()) return "eps";
  std::string out = letters_.front().id;
  for (std::size_t i = 1; i < letters_.size(); ++i) {
    out += '.';
    out += letters_[i].id;
  }
  return out;
}

CommonPrefixSplit max_common_prefix(const NormalWord& a, const NormalWord& b) {
  std::size_t k = 0;
  const std::size_t n = std::min(a.length(), b.length());
  while (k < n && a.letter(k) == b.letter(k)) ++k;
  return {a.prefix(k), a.suffix(k), b.suffix(k)};
}

double entry_cost(const NormalWord& w, const LetterNormFn& norm) {
  if (w.empty()) return 0.0;
  double total = static_cast<double>(w.length());  // n + 1 edge crossings
  for (std::size_t i = 1; i < w.length(); ++i) total += norm(w.letter(i));
  return total;
}

ExtendedDistance word_distance(const NormalWord& a, const NormalWord& b,
                               const LetterNormFn& norm, const LetterDistFn& dist) {
  if (a.empty() && b.empty()) return ExtendedDistance::of(0.0);
  if (a.empty()) return ExtendedDistance::of(entry_cost(b, norm));
  if (b.empty()) return ExtendedDistance::of(entry_cost(a, norm));

  const CommonPrefixSplit split = max_common_prefix(a, b);
  if (split.left_rest.empty() || split.right_rest.empty()) throw PrefixPairError();

  const Letter& w0 = split.left_rest.front();
  const Letter& w0p = split.right_rest.front();
  if (w0.side != w0p.side) return ExtendedDistance::infinite();

  double total = dist(w0, w0p);
  for (std::size_t i = 1; i < split.left_rest.length(); ++i) {
    total += norm(split.left_rest.letter(i));
  }
  for (std::size_t j = 1; j < split.right_rest.length(); ++j) {
    total += norm(split.right_rest.letter(j));
  }
  // n + m + 2 where the remainders have n+1 and m+1 letters.
  total += static_cast<double>(split.left_rest.length() + split.right_rest.length());
  return ExtendedDistance::of(total);
}

}  // namespace freeprod
