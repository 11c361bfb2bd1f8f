#include "freeprod/free_product.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <set>

#include "freeprod/numfmt.hpp"

namespace freeprod {

namespace {

bool word_less(const NormalWord& a, const NormalWord& b) { return a < b; }

int kind_rank(const FpPoint& p) { return static_cast<int>(p.index()); }

}  // namespace

bool fp_point_less(const FpPoint& a, const FpPoint& b) {
  if (kind_rank(a) != kind_rank(b)) return kind_rank(a) < kind_rank(b);
  if (const auto* sa = std::get_if<SheetPoint>(&a)) {
    const auto& sb = std::get<SheetPoint>(b);
    if (sa->word != sb.word) return word_less(sa->word, sb.word);
    if (sa->side != sb.side) return sa->side < sb.side;
    return factor_point_less(sa->site, sb.site);
  }
  if (const auto* ea = std::get_if<EdgePoint>(&a)) {
    const auto& eb = std::get<EdgePoint>(b);
    if (ea->word != eb.word) return word_less(ea->word, eb.word);
    if (ea->letter != eb.letter) return ea->letter < eb.letter;
    return ea->t < eb.t;
  }
  return std::get<EpsEdgePoint>(a).t < std::get<EpsEdgePoint>(b).t;
}

FpSpace::FpSpace(std::shared_ptr<const FactorSpace> x, std::shared_ptr<const FactorSpace> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (!x_ || !y_) throw DomainError("both factors are required");
  for (const auto& id : x_->net().ids) {
    if (y_->net().contains(id)) {
      throw DomainError("net id '" + id + "' appears in both factors");
    }
  }
}

// ---------------------------------------------------------------------------
// Letters and words
// ---------------------------------------------------------------------------

Letter FpSpace::make_letter(const std::string& id) const {
  Side side;
  if (x_->net().contains(id)) {
    side = Side::X;
  } else if (y_->net().contains(id)) {
    side = Side::Y;
  } else {
    throw DomainError("unknown net id '" + id + "'");
  }
  if (factor(side).net().eps == id) throw WordError(WordError::Kind::EpsLetter, 0);
  return Letter{side, id};
}

NormalWord FpSpace::make_word(const std::vector<std::string>& ids) const {
  std::vector<Letter> letters;
  letters.reserve(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    try {
      letters.push_back(make_letter(ids[i]));
    } catch (const WordError&) {
      throw WordError(WordError::Kind::EpsLetter, i);
    }
  }
  return NormalWord::validate(std::move(letters));
}

double FpSpace::letter_norm(const Letter& z) const { return factor(z.side).norm(image(z)); }

double FpSpace::entry_cost(const NormalWord& w) const {
  return freeprod::entry_cost(w, [this](const Letter& z) { return letter_norm(z); });
}

ExtendedDistance FpSpace::word_distance(const NormalWord& a, const NormalWord& b) const {
  return freeprod::word_distance(
      a, b, [this](const Letter& z) { return letter_norm(z); },
      [this](const Letter& z, const Letter& w) {
        return factor(z.side).dist(image(z), image(w));
      });
}

// ---------------------------------------------------------------------------
// Canonical points
// ---------------------------------------------------------------------------

namespace {
void check_word_letters(const FpSpace& fp, const NormalWord& w) {
  for (std::size_t i = 0; i < w.length(); ++i) {
    const Letter& z = w.letter(i);
    if (!fp.factor(z.side).net().contains(z.id)) {
      throw DomainError("unknown net id '" + z.id + "' in word");
    }
    if (fp.factor(z.side).net().eps == z.id) throw WordError(WordError::Kind::EpsLetter, i);
  }
}
}  // namespace

SheetPoint FpSpace::make_sheet_point(const NormalWord& word, Side side,
                                     const FactorPoint& site) const {
  check_word_letters(*this, word);
  if (!word.empty() && word.sheet_side(side) != side) {
    throw DomainError("word '" + word.str() + "' does not index a " +
                      std::string(1, side_char(side)) + "-sheet");
  }
  factor(side).check_point(site);
  return SheetPoint{word, side, site};
}

FpPoint FpSpace::canonicalize_edge(const NormalWord& word, const Letter& letter, double t) const {
  check_word_letters(*this, word);
  if (!factor(letter.side).net().contains(letter.id) ||
      factor(letter.side).net().eps == letter.id) {
    throw DomainError("invalid edge letter '" + letter.id + "'");
  }
  if (!word.empty() && word.back().side == letter.side) {
    throw DomainError("edge letter side violates alternation below '" + word.str() + "'");
  }
  if (t < 0.0 || t > 1.0) throw DomainError("edge parameter outside [0,1]");
  if (t == 0.0) return make_sheet_point(word, letter.side, image(letter));
  if (t == 1.0) {
    return make_sheet_point(word.append(letter), opposite(letter.side),
                            factor(opposite(letter.side)).basepoint());
  }
  return EdgePoint{word, letter, t};
}

FpPoint FpSpace::canonicalize_eps_edge(double t) const {
  if (t < 0.0 || t > 1.0) throw DomainError("edge parameter outside [0,1]");
  if (t == 0.0) return SheetPoint{NormalWord{}, Side::X, x_->basepoint()};
  if (t == 1.0) return SheetPoint{NormalWord{}, Side::Y, y_->basepoint()};
  return EpsEdgePoint{t};
}

void FpSpace::check_point(const FpPoint& p) const {
  if (const auto* sp = std::get_if<SheetPoint>(&p)) {
    make_sheet_point(sp->word, sp->side, sp->site);
    return;
  }
  if (const auto* ep = std::get_if<EdgePoint>(&p)) {
    if (!(ep->t > 0.0 && ep->t < 1.0)) throw DomainError("edge point parameter must be interior");
    canonicalize_edge(ep->word, ep->letter, ep->t);
    return;
  }
  const auto& e = std::get<EpsEdgePoint>(p);
  if (!(e.t > 0.0 && e.t < 1.0)) throw DomainError("edge point parameter must be interior");
}

FpSpace::EdgeEnds FpSpace::edge_ends(const FpPoint& p) const {
  if (const auto* ep = std::get_if<EdgePoint>(&p)) {
    return EdgeEnds{
        SheetPoint{ep->word, ep->letter.side, image(ep->letter)},
        SheetPoint{ep->word.append(ep->letter), opposite(ep->letter.side),
                   factor(opposite(ep->letter.side)).basepoint()}};
  }
  if (std::holds_alternative<EpsEdgePoint>(p)) {
    return EdgeEnds{SheetPoint{NormalWord{}, Side::X, x_->basepoint()},
                    SheetPoint{NormalWord{}, Side::Y, y_->basepoint()}};
  }
  throw DomainError("edge_ends called on a sheet point");
}

// ---------------------------------------------------------------------------
// The metric
// ---------------------------------------------------------------------------

double FpSpace::entry_route(const SheetPoint& p, const NormalWord& rest,
                            const SheetPoint& q) const {
  const Letter& z = rest.front();
  const double tail = entry_cost(rest) + factor(q.side).norm(q.site);
  if (z.side == p.side) {
    return factor(p.side).dist(p.site, image(z)) + tail;
  }
  // p lives in a root sheet and the descent starts on the other root sheet.
  return factor(p.side).norm(p.site) + letter_norm(z) + 1.0 + tail;
}

double FpSpace::dist_sheet(const SheetPoint& p, const SheetPoint& q) const {
  if (fp_point_less(FpPoint{q}, FpPoint{p})) return dist_sheet(q, p);
  if (p.word == q.word) {
    if (p.side == q.side) return factor(p.side).dist(p.site, q.site);
    // Both words are empty; route through the eps edge.
    return factor(p.side).norm(p.site) + factor(q.side).norm(q.site) + 1.0;
  }
  if (p.word.is_prefix_of(q.word)) {
    return entry_route(p, q.word.suffix(p.word.length()), q);
  }
  if (q.word.is_prefix_of(p.word)) {
    return entry_route(q, p.word.suffix(q.word.length()), p);
  }
  const CommonPrefixSplit split = max_common_prefix(p.word, q.word);
  const Letter& z0 = split.left_rest.front();
  const Letter& w0 = split.right_rest.front();
  const double mid = (z0.side == w0.side)
                         ? factor(z0.side).dist(image(z0), image(w0))
                         : letter_norm(z0) + letter_norm(w0) + 1.0;
  return mid + entry_cost(split.left_rest) + entry_cost(split.right_rest) +
         factor(p.side).norm(p.site) + factor(q.side).norm(q.site);
}

double FpSpace::dist(const FpPoint& p, const FpPoint& q) const {
  check_point(p);
  check_point(q);
  if (p == q) return 0.0;
  if (fp_point_less(q, p)) return dist(q, p);

  const auto* sp = std::get_if<SheetPoint>(&p);
  const auto* sq = std::get_if<SheetPoint>(&q);
  if (sp && sq) return dist_sheet(*sp, *sq);

  // Same-edge pairs run along the edge; the edge is isometrically embedded
  // and its removal disconnects the tree of sheets.
  if (const auto* ep = std::get_if<EdgePoint>(&p)) {
    if (const auto* eq = std::get_if<EdgePoint>(&q)) {
      if (ep->word == eq->word && ep->letter == eq->letter) return std::abs(ep->t - eq->t);
    }
  }
  if (std::holds_alternative<EpsEdgePoint>(p) && std::holds_alternative<EpsEdgePoint>(q)) {
    return std::abs(std::get<EpsEdgePoint>(p).t - std::get<EpsEdgePoint>(q).t);
  }

  // Expand one edge point over its endpoint routes.
  const FpPoint& edge_pt = sp ? q : p;
  const FpPoint& other = sp ? p : q;
  const double t =
      std::holds_alternative<EdgePoint>(edge_pt) ? std::get<EdgePoint>(edge_pt).t
                                                 : std::get<EpsEdgePoint>(edge_pt).t;
  const EdgeEnds ends = edge_ends(edge_pt);
  return std::min(t + dist(FpPoint{ends.end0}, other),
                  (1.0 - t) + dist(FpPoint{ends.end1}, other));
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

std::vector<FpSpace::BallSheet> FpSpace::sheets_within(const FpPoint& o, double R) const {
  check_point(o);
  if (R < 0) return {};

  std::vector<BallSheet> seeds;
  if (const auto* sp = std::get_if<SheetPoint>(&o)) {
    seeds.push_back({sp->word, sp->side, sp->site, 0.0});
  } else {
    const EdgeEnds ends = edge_ends(o);
    const double t = std::holds_alternative<EdgePoint>(o) ? std::get<EdgePoint>(o).t
                                                          : std::get<EpsEdgePoint>(o).t;
    seeds.push_back({ends.end0.word, ends.end0.side, ends.end0.site, t});
    seeds.push_back({ends.end1.word, ends.end1.side, ends.end1.site, 1.0 - t});
  }

  std::vector<BallSheet> out;
  std::set<std::string> visited;
  std::deque<BallSheet> queue;
  auto key = [](const NormalWord& w, Side s) { return w.str() + '@' + side_char(s); };
  for (const auto& s : seeds) {
    if (s.entry_dist > R) continue;
    if (!visited.insert(key(s.word, s.side)).second) continue;
    queue.push_back(s);
    out.push_back(s);
  }

  while (!queue.empty()) {
    const BallSheet cur = queue.front();
    queue.pop_front();
    const FactorSpace& f = factor(cur.side);

    auto try_push = [&](const NormalWord& w, Side s, const FactorPoint& entry, double d) {
      // Every tree step crosses at least one unit edge, so this terminates.
      if (d > R) return;
      if (!visited.insert(key(w, s)).second) return;
      BallSheet b{w, s, entry, d};
      queue.push_back(b);
      out.push_back(b);
    };

    for (const auto& id : f.net().ids) {
      if (id == f.net().eps) continue;
      const Letter z{cur.side, id};
      const Side child_side = opposite(cur.side);
      try_push(cur.word.append(z), child_side, factor(child_side).basepoint(),
               cur.entry_dist + f.dist(cur.entry, image(z)) + 1.0);
    }
    if (!cur.word.empty()) {
      const Letter last = cur.word.back();
      try_push(cur.word.drop_back(), last.side, image(last),
               cur.entry_dist + f.dist(cur.entry, f.basepoint()) + 1.0);
    } else {
      const Side twin = opposite(cur.side);
      try_push(NormalWord{}, twin, factor(twin).basepoint(),
               cur.entry_dist + f.dist(cur.entry, f.basepoint()) + 1.0);
    }
  }
  return out;
}

std::vector<FpPoint> FpSpace::ball_vertices(const FpPoint& o, double R) const {
  if (R < 0) throw DomainError("negative radius");
  std::vector<FpPoint> out;
  for (const BallSheet& sheet : sheets_within(o, R)) {
    const FactorSpace& f = factor(sheet.side);
    for (const FactorPoint& p :
         f.skeleton_points_within(sheet.entry, R - sheet.entry_dist + 1e-9)) {
      FpPoint fp = SheetPoint{sheet.word, sheet.side, p};
      if (dist(o, fp) <= R) out.push_back(std::move(fp));
    }
  }
  std::sort(out.begin(), out.end(), [this](const FpPoint& a, const FpPoint& b) {
    const std::string sa = format_point(a);
    const std::string sb = format_point(b);
    if (sa != sb) return sa < sb;
    return fp_point_less(a, b);
  });
  return out;
}

FpSpace::SheetProfile FpSpace::sheet_profile(const FpPoint& o, double R) const {
  SheetProfile profile;
  for (const BallSheet& sheet : sheets_within(o, R)) {
    ++profile.by_height[sheet.word.length()];
    ++profile.total;
  }
  return profile;
}

long long FpSpace::marker_ball_count(const FpPoint& o, double R) const {
  if (!x_->has_markers() || !y_->has_markers()) {
    throw CapabilityError("both factors must declare marker sets for growth counting");
  }
  long long total = 0;
  for (const BallSheet& sheet : sheets_within(o, R)) {
    total += factor(sheet.side).marker_count_within(sheet.entry, R - sheet.entry_dist);
  }
  return total;
}

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

namespace {
std::vector<std::string> split_ids(const std::string& word_text) {
  std::vector<std::string> ids;
  std::size_t start = 0;
  while (start <= word_text.size()) {
    const auto dot = word_text.find('.', start);
    if (dot == std::string::npos) {
      ids.push_back(word_text.substr(start));
      break;
    }
    ids.push_back(word_text.substr(start, dot - start));
    start = dot + 1;
  }
  return ids;
}

double parse_param(const std::string& text) {
  char* end = nullptr;
  const double t = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || text.empty()) {
    throw ParseError("bad parameter '" + text + "'");
  }
  return t;
}
}  // namespace

FpPoint FpSpace::parse_point(const std::string& text) const {
  if (text.rfind("e0:", 0) == 0) {
    return canonicalize_eps_edge(parse_param(text.substr(3)));
  }
  if (text.rfind("s:", 0) == 0) {
    const auto colon = text.find(':', 2);
    if (colon == std::string::npos) throw ParseError("bad point '" + text + "'");
    const std::string word_text = text.substr(2, colon - 2);
    const std::string site_text = text.substr(colon + 1);
    if (word_text == "eps@X" || word_text == "eps@Y") {
      const Side side = word_text.back() == 'X' ? Side::X : Side::Y;
      return make_sheet_point(NormalWord{}, side, factor(side).parse_site(site_text));
    }
    if (word_text == "eps") {
      throw ParseError("root sheet points need a side tag: s:eps@X:... or s:eps@Y:...");
    }
    const NormalWord word = make_word(split_ids(word_text));
    const Side side = opposite(word.back().side);
    return make_sheet_point(word, side, factor(side).parse_site(site_text));
  }
  if (text.rfind("e:", 0) == 0) {
    const auto c1 = text.find(':', 2);
    const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw ParseError("bad point '" + text + "'");
    }
    const std::string word_text = text.substr(2, c1 - 2);
    const NormalWord word =
        word_text == "eps" ? NormalWord{} : make_word(split_ids(word_text));
    const Letter letter = make_letter(text.substr(c1 + 1, c2 - c1 - 1));
    return canonicalize_edge(word, letter, parse_param(text.substr(c2 + 1)));
  }
  throw ParseError("bad point '" + text + "', expected s:..., e:... or e0:...");
}

std::string FpSpace::format_point(const FpPoint& p) const {
  if (const auto* sp = std::get_if<SheetPoint>(&p)) {
    const std::string word_text =
        sp->word.empty() ? std::string("eps@") + side_char(sp->side) : sp->word.str();
    return "s:" + word_text + ":" + factor(sp->side).format_site(sp->site);
  }
  if (const auto* ep = std::get_if<EdgePoint>(&p)) {
    return "e:" + ep->word.str() + ":" + ep->letter.id + ":" + fmt9(ep->t);
  }
  return "e0:" + fmt9(std::get<EpsEdgePoint>(p).t);
}

std::vector<std::string> FpSpace::validate() const {
  std::vector<std::string> problems;
  x_->validate(problems, ".factors.X");
  y_->validate(problems, ".factors.Y");
  return problems;
}

}  // namespace freeprod
