#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "freeprod/factor_space.hpp"
#include "freeprod/words.hpp"

namespace freeprod {

// ---------------------------------------------------------------------------
// Canonical points of X*Y
// ---------------------------------------------------------------------------

/// Point inside the sheet indexed by `word`. The empty word indexes both root
/// sheets, so the side tag is explicit; for a nonempty word the side is the
/// opposite of the last letter's side.
struct SheetPoint {
  NormalWord word;
  Side side;
  FactorPoint site;
  friend bool operator==(const SheetPoint& a, const SheetPoint& b) {
    return a.side == b.side && a.word == b.word && a.site == b.site;
  }
};

/// Interior of the edge glued at `letter` below the sheet `word`; t = 0 is the
/// marked point in the parent sheet, t = 1 the child sheet's base point. The
/// letter, not its image, identifies the edge: index maps may be non-injective.
struct EdgePoint {
  NormalWord word;
  Letter letter;
  double t;
  friend bool operator==(const EdgePoint& a, const EdgePoint& b) {
    return a.word == b.word && a.letter == b.letter && a.t == b.t;
  }
};

/// Interior of the edge joining the two root sheets; t = 0 at (eps, e_X).
struct EpsEdgePoint {
  double t;
  friend bool operator==(const EpsEdgePoint& a, const EpsEdgePoint& b) { return a.t == b.t; }
};

using FpPoint = std::variant<SheetPoint, EdgePoint, EpsEdgePoint>;

bool fp_point_less(const FpPoint& a, const FpPoint& b);

// ---------------------------------------------------------------------------
// The glued space
// ---------------------------------------------------------------------------

class FpSpace {
 public:
  FpSpace(std::shared_ptr<const FactorSpace> x, std::shared_ptr<const FactorSpace> y);

  const FactorSpace& factor(Side s) const { return s == Side::X ? *x_ : *y_; }
  std::shared_ptr<const FactorSpace> factor_ptr(Side s) const { return s == Side::X ? x_ : y_; }

  FpPoint origin() const { return SheetPoint{NormalWord{}, Side::X, x_->basepoint()}; }

  // -- letters and words ----------------------------------------------------

  /// Resolves an id against the two net registries; ids are globally unique.
  Letter make_letter(const std::string& id) const;
  /// Builds a word from ids, inferring sides; rejects eps elements.
  NormalWord make_word(const std::vector<std::string>& ids) const;

  const FactorPoint& image(const Letter& z) const { return factor(z.side).image(z.id); }
  double letter_norm(const Letter& z) const;
  double entry_cost(const NormalWord& w) const;
  ExtendedDistance word_distance(const NormalWord& a, const NormalWord& b) const;

  // -- canonical points -----------------------------------------------------

  SheetPoint make_sheet_point(const NormalWord& word, Side side, const FactorPoint& site) const;
  FpPoint canonicalize_edge(const NormalWord& word, const Letter& letter, double t) const;
  FpPoint canonicalize_eps_edge(double t) const;
  void check_point(const FpPoint& p) const;

  /// Canonical endpoints of an edge point's edge, with their parameter offsets.
  struct EdgeEnds {
    SheetPoint end0;  // at t = 0
    SheetPoint end1;  // at t = 1
  };
  EdgeEnds edge_ends(const FpPoint& p) const;

  // -- the metric -----------------------------------------------------------

  double dist(const FpPoint& p, const FpPoint& q) const;
  double dist_sheet(const SheetPoint& p, const SheetPoint& q) const;

  // -- enumeration over the tree of sheets -----------------------------------

  struct BallSheet {
    NormalWord word;
    Side side;
    FactorPoint entry;   // closest point of the sheet to the center
    double entry_dist;   // == dist(center, entry)
  };

  /// Sheets meeting the closed ball B(o,R), in deterministic BFS order.
  std::vector<BallSheet> sheets_within(const FpPoint& o, double R) const;

  /// Skeleton points (graph vertices / lattice markers) inside B(o,R),
  /// sorted by canonical serialization.
  std::vector<FpPoint> ball_vertices(const FpPoint& o, double R) const;

  struct SheetProfile {
    std::map<std::size_t, long long> by_height;
    long long total = 0;
  };
  SheetProfile sheet_profile(const FpPoint& o, double R) const;

  /// Number of marker points of all sheets inside B(o,R).
  long long marker_ball_count(const FpPoint& o, double R) const;

  // -- grammar ----------------------------------------------------------------

  /// `s:<word>:<site>` (with `s:eps@X:<site>` for root sheets),
  /// `e:<word>:<letter>:<t>`, `e0:<t>`.
  FpPoint parse_point(const std::string& text) const;
  std::string format_point(const FpPoint& p) const;

  /// Factor, net and gluing invariants; empty result means valid.
  std::vector<std::string> validate() const;

 private:
  double entry_route(const SheetPoint& shallow, const NormalWord& rest,
                     const SheetPoint& deep) const;
  std::shared_ptr<const FactorSpace> x_;
  std::shared_ptr<const FactorSpace> y_;
};

}  // namespace freeprod
