#pragma once

#include <variant>
#include <vector>

#include "freeprod/free_product.hpp"

namespace freeprod {

/// One maximal piece of a glued geodesic: a good geodesic inside one sheet,
/// or a (possibly partial) traversal of a gluing edge.
struct InSheetSeg {
  NormalWord word;
  Side side;
  FactorGeodesic geo;
  friend bool operator==(const InSheetSeg& a, const InSheetSeg& b) {
    return a.word == b.word && a.side == b.side && a.geo == b.geo;
  }
};

struct EdgeSeg {
  NormalWord word;
  Letter letter;
  double t0;
  double t1;
  friend bool operator==(const EdgeSeg& a, const EdgeSeg& b) {
    return a.word == b.word && a.letter == b.letter && a.t0 == b.t0 && a.t1 == b.t1;
  }
};

struct EpsEdgeSeg {
  double t0;
  double t1;
  friend bool operator==(const EpsEdgeSeg& a, const EpsEdgeSeg& b) {
    return a.t0 == b.t0 && a.t1 == b.t1;
  }
};

using FpSegment = std::variant<InSheetSeg, EdgeSeg, EpsEdgeSeg>;

double segment_length(const FpSegment& seg);

/// Arc-length parametrized concatenation realizing the glued good-geodesic
/// system: eval(0) and eval(length()) return the requested endpoints
/// verbatim, all segments have positive length, and consecutive segments
/// share their junction point after canonicalization.
class FpGeodesic {
 public:
  FpGeodesic() = default;

  double length() const { return offsets_.empty() ? 0.0 : offsets_.back(); }
  const FpPoint& start() const { return a_; }
  const FpPoint& end() const { return b_; }
  const std::vector<FpSegment>& segments() const { return segments_; }

  /// Canonical point at parameter t in [0, length()]; junction parameters
  /// return the sheet-point form.
  FpPoint eval(double t) const;

  friend bool operator==(const FpGeodesic& a, const FpGeodesic& b) {
    return a.a_ == b.a_ && a.b_ == b.b_ && a.segments_ == b.segments_;
  }

  friend FpGeodesic build_geodesic(const FpSpace& fp, const FpPoint& a, const FpPoint& b);
  friend FpGeodesic reverse(const FpGeodesic& g);

 private:
  const FpSpace* space_ = nullptr;
  FpPoint a_;
  FpPoint b_;
  std::vector<FpSegment> segments_;
  std::vector<double> offsets_;  // cumulative starts plus total length
};

FpGeodesic build_geodesic(const FpSpace& fp, const FpPoint& a, const FpPoint& b);

/// Eager structural reversal; reverse(build(a,b)) equals build(b,a)
/// segment for segment, and reverse is an involution.
FpGeodesic reverse(const FpGeodesic& g);

}  // namespace freeprod
