#include "freeprod/geodesic.hpp"

#include <algorithm>
#include <cmath>

namespace freeprod {

namespace {

constexpr double kEvalSlop = 1e-9;

/// Appends a segment, dropping the degenerate zero-length ones that arise
/// when a site coincides with a base point or a marked point.
void push_seg(std::vector<FpSegment>& segs, FpSegment seg) {
  if (segment_length(seg) > 0.0) segs.push_back(std::move(seg));
}

}  // namespace

double segment_length(const FpSegment& seg) {
  if (const auto* s = std::get_if<InSheetSeg>(&seg)) return s->geo.length();
  if (const auto* e = std::get_if<EdgeSeg>(&seg)) return std::abs(e->t1 - e->t0);
  const auto& e = std::get<EpsEdgeSeg>(seg);
  return std::abs(e.t1 - e.t0);
}

FpPoint FpGeodesic::eval(double t) const {
  const double len = length();
  if (t < 0.0) {
    if (t < -kEvalSlop) throw DomainError("geodesic parameter out of range");
    t = 0.0;
  }
  if (t > len) {
    if (t > len + kEvalSlop) throw DomainError("geodesic parameter out of range");
    t = len;
  }
  if (t == 0.0) return a_;
  if (t == len) return b_;

  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - offsets_.begin());
  if (idx > 0) --idx;
  if (idx >= segments_.size()) idx = segments_.size() - 1;
  const double local = t - offsets_[idx];

  const FpSegment& seg = segments_[idx];
  if (const auto* s = std::get_if<InSheetSeg>(&seg)) {
    return SheetPoint{s->word, s->side, s->geo.eval(local)};
  }
  if (const auto* e = std::get_if<EdgeSeg>(&seg)) {
    const double param = e->t0 + (e->t1 > e->t0 ? local : -local);
    return space_->canonicalize_edge(e->word, e->letter, param);
  }
  const auto& e = std::get<EpsEdgeSeg>(seg);
  const double param = e.t0 + (e.t1 > e.t0 ? local : -local);
  return space_->canonicalize_eps_edge(param);
}

namespace {

/// Straight descent below `shallow`: cross the edges named by `rest` one by
/// one, finishing at `deep`. `rest` is the word suffix deep.word minus
/// shallow.word; each crossing contributes the in-sheet approach to the next
/// marked point plus one unit edge.
void down_chain(const FpSpace& fp, const SheetPoint& shallow, const NormalWord& rest,
                const SheetPoint& deep, std::vector<FpSegment>& segs) {
  const Letter& first = rest.front();
  if (first.side == shallow.side) {
    push_seg(segs, InSheetSeg{shallow.word, shallow.side,
                              fp.factor(shallow.side).geodesic(shallow.site, fp.image(first))});
  } else {
    // Root-sheet start on the wrong side: route through the eps edge and the
    // other root sheet first.
    const FactorSpace& f0 = fp.factor(shallow.side);
    const FactorSpace& f1 = fp.factor(first.side);
    push_seg(segs, InSheetSeg{shallow.word, shallow.side,
                              f0.geodesic(shallow.site, f0.basepoint())});
    push_seg(segs, shallow.side == Side::X ? EpsEdgeSeg{0.0, 1.0} : EpsEdgeSeg{1.0, 0.0});
    push_seg(segs, InSheetSeg{NormalWord{}, first.side,
                              f1.geodesic(f1.basepoint(), fp.image(first))});
  }

  NormalWord word = shallow.word;
  for (std::size_t i = 0; i < rest.length(); ++i) {
    const Letter& z = rest.letter(i);
    push_seg(segs, EdgeSeg{word, z, 0.0, 1.0});
    word = word.append(z);
    const Side sheet_side = opposite(z.side);
    const FactorSpace& f = fp.factor(sheet_side);
    const FactorPoint target = (i + 1 < rest.length()) ? fp.image(rest.letter(i + 1)) : deep.site;
    push_seg(segs, InSheetSeg{word, sheet_side, f.geodesic(f.basepoint(), target)});
  }
}

void reverse_segments(std::vector<FpSegment>& segs) {
  std::reverse(segs.begin(), segs.end());
  for (FpSegment& seg : segs) {
    if (auto* s = std::get_if<InSheetSeg>(&seg)) {
      s->geo = s->geo.reversed();
    } else if (auto* e = std::get_if<EdgeSeg>(&seg)) {
      std::swap(e->t0, e->t1);
    } else {
      auto& e = std::get<EpsEdgeSeg>(seg);
      std::swap(e.t0, e.t1);
    }
  }
}

/// Case (I) with distinct root sheets: through the eps edge.
void eps_bridge(const FpSpace& fp, const SheetPoint& p, const SheetPoint& q,
                std::vector<FpSegment>& segs) {
  const FactorSpace& fp_side = fp.factor(p.side);
  const FactorSpace& fq_side = fp.factor(q.side);
  push_seg(segs, InSheetSeg{p.word, p.side, fp_side.geodesic(p.site, fp_side.basepoint())});
  push_seg(segs, p.side == Side::X ? EpsEdgeSeg{0.0, 1.0} : EpsEdgeSeg{1.0, 0.0});
  push_seg(segs, InSheetSeg{q.word, q.side, fq_side.geodesic(fq_side.basepoint(), q.site)});
}

void sheet_build(const FpSpace& fp, const SheetPoint& p, const SheetPoint& q,
                 std::vector<FpSegment>& segs) {
  if (p.word == q.word) {
    if (p.side == q.side) {
      push_seg(segs, InSheetSeg{p.word, p.side, fp.factor(p.side).geodesic(p.site, q.site)});
    } else {
      eps_bridge(fp, p, q, segs);
    }
    return;
  }
  if (p.word.is_prefix_of(q.word)) {
    down_chain(fp, p, q.word.suffix(p.word.length()), q, segs);
    return;
  }
  if (q.word.is_prefix_of(p.word)) {
    std::vector<FpSegment> tmp;
    down_chain(fp, q, p.word.suffix(q.word.length()), p, tmp);
    reverse_segments(tmp);
    for (FpSegment& s : tmp) segs.push_back(std::move(s));
    return;
  }
  // Tripod through the maximal common prefix.
  const CommonPrefixSplit split = max_common_prefix(p.word, q.word);
  const Letter& z0 = split.left_rest.front();
  const Letter& w0 = split.right_rest.front();
  const SheetPoint mid_a{split.prefix, z0.side, fp.image(z0)};
  const SheetPoint mid_b{split.prefix, w0.side, fp.image(w0)};

  std::vector<FpSegment> up;
  down_chain(fp, mid_a, split.left_rest, p, up);
  reverse_segments(up);
  for (FpSegment& s : up) segs.push_back(std::move(s));
  sheet_build(fp, mid_a, mid_b, segs);
  down_chain(fp, mid_b, split.right_rest, q, segs);
}

struct EdgeChoice {
  SheetPoint endpoint;
  double offset;   // length of the partial edge toward that endpoint
  bool toward_t0;  // direction of the partial traversal
};

EdgeChoice choose_exit(const FpSpace& fp, const FpPoint& edge_pt, const FpPoint& target) {
  const FpSpace::EdgeEnds ends = fp.edge_ends(edge_pt);
  const double t = std::holds_alternative<EdgePoint>(edge_pt)
                       ? std::get<EdgePoint>(edge_pt).t
                       : std::get<EpsEdgePoint>(edge_pt).t;
  const double via0 = t + fp.dist(FpPoint{ends.end0}, target);
  const double via1 = (1.0 - t) + fp.dist(FpPoint{ends.end1}, target);
  // The edge disconnects the space, so the two routes never tie for interior t.
  if (via0 <= via1) return {ends.end0, t, true};
  return {ends.end1, 1.0 - t, false};
}

void append_partial_edge(const FpPoint& edge_pt, double from_param, double to_param,
                         std::vector<FpSegment>& segs) {
  if (const auto* ep = std::get_if<EdgePoint>(&edge_pt)) {
    push_seg(segs, EdgeSeg{ep->word, ep->letter, from_param, to_param});
  } else {
    push_seg(segs, EpsEdgeSeg{from_param, to_param});
  }
}

}  // namespace

FpGeodesic build_geodesic(const FpSpace& fp, const FpPoint& a, const FpPoint& b) {
  fp.check_point(a);
  fp.check_point(b);

  FpGeodesic g;
  g.space_ = &fp;
  g.a_ = a;
  g.b_ = b;

  if (!(a == b)) {
    const bool a_edge = !std::holds_alternative<SheetPoint>(a);
    const bool b_edge = !std::holds_alternative<SheetPoint>(b);

    bool same_edge = false;
    if (a_edge && b_edge) {
      if (const auto* ea = std::get_if<EdgePoint>(&a)) {
        const auto* eb = std::get_if<EdgePoint>(&b);
        same_edge = eb != nullptr && ea->word == eb->word && ea->letter == eb->letter;
      } else {
        same_edge = std::holds_alternative<EpsEdgePoint>(b);
      }
    }

    if (same_edge) {
      const double ta = std::holds_alternative<EdgePoint>(a) ? std::get<EdgePoint>(a).t
                                                             : std::get<EpsEdgePoint>(a).t;
      const double tb = std::holds_alternative<EdgePoint>(b) ? std::get<EdgePoint>(b).t
                                                             : std::get<EpsEdgePoint>(b).t;
      append_partial_edge(a, ta, tb, g.segments_);
    } else if (a_edge) {
      const double ta = std::holds_alternative<EdgePoint>(a) ? std::get<EdgePoint>(a).t
                                                             : std::get<EpsEdgePoint>(a).t;
      const EdgeChoice exit = choose_exit(fp, a, b);
      append_partial_edge(a, ta, exit.toward_t0 ? 0.0 : 1.0, g.segments_);
      FpGeodesic inner = build_geodesic(fp, FpPoint{exit.endpoint}, b);
      for (FpSegment& s : inner.segments_) g.segments_.push_back(std::move(s));
    } else if (b_edge) {
      const double tb = std::holds_alternative<EdgePoint>(b) ? std::get<EdgePoint>(b).t
                                                             : std::get<EpsEdgePoint>(b).t;
      const EdgeChoice exit = choose_exit(fp, b, a);
      FpGeodesic inner = build_geodesic(fp, a, FpPoint{exit.endpoint});
      for (FpSegment& s : inner.segments_) g.segments_.push_back(std::move(s));
      append_partial_edge(b, exit.toward_t0 ? 0.0 : 1.0, tb, g.segments_);
    } else {
      sheet_build(fp, std::get<SheetPoint>(a), std::get<SheetPoint>(b), g.segments_);
    }
  }

  g.offsets_.resize(g.segments_.size() + 1);
  g.offsets_[0] = 0.0;
  for (std::size_t i = 0; i < g.segments_.size(); ++i) {
    g.offsets_[i + 1] = g.offsets_[i] + segment_length(g.segments_[i]);
  }
  return g;
}

FpGeodesic reverse(const FpGeodesic& g) {
  FpGeodesic r;
  r.space_ = g.space_;
  r.a_ = g.b_;
  r.b_ = g.a_;
  r.segments_ = g.segments_;
  reverse_segments(r.segments_);
  r.offsets_.resize(r.segments_.size() + 1);
  r.offsets_[0] = 0.0;
  for (std::size_t i = 0; i < r.segments_.size(); ++i) {
    r.offsets_[i + 1] = r.offsets_[i] + segment_length(r.segments_[i]);
  }
  return r;
}

}  // namespace freeprod
