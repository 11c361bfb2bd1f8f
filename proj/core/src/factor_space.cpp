#include "freeprod/factor_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <limits>
#include <set>

#include "freeprod/numfmt.hpp"

namespace freeprod {

namespace {

constexpr double kEvalSlop = 1e-9;

int kind_rank(const FactorPoint& p) { return static_cast<int>(p.index()); }

}  // namespace

bool factor_point_less(const FactorPoint& a, const FactorPoint& b) {
  if (kind_rank(a) != kind_rank(b)) return kind_rank(a) < kind_rank(b);
  if (std::holds_alternative<VertexPoint>(a)) {
    return std::get<VertexPoint>(a).v < std::get<VertexPoint>(b).v;
  }
  if (std::holds_alternative<EdgeInteriorPoint>(a)) {
    const auto& pa = std::get<EdgeInteriorPoint>(a);
    const auto& pb = std::get<EdgeInteriorPoint>(b);
    if (pa.u != pb.u) return pa.u < pb.u;
    if (pa.v != pb.v) return pa.v < pb.v;
    return pa.s < pb.s;
  }
  const auto& pa = std::get<PlanePoint>(a);
  const auto& pb = std::get<PlanePoint>(b);
  if (pa.x != pb.x) return pa.x < pb.x;
  return pa.y < pb.y;
}

const FactorPoint& Net::image_of(const std::string& id) const {
  auto it = image.find(id);
  if (it == image.end()) throw DomainError("unknown net id '" + id + "'");
  return it->second;
}

// ---------------------------------------------------------------------------
// FactorGeodesic
// ---------------------------------------------------------------------------

FactorPoint FactorGeodesic::eval(double t) const {
  const double len = length();
  double tt = reversed_ ? len - t : t;
  if (tt < 0.0) {
    if (tt < -kEvalSlop) throw DomainError("geodesic parameter out of range");
    tt = 0.0;
  }
  if (tt > len) {
    if (tt > len + kEvalSlop) throw DomainError("geodesic parameter out of range");
    tt = len;
  }
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), tt);
  std::size_t idx = static_cast<std::size_t>(it - offsets_.begin());
  if (idx > 0) --idx;
  if (offsets_[idx] == tt) return nodes_[idx];
  return space_->interpolate(nodes_[idx], nodes_[idx + 1], tt - offsets_[idx]);
}

FactorGeodesic FactorSpace::make_polyline(std::vector<FactorPoint> nodes,
                                          std::vector<double> offsets) const {
  FactorGeodesic g;
  g.space_ = this;
  g.nodes_ = std::move(nodes);
  g.offsets_ = std::move(offsets);
  return g;
}

FactorGeodesic FactorSpace::geodesic(const FactorPoint& u, const FactorPoint& v) const {
  check_point(u);
  check_point(v);
  if (factor_point_less(v, u)) return build_geodesic(v, u).reversed();
  return build_geodesic(u, v);
}

std::vector<std::string> FactorSpace::net_enumerate_within(double R) const {
  if (R < 0) throw DomainError("negative radius");
  std::vector<std::string> out;
  for (const auto& id : net_.ids) {
    if (norm(net_.image_of(id)) <= R) out.push_back(id);
  }
  return out;
}

void FactorSpace::validate(std::vector<std::string>& problems, const std::string& path) const {
  if (!net_.contains(net_.eps)) {
    problems.push_back(path + ".net.eps: eps id '" + net_.eps + "' not among net elements");
    return;
  }
  if (!(net_.image_of(net_.eps) == basepoint_)) {
    problems.push_back(path + ".net.eps: image of eps differs from the base point");
  }
  for (const auto& id : net_.ids) {
    if (id == "eps") problems.push_back(path + ".net: 'eps' is reserved and cannot name an element");
  }
}

// ---------------------------------------------------------------------------
// UnitGraphSpace
// ---------------------------------------------------------------------------

UnitGraphSpace::UnitGraphSpace(std::vector<std::string> vertex_ids,
                               std::vector<std::pair<std::string, std::string>> edges,
                               const std::string& basepoint_id, const std::string& net_eps,
                               const std::map<std::string, std::string>& net_images,
                               bool require_tree, bool with_markers) {
  markers_ = with_markers;
  std::sort(vertex_ids.begin(), vertex_ids.end());
  for (std::size_t i = 1; i < vertex_ids.size(); ++i) {
    if (vertex_ids[i] == vertex_ids[i - 1]) {
      throw DomainError("duplicate vertex id '" + vertex_ids[i] + "'");
    }
  }
  if (vertex_ids.empty()) throw DomainError("graph needs at least one vertex");
  vertex_ids_ = std::move(vertex_ids);
  for (int i = 0; i < static_cast<int>(vertex_ids_.size()); ++i) {
    vertex_index_[vertex_ids_[i]] = i;
  }

  const int n = vertex_count();
  adj_.assign(n, {});
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges) {
    const int ia = vertex_index(a);
    const int ib = vertex_index(b);
    if (ia == ib) throw DomainError("self loop at vertex '" + a + "'");
    auto key = std::minmax(ia, ib);
    if (!seen.insert(key).second) {
      throw DomainError("duplicate edge " + a + "-" + b);
    }
    adj_[ia].push_back(ib);
    adj_[ib].push_back(ia);
  }
  for (auto& nb : adj_) std::sort(nb.begin(), nb.end());

  // All-pairs BFS; connectivity is required for a geodesic metric.
  const int inf = std::numeric_limits<int>::max() / 4;
  dist_.assign(n, std::vector<int>(n, inf));
  for (int s = 0; s < n; ++s) {
    auto& d = dist_[s];
    d[s] = 0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      for (int w : adj_[cur]) {
        if (d[w] == inf) {
          d[w] = d[cur] + 1;
          queue.push_back(w);
        }
      }
    }
  }
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (dist_[s][t] >= inf) throw DomainError("graph is not connected");
    }
  }

  is_tree_ = (static_cast<int>(seen.size()) == n - 1);
  if (require_tree && !is_tree_) throw DomainError("graph is not a tree");

  if (vertex_index_.count(basepoint_id) == 0) {
    throw DomainError("basepoint '" + basepoint_id + "' is not a vertex");
  }
  basepoint_ = VertexPoint{vertex_index(basepoint_id)};

  net_.eps = net_eps;
  for (const auto& [id, vid] : net_images) {
    if (vertex_index_.count(vid) == 0) {
      throw DomainError("net image '" + vid + "' is not a vertex");
    }
    net_.ids.push_back(id);
    net_.image.emplace(id, VertexPoint{vertex_index(vid)});
  }
  std::sort(net_.ids.begin(), net_.ids.end());
}

int UnitGraphSpace::vertex_index(const std::string& id) const {
  auto it = vertex_index_.find(id);
  if (it == vertex_index_.end()) throw DomainError("unknown vertex '" + id + "'");
  return it->second;
}

bool UnitGraphSpace::edge_exists(int u, int v) const {
  const auto& nb = adj_[u];
  return std::binary_search(nb.begin(), nb.end(), v);
}

void UnitGraphSpace::check_point(const FactorPoint& p) const {
  if (const auto* vp = std::get_if<VertexPoint>(&p)) {
    if (vp->v < 0 || vp->v >= vertex_count()) throw DomainError("vertex index out of range");
    return;
  }
  if (const auto* ep = std::get_if<EdgeInteriorPoint>(&p)) {
    if (ep->u >= ep->v || !edge_exists(ep->u, ep->v)) throw DomainError("no such edge");
    if (!(ep->s > 0.0 && ep->s < 1.0)) throw DomainError("edge parameter must be interior");
    return;
  }
  throw DomainError("plane point offered to a graph space");
}

std::vector<UnitGraphSpace::Anchor> UnitGraphSpace::anchors(const FactorPoint& p) const {
  if (const auto* vp = std::get_if<VertexPoint>(&p)) return {{vp->v, 0.0}};
  const auto& ep = std::get<EdgeInteriorPoint>(p);
  return {{ep.u, ep.s}, {ep.v, 1.0 - ep.s}};
}

double UnitGraphSpace::dist(const FactorPoint& u, const FactorPoint& v) const {
  check_point(u);
  check_point(v);
  if (u == v) return 0.0;
  if (const auto* a = std::get_if<EdgeInteriorPoint>(&u)) {
    if (const auto* b = std::get_if<EdgeInteriorPoint>(&v)) {
      if (a->u == b->u && a->v == b->v) return std::abs(a->s - b->s);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  for (const Anchor& pa : anchors(u)) {
    for (const Anchor& pb : anchors(v)) {
      best = std::min(best, pa.offset + dist_[pa.vertex][pb.vertex] + pb.offset);
    }
  }
  return best;
}

std::vector<int> UnitGraphSpace::canonical_vertex_path(int s, int t) const {
  std::vector<int> path{t};
  int cur = t;
  while (cur != s) {
    for (int w : adj_[cur]) {
      if (dist_[s][w] == dist_[s][cur] - 1) {
        cur = w;
        break;
      }
    }
    path.push_back(cur);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

FactorGeodesic UnitGraphSpace::build_geodesic(const FactorPoint& lo, const FactorPoint& hi) const {
  if (lo == hi) return make_polyline({lo}, {0.0});

  const auto* ilo = std::get_if<EdgeInteriorPoint>(&lo);
  const auto* ihi = std::get_if<EdgeInteriorPoint>(&hi);
  if (ilo && ihi && ilo->u == ihi->u && ilo->v == ihi->v) {
    return make_polyline({lo, hi}, {0.0, std::abs(ilo->s - ihi->s)});
  }

  Anchor best_a{-1, 0.0};
  Anchor best_b{-1, 0.0};
  double best = std::numeric_limits<double>::infinity();
  for (const Anchor& pa : anchors(lo)) {
    for (const Anchor& pb : anchors(hi)) {
      const double cost = pa.offset + dist_[pa.vertex][pb.vertex] + pb.offset;
      if (cost < best) {
        best = cost;
        best_a = pa;
        best_b = pb;
      }
    }
  }

  std::vector<FactorPoint> nodes;
  std::vector<double> offsets;
  if (ilo) {
    nodes.push_back(lo);
    offsets.push_back(0.0);
  }
  const std::vector<int> path = canonical_vertex_path(best_a.vertex, best_b.vertex);
  for (std::size_t k = 0; k < path.size(); ++k) {
    double off = 0.0;
    if (!nodes.empty()) off = offsets.back() + (k == 0 ? best_a.offset : 1.0);
    nodes.push_back(VertexPoint{path[k]});
    offsets.push_back(off);
  }
  if (ihi) {
    nodes.push_back(hi);
    offsets.push_back(offsets.back() + best_b.offset);
  }
  return make_polyline(std::move(nodes), std::move(offsets));
}

FactorPoint UnitGraphSpace::interpolate(const FactorPoint& a, const FactorPoint& b,
                                        double dist_from_a) const {
  // Resolve the common edge and the endpoints' positions along it.
  int eu = -1, ev = -1;
  double sa = 0.0, sb = 0.0;
  if (const auto* ia = std::get_if<EdgeInteriorPoint>(&a)) {
    eu = ia->u;
    ev = ia->v;
    sa = ia->s;
    if (const auto* ib = std::get_if<EdgeInteriorPoint>(&b)) {
      sb = ib->s;
    } else {
      sb = (std::get<VertexPoint>(b).v == eu) ? 0.0 : 1.0;
    }
  } else if (const auto* ib = std::get_if<EdgeInteriorPoint>(&b)) {
    eu = ib->u;
    ev = ib->v;
    sb = ib->s;
    sa = (std::get<VertexPoint>(a).v == eu) ? 0.0 : 1.0;
  } else {
    const int va = std::get<VertexPoint>(a).v;
    const int vb = std::get<VertexPoint>(b).v;
    eu = std::min(va, vb);
    ev = std::max(va, vb);
    sa = (va == eu) ? 0.0 : 1.0;
    sb = 1.0 - sa;
  }
  // Unit speed along a unit edge: no division, exact for binary-grid inputs.
  const double s = sa + (sb > sa ? dist_from_a : -dist_from_a);
  if (s <= 0.0) return VertexPoint{eu};
  if (s >= 1.0) return VertexPoint{ev};
  return EdgeInteriorPoint{eu, ev, s};
}

long long UnitGraphSpace::marker_count_within(const FactorPoint& center, double r) const {
  if (!markers_) throw CapabilityError("graph space has no marker set");
  if (r < 0) throw DomainError("negative marker radius");
  long long count = 0;
  for (int v = 0; v < vertex_count(); ++v) {
    if (dist(center, VertexPoint{v}) <= r) ++count;
  }
  return count;
}

std::vector<FactorPoint> UnitGraphSpace::skeleton_points_within(const FactorPoint& center,
                                                                double r) const {
  std::vector<FactorPoint> out;
  if (r < 0) return out;
  for (int v = 0; v < vertex_count(); ++v) {
    if (dist(center, VertexPoint{v}) <= r) out.push_back(VertexPoint{v});
  }
  return out;
}

FactorPoint UnitGraphSpace::parse_site(const std::string& text) const {
  if (text.size() > 2 && text.rfind("e(", 0) == 0 && text.back() == ')') {
    const std::string body = text.substr(2, text.size() - 3);
    const auto c1 = body.find(',');
    const auto c2 = body.find(',', c1 == std::string::npos ? 0 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
      throw ParseError("bad edge site '" + text + "'");
    }
    const int u = vertex_index(body.substr(0, c1));
    const int v = vertex_index(body.substr(c1 + 1, c2 - c1 - 1));
    char* end = nullptr;
    const double s = std::strtod(body.c_str() + c2 + 1, &end);
    if (end == body.c_str() + c2 + 1) throw ParseError("bad edge parameter in '" + text + "'");
    if (s <= 0.0 || s >= 1.0) throw DomainError("edge site parameter must be in (0,1)");
    const int lo = std::min(u, v);
    const int hi = std::max(u, v);
    FactorPoint p = EdgeInteriorPoint{lo, hi, lo == u ? s : 1.0 - s};
    check_point(p);
    return p;
  }
  return VertexPoint{vertex_index(text)};
}

std::string UnitGraphSpace::format_site(const FactorPoint& p) const {
  if (const auto* vp = std::get_if<VertexPoint>(&p)) return vertex_ids_[vp->v];
  const auto& ep = std::get<EdgeInteriorPoint>(p);
  return "e(" + vertex_ids_[ep.u] + "," + vertex_ids_[ep.v] + "," + fmt9(ep.s) + ")";
}

void UnitGraphSpace::validate(std::vector<std::string>& problems, const std::string& path) const {
  FactorSpace::validate(problems, path);
  for (const auto& id : net_.ids) {
    if (!std::holds_alternative<VertexPoint>(net_.image_of(id))) {
      problems.push_back(path + ".net: image of '" + id + "' is not a vertex");
    }
  }
}

// ---------------------------------------------------------------------------
// PlaneSpace
// ---------------------------------------------------------------------------

PlaneSpace::PlaneSpace(PlanePoint basepoint, int rotation_order, const std::string& id_prefix,
                       bool with_markers)
    : order_(rotation_order), markers_(with_markers) {
  if (rotation_order < 1) throw DomainError("rotation order must be >= 1");
  basepoint_ = basepoint;
  net_.eps = id_prefix + "0";
  const double two_pi = 8.0 * std::atan(1.0);
  for (int l = 0; l < order_; ++l) {
    const std::string id = id_prefix + std::to_string(l);
    const double angle = two_pi * l / order_;
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    net_.ids.push_back(id);
    net_.image.emplace(id, PlanePoint{c * basepoint.x - s * basepoint.y,
                                      s * basepoint.x + c * basepoint.y});
  }
  std::sort(net_.ids.begin(), net_.ids.end());
  // Rotation order 1 fixes the base point exactly.
  net_.image[net_.eps] = basepoint;
}

void PlaneSpace::check_point(const FactorPoint& p) const {
  const auto* pp = std::get_if<PlanePoint>(&p);
  if (pp == nullptr) throw DomainError("graph point offered to the plane");
  if (!std::isfinite(pp->x) || !std::isfinite(pp->y)) throw DomainError("non-finite coordinate");
}

double PlaneSpace::dist(const FactorPoint& u, const FactorPoint& v) const {
  check_point(u);
  check_point(v);
  const auto& a = std::get<PlanePoint>(u);
  const auto& b = std::get<PlanePoint>(v);
  return std::hypot(a.x - b.x, a.y - b.y);
}

FactorGeodesic PlaneSpace::build_geodesic(const FactorPoint& lo, const FactorPoint& hi) const {
  if (lo == hi) return make_polyline({lo}, {0.0});
  return make_polyline({lo, hi}, {0.0, dist(lo, hi)});
}

FactorPoint PlaneSpace::interpolate(const FactorPoint& a, const FactorPoint& b,
                                    double dist_from_a) const {
  const auto& pa = std::get<PlanePoint>(a);
  const auto& pb = std::get<PlanePoint>(b);
  const double len = std::hypot(pb.x - pa.x, pb.y - pa.y);
  const double f = dist_from_a / len;
  return PlanePoint{pa.x + (pb.x - pa.x) * f, pa.y + (pb.y - pa.y) * f};
}

long long PlaneSpace::marker_count_within(const FactorPoint& center, double r) const {
  if (!markers_) throw CapabilityError("plane space has no marker set");
  if (r < 0) throw DomainError("negative marker radius");
  const auto& c = std::get<PlanePoint>(center);
  const double rr = r * r + 1e-9;  // admit exact-boundary lattice points
  long long count = 0;
  for (long long x = static_cast<long long>(std::ceil(c.x - r - 1e-9));
       x <= static_cast<long long>(std::floor(c.x + r + 1e-9)); ++x) {
    const double dx2 = (x - c.x) * (x - c.x);
    if (dx2 > rr) continue;
    const double dy = std::sqrt(rr - dx2);
    const long long ylo = static_cast<long long>(std::ceil(c.y - dy));
    const long long yhi = static_cast<long long>(std::floor(c.y + dy));
    if (yhi >= ylo) count += yhi - ylo + 1;
  }
  return count;
}

std::vector<FactorPoint> PlaneSpace::skeleton_points_within(const FactorPoint& center,
                                                            double r) const {
  std::vector<FactorPoint> out;
  if (r < 0) return out;
  const auto& c = std::get<PlanePoint>(center);
  const double rr = r * r + 1e-9;
  for (long long x = static_cast<long long>(std::ceil(c.x - r - 1e-9));
       x <= static_cast<long long>(std::floor(c.x + r + 1e-9)); ++x) {
    const double dx2 = (x - c.x) * (x - c.x);
    if (dx2 > rr) continue;
    const double dy = std::sqrt(rr - dx2);
    for (long long y = static_cast<long long>(std::ceil(c.y - dy));
         y <= static_cast<long long>(std::floor(c.y + dy)); ++y) {
      out.push_back(PlanePoint{static_cast<double>(x), static_cast<double>(y)});
    }
  }
  return out;
}

FactorPoint PlaneSpace::parse_site(const std::string& text) const {
  if (text.size() < 5 || text.front() != '(' || text.back() != ')') {
    throw ParseError("bad plane site '" + text + "', expected (x,y)");
  }
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw ParseError("bad plane site '" + text + "'");
  char* end = nullptr;
  const double x = std::strtod(text.c_str() + 1, &end);
  if (end != text.c_str() + comma) throw ParseError("bad x coordinate in '" + text + "'");
  const double y = std::strtod(text.c_str() + comma + 1, &end);
  if (end != text.c_str() + text.size() - 1) throw ParseError("bad y coordinate in '" + text + "'");
  FactorPoint p = PlanePoint{x, y};
  check_point(p);
  return p;
}

std::string PlaneSpace::format_site(const FactorPoint& p) const {
  const auto& pp = std::get<PlanePoint>(p);
  return "(" + fmt9(pp.x) + "," + fmt9(pp.y) + ")";
}

void PlaneSpace::validate(std::vector<std::string>& problems, const std::string& path) const {
  FactorSpace::validate(problems, path);
  if (order_ < 1) problems.push_back(path + ": rotation order must be >= 1");
}

}  // namespace freeprod
