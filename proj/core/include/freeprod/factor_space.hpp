#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "freeprod/errors.hpp"
#include "freeprod/words.hpp"

namespace freeprod {

// ---------------------------------------------------------------------------
// Points of a factor space
// ---------------------------------------------------------------------------

struct VertexPoint {
  int v;
  friend bool operator==(const VertexPoint& a, const VertexPoint& b) { return a.v == b.v; }
};

/// Interior point of a unit edge, stored with u < v and s in (0,1) measured
/// from u. Endpoint parameters normalize away to VertexPoint.
struct EdgeInteriorPoint {
  int u;
  int v;
  double s;
  friend bool operator==(const EdgeInteriorPoint& a, const EdgeInteriorPoint& b) {
    return a.u == b.u && a.v == b.v && a.s == b.s;
  }
};

struct PlanePoint {
  double x;
  double y;
  friend bool operator==(const PlanePoint& a, const PlanePoint& b) {
    return a.x == b.x && a.y == b.y;
  }
};

using FactorPoint = std::variant<VertexPoint, EdgeInteriorPoint, PlanePoint>;

bool factor_point_less(const FactorPoint& a, const FactorPoint& b);

// ---------------------------------------------------------------------------
// Nets
// ---------------------------------------------------------------------------

/// Index set with finite preimages of bounded sets, a distinguished identity
/// element eps whose image is the base point, and one image per id.
struct Net {
  std::string eps;
  std::vector<std::string> ids;                // sorted
  std::map<std::string, FactorPoint> image;

  bool contains(const std::string& id) const { return image.count(id) != 0; }
  const FactorPoint& image_of(const std::string& id) const;
};

// ---------------------------------------------------------------------------
// Geodesics
// ---------------------------------------------------------------------------

class FactorSpace;

/// Arc-length parametrized polyline. Consecutive nodes lie on one geodesic
/// primitive of the provider (a single unit edge, or a straight segment in
/// the plane). Reversal is a parameter flip over the same node list, so
/// geodesic(v,u) compares equal to geodesic(u,v).reversed() bit for bit.
class FactorGeodesic {
 public:
  FactorGeodesic() = default;

  double length() const { return offsets_.empty() ? 0.0 : offsets_.back(); }
  FactorPoint start() const { return reversed_ ? nodes_.back() : nodes_.front(); }
  FactorPoint end() const { return reversed_ ? nodes_.front() : nodes_.back(); }
  FactorPoint eval(double t) const;
  FactorGeodesic reversed() const {
    FactorGeodesic g = *this;
    g.reversed_ = !reversed_;
    return g;
  }

  friend bool operator==(const FactorGeodesic& a, const FactorGeodesic& b) {
    return a.reversed_ == b.reversed_ && a.offsets_ == b.offsets_ && a.nodes_ == b.nodes_;
  }

 private:
  friend class FactorSpace;
  const FactorSpace* space_ = nullptr;
  std::vector<FactorPoint> nodes_;
  std::vector<double> offsets_;
  bool reversed_ = false;
};

// ---------------------------------------------------------------------------
// The pluggable factor contract
// ---------------------------------------------------------------------------

class FactorSpace {
 public:
  virtual ~FactorSpace() = default;

  const Net& net() const { return net_; }
  const FactorPoint& basepoint() const { return basepoint_; }
  const FactorPoint& image(const std::string& id) const { return net_.image_of(id); }
  double norm(const FactorPoint& p) const { return dist(basepoint_, p); }

  virtual double dist(const FactorPoint& u, const FactorPoint& v) const = 0;

  /// Deterministic good geodesic: built for the order-normalized pair and
  /// reversed when needed, which forces geodesic(v,u) == geodesic(u,v)^{-1}.
  FactorGeodesic geodesic(const FactorPoint& u, const FactorPoint& v) const;

  /// Ids whose image lies within R of the base point, sorted.
  std::vector<std::string> net_enumerate_within(double R) const;

  virtual bool has_markers() const = 0;
  virtual long long marker_count_within(const FactorPoint& center, double r) const = 0;
  virtual std::vector<FactorPoint> skeleton_points_within(const FactorPoint& center,
                                                          double r) const = 0;

  virtual std::optional<std::pair<double, double>> declared_constants() const {
    return std::nullopt;
  }

  virtual FactorPoint parse_site(const std::string& text) const = 0;
  virtual std::string format_site(const FactorPoint& p) const = 0;

  /// Throws DomainError when p is not a point of this space.
  virtual void check_point(const FactorPoint& p) const = 0;

  /// Appends human-readable invariant violations; empty means valid.
  virtual void validate(std::vector<std::string>& problems, const std::string& path) const;

 protected:
  virtual FactorGeodesic build_geodesic(const FactorPoint& lo, const FactorPoint& hi) const = 0;

  /// Point at the given distance from a toward b, both on one primitive.
  virtual FactorPoint interpolate(const FactorPoint& a, const FactorPoint& b,
                                  double dist_from_a) const = 0;

  FactorGeodesic make_polyline(std::vector<FactorPoint> nodes, std::vector<double> offsets) const;

  friend class FactorGeodesic;
  Net net_;
  FactorPoint basepoint_;
};

// ---------------------------------------------------------------------------
// Providers
// ---------------------------------------------------------------------------

/// Connected simple graph with unit edges; doubles as the tree provider,
/// which additionally checks acyclicity and declares (E,C) = (1,0).
class UnitGraphSpace final : public FactorSpace {
 public:
  UnitGraphSpace(std::vector<std::string> vertex_ids,
                 std::vector<std::pair<std::string, std::string>> edges,
                 const std::string& basepoint_id, const std::string& net_eps,
                 const std::map<std::string, std::string>& net_images, bool require_tree,
                 bool with_markers);

  double dist(const FactorPoint& u, const FactorPoint& v) const override;
  bool has_markers() const override { return markers_; }
  long long marker_count_within(const FactorPoint& center, double r) const override;
  std::vector<FactorPoint> skeleton_points_within(const FactorPoint& center,
                                                  double r) const override;
  std::optional<std::pair<double, double>> declared_constants() const override {
    if (is_tree_) return std::make_pair(1.0, 0.0);
    return std::nullopt;
  }
  FactorPoint parse_site(const std::string& text) const override;
  std::string format_site(const FactorPoint& p) const override;
  void check_point(const FactorPoint& p) const override;
  void validate(std::vector<std::string>& problems, const std::string& path) const override;

  int vertex_count() const { return static_cast<int>(vertex_ids_.size()); }
  const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
  const std::vector<std::vector<int>>& adjacency() const { return adj_; }
  int vertex_index(const std::string& id) const;
  int vertex_dist(int a, int b) const { return dist_[a][b]; }
  bool is_tree() const { return is_tree_; }

  /// Canonical vertex s->t path: walks back from t picking the smallest
  /// admissible neighbor at each level.
  std::vector<int> canonical_vertex_path(int s, int t) const;

 protected:
  FactorGeodesic build_geodesic(const FactorPoint& lo, const FactorPoint& hi) const override;
  FactorPoint interpolate(const FactorPoint& a, const FactorPoint& b,
                          double dist_from_a) const override;

 private:
  struct Anchor {
    int vertex;
    double offset;
  };
  std::vector<Anchor> anchors(const FactorPoint& p) const;
  bool edge_exists(int u, int v) const;

  std::vector<std::string> vertex_ids_;  // sorted; index == lexicographic rank
  std::map<std::string, int> vertex_index_;
  std::vector<std::vector<int>> adj_;    // sorted neighbor lists
  std::vector<std::vector<int>> dist_;   // all-pairs BFS
  bool is_tree_ = false;
  bool markers_ = true;
};

/// Euclidean plane with a rotation net: ids prefix+0 .. prefix+(m-1), images
/// are rotations of the base point about the origin by 2*pi*l/m. Markers are
/// the integer lattice.
class PlaneSpace final : public FactorSpace {
 public:
  PlaneSpace(PlanePoint basepoint, int rotation_order, const std::string& id_prefix,
             bool with_markers);

  double dist(const FactorPoint& u, const FactorPoint& v) const override;
  bool has_markers() const override { return markers_; }
  long long marker_count_within(const FactorPoint& center, double r) const override;
  std::vector<FactorPoint> skeleton_points_within(const FactorPoint& center,
                                                  double r) const override;
  FactorPoint parse_site(const std::string& text) const override;
  std::string format_site(const FactorPoint& p) const override;
  void check_point(const FactorPoint& p) const override;
  void validate(std::vector<std::string>& problems, const std::string& path) const override;

  int rotation_order() const { return order_; }

 protected:
  FactorGeodesic build_geodesic(const FactorPoint& lo, const FactorPoint& hi) const override;
  FactorPoint interpolate(const FactorPoint& a, const FactorPoint& b,
                          double dist_from_a) const override;

 private:
  int order_;
  bool markers_ = true;
};

}  // namespace freeprod
