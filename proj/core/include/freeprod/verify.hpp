#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "freeprod/free_product.hpp"
#include "freeprod/geodesic.hpp"
#include "freeprod/group_action.hpp"
#include "freeprod/report.hpp"
#include "freeprod/rng.hpp"

namespace freeprod {

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

/// Coarse-convexity constants for the two factors and the derived values:
/// E = max(E_X, E_Y), C = max(C_X, C_Y), the (E, 3C) pair from the
/// symmetric-geodesic-to-coarsely-convex promotion, and the (2+E, 9C) pair
/// the free product satisfies. Derived fields are recomputed on access.
struct ConstantSet {
  double e_x, c_x, e_y, c_y;

  double E() const { return e_x > e_y ? e_x : e_y; }
  double C() const { return c_x > c_y ? c_x : c_y; }
  std::pair<double, double> sgcc_to_cc() const { return {E(), 3.0 * C()}; }
  std::pair<double, double> free_product() const { return {2.0 + E(), 9.0 * C()}; }
};

/// Validates E >= 1, C >= 0 for both factors.
ConstantSet derive_constants(double e_x, double c_x, double e_y, double c_y);

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

struct SampleParams {
  int samples = 500;
  std::uint64_t seed = 1;
  double radius = 8.0;  // endpoint pool budget around the origin
  int jobs = 1;
};

/// Endpoint pool: skeleton vertices in a ball around the origin plus the
/// connecting edges discovered along the way. Edge parameters are drawn from
/// the binary grid k/16 so graph arithmetic stays exact.
class SamplePool {
 public:
  static SamplePool build(const FpSpace& fp, double radius);

  const std::vector<FpPoint>& vertices() const { return vertices_; }
  FpPoint vertex(Rng& rng) const;
  FpPoint point(Rng& rng) const;  // mixes vertices and edge-interior points

 private:
  const FpSpace* fp_ = nullptr;
  std::vector<FpPoint> vertices_;
  struct EdgeRef {
    NormalWord word;
    std::optional<Letter> letter;  // nullopt = the eps edge
  };
  std::vector<EdgeRef> edges_;
};

/// True when both factors are unit graphs (exact integer arithmetic).
bool is_graph_fixture(const FpSpace& fp);

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

VerificationReport check_metric_axioms(const FpSpace& fp, const SampleParams& p, double tolerance);

/// CC2 with arbitrary origins at the supplied constants.
VerificationReport check_cc2(const FpSpace& fp, double E, double C, const SampleParams& p,
                             double tolerance);

/// Least C making the common-origin convexity inequality hold at E over the
/// sampled pairs; reported in fitted["C_min"].
VerificationReport estimate_sgcc2(const FpSpace& fp, double E, const SampleParams& p);

/// Exhaustive common-origin estimate over a graph factor's vertices.
VerificationReport estimate_sgcc2_factor(const FactorSpace& factor, double E, int c_grid);

/// CC3 with theta = identity; for geodesics the slack is never positive.
VerificationReport check_cc3_identity(const FpSpace& fp, const SampleParams& p, double tolerance);

/// Tripod decomposition of common-origin geodesic triangles and the key
/// inequality d(a,b) <= max(c1,c1') * d(G1(t),G2(s)).
VerificationReport check_tripod(const FpSpace& fp, const SampleParams& p, double tolerance);

/// Isometry residuals, action laws (exhaustive to word length 3), orbit
/// counts and the cocompactness constant.
VerificationReport check_action(const FpSpace& fp, const FreeProductAction& action,
                                const SampleParams& p);

// ---------------------------------------------------------------------------
// Independent BFS oracle
// ---------------------------------------------------------------------------

/// The glued graph built directly from the two factor graphs and their nets:
/// vertices (word, graph vertex), unit edges inside sheets and along the
/// connecting edges. Construction never consults the free-product metric.
/// `subdivide` splits every unit edge into that many pieces.
class GluedGraph {
 public:
  static GluedGraph build(const FpSpace& fp, double radius_limit, int subdivide = 1);

  int node_count() const { return static_cast<int>(points_.size()); }
  const std::vector<FpPoint>& points() const { return points_; }
  int id_of(const FpPoint& p) const;  // -1 when absent
  int origin_id() const { return origin_; }
  const std::vector<double>& dist_from_origin() const { return dist_origin_; }
  const std::vector<int>& adjacency_of(int node) const { return adj_[node]; }
  std::vector<double> distances_from(int node) const;

 private:
  struct PointLess {
    bool operator()(const FpPoint& a, const FpPoint& b) const { return fp_point_less(a, b); }
  };
  std::map<FpPoint, int, PointLess> index_;
  std::vector<FpPoint> points_;
  std::vector<std::vector<int>> adj_;
  std::vector<double> dist_origin_;
  int origin_ = 0;
  double step_ = 1.0;
};

/// Compares d_* with BFS distance for every pair of skeleton vertices within
/// `radius` of the origin. Expected max difference: exactly zero.
VerificationReport compare_bfs_oracle(const FpSpace& fp, double radius);

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

struct GrowthProfile {
  std::vector<double> radii;
  std::vector<long long> v_counts;  // marker points in B(center, R)
  std::vector<long long> s_counts;  // sheets meeting B(center, R)
  double slope = 0.0;               // least-squares fit of log V against log R

  std::string to_csv() const;
  std::string to_json() const;
};

GrowthProfile growth_profile(const FpSpace& fp, const std::vector<double>& radii);
GrowthProfile growth_profile(const FpSpace& fp, const std::vector<double>& radii,
                             const FpPoint& center);

struct EndsProfile {
  std::vector<double> radii;
  std::vector<long long> components;  // skeleton components with R < d <= 3R

  std::string to_csv() const;
  std::string to_json() const;
};

EndsProfile ends_profile(const FpSpace& fp, const std::vector<double>& radii);

}  // namespace freeprod
