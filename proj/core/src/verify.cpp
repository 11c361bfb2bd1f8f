#include "freeprod/verify.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <thread>
#include <tuple>

#include "freeprod/numfmt.hpp"

namespace freeprod {

namespace {

constexpr double kPointMatchTol = 1e-12;

void run_parallel(int n, int jobs, const std::function<void(int)>& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> threads;
  const int workers = std::min(jobs, n);
  threads.reserve(workers);
  for (int t = 0; t < workers; ++t) {
    threads.emplace_back([&] {
      int i;
      while ((i = next.fetch_add(1)) < n) fn(i);
    });
  }
  for (auto& th : threads) th.join();
}

/// Deterministic reduction: max violation over non-skipped samples, witnesses
/// recomputed for the worst indices. Independent of thread scheduling.
VerificationReport finish_report(std::string check,
                                 std::vector<std::pair<std::string, std::string>> params,
                                 const std::vector<double>& viol, const std::vector<char>& skip,
                                 double tolerance,
                                 const std::function<std::string(int)>& describe) {
  VerificationReport report;
  report.check = std::move(check);
  report.params = std::move(params);
  report.tolerance = tolerance;

  std::vector<int> order;
  for (int i = 0; i < static_cast<int>(viol.size()); ++i) {
    if (skip[i]) {
      ++report.skipped;
    } else {
      order.push_back(i);
    }
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (viol[a] != viol[b]) return viol[a] > viol[b];
    return a < b;
  });
  report.max_violation_raw = order.empty() ? 0.0 : viol[order.front()];
  report.pass = report.max_violation_raw <= tolerance;
  for (std::size_t i = 0; i < order.size() && i < 3; ++i) {
    report.witnesses.push_back({describe(order[i]), viol[order[i]]});
  }
  return report;
}

std::vector<std::pair<std::string, std::string>> base_params(const SampleParams& p) {
  return {{"samples", std::to_string(p.samples)},
          {"seed", std::to_string(p.seed)},
          {"radius", fmt9(p.radius)}};
}

double binary_t(Rng& rng) { return static_cast<double>(1 + rng.below(15)) / 16.0; }

/// Dyadic parameter in [0, len] (exact for integer+dyadic graph lengths).
double snap_param(double u, double len) {
  double t = std::floor(u * len * 64.0) / 64.0;
  if (t < 0.0) t = 0.0;
  if (t > len) t = len;
  return t;
}

/// Dyadic parameter in (0, len]; returns 0 only when len == 0.
double snap_param_pos(double u, double len) {
  if (len <= 0.0) return 0.0;
  double t = std::ceil((u * len * 64.0) + 1e-12) / 64.0;
  if (t <= 0.0) t = 1.0 / 64.0;
  if (t > len) t = len;
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constants
// ---------------------------------------------------------------------------

ConstantSet derive_constants(double e_x, double c_x, double e_y, double c_y) {
  if (e_x < 1.0 || e_y < 1.0) throw DomainError("convexity constant E must be >= 1");
  if (c_x < 0.0 || c_y < 0.0) throw DomainError("convexity constant C must be >= 0");
  return ConstantSet{e_x, c_x, e_y, c_y};
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

bool is_graph_fixture(const FpSpace& fp) {
  return dynamic_cast<const UnitGraphSpace*>(&fp.factor(Side::X)) != nullptr &&
         dynamic_cast<const UnitGraphSpace*>(&fp.factor(Side::Y)) != nullptr;
}

SamplePool SamplePool::build(const FpSpace& fp, double radius) {
  SamplePool pool;
  pool.fp_ = &fp;
  pool.vertices_ = fp.ball_vertices(fp.origin(), radius);
  pool.edges_.push_back({NormalWord{}, std::nullopt});
  for (const auto& sheet : fp.sheets_within(fp.origin(), radius)) {
    if (!sheet.word.empty()) {
      pool.edges_.push_back({sheet.word.drop_back(), sheet.word.back()});
    }
  }
  return pool;
}

FpPoint SamplePool::vertex(Rng& rng) const {
  return vertices_[rng.below(vertices_.size())];
}

FpPoint SamplePool::point(Rng& rng) const {
  if (rng.below(10) < 7 || edges_.empty()) return vertex(rng);
  const EdgeRef& e = edges_[rng.below(edges_.size())];
  const double t = binary_t(rng);
  if (!e.letter.has_value()) return EpsEdgePoint{t};
  return EdgePoint{e.word, *e.letter, t};
}

// ---------------------------------------------------------------------------
// Metric axioms
// ---------------------------------------------------------------------------

VerificationReport check_metric_axioms(const FpSpace& fp, const SampleParams& p,
                                       double tolerance) {
  const SamplePool pool = SamplePool::build(fp, p.radius);
  const int n = p.samples;
  std::vector<double> viol(n, 0.0);
  std::vector<char> skip(n, 0);

  auto sample_points = [&](int i) {
    Rng rng = Rng::for_sample(p.seed, static_cast<std::uint64_t>(i));
    const FpPoint a = pool.point(rng);
    const FpPoint b = pool.point(rng);
    const FpPoint c = pool.point(rng);
    return std::array<FpPoint, 3>{a, b, c};
  };

  run_parallel(n, p.jobs, [&](int i) {
    const auto pts = sample_points(i);
    const double dab = fp.dist(pts[0], pts[1]);
    const double dbc = fp.dist(pts[1], pts[2]);
    const double dac = fp.dist(pts[0], pts[2]);
    double v = dac - dab - dbc;                       // triangle inequality
    v = std::max(v, std::abs(dab - fp.dist(pts[1], pts[0])));  // symmetry
    v = std::max(v, fp.dist(pts[0], pts[0]));         // identity
    viol[i] = v;
  });

  return finish_report("metric", base_params(p), viol, skip, tolerance, [&](int i) {
    const auto pts = sample_points(i);
    return fp.format_point(pts[0]) + " | " + fp.format_point(pts[1]) + " | " +
           fp.format_point(pts[2]);
  });
}

// ---------------------------------------------------------------------------
// Convexity
// ---------------------------------------------------------------------------

namespace {

/// c-grid shared by the convexity checks: 0, 0.01, ..., 1 plus four random
/// dyadic values per sample.
std::vector<double> c_grid(Rng& rng) {
  std::vector<double> cs;
  cs.reserve(105);
  for (int k = 0; k <= 100; ++k) cs.push_back(k / 100.0);
  for (int j = 0; j < 4; ++j) cs.push_back(static_cast<double>(rng.below(1025)) / 1024.0);
  return cs;
}

}  // namespace

VerificationReport check_cc2(const FpSpace& fp, double E, double C, const SampleParams& p,
                             double tolerance) {
  const SamplePool pool = SamplePool::build(fp, p.radius);
  const int n = p.samples;
  std::vector<double> viol(n, 0.0);
  std::vector<char> skip(n, 0);

  auto endpoints = [&](int i) {
    Rng rng = Rng::for_sample(p.seed, static_cast<std::uint64_t>(i));
    const FpPoint p1 = pool.vertex(rng);
    const FpPoint q1 = pool.vertex(rng);
    const FpPoint p2 = pool.vertex(rng);
    const FpPoint q2 = pool.vertex(rng);
    return std::array<FpPoint, 4>{p1, q1, p2, q2};
  };

  run_parallel(n, p.jobs, [&](int i) {
    Rng rng = Rng::for_sample(p.seed ^ 0x5bd1e995u, static_cast<std::uint64_t>(i));
    const auto e = endpoints(i);
    const FpGeodesic g1 = build_geodesic(fp, e[0], e[1]);
    const FpGeodesic g2 = build_geodesic(fp, e[2], e[3]);
    const double d00 = fp.dist(e[0], e[2]);
    const double dts = fp.dist(e[1], e[3]);
    double worst = -std::numeric_limits<double>::infinity();
    for (double c : c_grid(rng)) {
      const double lhs = fp.dist(g1.eval(c * g1.length()), g2.eval(c * g2.length()));
      worst = std::max(worst, lhs - (1.0 - c) * E * d00 - c * E * dts - C);
    }
    viol[i] = worst;
  });

  auto params = base_params(p);
  params.emplace_back("E", fmt9(E));
  params.emplace_back("C", fmt9(C));
  params.emplace_back("c_grid", "101+4");
  return finish_report("cc2", std::move(params), viol, skip, tolerance, [&](int i) {
    const auto e = endpoints(i);
    return fp.format_point(e[0]) + " -> " + fp.format_point(e[1]) + " vs " +
           fp.format_point(e[2]) + " -> " + fp.format_point(e[3]);
  });
}

VerificationReport estimate_sgcc2(const FpSpace& fp, double E, const SampleParams& p) {
  const SamplePool pool = SamplePool::build(fp, p.radius);
  const int n = p.samples;
  std::vector<double> viol(n, 0.0);
  std::vector<char> skip(n, 0);

  auto endpoints = [&](int i) {
    Rng rng = Rng::for_sample(p.seed, static_cast<std::uint64_t>(i));
    const FpPoint o = pool.vertex(rng);
    const FpPoint q1 = pool.vertex(rng);
    const FpPoint q2 = pool.vertex(rng);
    return std::array<FpPoint, 3>{o, q1, q2};
  };

  run_parallel(n, p.jobs, [&](int i) {
    Rng rng = Rng::for_sample(p.seed ^ 0x5bd1e995u, static_cast<std::uint64_t>(i));
    const auto e = endpoints(i);
    const FpGeodesic g1 = build_geodesic(fp, e[0], e[1]);
    const FpGeodesic g2 = build_geodesic(fp, e[0], e[2]);
    const double dts = fp.dist(e[1], e[2]);
    double worst = -std::numeric_limits<double>::infinity();
    for (double c : c_grid(rng)) {
      const double lhs = fp.dist(g1.eval(c * g1.length()), g2.eval(c * g2.length()));
      worst = std::max(worst, lhs - c * E * dts);
    }
    viol[i] = worst;
  });

  auto params = base_params(p);
  params.emplace_back("E", fmt9(E));
  VerificationReport report =
      finish_report("sgcc2", std::move(params), viol, skip, 0.0, [&](int i) {
        const auto e = endpoints(i);
        return fp.format_point(e[0]) + " -> " + fp.format_point(e[1]) + " / " +
               fp.format_point(e[2]);
      });
  report.fitted.emplace_back("C_min", std::max(0.0, report.max_violation_raw));
  report.pass = true;  // estimator, not a gate
  return report;
}

VerificationReport estimate_sgcc2_factor(const FactorSpace& factor, double E, int c_grid_n) {
  const auto* graph = dynamic_cast<const UnitGraphSpace*>(&factor);
  if (graph == nullptr) {
    throw CapabilityError("exhaustive sgcc2 estimation needs a graph factor");
  }
  const int nv = graph->vertex_count();
  double worst = 0.0;
  std::string witness;
  for (int o = 0; o < nv; ++o) {
    for (int a = 0; a < nv; ++a) {
      for (int b = 0; b < nv; ++b) {
        const FactorGeodesic g1 = factor.geodesic(VertexPoint{o}, VertexPoint{a});
        const FactorGeodesic g2 = factor.geodesic(VertexPoint{o}, VertexPoint{b});
        const double dts = factor.dist(VertexPoint{a}, VertexPoint{b});
        for (int k = 0; k <= c_grid_n; ++k) {
          const double c = static_cast<double>(k) / c_grid_n;
          const double lhs =
              factor.dist(g1.eval(c * g1.length()), g2.eval(c * g2.length()));
          const double v = lhs - c * E * dts;
          if (v > worst) {
            worst = v;
            witness = graph->format_site(VertexPoint{o}) + " -> " +
                      graph->format_site(VertexPoint{a}) + " / " +
                      graph->format_site(VertexPoint{b});
          }
        }
      }
    }
  }
  VerificationReport report;
  report.check = "sgcc2_factor";
  report.params = {{"E", fmt9(E)},
                   {"c_grid", std::to_string(c_grid_n + 1)},
                   {"triples", std::to_string(nv * nv * nv)}};
  report.max_violation_raw = worst;
  report.tolerance = 0.0;
  report.pass = true;
  report.fitted.emplace_back("C_min", std::max(0.0, worst));
  if (!witness.empty()) report.witnesses.push_back({witness, worst});
  return report;
}

VerificationReport check_cc3_identity(const FpSpace& fp, const SampleParams& p,
                                      double tolerance) {
  const SamplePool pool = SamplePool::build(fp, p.radius);
  const int n = p.samples;
  std::vector<double> viol(n, 0.0);
  std::vector<char> skip(n, 0);

  auto endpoints = [&](int i) {
    Rng rng = Rng::for_sample(p.seed, static_cast<std::uint64_t>(i));
    const FpPoint p1 = pool.point(rng);
    const FpPoint q1 = pool.point(rng);
    const FpPoint p2 = pool.point(rng);
    const FpPoint q2 = pool.point(rng);
    return std::array<FpPoint, 4>{p1, q1, p2, q2};
  };

  run_parallel(n, p.jobs, [&](int i) {
    Rng rng = Rng::for_sample(p.seed ^ 0x2545f491u, static_cast<std::uint64_t>(i));
    const auto e = endpoints(i);
    const FpGeodesic g1 = build_geodesic(fp, e[0], e[1]);
    const FpGeodesic g2 = build_geodesic(fp, e[2], e[3]);
    const double d00 = fp.dist(e[0], e[2]);
    double worst = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < 20; ++k) {
      const double t = k == 0 ? g1.length() : snap_param(rng.uniform01(), g1.length());
      const double s = k == 0 ? g2.length() : snap_param(rng.uniform01(), g2.length());
      const double dts = fp.dist(g1.eval(t), g2.eval(s));
      worst = std::max(worst, std::abs(t - s) - d00 - dts);
    }
    viol[i] = worst;
  });

  return finish_report("cc3", base_params(p), viol, skip, tolerance, [&](int i) {
    const auto e = endpoints(i);
    return fp.format_point(e[0]) + " -> " + fp.format_point(e[1]) + " vs " +
           fp.format_point(e[2]) + " -> " + fp.format_point(e[3]);
  });
}

// ---------------------------------------------------------------------------
// Tripod decomposition
// ---------------------------------------------------------------------------

namespace {

/// Largest r in [0, hi] such that g3(r) still lies on g1 at parameter
/// anchor - r, located by bisection over a pointwise-match predicate.
double backtrack_overlap(const FpSpace& fp, const FpGeodesic& g3, bool from_far_end,
                         const FpGeodesic& g_ref, double anchor, double hi) {
  auto matches = [&](double r) {
    const double g3_param = from_far_end ? g3.length() - r : r;
    return fp.dist(g3.eval(g3_param), g_ref.eval(anchor - r)) <= kPointMatchTol;
  };
  if (!matches(0.0)) return 0.0;
  if (matches(hi)) return hi;
  double lo = 0.0;
  for (int iter = 0; iter < 60 && hi - lo > 1e-13; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (matches(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

}  // namespace

VerificationReport check_tripod(const FpSpace& fp, const SampleParams& p, double tolerance) {
  const SamplePool pool = SamplePool::build(fp, p.radius);
  const int n = p.samples;
  std::vector<double> viol(n, 0.0);
  std::vector<char> skip(n, 0);

  auto sample_cfg = [&](int i) {
    Rng rng = Rng::for_sample(p.seed, static_cast<std::uint64_t>(i));
    const FpPoint o = pool.vertex(rng);
    const FpPoint q1 = pool.vertex(rng);
    const FpPoint q2 = pool.vertex(rng);
    const double u1 = rng.uniform01();
    const double u2 = rng.uniform01();
    return std::tuple<FpPoint, FpPoint, FpPoint, double, double>{o, q1, q2, u1, u2};
  };

  run_parallel(n, p.jobs, [&](int i) {
    const auto [o, q1, q2, u1, u2] = sample_cfg(i);
    const FpGeodesic g1 = build_geodesic(fp, o, q1);
    const FpGeodesic g2 = build_geodesic(fp, o, q2);
    const double t = snap_param_pos(u1, g1.length());
    const double s = snap_param_pos(u2, g2.length());
    if (t <= 0.0 || s <= 0.0) {
      skip[i] = 1;
      return;
    }
    const FpPoint tip1 = g1.eval(t);
    const FpPoint tip2 = g2.eval(s);
    const FpGeodesic g3 = build_geodesic(fp, tip1, tip2);
    const double l3 = g3.length();

    const double ra = backtrack_overlap(fp, g3, false, g1, t, std::min(t, l3));
    const double rb = backtrack_overlap(fp, g3, true, g2, s, std::min(s, l3));
    const FpPoint a = g1.eval(t - ra);
    const FpPoint b = g2.eval(s - rb);
    const double dab = fp.dist(a, b);
    if (std::abs(ra + dab + rb - l3) > 1e-9) {
      skip[i] = 1;  // undetectable decomposition
      return;
    }
    const double c1 = (t - ra) / t;
    const double c1p = (s - rb) / s;
    viol[i] = dab - std::max(c1, c1p) * fp.dist(tip1, tip2);
  });

  VerificationReport report =
      finish_report("tripod", base_params(p), viol, skip, tolerance, [&](int i) {
        const auto [o, q1, q2, u1, u2] = sample_cfg(i);
        return fp.format_point(o) + " -> " + fp.format_point(q1) + " / " + fp.format_point(q2);
      });
  report.fitted.emplace_back("detected",
                             static_cast<double>(n - report.skipped));
  return report;
}

// ---------------------------------------------------------------------------
// Group action checks
// ---------------------------------------------------------------------------

VerificationReport check_action(const FpSpace& fp, const FreeProductAction& action,
                                const SampleParams& p) {
  const SamplePool pool = SamplePool::build(fp, p.radius);
  const std::vector<NormalWord> elems3 = action.elements_up_to(3);

  const int n = p.samples;
  std::vector<double> viol(n, 0.0);
  std::vector<char> skip(n, 0);

  auto sample_iso = [&](int i) {
    Rng rng = Rng::for_sample(p.seed, static_cast<std::uint64_t>(i));
    const NormalWord a = elems3[rng.below(elems3.size())];
    const FpPoint q1 = pool.point(rng);
    const FpPoint q2 = pool.point(rng);
    return std::tuple<NormalWord, FpPoint, FpPoint>{a, q1, q2};
  };

  run_parallel(n, p.jobs, [&](int i) {
    const auto [a, q1, q2] = sample_iso(i);
    viol[i] = std::abs(fp.dist(action.act(a, q1), action.act(a, q2)) - fp.dist(q1, q2));
  });

  auto params = base_params(p);
  VerificationReport report =
      finish_report("action", std::move(params), viol, skip, 0.0, [&](int i) {
        const auto [a, q1, q2] = sample_iso(i);
        return a.str() + " on " + fp.format_point(q1) + " / " + fp.format_point(q2);
      });

  for (const std::string& problem : action.validate()) {
    report.max_violation_raw = std::max(report.max_violation_raw, 1.0);
    report.witnesses.push_back({problem, 1.0});
  }

  // Action laws, exhaustive to length 3 on a fixed point set.
  std::vector<FpPoint> law_points{fp.origin()};
  for (std::size_t i = 0; i < pool.vertices().size() && law_points.size() < 8; i += 3) {
    law_points.push_back(pool.vertices()[i]);
  }
  {
    Rng rng(p.seed);
    law_points.push_back(pool.point(rng));
  }
  long long law_failures = 0;
  for (const NormalWord& a : elems3) {
    for (const FpPoint& q : law_points) {
      if (!(action.act(NormalWord{}, q) == q)) ++law_failures;
    }
    for (const NormalWord& b : elems3) {
      const NormalWord ab = action.multiply(a, b);
      for (const FpPoint& q : law_points) {
        if (!(action.act(a, action.act(b, q)) == action.act(ab, q))) ++law_failures;
      }
    }
  }
  if (law_failures > 0) {
    report.max_violation_raw = std::max(report.max_violation_raw, 1.0);
    report.witnesses.push_back(
        {"action law failures: " + std::to_string(law_failures), 1.0});
  }
  report.fitted.emplace_back("law_checks",
                             static_cast<double>(elems3.size() * elems3.size() *
                                                 law_points.size()));

  // Properness proxy: orbit counts are finite and monotone in R.
  long long prev = -1;
  for (int r = 0; r <= 4; ++r) {
    const long long count = action.orbit_count(4, fp.origin(), r);
    report.fitted.emplace_back("orbit_R" + std::to_string(r), static_cast<double>(count));
    if (count < prev) {
      report.max_violation_raw = std::max(report.max_violation_raw, 1.0);
      report.witnesses.push_back({"orbit count not monotone at R=" + std::to_string(r), 1.0});
    }
    prev = count;
  }

  // Cocompactness proxy: distance from any ball vertex to the orbit of the origin.
  double d0 = 0.0;
  const std::vector<NormalWord> cover =
      action.elements_up_to(static_cast<std::size_t>(std::ceil(p.radius)) + 2);
  for (const FpPoint& v : fp.ball_vertices(fp.origin(), std::min(p.radius, 4.0))) {
    double best = std::numeric_limits<double>::infinity();
    for (const NormalWord& a : cover) {
      best = std::min(best, fp.dist(v, action.act(a, fp.origin())));
      if (best == 0.0) break;
    }
    d0 = std::max(d0, best);
  }
  report.fitted.emplace_back("cocompact_D0", d0);

  report.pass = report.max_violation_raw <= report.tolerance;
  return report;
}

// ---------------------------------------------------------------------------
// Independent BFS oracle
// ---------------------------------------------------------------------------

namespace {

struct GraphPair {
  const UnitGraphSpace* x;
  const UnitGraphSpace* y;
};

GraphPair require_graphs(const FpSpace& fp) {
  GraphPair g{dynamic_cast<const UnitGraphSpace*>(&fp.factor(Side::X)),
              dynamic_cast<const UnitGraphSpace*>(&fp.factor(Side::Y))};
  if (g.x == nullptr || g.y == nullptr) {
    throw CapabilityError("this check requires unit-graph factors");
  }
  return g;
}

}  // namespace

GluedGraph GluedGraph::build(const FpSpace& fp, double radius_limit, int subdivide) {
  const GraphPair graphs = require_graphs(fp);
  if (subdivide < 1) throw DomainError("subdivide must be >= 1");

  GluedGraph g;
  g.step_ = 1.0 / subdivide;
  const int k = subdivide;

  auto graph_of = [&](Side s) { return s == Side::X ? graphs.x : graphs.y; };

  // Built purely from adjacency, net images and the gluing rules; the
  // free-product metric is never consulted.
  auto neighbors = [&](const FpPoint& p) {
    std::vector<FpPoint> out;
    if (const auto* sp = std::get_if<SheetPoint>(&p)) {
      const UnitGraphSpace* graph = graph_of(sp->side);
      if (const auto* vp = std::get_if<VertexPoint>(&sp->site)) {
        const int v = vp->v;
        for (int u : graph->adjacency()[v]) {
          if (k == 1) {
            out.push_back(SheetPoint{sp->word, sp->side, VertexPoint{u}});
          } else {
            const int lo = std::min(v, u);
            const int hi = std::max(v, u);
            const double s0 = (v == lo) ? 1.0 / k : 1.0 - 1.0 / k;
            out.push_back(SheetPoint{sp->word, sp->side, EdgeInteriorPoint{lo, hi, s0}});
          }
        }
        for (const std::string& id : graph->net().ids) {
          if (id == graph->net().eps) continue;
          if (!(graph->net().image_of(id) == sp->site)) continue;
          const Letter z{sp->side, id};
          out.push_back(fp.canonicalize_edge(sp->word, z, k == 1 ? 1.0 : 1.0 / k));
        }
        if (sp->site == graph->basepoint()) {
          if (!sp->word.empty()) {
            out.push_back(fp.canonicalize_edge(sp->word.drop_back(), sp->word.back(),
                                               k == 1 ? 0.0 : 1.0 - 1.0 / k));
          } else {
            const double t_end = sp->side == Side::X ? 1.0 : 0.0;
            const double t_adj = sp->side == Side::X ? 1.0 / k : 1.0 - 1.0 / k;
            out.push_back(fp.canonicalize_eps_edge(k == 1 ? t_end : t_adj));
          }
        }
      } else {
        const auto& ep = std::get<EdgeInteriorPoint>(sp->site);
        const int j = static_cast<int>(std::llround(ep.s * k));
        for (int dj : {-1, 1}) {
          const int jj = j + dj;
          FactorPoint site;
          if (jj <= 0) {
            site = VertexPoint{ep.u};
          } else if (jj >= k) {
            site = VertexPoint{ep.v};
          } else {
            site = EdgeInteriorPoint{ep.u, ep.v, static_cast<double>(jj) / k};
          }
          out.push_back(SheetPoint{sp->word, sp->side, site});
        }
      }
    } else if (const auto* ep = std::get_if<EdgePoint>(&p)) {
      const int j = static_cast<int>(std::llround(ep->t * k));
      for (int dj : {-1, 1}) {
        out.push_back(
            fp.canonicalize_edge(ep->word, ep->letter, static_cast<double>(j + dj) / k));
      }
    } else {
      const auto& e = std::get<EpsEdgePoint>(p);
      const int j = static_cast<int>(std::llround(e.t * k));
      for (int dj : {-1, 1}) {
        out.push_back(fp.canonicalize_eps_edge(static_cast<double>(j + dj) / k));
      }
    }
    return out;
  };

  const FpPoint origin = fp.origin();
  g.index_.emplace(origin, 0);
  g.points_.push_back(origin);
  g.dist_origin_.push_back(0.0);
  g.origin_ = 0;

  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    const FpPoint cur_point = g.points_[cur];
    const double cur_dist = g.dist_origin_[cur];
    if (cur_dist + g.step_ > radius_limit + 1e-9) continue;
    for (const FpPoint& nb : neighbors(cur_point)) {
      if (g.index_.count(nb)) continue;
      const int id = static_cast<int>(g.points_.size());
      g.index_.emplace(nb, id);
      g.points_.push_back(nb);
      g.dist_origin_.push_back(cur_dist + g.step_);
      queue.push_back(id);
    }
  }

  // Second pass: full induced adjacency over the collected node set.
  g.adj_.assign(g.points_.size(), {});
  for (int i = 0; i < g.node_count(); ++i) {
    for (const FpPoint& nb : neighbors(g.points_[i])) {
      auto it = g.index_.find(nb);
      if (it != g.index_.end()) g.adj_[i].push_back(it->second);
    }
    std::sort(g.adj_[i].begin(), g.adj_[i].end());
    g.adj_[i].erase(std::unique(g.adj_[i].begin(), g.adj_[i].end()), g.adj_[i].end());
  }
  return g;
}

int GluedGraph::id_of(const FpPoint& p) const {
  auto it = index_.find(p);
  return it == index_.end() ? -1 : it->second;
}

std::vector<double> GluedGraph::distances_from(int node) const {
  std::vector<double> d(points_.size(), std::numeric_limits<double>::infinity());
  d[node] = 0.0;
  std::deque<int> queue{node};
  while (!queue.empty()) {
    const int cur = queue.front();
    queue.pop_front();
    for (int nb : adj_[cur]) {
      if (std::isinf(d[nb])) {
        d[nb] = d[cur] + step_;
        queue.push_back(nb);
      }
    }
  }
  return d;
}

VerificationReport compare_bfs_oracle(const FpSpace& fp, double radius) {
  const GluedGraph g = GluedGraph::build(fp, 3.0 * radius, 1);

  std::vector<int> inner;
  for (int i = 0; i < g.node_count(); ++i) {
    if (g.dist_from_origin()[i] <= radius) inner.push_back(i);
  }

  double worst = 0.0;
  std::string witness;
  long long pairs = 0;
  for (std::size_t si = 0; si < inner.size(); ++si) {
    const int s = inner[si];
    const std::vector<double> d = g.distances_from(s);
    for (std::size_t ti = si; ti < inner.size(); ++ti) {
      const int t = inner[ti];
      const double diff = std::abs(fp.dist(g.points()[s], g.points()[t]) - d[t]);
      ++pairs;
      if (diff > worst) {
        worst = diff;
        witness = fp.format_point(g.points()[s]) + " | " + fp.format_point(g.points()[t]);
      }
    }
  }

  VerificationReport report;
  report.check = "oracle";
  report.params = {{"radius", fmt9(radius)},
                   {"vertices", std::to_string(inner.size())},
                   {"pairs", std::to_string(pairs)}};
  report.tolerance = 1e-9;
  report.max_violation_raw = worst;
  report.pass = worst <= report.tolerance;
  if (!witness.empty()) report.witnesses.push_back({witness, worst});
  report.fitted.emplace_back("pairs", static_cast<double>(pairs));
  return report;
}

// ---------------------------------------------------------------------------
// Profiles
// ---------------------------------------------------------------------------

GrowthProfile growth_profile(const FpSpace& fp, const std::vector<double>& radii) {
  return growth_profile(fp, radii, fp.origin());
}

GrowthProfile growth_profile(const FpSpace& fp, const std::vector<double>& radii,
                             const FpPoint& center) {
  GrowthProfile profile;
  profile.radii = radii;
  for (double r : radii) {
    profile.v_counts.push_back(fp.marker_ball_count(center, r));
    profile.s_counts.push_back(fp.sheet_profile(center, r).total);
  }
  // Least squares on (log R, log V); lattice noise at small radii is why the
  // downstream thresholds are wide.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] <= 0 || profile.v_counts[i] <= 0) continue;
    const double x = std::log(radii[i]);
    const double y = std::log(static_cast<double>(profile.v_counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if (m >= 2 && sxx * m - sx * sx != 0.0) {
    profile.slope = (sxy * m - sx * sy) / (sxx * m - sx * sx);
  }
  return profile;
}

std::string GrowthProfile::to_csv() const {
  std::string out = "R,V,S,slope\n";
  for (std::size_t i = 0; i < radii.size(); ++i) {
    out += fmt9(radii[i]) + "," + std::to_string(v_counts[i]) + "," +
           std::to_string(s_counts[i]) + "," + fmt9(slope) + "\n";
  }
  return out;
}

std::string GrowthProfile::to_json() const {
  std::string out = "{\n  \"radii\": [";
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i) out += ", ";
    out += fmt9(radii[i]);
  }
  out += "],\n  \"V\": [";
  for (std::size_t i = 0; i < v_counts.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v_counts[i]);
  }
  out += "],\n  \"S\": [";
  for (std::size_t i = 0; i < s_counts.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(s_counts[i]);
  }
  out += "],\n  \"slope\": " + fmt9(slope) + "\n}\n";
  return out;
}

EndsProfile ends_profile(const FpSpace& fp, const std::vector<double>& radii) {
  EndsProfile profile;
  profile.radii = radii;
  double max_r = 0.0;
  for (double r : radii) max_r = std::max(max_r, r);

  const GluedGraph g = GluedGraph::build(fp, 3.0 * std::max(max_r, 1.0), 1);
  const std::vector<double>& d = g.dist_from_origin();

  for (double r : radii) {
    // Complement of the closed ball, windowed at 3R.
    std::vector<char> in_shell(g.node_count(), 0);
    for (int i = 0; i < g.node_count(); ++i) {
      in_shell[i] = d[i] > r && d[i] <= 3.0 * std::max(r, 1.0) ? 1 : 0;
    }
    long long components = 0;
    std::vector<char> seen(g.node_count(), 0);
    for (int i = 0; i < g.node_count(); ++i) {
      if (!in_shell[i] || seen[i]) continue;
      ++components;
      std::deque<int> queue{i};
      seen[i] = 1;
      while (!queue.empty()) {
        const int cur = queue.front();
        queue.pop_front();
        for (int nb : g.adjacency_of(cur)) {
          if (in_shell[nb] && !seen[nb]) {
            seen[nb] = 1;
            queue.push_back(nb);
          }
        }
      }
    }
    profile.components.push_back(components);
  }
  return profile;
}

std::string EndsProfile::to_csv() const {
  std::string out = "R,components\n";
  for (std::size_t i = 0; i < radii.size(); ++i) {
    out += fmt9(radii[i]) + "," + std::to_string(components[i]) + "\n";
  }
  return out;
}

std::string EndsProfile::to_json() const {
  std::string out = "{\n  \"radii\": [";
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (i) out += ", ";
    out += fmt9(radii[i]);
  }
  out += "],\n  \"components\": [";
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(components[i]);
  }
  out += "]\n}\n";
  return out;
}

}  // namespace freeprod
