#pragma once

// Closed-form geometric features of linear and quadratic Bézier segments and
// their aggregation over a segment chain.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "adaptive.hpp"

namespace bezapprox {

inline constexpr double kCurvatureCap = 1000.0;
inline constexpr double kCuspSpeed = 1e-9;

// ---------------------------------------------------------------------------
// cubic roots

namespace detail {

inline double poly_eval(double c3, double c2, double c1, double c0, double t) {
  return ((c3 * t + c2) * t + c1) * t + c0;
}

inline double newton_polish(double c3, double c2, double c1, double c0, double r) {
  const double f = poly_eval(c3, c2, c1, c0, r);
  const double df = (3.0 * c3 * r + 2.0 * c2) * r + c1;
  if (df == 0.0 || !std::isfinite(df)) return r;
  const double next = r - f / df;
  // keep the step only if it helps; near multiple roots it may not
  if (std::isfinite(next) && std::abs(poly_eval(c3, c2, c1, c0, next)) <= std::abs(f)) return next;
  return r;
}

inline std::vector<double> quadratic_roots(double a, double b, double c) {
  std::vector<double> out;
  const double disc = b * b - 4.0 * a * c;
  const double size = b * b + std::abs(4.0 * a * c);
  if (disc < 0.0) {
    if (disc >= -1e-12 * size) out.push_back(-b / (2.0 * a));
    return out;
  }
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) {
    out.push_back(0.0);  // b = c = 0
    return out;
  }
  out.push_back(q / a);
  out.push_back(c / q);
  return out;
}

inline std::vector<double> monic_cubic_roots(double b, double c, double d) {
  // t = x - b/3 gives x^3 + p x + q = 0
  const double shift = b / 3.0;
  const double p = c - b * b / 3.0;
  const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
  const double half_q = 0.5 * q;
  const double third_p = p / 3.0;
  const double disc = half_q * half_q + third_p * third_p * third_p;
  const double size = half_q * half_q + std::abs(third_p * third_p * third_p);
  std::vector<double> x;
  if (std::abs(disc) <= 1e-12 * size || size == 0.0) {
    // multiple root
    const double u = std::cbrt(-half_q);
    x = {2.0 * u, -u};
  } else if (disc > 0.0) {
    const double u = std::cbrt(-half_q - std::copysign(std::sqrt(disc), half_q));
    x = {u == 0.0 ? 0.0 : u - third_p / u};
  } else {
    const double r = 2.0 * std::sqrt(-third_p);
    const double arg = std::clamp(3.0 * q / (2.0 * p) * std::sqrt(-3.0 / p), -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    for (int k = 0; k < 3; ++k) x.push_back(r * std::cos(phi - 2.0 * std::numbers::pi * k / 3.0));
  }
  for (double& v : x) v -= shift;
  return x;
}

}  // namespace detail

/// Real roots of c3 t^3 + c2 t^2 + c1 t + c0, ascending, without duplicates.
inline std::vector<double> solve_cubic(double c3, double c2, double c1, double c0) {
  if (!std::isfinite(c3) || !std::isfinite(c2) || !std::isfinite(c1) || !std::isfinite(c0)) {
    fail(ErrorKind::InvalidArgument, "cubic coefficients must be finite");
  }
  const double scale = std::max({std::abs(c3), std::abs(c2), std::abs(c1), std::abs(c0)});
  if (scale < std::numeric_limits<double>::min()) {
    fail(ErrorKind::AllZeroCoefficients, "every cubic coefficient is zero");
  }
  const double tiny = 1e-12 * scale;
  std::vector<double> roots;
  if (std::abs(c3) >= tiny) {
    roots = detail::monic_cubic_roots(c2 / c3, c1 / c3, c0 / c3);
  } else if (std::abs(c2) >= tiny) {
    roots = detail::quadratic_roots(c2, c1, c0);
  } else if (std::abs(c1) >= tiny) {
    roots = {-c0 / c1};
  }
  for (double& r : roots) r = detail::newton_polish(c3, c2, c1, c0, r);
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (!std::isfinite(r)) continue;
    if (!out.empty() && std::abs(r - out.back()) <= 1e-7 * std::max(1.0, std::abs(r))) continue;
    out.push_back(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// quadratic coefficient forms

/// q(t) = A t^2 + B t + base.
struct QuadCoeffs {
  Vector A;
  Vector B;
  Vector base;

  static QuadCoeffs of(const BezierCurve& q) {
    const Matrix& P = q.controls();
    return {P.col(2) - 2.0 * P.col(1) + P.col(0), 2.0 * (P.col(1) - P.col(0)), P.col(0)};
  }
  Vector at(double t) const { return (A * t + B) * t + base; }
};

/// |q'(t)|^2 / 4 = a t^2 + b t + c.
struct ArcLengthTerms {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  static ArcLengthTerms of(const BezierCurve& q) {
    const Matrix& P = q.controls();
    const Vector A = P.col(2) - 2.0 * P.col(1) + P.col(0);
    const Vector d = P.col(1) - P.col(0);
    return {A.squaredNorm(), 2.0 * d.dot(A), d.squaredNorm()};
  }

  /// Antiderivative of sqrt(a t^2 + b t + c).
  double integral(double t) const {
    if (a == 0.0) return std::sqrt(c) * t;
    if (a < 1e-10 * c) {
      // sqrt(c) * (1 + u/2 - u^2/8) with u = beta t + alpha t^2
      const double beta = b / c, alpha = a / c;
      const double t2 = t * t, t3 = t2 * t, t4 = t3 * t, t5 = t4 * t;
      const double first = beta * t2 / 2.0 + alpha * t3 / 3.0;
      const double second = beta * beta * t3 / 3.0 + alpha * beta * t4 / 2.0 + alpha * alpha * t5 / 5.0;
      return std::sqrt(c) * (t + first / 2.0 - second / 8.0);
    }
    const double R = std::sqrt(std::max(0.0, (a * t + b) * t + c));
    const double sa = std::sqrt(a);
    const double lin = 2.0 * a * t + b;
    double value = lin / (4.0 * a) * R;
    const double gap = 4.0 * a * c - b * b;
    if (gap > 0.0) {
      // 2 sqrt(a) R + lin cancels when lin < 0; use the conjugate form there
      const double arg = lin >= 0.0 ? 2.0 * sa * R + lin : gap / (2.0 * sa * R - lin);
      value += gap / (8.0 * a * sa) * std::log(std::abs(arg));
    }
    return value;
  }
};

namespace detail {

inline void require_quadratic(const BezierCurve& q) {
  if (q.degree() != 2) fail(ErrorKind::UnsupportedDegree, "closed-form features need a quadratic segment");
}

inline void require_ordered(double t1, double t2) {
  if (!(t1 <= t2)) fail(ErrorKind::DegenerateInterval, "interval must satisfy t1 <= t2");
}

}  // namespace detail

inline double quad_arc_length(const BezierCurve& q, Interval iv = {}) {
  detail::require_quadratic(q);
  detail::require_ordered(iv.lo, iv.hi);
  if (iv.lo == iv.hi) return 0.0;
  const ArcLengthTerms terms = ArcLengthTerms::of(q);
  return std::max(0.0, 2.0 * (terms.integral(iv.hi) - terms.integral(iv.lo)));
}

struct CurvatureResult {
  double value = 0.0;
  double t = 0.0;
};

/// Signed curvature of a planar quadratic.
inline double quad_curvature(const BezierCurve& q, double t) {
  const Matrix& P = q.controls();
  const Eigen::Vector2d u = P.col(1) - P.col(0), v = P.col(2) - P.col(1);
  const double det = u.x() * v.y() - u.y() * v.x();
  const double speed = (u * (1.0 - t) + v * t).norm();
  return det / (2.0 * speed * speed * speed);
}

inline CurvatureResult quad_max_abs_curvature(const BezierCurve& q, Interval iv = {}) {
  detail::require_quadratic(q);
  if (q.dim() != 2) fail(ErrorKind::NotPlanar, "curvature is defined for planar curves only");
  detail::require_ordered(iv.lo, iv.hi);
  const Matrix& P = q.controls();
  const Eigen::Vector2d u = P.col(1) - P.col(0), v = P.col(2) - P.col(1);
  const Eigen::Vector2d A = v - u;
  const double a = A.squaredNorm();
  const double det = u.x() * v.y() - u.y() * v.x();

  // parameter of minimum speed, clamped into the interval
  double t_star = iv.lo;
  if (a > 0.0) t_star = std::clamp(-u.dot(A) / a, iv.lo, iv.hi);

  const double spread = std::max(u.squaredNorm(), v.squaredNorm());
  if (std::abs(det) <= 1e-12 * spread || spread == 0.0) {
    const double speed = 2.0 * (u * (1.0 - t_star) + v * t_star).norm();
    if (speed < kCuspSpeed) return {kCurvatureCap, t_star};
    return {0.0, t_star};
  }
  const double value = std::abs(quad_curvature(q, t_star));
  return {std::min(value, kCurvatureCap), t_star};
}

struct PointDistance {
  double distance = 0.0;
  double t = 0.0;
};

namespace detail {

// Stationary points of |q(t)|^2 for controls P (distance to the origin).
inline std::vector<double> origin_candidates(const Matrix& P, Interval iv) {
  const Vector A = P.col(2) - 2.0 * P.col(1) + P.col(0);
  const Vector d = P.col(1) - P.col(0);
  const Vector p0 = P.col(0);
  std::vector<double> out{iv.lo, iv.hi};
  try {
    for (double r : solve_cubic(A.squaredNorm(), 3.0 * A.dot(d), A.dot(p0) + 2.0 * d.squaredNorm(), d.dot(p0))) {
      if (r > iv.lo && r < iv.hi) out.push_back(r);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::AllZeroCoefficients) throw;  // constant distance: endpoints suffice
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

inline PointDistance quad_distance_to_point(const BezierCurve& q, const Point& point, Interval iv = {}) {
  detail::require_quadratic(q);
  if (point.size() != q.dim()) fail(ErrorKind::DimensionMismatch, "point dimension differs from curve dimension");
  detail::require_ordered(iv.lo, iv.hi);
  const Matrix shifted = q.controls().colwise() - point;
  const BezierCurve rel(shifted);
  PointDistance best{std::numeric_limits<double>::infinity(), iv.lo};
  for (double t : detail::origin_candidates(shifted, iv)) {
    const double dist = rel.evaluate(t).norm();
    if (dist < best.distance) best = {dist, t};
  }
  return best;
}

struct SegmentDistance {
  double distance = 0.0;
  double t = 0.0;
  double k = 0.0;
};

inline SegmentDistance quad_distance_to_segment(const BezierCurve& q, const Point& q0, const Point& q1,
                                                Interval t_iv = {}, Interval k_iv = {}) {
  detail::require_quadratic(q);
  if (q0.size() != q.dim() || q1.size() != q.dim()) {
    fail(ErrorKind::DimensionMismatch, "segment dimension differs from curve dimension");
  }
  detail::require_ordered(t_iv.lo, t_iv.hi);
  detail::require_ordered(k_iv.lo, k_iv.hi);
  const Vector v = q1 - q0;
  const double vv = v.squaredNorm();
  if (std::sqrt(vv) < 1e-12) fail(ErrorKind::DegenerateSegment, "segment endpoints coincide");

  const Point l1 = q0 + k_iv.lo * v;
  const Point l2 = q0 + k_iv.hi * v;
  const Matrix rel = q.controls().colwise() - q0;
  const Matrix proj = rel - v * (v.transpose() * rel) / vv;

  std::vector<double> ts;
  for (const Matrix& P : {Matrix(q.controls().colwise() - l1), Matrix(q.controls().colwise() - l2), proj}) {
    const auto c = detail::origin_candidates(P, t_iv);
    ts.insert(ts.end(), c.begin(), c.end());
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

  SegmentDistance best{std::numeric_limits<double>::infinity(), t_iv.lo, k_iv.lo};
  for (double t : ts) {
    const Point x = q.evaluate(t);
    const double k = std::clamp(v.dot(x - q0) / vv, k_iv.lo, k_iv.hi);
    const double dist = (x - q0 - k * v).norm();
    if (dist < best.distance) best = {dist, t, k};
  }
  return best;
}

/// Violating side is a^T (x - b) >= 0; inside is a^T (x - b) <= 0.
struct Halfspace {
  Vector normal;
  Vector anchor;

  double signed_value(const Point& x) const { return normal.dot(x - anchor); }
};

struct HalfspaceCell {
  double lo = 0.0;
  double hi = 0.0;
  bool violating = false;
};

/// The interval cut at the real roots of a^T (q(t) - b), each cell classified
/// by its midpoint. Cells cover [lo, hi] exactly and in order.
inline std::vector<HalfspaceCell> quad_halfspace_cells(const BezierCurve& q, const Halfspace& h, Interval iv = {}) {
  detail::require_quadratic(q);
  if (h.normal.size() != q.dim() || h.anchor.size() != q.dim()) {
    fail(ErrorKind::DimensionMismatch, "halfspace dimension differs from curve dimension");
  }
  if (!(h.normal.norm() > 0.0)) fail(ErrorKind::InvalidArgument, "halfspace normal must be nonzero");
  detail::require_ordered(iv.lo, iv.hi);
  const QuadCoeffs qc = QuadCoeffs::of(q);
  const double g2 = h.normal.dot(qc.A), g1 = h.normal.dot(qc.B), g0 = h.normal.dot(qc.base - h.anchor);
  auto g = [&](double t) { return (g2 * t + g1) * t + g0; };

  std::vector<double> cuts{iv.lo};
  try {
    for (double r : solve_cubic(0.0, g2, g1, g0)) {
      if (r > iv.lo && r < iv.hi) cuts.push_back(r);
    }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::AllZeroCoefficients) throw;  // curve lies on the boundary plane
  }
  cuts.push_back(iv.hi);

  std::vector<HalfspaceCell> cells;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i], hi = cuts[i + 1];
    double value = g(0.5 * (lo + hi));
    // midpoint on the boundary (tangency without a detected root): look elsewhere in the cell
    if (value == 0.0) value = g(lo + 0.25 * (hi - lo));
    cells.push_back({lo, hi, value >= 0.0});
  }
  return cells;
}

/// Disjoint parameter subintervals of positive length on which the curve
/// violates the halfspace.
inline std::vector<Interval> quad_halfspace_clip(const BezierCurve& q, const Halfspace& h, Interval iv = {}) {
  std::vector<Interval> out;
  for (const HalfspaceCell& cell : quad_halfspace_cells(q, h, iv)) {
    if (!cell.violating || !(cell.hi > cell.lo)) continue;
    if (!out.empty() && out.back().hi == cell.lo) {
      out.back().hi = cell.hi;
    } else {
      out.push_back({cell.lo, cell.hi});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// chains

struct FeatureQuery {
  bool length = false;
  bool max_curvature = false;
  std::optional<Point> point;
  std::optional<std::pair<Point, Point>> segment;
  std::optional<Halfspace> halfspace;
};

struct Witness {
  int segment = 0;
  double t_local = 0.0;
  double t_global = 0.0;
};

struct FeatureReport {
  std::optional<double> length;
  std::optional<std::pair<double, Witness>> max_curvature;
  std::optional<std::pair<double, Witness>> dist_to_point;
  struct SegmentHit {
    double distance = 0.0;
    Witness at;
    double k = 0.0;
  };
  std::optional<SegmentHit> dist_to_segment;
  std::optional<std::vector<Interval>> halfspace_violations;  // global parameters
};

namespace detail {

// Degree 0 and 1 segments are re-expressed as quadratics (exact).
inline BezierCurve as_quadratic(const BezierCurve& s) {
  if (s.degree() > 2) {
    fail(ErrorKind::UnsupportedDegree, "closed-form features cover segments of degree at most 2, got " +
                                           std::to_string(s.degree()));
  }
  return elevate(s, 2);
}

}  // namespace detail

inline FeatureReport chain_features(const SegmentChain& chain, const FeatureQuery& query) {
  if (chain.segments.empty() || static_cast<int>(chain.segments.size()) != chain.partition.segments()) {
    fail(ErrorKind::InvalidArgument, "chain segment count does not match its partition");
  }
  std::vector<BezierCurve> quads;
  quads.reserve(chain.segments.size());
  for (const BezierCurve& s : chain.segments) quads.push_back(detail::as_quadratic(s));
  const int count = static_cast<int>(quads.size());
  auto witness = [&](int i, double t) { return Witness{i, t, chain.global_param(i, t)}; };

  FeatureReport report;
  if (query.length) {
    double total = 0.0;
    for (int i = 0; i < count; ++i) {
      const BezierCurve& s = chain.segments[static_cast<std::size_t>(i)];
      if (s.degree() == 1) {
        total += (s.control(1) - s.control(0)).norm();
      } else if (s.degree() == 2) {
        total += quad_arc_length(s);
      }
    }
    report.length = total;
  }
  if (query.max_curvature) {
    std::pair<double, Witness> best{-1.0, {}};
    for (int i = 0; i < count; ++i) {
      const BezierCurve& s = chain.segments[static_cast<std::size_t>(i)];
      CurvatureResult r{0.0, 0.0};
      if (s.degree() == 2) r = quad_max_abs_curvature(s);
      else if (s.dim() != 2) fail(ErrorKind::NotPlanar, "curvature is defined for planar curves only");
      if (r.value > best.first) best = {r.value, witness(i, r.t)};
    }
    report.max_curvature = best;
  }
  if (query.point) {
    std::pair<double, Witness> best{std::numeric_limits<double>::infinity(), {}};
    for (int i = 0; i < count; ++i) {
      const PointDistance r = quad_distance_to_point(quads[static_cast<std::size_t>(i)], *query.point);
      if (r.distance < best.first) best = {r.distance, witness(i, r.t)};
    }
    report.dist_to_point = best;
  }
  if (query.segment) {
    FeatureReport::SegmentHit best{std::numeric_limits<double>::infinity(), {}, 0.0};
    for (int i = 0; i < count; ++i) {
      const SegmentDistance r =
          quad_distance_to_segment(quads[static_cast<std::size_t>(i)], query.segment->first, query.segment->second);
      if (r.distance < best.distance) best = {r.distance, witness(i, r.t), r.k};
    }
    report.dist_to_segment = best;
  }
  if (query.halfspace) {
    std::vector<Interval> out;
    for (int i = 0; i < count; ++i) {
      for (const Interval& local : quad_halfspace_clip(quads[static_cast<std::size_t>(i)], *query.halfspace)) {
        const Interval global{chain.global_param(i, local.lo), chain.global_param(i, local.hi)};
        // join pieces that continue across a segment boundary
        if (!out.empty() && local.lo == 0.0 && out.back().hi == global.lo) {
          out.back().hi = global.hi;
        } else {
          out.push_back(global);
        }
      }
    }
    report.halfspace_violations = std::move(out);
  }
  return report;
}

/// Single curve of degree at most 2 viewed as a one-segment chain.
inline SegmentChain single_segment_chain(const BezierCurve& curve) {
  return SegmentChain{Partition{{0.0, 1.0}}, {curve}, curve.degree(), {}};
}

}  // namespace bezapprox
