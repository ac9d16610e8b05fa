#pragma once

// Piecewise low-order approximation of a Bézier curve: approximation over a
// given partition of [0, 1], and adaptive partition search by linear search
// (uniform partitions of growing size) or binary search (midpoint insertion).

#include <cmath>
#include <string>
#include <vector>

#include "metrics.hpp"

namespace bezapprox {

inline constexpr int kDefaultMaxSegments = 4096;
inline constexpr double kDefaultMinWidth = 1e-6;

struct Partition {
  std::vector<double> params;  // 0 = t_0 < ... < t_k = 1

  static Partition uniform(int segments) {
    if (segments < 1) fail(ErrorKind::InvalidArgument, "a partition needs at least one segment");
    Partition p;
    p.params.resize(static_cast<std::size_t>(segments) + 1);
    for (int i = 0; i <= segments; ++i) p.params[static_cast<std::size_t>(i)] = static_cast<double>(i) / segments;
    p.params.back() = 1.0;
    return p;
  }

  int segments() const { return static_cast<int>(params.size()) - 1; }
  Interval interval(int i) const {
    return {params[static_cast<std::size_t>(i)], params[static_cast<std::size_t>(i) + 1]};
  }

  /// Throws DegenerateInterval unless the partition starts at 0, ends at 1 and
  /// every gap is at least min_width.
  void validate(double min_width = 0.0) const {
    if (params.size() < 2) fail(ErrorKind::DegenerateInterval, "a partition needs at least two parameters");
    if (params.front() != 0.0 || params.back() != 1.0) {
      fail(ErrorKind::DegenerateInterval, "a partition must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i < params.size(); ++i) {
      const double gap = params[i] - params[i - 1];
      if (!(gap > 0.0) || gap < min_width) {
        fail(ErrorKind::DegenerateInterval, "partition parameters must increase by at least the minimum width");
      }
    }
  }
};

struct SegmentChain {
  Partition partition;
  std::vector<BezierCurve> segments;
  int source_degree = 0;
  std::vector<double> distances;  // per-segment distance to the source piece; empty if not measured

  /// Global curve parameter of local parameter `u` on segment i.
  double global_param(int i, double u) const {
    const Interval iv = partition.interval(i);
    if (u == 1.0) return iv.hi;  // exact at the breakpoints
    return iv.lo + iv.width() * u;
  }
};

struct AdaptiveConfig {
  int target_degree = 2;
  ReductionMethod method = ReductionMethod::matching();
  MetricKind metric = MetricKind::control_point();
  double tolerance = 0.1;
  int max_segments = kDefaultMaxSegments;
  double min_width = kDefaultMinWidth;

  void validate() const {
    if (!(tolerance > 0.0) || !std::isfinite(tolerance)) fail(ErrorKind::InvalidArgument, "tolerance must be positive");
    if (max_segments < 1) fail(ErrorKind::InvalidArgument, "max segments must be at least 1");
    if (!(min_width > 0.0)) fail(ErrorKind::InvalidArgument, "minimum width must be positive");
    if (target_degree < 0) fail(ErrorKind::InvalidArgument, "target degree must be nonnegative");
  }
};

/// Distance between the source piece over `iv` and the elevated segment.
inline double segment_distance(const BezierCurve& curve, Interval iv, const BezierCurve& segment,
                               const MetricKind& metric) {
  const BezierCurve piece = split_to_interval(curve, iv.lo, iv.hi);
  return distance(piece, elevate(segment, curve.degree()), metric);
}

inline SegmentChain approximate_over_partition(const BezierCurve& curve, int m, const Partition& partition,
                                               const ReductionMethod& method) {
  if (m > curve.degree()) {
    fail(ErrorKind::DegreeOrder, "target degree " + std::to_string(m) + " exceeds curve degree " +
                                     std::to_string(curve.degree()));
  }
  partition.validate();
  SegmentChain chain{partition, {}, curve.degree(), {}};
  chain.segments.reserve(static_cast<std::size_t>(partition.segments()));
  for (int i = 0; i < partition.segments(); ++i) {
    const Interval iv = partition.interval(i);
    chain.segments.push_back(reduce(split_to_interval(curve, iv.lo, iv.hi), m, method));
  }
  return chain;
}

/// Per-segment distances of an existing chain, re-measured against the source.
inline std::vector<double> measure_chain(const BezierCurve& curve, const SegmentChain& chain, const MetricKind& metric) {
  std::vector<double> out;
  out.reserve(chain.segments.size());
  for (int i = 0; i < chain.partition.segments(); ++i) {
    out.push_back(segment_distance(curve, chain.partition.interval(i), chain.segments[static_cast<std::size_t>(i)], metric));
  }
  return out;
}

/// Smallest k such that the uniform k-partition meets the tolerance on every
/// segment. Each candidate partition is rebuilt from scratch and abandoned at
/// its first failing segment.
inline SegmentChain adaptive_linear_search(const BezierCurve& curve, const AdaptiveConfig& config) {
  config.validate();
  const int m = config.target_degree;
  if (m > curve.degree()) fail(ErrorKind::DegreeOrder, "target degree exceeds curve degree");
  for (int k = 1; k <= config.max_segments; ++k) {
    const Partition partition = Partition::uniform(k);
    SegmentChain chain{partition, {}, curve.degree(), {}};
    bool ok = true;
    for (int i = 0; i < k && ok; ++i) {
      const Interval iv = partition.interval(i);
      const BezierCurve piece = split_to_interval(curve, iv.lo, iv.hi);
      BezierCurve segment = reduce(piece, m, config.method);
      const double d = distance(piece, elevate(segment, curve.degree()), config.metric);
      if (d > config.tolerance) {
        ok = false;
      } else {
        chain.segments.push_back(std::move(segment));
        chain.distances.push_back(d);
      }
    }
    if (ok) return chain;
  }
  fail(ErrorKind::ToleranceUnreachable, "tolerance not met with " + std::to_string(config.max_segments) + " segments");
}

/// Left-to-right scan that bisects the current segment until it meets the
/// tolerance, then advances. May produce nonuniform partitions.
inline SegmentChain adaptive_binary_search(const BezierCurve& curve, const AdaptiveConfig& config) {
  config.validate();
  const int m = config.target_degree;
  if (m > curve.degree()) fail(ErrorKind::DegreeOrder, "target degree exceeds curve degree");
  SegmentChain chain{Partition{{0.0, 1.0}}, {}, curve.degree(), {}};
  std::vector<double>& t = chain.partition.params;
  std::size_t k = 1;
  while (k < t.size()) {
    const double lo = t[k - 1], hi = t[k];
    const BezierCurve piece = split_to_interval(curve, lo, hi);
    BezierCurve segment = reduce(piece, m, config.method);
    const double d = distance(piece, elevate(segment, curve.degree()), config.metric);
    if (d > config.tolerance) {
      const double mid = 0.5 * (lo + hi);
      if (mid - lo < config.min_width || hi - mid < config.min_width) {
        fail(ErrorKind::ToleranceUnreachable, "segment [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                                  "] cannot be split below the minimum width");
      }
      if (static_cast<int>(t.size()) > config.max_segments) {
        fail(ErrorKind::ToleranceUnreachable,
             "tolerance not met with " + std::to_string(config.max_segments) + " segments");
      }
      t.insert(t.begin() + static_cast<std::ptrdiff_t>(k), mid);
    } else {
      chain.segments.push_back(std::move(segment));
      chain.distances.push_back(d);
      ++k;
    }
  }
  return chain;
}

/// Uniform partition with 3(n-1) elements for quadratic targets and 6(n-1) for linear ones.
inline Partition rule_of_thumb_partition(int n, int m) {
  if (m != 1 && m != 2) {
    fail(ErrorKind::UnsupportedTargetDegree, "the approximation rule covers target degrees 1 and 2 only");
  }
  if (n < 2) fail(ErrorKind::InvalidArgument, "the approximation rule needs a source degree of at least 2");
  return Partition::uniform((m == 2 ? 3 : 6) * (n - 1));
}

}  // namespace bezapprox
