#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "degree.hpp"

namespace bezapprox {

inline constexpr int kDefaultMetricSamples = 256;

enum class MetricKindTag { L2, Frobenius, ControlPoint, MaxSampled, HausdorffSampled };

struct MetricKind {
  MetricKindTag tag = MetricKindTag::ControlPoint;
  int samples = kDefaultMetricSamples;  // sampled variants only

  static MetricKind l2() { return {MetricKindTag::L2, 0}; }
  static MetricKind frobenius() { return {MetricKindTag::Frobenius, 0}; }
  static MetricKind control_point() { return {MetricKindTag::ControlPoint, 0}; }
  static MetricKind max_sampled(int samples = kDefaultMetricSamples) { return {MetricKindTag::MaxSampled, samples}; }
  static MetricKind hausdorff_sampled(int samples = kDefaultMetricSamples) {
    return {MetricKindTag::HausdorffSampled, samples};
  }
};

inline std::string to_string(const MetricKind& kind) {
  switch (kind.tag) {
    case MetricKindTag::L2: return "l2";
    case MetricKindTag::Frobenius: return "frobenius";
    case MetricKindTag::ControlPoint: return "ctrlpoint";
    case MetricKindTag::MaxSampled: return "max";
    case MetricKindTag::HausdorffSampled: return "hausdorff";
  }
  return "unknown";
}

/// Gram matrix of the degree-n Bernstein polynomials over [0, 1].
inline Matrix l2_weight(int n) {
  check_degree(n);
  Matrix W(n + 1, n + 1);
  const double scale = 1.0 / (2.0 * n + 1.0);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) W(i, j) = scale * binomial(n, i) * binomial(n, j) / binomial(2 * n, i + j);
  }
  return W;
}

/// Both curves elevated to the larger of the two degrees.
inline std::pair<BezierCurve, BezierCurve> align_degrees(const BezierCurve& a, const BezierCurve& b) {
  if (a.dim() != b.dim()) {
    fail(ErrorKind::DimensionMismatch, "curves of dimension " + std::to_string(a.dim()) + " and " +
                                           std::to_string(b.dim()) + " cannot be compared");
  }
  const int n = std::max(a.degree(), b.degree());
  return {elevate(a, n), elevate(b, n)};
}

namespace detail {

inline double max_sampled(const BezierCurve& a, const BezierCurve& b, int samples) {
  const Matrix diff = sample_uniform(a, samples) - sample_uniform(b, samples);
  return diff.colwise().norm().maxCoeff();
}

inline double hausdorff_sampled(const BezierCurve& a, const BezierCurve& b, int samples) {
  const Matrix A = sample_uniform(a, samples);
  const Matrix B = sample_uniform(b, samples);
  auto directed = [](const Matrix& from, const Matrix& to) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < from.cols(); ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < to.cols(); ++j) best = std::min(best, (from.col(i) - to.col(j)).squaredNorm());
      worst = std::max(worst, best);
    }
    return std::sqrt(worst);
  };
  return std::max(directed(A, B), directed(B, A));
}

}  // namespace detail

inline double distance(const BezierCurve& a, const BezierCurve& b, const MetricKind& kind) {
  const auto [p, q] = align_degrees(a, b);
  const Matrix diff = p.controls() - q.controls();
  switch (kind.tag) {
    case MetricKindTag::L2: {
      const double sq = (diff * l2_weight(p.degree()) * diff.transpose()).trace();
      return std::sqrt(std::max(sq, 0.0));
    }
    case MetricKindTag::Frobenius: return diff.norm();
    case MetricKindTag::ControlPoint: return diff.colwise().norm().maxCoeff();
    case MetricKindTag::MaxSampled:
    case MetricKindTag::HausdorffSampled:
      if (kind.samples < 2) fail(ErrorKind::InvalidArgument, "sampled metrics need at least 2 samples");
      return kind.tag == MetricKindTag::MaxSampled ? detail::max_sampled(p, q, kind.samples)
                                                   : detail::hausdorff_sampled(p, q, kind.samples);
  }
  return 0.0;
}

/// Radius r such that a([0,1]) lies within r of conv(controls of b): the
/// maximum control-point distance after degree alignment.
inline double relative_bound_radius(const BezierCurve& a, const BezierCurve& b) {
  return distance(a, b, MetricKind::control_point());
}

}  // namespace bezapprox
