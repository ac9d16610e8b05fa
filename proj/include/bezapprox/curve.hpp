#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "polybasis.hpp"

namespace bezapprox {

using Point = Vector;

/// Bézier curve with a d x (n+1) control-point matrix; degree and dimension are
/// fixed at construction.
class BezierCurve {
 public:
  explicit BezierCurve(Matrix controls) : controls_(std::move(controls)) {
    if (controls_.rows() < 1) fail(ErrorKind::InvalidArgument, "curve dimension must be positive");
    if (controls_.cols() < 1) fail(ErrorKind::InvalidArgument, "curve needs at least one control point");
    if (!controls_.allFinite()) fail(ErrorKind::InvalidArgument, "control points must be finite");
  }

  /// Curve from control points given as a list of coordinate vectors.
  static BezierCurve from_points(const std::vector<std::vector<double>>& points) {
    if (points.empty()) fail(ErrorKind::InvalidArgument, "curve needs at least one control point");
    const auto d = static_cast<Eigen::Index>(points.front().size());
    Matrix P(d, static_cast<Eigen::Index>(points.size()));
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (static_cast<Eigen::Index>(points[j].size()) != d) {
        fail(ErrorKind::DimensionMismatch, "control point " + std::to_string(j) + " has the wrong dimension");
      }
      for (Eigen::Index i = 0; i < d; ++i) P(i, static_cast<Eigen::Index>(j)) = points[j][static_cast<std::size_t>(i)];
    }
    return BezierCurve(std::move(P));
  }

  int dim() const { return static_cast<int>(controls_.rows()); }
  int degree() const { return static_cast<int>(controls_.cols()) - 1; }
  const Matrix& controls() const { return controls_; }
  Point control(int i) const { return controls_.col(i); }

  /// de Casteljau evaluation; valid for every real t.
  Point evaluate(double t) const {
    Matrix work = controls_;
    const double s = 1.0 - t;
    for (Eigen::Index r = work.cols() - 1; r > 0; --r) {
      for (Eigen::Index i = 0; i < r; ++i) work.col(i) = s * work.col(i) + t * work.col(i + 1);
    }
    return work.col(0);
  }

  /// Writes curve(t) into out (length dim) using caller-provided scratch of
  /// size dim * (degree + 1). Allocation-free variant for dense sampling.
  void evaluate_into(double t, double* scratch, double* out) const {
    const Eigen::Index d = controls_.rows(), cols = controls_.cols();
    std::copy(controls_.data(), controls_.data() + d * cols, scratch);
    const double s = 1.0 - t;
    for (Eigen::Index r = cols - 1; r > 0; --r) {
      for (Eigen::Index i = 0; i < r; ++i) {
        double* lhs = scratch + i * d;
        const double* rhs = scratch + (i + 1) * d;
        for (Eigen::Index k = 0; k < d; ++k) lhs[k] = s * lhs[k] + t * rhs[k];
      }
    }
    std::copy(scratch, scratch + d, out);
  }

  /// Direct Bernstein-sum evaluation (used as a cross-check of de Casteljau).
  Point evaluate_bernstein_sum(double t) const {
    return controls_ * basis_vector(BasisSpec::bernstein(), degree(), t);
  }

 private:
  Matrix controls_;
};

/// Hodograph: degree n-1 curve with controls n (p_{i+1} - p_i).
inline BezierCurve derivative(const BezierCurve& curve) {
  const int n = curve.degree();
  if (n == 0) fail(ErrorKind::DegreeZero, "a constant curve has no lower-degree derivative curve");
  const Matrix& P = curve.controls();
  Matrix D(P.rows(), n);
  for (int i = 0; i < n; ++i) D.col(i) = n * (P.col(i + 1) - P.col(i));
  return BezierCurve(std::move(D));
}

/// The piece of `curve` over [a, b] re-expressed over [0, 1].
inline BezierCurve split_to_interval(const BezierCurve& curve, double a, double b) {
  if (!(a >= 0.0 && b <= 1.0 && a < b)) {
    fail(ErrorKind::DegenerateInterval, "split interval must satisfy 0 <= a < b <= 1");
  }
  if (a == 0.0 && b == 1.0) return curve;
  return BezierCurve(reparametrize(curve.controls(), BasisSpec::bernstein(), {a, b}, {0.0, 1.0}).coeffs);
}

/// Same trace traversed backwards: t -> curve(1 - t).
inline BezierCurve reversed(const BezierCurve& curve) {
  return BezierCurve(curve.controls().rowwise().reverse());
}

/// d x count matrix of curve values at t_j = j / (count - 1).
inline Matrix sample_uniform(const BezierCurve& curve, int count) {
  if (count < 2) fail(ErrorKind::InvalidArgument, "sample count must be at least 2");
  Matrix out(curve.dim(), count);
  std::vector<double> scratch(static_cast<std::size_t>(curve.dim()) * (curve.degree() + 1));
  for (int j = 0; j < count; ++j) {
    curve.evaluate_into(static_cast<double>(j) / (count - 1), scratch.data(), out.col(j).data());
  }
  return out;
}

}  // namespace bezapprox
