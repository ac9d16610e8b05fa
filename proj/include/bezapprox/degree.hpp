#pragma once

// Degree elevation and the three degree-reduction families (least squares,
// Taylor, parameterwise matching). Every reduction matrix R(n, m) returned here
// is a right inverse of the elevation matrix: E(m, n) R(n, m) = I.

#include <map>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "curve.hpp"

namespace bezapprox {

/// E(n, m): curve with controls P (degree n) equals the curve with controls P * E(n, m).
inline Matrix elevation_matrix(int n, int m) {
  if (n < 0) fail(ErrorKind::InvalidArgument, "degree must be nonnegative");
  if (m < n) fail(ErrorKind::DegreeOrder, "elevation target degree " + std::to_string(m) + " is below " + std::to_string(n));
  check_degree(m, "elevation degree");
  Matrix E = Matrix::Zero(n + 1, m + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= i + (m - n); ++j) E(i, j) = binomial(n, i) * binomial(m - n, j - i) / binomial(m, j);
  }
  return E;
}

inline BezierCurve elevate(const BezierCurve& curve, int m) {
  if (m == curve.degree()) return curve;
  return BezierCurve(curve.controls() * elevation_matrix(curve.degree(), m));
}

enum class ReductionKind { LeastSquares, Taylor, Matching };

inline constexpr double kDefaultTaylorOffset = 0.5;

struct ReductionMethod {
  ReductionKind kind = ReductionKind::Matching;
  double taylor_offset = kDefaultTaylorOffset;
  std::vector<double> params;  // Matching only; empty means uniform t_i = i/m

  static ReductionMethod least_squares() { return {ReductionKind::LeastSquares, kDefaultTaylorOffset, {}}; }
  static ReductionMethod taylor(double offset = kDefaultTaylorOffset) {
    if (!std::isfinite(offset)) fail(ErrorKind::InvalidArgument, "Taylor offset must be finite");
    return {ReductionKind::Taylor, offset, {}};
  }
  static ReductionMethod matching(std::vector<double> params = {}) {
    return {ReductionKind::Matching, kDefaultTaylorOffset, std::move(params)};
  }

  /// Matching parameters for target degree m (explicit ones, or uniform).
  std::vector<double> matching_params(int m) const {
    if (params.empty()) return uniform_params(m);
    if (static_cast<int>(params.size()) != m + 1) {
      fail(ErrorKind::InvalidArgument, "matching reduction to degree " + std::to_string(m) + " needs " +
                                           std::to_string(m + 1) + " parameters, got " + std::to_string(params.size()));
    }
    require_distinct(params);
    return params;
  }
};

inline std::string to_string(ReductionKind kind) {
  switch (kind) {
    case ReductionKind::LeastSquares: return "least-squares";
    case ReductionKind::Taylor: return "taylor";
    case ReductionKind::Matching: return "matching";
  }
  return "unknown";
}

namespace detail {

inline Matrix compute_reduction_matrix(int n, int m, const ReductionMethod& method) {
  switch (method.kind) {
    case ReductionKind::LeastSquares: {
      const Matrix E = elevation_matrix(m, n);
      Eigen::LLT<Matrix> gram(E * E.transpose());
      // R = E^T (E E^T)^{-1}; E E^T is symmetric so R^T = (E E^T)^{-1} E.
      return gram.solve(E).transpose();
    }
    case ReductionKind::Taylor: {
      const BasisSpec tay = BasisSpec::taylor(method.taylor_offset);
      const Matrix to_bern = transform_matrix(tay, BasisSpec::bernstein(), n).entries;
      const Matrix to_tay = transform_matrix(BasisSpec::bernstein(), tay, m).entries;
      return to_bern.leftCols(m + 1) * to_tay;
    }
    case ReductionKind::Matching: {
      const std::vector<double> t = method.matching_params(m);
      const Matrix Bn = basis_matrix(BasisSpec::bernstein(), n, t).entries;
      const Matrix Bm = basis_matrix(BasisSpec::bernstein(), m, t).entries;
      return right_divide(Bn, Bm);
    }
  }
  return {};
}

using ReductionKey = std::tuple<int, int, int, double, std::vector<double>>;

inline std::shared_mutex& reduction_cache_mutex() {
  static std::shared_mutex mutex;
  return mutex;
}

inline std::map<ReductionKey, Matrix>& reduction_cache() {
  static std::map<ReductionKey, Matrix> cache;
  return cache;
}

}  // namespace detail

/// R(n, m) for the given method; memoized (the cache stores the exact matrix
/// the uncached computation produces).
inline Matrix reduction_matrix(int n, int m, const ReductionMethod& method) {
  if (m < 0) fail(ErrorKind::InvalidArgument, "degree must be nonnegative");
  if (m > n) fail(ErrorKind::DegreeOrder, "reduction target degree " + std::to_string(m) + " exceeds " + std::to_string(n));
  check_degree(n);
  if (method.kind == ReductionKind::Matching) (void)method.matching_params(m);  // validate before the identity shortcut
  if (m == n) return Matrix::Identity(n + 1, n + 1);

  detail::ReductionKey key{static_cast<int>(method.kind), n, m,
                           method.kind == ReductionKind::Taylor ? method.taylor_offset : 0.0,
                           method.kind == ReductionKind::Matching ? method.params : std::vector<double>{}};
  {
    std::shared_lock lock(detail::reduction_cache_mutex());
    auto& cache = detail::reduction_cache();
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  Matrix R = detail::compute_reduction_matrix(n, m, method);
  std::unique_lock lock(detail::reduction_cache_mutex());
  return detail::reduction_cache().try_emplace(std::move(key), std::move(R)).first->second;
}

/// Uncached R(n, m), exposed so tests can compare against the cached path.
inline Matrix reduction_matrix_uncached(int n, int m, const ReductionMethod& method) {
  if (m > n) fail(ErrorKind::DegreeOrder, "reduction target degree exceeds source degree");
  if (m == n) return Matrix::Identity(n + 1, n + 1);
  return detail::compute_reduction_matrix(n, m, method);
}

inline BezierCurve reduce(const BezierCurve& curve, int m, const ReductionMethod& method) {
  return BezierCurve(curve.controls() * reduction_matrix(curve.degree(), m, method));
}

/// Matching reduction matrix assembled in the monomial basis: rows beyond the
/// identity block come from the recursion
///   alpha_{i+1,k} = alpha_{i,k-1} + alpha_{i,m} alpha_{1,k},
/// seeded by t^{m+1} - sum_k alpha_{1,k} t^k = prod_k (t - t_k).
inline Matrix matching_reduction_matrix_monomial(int n, int m, std::span<const double> params) {
  if (m > n) fail(ErrorKind::DegreeOrder, "reduction target degree exceeds source degree");
  if (m < 0) fail(ErrorKind::InvalidArgument, "degree must be nonnegative");
  check_degree(n);
  if (static_cast<int>(params.size()) != m + 1) {
    fail(ErrorKind::InvalidArgument, "matching reduction needs m + 1 parameters");
  }
  require_distinct(params);
  if (n == m) return Matrix::Identity(n + 1, n + 1);

  // Coefficients of prod_k (t - t_k), lowest power first.
  std::vector<double> poly{1.0};
  for (double tk : params) {
    std::vector<double> next(poly.size() + 1, 0.0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] += poly[i];
      next[i] -= tk * poly[i];
    }
    poly = std::move(next);
  }

  Matrix middle = Matrix::Zero(n + 1, m + 1);
  middle.topRows(m + 1).setIdentity();
  for (int k = 0; k <= m; ++k) middle(m + 1, k) = -poly[static_cast<std::size_t>(k)];
  for (int row = m + 2; row <= n; ++row) {
    const double lead = middle(row - 1, m);
    for (int k = 0; k <= m; ++k) {
      const double shifted = k > 0 ? middle(row - 1, k - 1) : 0.0;
      middle(row, k) = shifted + lead * middle(m + 1, k);
    }
  }
  const Matrix to_bern = transform_matrix(BasisSpec::monomial(), BasisSpec::bernstein(), n).entries;
  const Matrix to_mono = transform_matrix(BasisSpec::bernstein(), BasisSpec::monomial(), m).entries;
  return to_bern * middle * to_mono;
}

/// curve(t) - reduced(t) = delta * prod_i (t - roots_i) for a degree-one matching reduction.
struct ReductionErrorForm {
  Vector delta;
  std::vector<double> roots;

  double product(double t) const {
    double p = 1.0;
    for (double r : roots) p *= (t - r);
    return p;
  }
  Vector at(double t) const { return delta * product(t); }
};

inline ReductionErrorForm degree_one_matching_error(const BezierCurve& curve, std::span<const double> params) {
  const int n1 = curve.degree();
  if (n1 < 1) fail(ErrorKind::DegreeOrder, "degree-one reduction needs a curve of degree at least 1");
  if (static_cast<int>(params.size()) != n1) {
    fail(ErrorKind::InvalidArgument, "degree-one matching reduction of a degree " + std::to_string(n1) +
                                         " curve needs " + std::to_string(n1) + " parameters");
  }
  require_distinct(params);
  Vector delta = Vector::Zero(curve.dim());
  for (int i = 0; i <= n1; ++i) {
    const double sign = ((n1 - i) % 2 == 0) ? 1.0 : -1.0;
    delta += sign * binomial(n1, i) * curve.controls().col(i);
  }
  return {std::move(delta), std::vector<double>(params.begin(), params.end())};
}

}  // namespace bezapprox
