#pragma once

// Polynomial bases (Bernstein, monomial, Taylor), their basis matrices, the
// closed-form transformations between them, and affine reparametrization of
// coefficient matrices.
//
// Conventions: a coefficient matrix P is d x (n+1) and the curve it describes
// is P * basis_vector(spec, n, t). transform_matrix(from, to, n) returns the
// matrix T with basis_vector(to, n, t) = T * basis_vector(from, n, t).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

#include "binomial.hpp"
#include "error.hpp"

namespace bezapprox {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Minimum pairwise gap for parameters that must be distinct.
inline constexpr double kDistinctGap = 1e-9;

enum class BasisKind { Bernstein, Monomial, Taylor };

struct BasisSpec {
  BasisKind kind = BasisKind::Bernstein;
  double taylor_offset = 0.0;  // only meaningful for Taylor

  static BasisSpec bernstein() { return {BasisKind::Bernstein, 0.0}; }
  static BasisSpec monomial() { return {BasisKind::Monomial, 0.0}; }
  static BasisSpec taylor(double offset) {
    if (!std::isfinite(offset)) fail(ErrorKind::InvalidArgument, "Taylor offset must be finite");
    return {BasisKind::Taylor, offset};
  }

  friend bool operator==(const BasisSpec& a, const BasisSpec& b) {
    if (a.kind != b.kind) return false;
    return a.kind != BasisKind::Taylor || a.taylor_offset == b.taylor_offset;
  }
};

struct BasisMatrix {
  BasisSpec spec;
  int degree = 0;
  std::vector<double> params;
  Matrix entries;  // (n+1) x params.size()
};

struct TransformMatrix {
  BasisSpec from;
  BasisSpec to;
  int degree = 0;
  Matrix entries;  // (n+1) x (n+1)
};

/// Throws DuplicateParams unless all pairwise gaps exceed kDistinctGap.
inline void require_distinct(std::span<const double> params) {
  std::vector<double> sorted(params.begin(), params.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!std::isfinite(sorted[i])) fail(ErrorKind::InvalidArgument, "parameters must be finite");
    if (i > 0 && !(sorted[i] - sorted[i - 1] > kDistinctGap)) {
      fail(ErrorKind::DuplicateParams, "parameters " + std::to_string(sorted[i - 1]) + " and " +
                                           std::to_string(sorted[i]) + " are not distinct");
    }
  }
}

/// t_i = i/n on [0,1]; the single parameter 0.5 when n = 0.
inline std::vector<double> uniform_params(int n) {
  if (n == 0) return {0.5};
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(i) / n;
  return t;
}

inline Vector basis_vector(const BasisSpec& spec, int n, double t) {
  check_degree(n);
  Vector v(n + 1);
  switch (spec.kind) {
    case BasisKind::Bernstein: {
      const double s = 1.0 - t;
      for (int i = 0; i <= n; ++i) {
        v(i) = binomial(n, i) * std::pow(t, i) * std::pow(s, n - i);
      }
      break;
    }
    case BasisKind::Monomial:
    case BasisKind::Taylor: {
      const double x = spec.kind == BasisKind::Taylor ? t - spec.taylor_offset : t;
      double p = 1.0;
      for (int i = 0; i <= n; ++i) {
        v(i) = p;
        p *= x;
      }
      break;
    }
  }
  return v;
}

inline BasisMatrix basis_matrix(const BasisSpec& spec, int n, std::span<const double> params) {
  if (params.empty()) fail(ErrorKind::InvalidArgument, "basis matrix needs at least one parameter");
  BasisMatrix out{spec, n, std::vector<double>(params.begin(), params.end()), Matrix(n + 1, params.size())};
  for (std::size_t j = 0; j < params.size(); ++j) {
    out.entries.col(static_cast<Eigen::Index>(j)) = basis_vector(spec, n, params[j]);
  }
  return out;
}

namespace detail {

// b = MB * m
inline Matrix monomial_to_bernstein(int n) {
  Matrix T = Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) {
      const double sign = ((j - i) % 2 == 0) ? 1.0 : -1.0;
      T(i, j) = sign * binomial(n, j) * binomial(j, i);
    }
  }
  return T;
}

// m = BM * b
inline Matrix bernstein_to_monomial(int n) {
  Matrix T = Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = i; j <= n; ++j) T(i, j) = binomial(j, i) / binomial(n, i);
  }
  return T;
}

// tau = MT * m
inline Matrix monomial_to_taylor(int n, double offset) {
  Matrix T = Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= i; ++j) T(i, j) = binomial(i, j) * std::pow(-offset, i - j);
  }
  return T;
}

// m = TM * tau
inline Matrix taylor_to_monomial(int n, double offset) {
  Matrix T = Matrix::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= i; ++j) T(i, j) = binomial(i, j) * std::pow(offset, i - j);
  }
  return T;
}

// Maps the given basis to the monomial basis / the monomial basis to the given one.
inline Matrix to_monomial(const BasisSpec& from, int n) {
  switch (from.kind) {
    case BasisKind::Bernstein: return bernstein_to_monomial(n);
    case BasisKind::Monomial: return Matrix::Identity(n + 1, n + 1);
    case BasisKind::Taylor: return taylor_to_monomial(n, from.taylor_offset);
  }
  return {};
}

inline Matrix from_monomial(const BasisSpec& to, int n) {
  switch (to.kind) {
    case BasisKind::Bernstein: return monomial_to_bernstein(n);
    case BasisKind::Monomial: return Matrix::Identity(n + 1, n + 1);
    case BasisKind::Taylor: return monomial_to_taylor(n, to.taylor_offset);
  }
  return {};
}

}  // namespace detail

/// Closed-form change of basis. Routes through the monomial basis when neither
/// endpoint is monomial (Bernstein <-> Taylor, Taylor <-> Taylor).
inline TransformMatrix transform_matrix(const BasisSpec& from, const BasisSpec& to, int n) {
  check_degree(n);
  TransformMatrix out{from, to, n, {}};
  if (from == to) {
    out.entries = Matrix::Identity(n + 1, n + 1);
  } else if (from.kind == BasisKind::Monomial) {
    out.entries = detail::from_monomial(to, n);
  } else if (to.kind == BasisKind::Monomial) {
    out.entries = detail::to_monomial(from, n);
  } else {
    out.entries = detail::from_monomial(to, n) * detail::to_monomial(from, n);
  }
  return out;
}

/// Coefficients Q in basis `to` describing the same polynomial as P in basis `from`.
inline Matrix convert_controls(const Matrix& P, const BasisSpec& from, const BasisSpec& to) {
  if (P.cols() < 1) fail(ErrorKind::InvalidArgument, "coefficient matrix needs at least one column");
  const int n = static_cast<int>(P.cols()) - 1;
  return P * transform_matrix(to, from, n).entries;
}

/// X with X * A = B, by LU with partial pivoting on A^T.
inline Matrix right_divide(const Matrix& B, const Matrix& A) {
  Eigen::PartialPivLU<Matrix> lu(A.transpose());
  return lu.solve(B.transpose()).transpose();
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  double width() const { return hi - lo; }
};

struct Reparametrized {
  Matrix coeffs;
  BasisSpec spec;
};

namespace detail {

// LU factors of B_n(0, 1/n, ..., 1)^T, shared by every reparametrization onto [0,1].
inline const Eigen::PartialPivLU<Matrix>& unit_bernstein_lu(int n) {
  static std::shared_mutex mutex;
  static std::map<int, Eigen::PartialPivLU<Matrix>> cache;
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) return it->second;
  }
  std::vector<double> t(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j) t[static_cast<std::size_t>(j)] = n == 0 ? 0.0 : static_cast<double>(j) / n;
  Eigen::PartialPivLU<Matrix> lu(basis_matrix(BasisSpec::bernstein(), n, t).entries.transpose());
  std::unique_lock lock(mutex);
  return cache.try_emplace(n, std::move(lu)).first->second;
}

}  // namespace detail

/// Affine reparametrization from `source` to `target`: the returned coefficients
/// describe t -> curve_P(a + (b-a)(t-c)/(d-c)), i.e. the piece of P over
/// [a,b] stretched onto [c,d]. Taylor inputs return the shifted offset.
inline Reparametrized reparametrize(const Matrix& P, const BasisSpec& spec, Interval source, Interval target) {
  if (!(source.hi > source.lo)) fail(ErrorKind::DegenerateInterval, "source interval must satisfy a < b");
  if (!(target.hi > target.lo)) fail(ErrorKind::DegenerateInterval, "target interval must satisfy c < d");
  if (P.cols() < 1) fail(ErrorKind::InvalidArgument, "coefficient matrix needs at least one column");
  const int n = static_cast<int>(P.cols()) - 1;
  check_degree(n);
  const double a = source.lo, b = source.hi, c = target.lo, d = target.hi;
  const double ratio = (b - a) / (d - c);

  switch (spec.kind) {
    case BasisKind::Bernstein: {
      // Q * B_n(that) = P * B_n(t) with that_j = c + (d-c) j/n and t_j = a + (b-a) j/n.
      std::vector<double> t(static_cast<std::size_t>(n) + 1), that(t.size());
      for (int j = 0; j <= n; ++j) {
        const double u = n == 0 ? 0.0 : static_cast<double>(j) / n;
        t[static_cast<std::size_t>(j)] = a + (b - a) * u;
        that[static_cast<std::size_t>(j)] = c + (d - c) * u;
      }
      const Matrix rhs = P * basis_matrix(spec, n, t).entries;
      if (c == 0.0 && d == 1.0) {
        return {detail::unit_bernstein_lu(n).solve(rhs.transpose()).transpose(), spec};
      }
      return {right_divide(rhs, basis_matrix(spec, n, that).entries), spec};
    }
    case BasisKind::Taylor:
    case BasisKind::Monomial: {
      const double offset = spec.kind == BasisKind::Taylor ? spec.taylor_offset : 0.0;
      const double new_offset = (d - c) / (b - a) * offset - (a * d - b * c) / (b - a);
      Matrix Q = P;
      double scale = 1.0;
      for (int k = 0; k <= n; ++k) {
        Q.col(k) *= scale;
        scale *= ratio;
      }
      const BasisSpec shifted = BasisSpec::taylor(new_offset);
      if (spec.kind == BasisKind::Taylor) return {Q, shifted};
      return {convert_controls(Q, shifted, BasisSpec::monomial()), BasisSpec::monomial()};
    }
  }
  return {};
}

}  // namespace bezapprox
