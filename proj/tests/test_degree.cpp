#include <gtest/gtest.h>

#include <thread>

#include <bezapprox/degree.hpp>

#include "oracles.hpp"

using namespace bezapprox;

namespace {

double max_abs(const Matrix& M) { return M.cwiseAbs().maxCoeff(); }

std::vector<ReductionMethod> all_methods() {
  return {ReductionMethod::least_squares(), ReductionMethod::taylor(), ReductionMethod::matching()};
}

// E(n, m) built row by row from repeated one-step elevation of unit controls.
Matrix oracle_elevation(int n, int m) { return oracle::elevate_to(Matrix::Identity(n + 1, n + 1), m); }

template <typename F>
void expect_kind(ErrorKind kind, F&& f) {
  try {
    f();
    ADD_FAILURE() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

}  // namespace

TEST(Elevation, Examples) {
  for (int n = 0; n <= 6; ++n) EXPECT_EQ(elevation_matrix(n, n), Matrix::Identity(n + 1, n + 1));
  Matrix e12(2, 3);
  e12 << 1, 0.5, 0, 0, 0.5, 1;
  EXPECT_LT(max_abs(elevation_matrix(1, 2) - e12), 1e-15);
  EXPECT_LT(max_abs(elevation_matrix(2, 5).colwise().sum() - Eigen::RowVectorXd::Ones(6)), 1e-14);
  expect_kind(ErrorKind::DegreeOrder, [] { elevation_matrix(3, 2); });
}

TEST(Elevation, MatchesRepeatedOneStep) {
  for (int n = 0; n <= 8; ++n) {
    for (int m = n; m <= 14; ++m) {
      const Matrix E = elevation_matrix(n, m);
      EXPECT_LT(max_abs(E - oracle_elevation(n, m)), 1e-13) << n << " " << m;
      EXPECT_LT(max_abs(E.rowwise().sum() - Vector::Constant(n + 1, (m + 1.0) / (n + 1.0))), 1e-12);
      Eigen::FullPivLU<Matrix> lu(E);
      EXPECT_EQ(lu.rank(), n + 1);
    }
  }
}

TEST(Elevation, CurveUnchanged) {
  oracle::Gen gen(31);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = gen.integer(0, 8);
    const BezierCurve c(gen.controls(2, n));
    const BezierCurve e = elevate(c, n + gen.integer(0, 6));
    for (int k = 0; k < 50; ++k) {
      const double t = gen.uniform();
      EXPECT_LT(max_abs(e.evaluate(t) - c.evaluate(t)), 1e-10);
    }
  }
  const auto lin = BezierCurve::from_points({{0.0}, {1.0}});
  EXPECT_LT(max_abs(elevate(lin, 2).controls() - Eigen::RowVector3d(0, 0.5, 1)), 1e-15);
  const BezierCurve c(gen.controls(2, 3));
  EXPECT_EQ(elevate(c, 3).controls(), c.controls());
  EXPECT_LT(max_abs(elevate(elevate(c, 4), 5).controls() - elevate(c, 5).controls()), 1e-12);
  expect_kind(ErrorKind::DegreeOrder, [&] { elevate(c, 2); });
}

TEST(Reduction, RightInverseOfElevation) {
  for (int n = 0; n <= 9; ++n) {
    for (int m = 0; m <= n; ++m) {
      for (const auto& method : all_methods()) {
        const Matrix R = reduction_matrix(n, m, method);
        EXPECT_LT(max_abs(elevation_matrix(m, n) * R - Matrix::Identity(m + 1, m + 1)), 1e-9)
            << n << " " << m << " " << to_string(method.kind);
      }
    }
  }
}

TEST(Reduction, UndoesElevation) {
  oracle::Gen gen(32);
  for (int n = 0; n <= 6; ++n) {
    const BezierCurve c(gen.controls(2, n));
    for (const auto& method : all_methods()) {
      EXPECT_LT(max_abs(reduce(elevate(c, n + 3), n, method).controls() - c.controls()), 1e-9);
    }
  }
}

TEST(Reduction, MatchingEndpointsGiveChord) {
  oracle::Gen gen(33);
  const BezierCurve q(gen.controls(2, 2));
  const BezierCurve r = reduce(q, 1, ReductionMethod::matching({0.0, 1.0}));
  EXPECT_LT(max_abs(r.control(0) - q.control(0)), 1e-14);
  EXPECT_LT(max_abs(r.control(1) - q.control(2)), 1e-14);
}

TEST(Reduction, LeastSquaresFixture) {
  // brute force: P E^+ with the pseudo-inverse from an SVD of the one-step elevation
  Matrix P(1, 3);
  P << 0, 1, 0;
  const Matrix E = oracle_elevation(1, 2);
  const Matrix pinv = E.jacobiSvd(Eigen::ComputeFullU | Eigen::ComputeFullV).solve(Matrix::Identity(2, 2));
  const Matrix expected = P * pinv;
  EXPECT_NEAR(expected(0, 0), 1.0 / 3.0, 1e-14);
  EXPECT_NEAR(expected(0, 1), 1.0 / 3.0, 1e-14);
  const BezierCurve r = reduce(BezierCurve(P), 1, ReductionMethod::least_squares());
  EXPECT_LT(max_abs(r.controls() - expected), 1e-14);
}

TEST(Reduction, LeastSquaresIsLocallyOptimalInL2) {
  oracle::Gen gen(34);
  auto l2 = [](const Matrix& A, const Matrix& B) {
    return std::sqrt(oracle::simpson([&](double t) { return (oracle::eval(A, t) - oracle::eval(B, t)).squaredNorm(); },
                                     0.0, 1.0, 1e-15));
  };
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.integer(1, 6);
    const Matrix P = gen.controls(2, n);
    const Matrix Q = reduce(BezierCurve(P), n - 1, ReductionMethod::least_squares()).controls();
    const double best = l2(P, oracle::elevate_to(Q, n));
    for (int k = 0; k < 5; ++k) {
      Matrix dir = gen.controls(2, n - 1, -1.0, 1.0);
      dir *= 1e-3 / dir.norm();
      EXPECT_GE(l2(P, oracle::elevate_to(Q + dir, n)), best - 1e-12) << trial;
    }
  }
}

TEST(Reduction, TaylorKeepsDerivativesAtOffset) {
  // truncating the expansion about tau keeps value and first m derivatives there
  oracle::Gen gen(35);
  const BezierCurve c(gen.controls(2, 6));
  for (double tau : {0.5, 0.2}) {
    BezierCurve a = c, b = reduce(c, 3, ReductionMethod::taylor(tau));
    for (int d = 0; d <= 3; ++d) {
      EXPECT_LT(max_abs(a.evaluate(tau) - b.evaluate(tau)), 1e-9 * std::max(1.0, a.evaluate(tau).norm())) << d;
      if (d == 3) break;
      a = derivative(a);
      b = derivative(b);
    }
  }
}

TEST(Reduction, MatchingInterpolates) {
  oracle::Gen gen(36);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = gen.integer(1, 8), m = gen.integer(0, n - 1);
    const BezierCurve c(gen.controls(2, n));
    std::vector<double> params = uniform_params(m);
    if (trial % 2) {
      for (double& t : params) t = gen.uniform();
      std::sort(params.begin(), params.end());
      bool spread = true;
      for (std::size_t i = 1; i < params.size(); ++i) spread = spread && params[i] - params[i - 1] > 0.05;
      if (!spread) params = uniform_params(m);
    }
    const BezierCurve r = reduce(c, m, ReductionMethod::matching(params));
    for (double t : params) EXPECT_LT(max_abs(r.evaluate(t) - c.evaluate(t)), 1e-9) << trial;
  }
}

TEST(Reduction, Errors) {
  const BezierCurve c(Matrix::Random(2, 4));
  expect_kind(ErrorKind::DegreeOrder, [&] { reduce(c, 4, ReductionMethod::matching()); });
  expect_kind(ErrorKind::DuplicateParams, [&] { reduce(c, 1, ReductionMethod::matching({0.5, 0.5})); });
  expect_kind(ErrorKind::InvalidArgument, [&] { reduce(c, 1, ReductionMethod::matching({0.0, 0.5, 1.0})); });
  expect_kind(ErrorKind::DuplicateParams, [&] { reduce(c, 3, ReductionMethod::matching({0.1, 0.1, 0.2, 0.3})); });
}

TEST(Reduction, ZeroTargetUsesMidpoint) {
  oracle::Gen gen(37);
  const BezierCurve c(gen.controls(2, 4));
  const BezierCurve r = reduce(c, 0, ReductionMethod::matching());
  EXPECT_LT(max_abs(r.control(0) - c.evaluate(0.5)), 1e-12);
}

TEST(Reduction, CacheIsBitwiseAndThreadSafe) {
  for (int n = 1; n <= 9; ++n) {
    for (int m = 0; m < n; ++m) {
      for (const auto& method : all_methods()) {
        EXPECT_EQ(reduction_matrix(n, m, method), reduction_matrix_uncached(n, m, method));
      }
    }
  }
  const ReductionMethod odd = ReductionMethod::taylor(0.123);
  const Matrix expected = reduction_matrix_uncached(12, 5, odd);
  std::vector<Matrix> got(8);
  std::vector<std::thread> threads;
  for (std::size_t i = 0; i < got.size(); ++i) threads.emplace_back([&, i] { got[i] = reduction_matrix(12, 5, odd); });
  for (auto& t : threads) t.join();
  for (const Matrix& g : got) EXPECT_EQ(g, expected);
}

TEST(SharedForm, BasisQuotientIsElevationOrMatching) {
  for (int n = 0; n <= 6; ++n) {
    for (int m = 0; m <= 6; ++m) {
      const std::vector<double> t = uniform_params(m);
      const Matrix Bn = basis_matrix(BasisSpec::bernstein(), n, t).entries;
      const Matrix Bm = basis_matrix(BasisSpec::bernstein(), m, t).entries;
      const Matrix Q = right_divide(Bn, Bm);
      if (n <= m) {
        EXPECT_LT(max_abs(Q - elevation_matrix(n, m)), 1e-10) << n << " " << m;
      } else {
        EXPECT_LT(max_abs(Q - reduction_matrix(n, m, ReductionMethod::matching())), 1e-12);
      }
    }
  }
}

TEST(Elevation, ControlsApproachCurve) {
  oracle::Gen gen(38);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = gen.integer(1, 3);
    const BezierCurve c(gen.controls(2, n));
    double prev = std::numeric_limits<double>::infinity();
    for (int m : {n, 2 * n, 4 * n, 8 * n}) {
      const BezierCurve e = elevate(c, m);
      double worst = 0.0;
      for (int i = 0; i <= m; ++i) worst = std::max(worst, (e.control(i) - c.evaluate(static_cast<double>(i) / m)).norm());
      EXPECT_LE(worst, prev + 1e-12);
      prev = worst;
    }
  }
}

TEST(MonomialRecursion, MatchesBasisQuotient) {
  for (int n = 0; n <= 8; ++n) {
    for (int m = 0; m <= n; ++m) {
      const std::vector<double> t = uniform_params(m);
      const Matrix A = matching_reduction_matrix_monomial(n, m, t);
      const Matrix B = reduction_matrix(n, m, ReductionMethod::matching());
      EXPECT_LT(max_abs(A - B), 1e-8) << n << " " << m;
    }
  }
  EXPECT_LT(max_abs(matching_reduction_matrix_monomial(4, 2, uniform_params(2)) -
                    reduction_matrix(4, 2, ReductionMethod::matching())),
            1e-9);
  EXPECT_EQ(matching_reduction_matrix_monomial(5, 5, uniform_params(5)), Matrix::Identity(6, 6));
}

TEST(MonomialRecursion, BaseRowForChord) {
  // monomial-basis middle factor for n = 2, m = 1, params {0, 1}: last row holds alpha_1
  const std::vector<double> t{0.0, 1.0};
  const Matrix R = matching_reduction_matrix_monomial(2, 1, t);
  const Matrix mid = transform_matrix(BasisSpec::bernstein(), BasisSpec::monomial(), 2).entries * R *
                     transform_matrix(BasisSpec::monomial(), BasisSpec::bernstein(), 1).entries;
  EXPECT_NEAR(mid(2, 0), 0.0, 1e-14);
  EXPECT_NEAR(mid(2, 1), 1.0, 1e-14);
  const std::vector<double> t3{0.1, 0.6, 0.9};
  EXPECT_LT(max_abs(matching_reduction_matrix_monomial(7, 2, t3) -
                    reduction_matrix(7, 2, ReductionMethod::matching(t3))),
            1e-8);
}

TEST(DegreeOneError, Examples) {
  oracle::Gen gen(39);
  const BezierCurve q(gen.controls(2, 2));
  const std::vector<double> ends{0.0, 1.0};
  const auto form = degree_one_matching_error(q, ends);
  EXPECT_LT(max_abs(form.delta - (q.control(0) - 2.0 * q.control(1) + q.control(2))), 1e-15);
  const BezierCurve r = reduce(q, 1, ReductionMethod::matching(ends));
  EXPECT_LT(max_abs((q.evaluate(0.5) - r.evaluate(0.5)) - (-form.delta / 4.0)), 1e-14);

  const BezierCurve lifted = elevate(BezierCurve(gen.controls(2, 3)), 4);
  EXPECT_LT(degree_one_matching_error(lifted, uniform_params(3)).delta.norm(), 1e-13);
  expect_kind(ErrorKind::DuplicateParams, [&] { degree_one_matching_error(q, std::vector<double>{0.2, 0.2}); });
  expect_kind(ErrorKind::InvalidArgument, [&] { degree_one_matching_error(q, std::vector<double>{0.2}); });
}

TEST(DegreeOneError, ProductForm) {
  oracle::Gen gen(40);
  for (int trial = 0; trial < 100; ++trial) {
    const int n1 = gen.integer(2, 8);
    const BezierCurve c(gen.controls(2, n1));
    std::vector<double> params = uniform_params(n1 - 1);
    if (trial % 2) {
      for (std::size_t i = 0; i < params.size(); ++i) params[i] = (i + gen.uniform(0.1, 0.9)) / params.size();
    }
    const auto form = degree_one_matching_error(c, params);
    const BezierCurve r = reduce(c, n1 - 1, ReductionMethod::matching(params));
    for (double t : params) EXPECT_LT((c.evaluate(t) - r.evaluate(t)).norm(), 1e-9);
    for (int k = 0; k < 20; ++k) {
      const double t = gen.uniform();
      EXPECT_LT(max_abs((c.evaluate(t) - r.evaluate(t)) - form.at(t)), 1e-8) << trial;
    }
  }
}
