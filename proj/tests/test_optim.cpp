#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "stiefel_cayley/optim.hpp"

namespace sc = stiefel_cayley;
using sc::Field;
using sc::Mat;
using sc::Quaternion;

namespace {

constexpr Field kFields[] = {Field::Real, Field::Complex, Field::Quaternion};

Mat random_hermitian(std::size_t n, Field f, std::uint64_t seed) {
  return sc::hermitian_part(sc::random_gaussian(n, n, f, seed));
}

Mat diag(std::initializer_list<double> values) {
  Mat m(Field::Real, values.size(), values.size());
  std::size_t i = 0;
  for (double v : values) m.set(i, i, Quaternion{v}), ++i;
  return m;
}

// Derivative of f along curve(x, A, .) at 0 by central differences.
double slope_fd(const sc::Objective& obj, const sc::StiefelPoint& x, const Mat& a,
                double h) {
  return (obj.value(sc::curve(x, a, h)) - obj.value(sc::curve(x, a, -h))) / (2 * h);
}

}  // namespace

TEST(DescentSkew, Examples) {
  for (Field f : kFields) {
    const auto x = sc::random_stiefel_point(6, 2, f, 1);
    EXPECT_EQ(sc::frobenius_norm(sc::descent_skew(x, Mat::zeros(f, 6, 2))), 0.0);
    EXPECT_LE(sc::frobenius_norm(sc::descent_skew(x, x.matrix())), 1e-15);
    const Mat a = sc::descent_skew(x, sc::random_gaussian(6, 2, f, 2));
    EXPECT_LE(sc::frobenius_norm(a + a.adjoint()), 1e-13 * sc::frobenius_norm(a));
  }
}

TEST(Curve, StartsAtXAndStaysOnManifold) {
  for (Field f : kFields) {
    const auto x = sc::random_stiefel_point(7, 3, f, 3);
    const Mat a = sc::descent_skew(x, sc::random_gaussian(7, 3, f, 4));
    EXPECT_EQ(sc::curve(x, a, 0.0).matrix(), x.matrix());
    for (double t : {-3.0, -0.1, 0.2, 1.0, 10.0})
      EXPECT_LE(sc::orthonormality_residual(sc::curve(x, a, t).matrix()), 1e-11);
    EXPECT_THROW(sc::curve(x, Mat::identity(f, 7), 0.1), sc::InvalidTangent);
  }
}

TEST(Curve, DerivativeIsMinusTwoAx) {
  for (Field f : kFields) {
    const auto x = sc::random_stiefel_point(6, 2, f, 5);
    const Mat a = sc::descent_skew(x, sc::random_gaussian(6, 2, f, 6));
    const Mat expect = -2.0 * a * x.matrix();
    auto fd = [&](double h) {
      return (1.0 / (2 * h)) * (sc::curve(x, a, h).matrix() - sc::curve(x, a, -h).matrix());
    };
    const double e1 = sc::frobenius_norm(fd(1e-5) - expect);
    EXPECT_LE(e1, 1e-6 * sc::frobenius_norm(expect));
    const double big = sc::frobenius_norm(fd(1e-2) - expect);
    const double half = sc::frobenius_norm(fd(5e-3) - expect);
    EXPECT_NEAR(big / half, 4.0, 0.5);
  }
}

TEST(GradientDescent, StationaryStart) {
  sc::Objective zero;
  zero.value = [](const sc::StiefelPoint&) { return 1.0; };
  zero.egrad = [](const sc::StiefelPoint& x) {
    return Mat::zeros(x.field(), x.n(), x.k());
  };
  const auto x0 = sc::random_stiefel_point(5, 2, Field::Quaternion, 7);
  const auto trace = sc::gradient_descent(zero, x0);
  EXPECT_EQ(trace.reason, sc::Termination::Converged);
  ASSERT_EQ(trace.records.size(), 1u);
  EXPECT_EQ(trace.final().x.matrix(), x0.matrix());
}

TEST(GradientDescent, SmallRayleighFindsMinEigenvalue) {
  const auto obj = sc::rayleigh_objective(diag({1, 2, 3}));
  const auto x0 = sc::random_stiefel_point(3, 1, Field::Real, 8);
  const auto trace = sc::gradient_descent(obj, x0);
  EXPECT_EQ(trace.reason, sc::Termination::Converged);
  EXPECT_NEAR(trace.final().f, 1.0, 1e-6);
}

TEST(GradientDescent, RayleighMatchesEigensolver) {
  for (Field f : {Field::Real, Field::Complex}) {
    const Mat m = random_hermitian(20, f, 9);
    const auto trace =
        sc::gradient_descent(sc::rayleigh_objective(m), sc::random_stiefel_point(20, 4, f, 10));
    EXPECT_EQ(trace.reason, sc::Termination::Converged);
    const double target = oracle::sum_smallest(oracle::hermitian_eigenvalues(m), 4);
    EXPECT_NEAR(trace.final().f, target, 1e-5) << sc::to_string(f);
  }
}

TEST(GradientDescent, QuaternionRayleighBecomesStationary) {
  const Mat m = random_hermitian(8, Field::Quaternion, 11);
  const auto trace = sc::gradient_descent(
      sc::rayleigh_objective(m), sc::random_stiefel_point(8, 2, Field::Quaternion, 12));
  EXPECT_EQ(trace.reason, sc::Termination::Converged);
  EXPECT_LE(trace.final().gnorm, 1e-6);
}

TEST(GradientDescent, FeasibilityAndArmijoOverLongRun) {
  const Mat m = random_hermitian(20, Field::Real, 13);
  const auto obj = sc::rayleigh_objective(m);
  sc::SearchParams p;
  p.max_iters = 600;
  p.grad_tol = 1e-12;
  const auto trace = sc::gradient_descent(obj, sc::random_stiefel_point(20, 4, Field::Real, 14), p);
  ASSERT_GE(trace.records.size(), 500u);
  for (std::size_t j = 0; j < trace.records.size(); ++j) {
    const auto& r = trace.records[j];
    EXPECT_LE(sc::orthonormality_residual(r.x.matrix()), 1e-8);
    if (j == 0) continue;
    const auto& prev = trace.records[j - 1];
    const Mat a = sc::descent_skew(prev.x, obj.egrad(prev.x));
    const Mat slope = -2.0 * a * prev.x.matrix();
    EXPECT_LE(r.f, prev.f - p.armijo_c * r.step * sc::real_inner(slope, slope));
  }
}

TEST(GradientDescent, ReportsMaxIters) {
  sc::SearchParams p;
  p.max_iters = 3;
  const auto trace = sc::gradient_descent(sc::rayleigh_objective(random_hermitian(6, Field::Real, 15)),
                                          sc::random_stiefel_point(6, 2, Field::Real, 16), p);
  EXPECT_EQ(trace.reason, sc::Termination::MaxIters);
  EXPECT_EQ(trace.records.size(), 4u);
}

TEST(GradientDescent, ReportsLineSearchFailure) {
  // A constant value with a nonzero claimed gradient defeats every Armijo test.
  sc::Objective obj;
  obj.value = [](const sc::StiefelPoint&) { return 1.0; };
  obj.egrad = [](const sc::StiefelPoint& x) {
    return sc::random_gaussian(x.n(), x.k(), x.field(), 1);
  };
  sc::SearchParams p;
  p.max_backtracks = 3;
  const auto trace = sc::gradient_descent(obj, sc::random_stiefel_point(4, 1, Field::Real, 2), p);
  EXPECT_EQ(trace.reason, sc::Termination::LineSearchFailed);
  EXPECT_EQ(trace.records.size(), 1u);
}

TEST(SearchParams, Validation) {
  sc::SearchParams p;
  p.armijo_c = 1.5;
  EXPECT_THROW(p.validate(), sc::InvalidArgument);
  p = {};
  p.backtrack_factor = 1.0;
  EXPECT_THROW(p.validate(), sc::InvalidArgument);
  p = {};
  p.initial_step = 0.0;
  EXPECT_THROW(p.validate(), sc::InvalidArgument);
}

TEST(IntrinsicCurve, PassesThroughIterateWithMatchingSlope) {
  for (Field f : kFields) {
    const auto x = sc::random_stiefel_point(6, 2, f, 17);
    const sc::Lift lift = sc::intrinsic_lift(x);
    const auto u = sc::random_tangent(lift, 18);
    EXPECT_LE(sc::frobenius_norm(sc::intrinsic_curve(u, 0.0).matrix() - x.matrix()), 1e-14);
    const Mat analytic =
        sc::gamma_differential(sc::TangentCoords::zero(lift), u.x(), u.y());
    const double h = 1e-5;
    const Mat fd = (1.0 / (2 * h)) *
                   (sc::intrinsic_curve(u, h).matrix() - sc::intrinsic_curve(u, -h).matrix());
    EXPECT_LE(sc::frobenius_norm(fd - analytic), 1e-6 * sc::frobenius_norm(analytic));
    for (double t : {0.1, 1.0, 5.0})
      EXPECT_LE(sc::orthonormality_residual(sc::intrinsic_curve(u, t).matrix()), 1e-10);
  }
}

TEST(Rayleigh, Examples) {
  for (Field f : kFields) {
    const auto id = sc::rayleigh_objective(Mat::identity(f, 5));
    EXPECT_NEAR(id.value(sc::random_stiefel_point(5, 3, f, 19)), 3.0, 1e-12);
  }
  const auto d = sc::rayleigh_objective(diag({4, -1, 2, 7}));
  const Mat first = sc::vstack(Mat::identity(Field::Real, 2), Mat::zeros(Field::Real, 2, 2));
  EXPECT_DOUBLE_EQ(d.value(sc::StiefelPoint(first)), 3.0);
  EXPECT_THROW(sc::rayleigh_objective(Mat::real({{0, 1}, {0, 0}})), sc::NotHermitian);
}

TEST(Objectives, GradientMatchesFiniteDifferences) {
  for (Field f : kFields) {
    const auto x = sc::random_stiefel_point(6, 2, f, 20);
    const Mat a = sc::descent_skew(x, sc::random_gaussian(6, 2, f, 21));
    const Mat v = -2.0 * a * x.matrix();
    const sc::Objective objs[] = {
        sc::rayleigh_objective(random_hermitian(6, f, 22)),
        sc::procrustes_objective(sc::random_gaussian(2, 3, f, 23),
                                 sc::random_gaussian(6, 3, f, 24))};
    for (const auto& obj : objs) {
      const double df = slope_fd(obj, x, a, 1e-5);
      EXPECT_LE(std::abs(df - sc::real_inner(obj.egrad(x), v)), 1e-5);
    }
  }
}

TEST(Procrustes, ExactFitAndMonotoneDescent) {
  for (Field f : kFields) {
    const Mat b = sc::random_gaussian(2, 3, f, 25);
    const auto xhat = sc::random_stiefel_point(5, 2, f, 26);
    const auto obj = sc::procrustes_objective(b, xhat.matrix() * b);
    EXPECT_LE(obj.value(xhat), 1e-24);
  }
  const std::size_t k = 3;
  const auto target = sc::random_stiefel_point(k, k, Field::Complex, 27);
  const auto obj =
      sc::procrustes_objective(Mat::identity(Field::Complex, k), target.matrix());
  const auto trace = sc::gradient_descent(obj, sc::random_stiefel_point(k, k, Field::Complex, 28));
  for (std::size_t j = 1; j < trace.records.size(); ++j)
    EXPECT_LT(trace.records[j].f, trace.records[j - 1].f);
  EXPECT_EQ(trace.reason, sc::Termination::Converged);
}
