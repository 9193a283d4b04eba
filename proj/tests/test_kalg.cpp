#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "stiefel_cayley/kalg.hpp"
#include "stiefel_cayley/serialize.hpp"

namespace sc = stiefel_cayley;
using sc::Field;
using sc::Mat;
using sc::Quaternion;

namespace {

constexpr Field kFields[] = {Field::Real, Field::Complex, Field::Quaternion};

Mat scalar(Field f, Quaternion q) {
  Mat m(f, 1, 1);
  m.set(0, 0, q);
  return m;
}

}  // namespace

TEST(Quaternion, MultiplicationTable) {
  const auto i = Quaternion::unit_i();
  const auto j = Quaternion::unit_j();
  const auto k = Quaternion::unit_k();
  const Quaternion minus_one{-1.0};
  EXPECT_EQ(i * i, minus_one);
  EXPECT_EQ(j * j, minus_one);
  EXPECT_EQ(k * k, minus_one);
  EXPECT_EQ(i * j * k, minus_one);
  EXPECT_EQ(i * j, k);
  EXPECT_EQ(j * i, -k);
  EXPECT_EQ(j * k, i);
  EXPECT_EQ(k * i, j);
}

TEST(Quaternion, NormIsMultiplicative) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  for (int t = 0; t < 1000; ++t) {
    const Quaternion p{g(rng), g(rng), g(rng), g(rng)};
    const Quaternion q{g(rng), g(rng), g(rng), g(rng)};
    EXPECT_NEAR((p * q).norm(), p.norm() * q.norm(), 1e-12 * (1 + p.norm() * q.norm()));
  }
}

TEST(Mat, AdjointExamples) {
  for (Field f : kFields) {
    const Mat id = Mat::identity(f, 4);
    EXPECT_EQ(id.adjoint(), id);
  }
  const Mat qi = scalar(Field::Quaternion, Quaternion::unit_i());
  EXPECT_EQ(qi.adjoint(), scalar(Field::Quaternion, -Quaternion::unit_i()));
  const Mat m = sc::random_gaussian(3, 2, Field::Complex, 5);
  EXPECT_EQ(m.adjoint().adjoint(), m);
  EXPECT_EQ(m.adjoint().rows(), 2u);
}

TEST(Mat, AdjointIsAntiHomomorphism) {
  for (Field f : kFields) {
    for (std::uint64_t s = 0; s < 50; ++s) {
      const Mat a = sc::random_gaussian(4, 3, f, sc::derive_seed(s, 0));
      const Mat b = sc::random_gaussian(3, 5, f, sc::derive_seed(s, 1));
      const Mat lhs = (a * b).adjoint();
      const Mat rhs = b.adjoint() * a.adjoint();
      EXPECT_LE(sc::frobenius_norm(lhs - rhs), 1e-12 * sc::frobenius_norm(lhs));
    }
  }
}

TEST(Mat, ProductMatchesEmbeddingOracle) {
  for (Field f : kFields) {
    const Mat a = sc::random_gaussian(5, 4, f, 21);
    const Mat b = sc::random_gaussian(4, 3, f, 22);
    EXPECT_LE(sc::frobenius_norm(a * b - oracle::product(a, b)), 1e-12);
  }
}

TEST(Mat, RejectsEntriesOutsideRing) {
  Mat real(Field::Real, 1, 1);
  EXPECT_THROW(real.set(0, 0, Quaternion::unit_i()), sc::InvalidArgument);
  Mat cplx(Field::Complex, 1, 1);
  EXPECT_THROW(cplx.set(0, 0, Quaternion::unit_j()), sc::InvalidArgument);
  EXPECT_THROW(real.set(0, 0, Quaternion{std::nan("")}), sc::InvalidArgument);
}

TEST(Mat, MixedRingsAndShapesThrow) {
  const Mat a = Mat::identity(Field::Real, 2);
  const Mat b = Mat::identity(Field::Complex, 2);
  EXPECT_THROW(a + b, sc::FieldMismatch);
  EXPECT_THROW(a * Mat::identity(Field::Real, 3), sc::ShapeMismatch);
}

TEST(Inverse, Examples) {
  for (Field f : kFields) {
    const Mat id = Mat::identity(f, 5);
    EXPECT_EQ(sc::mat_inverse(id), id);
  }
  const Mat qi = scalar(Field::Quaternion, Quaternion::unit_i());
  EXPECT_LE(sc::frobenius_norm(sc::mat_inverse(qi) -
                               scalar(Field::Quaternion, -Quaternion::unit_i())),
            1e-15);
  const Mat m = sc::random_gaussian(4, 4, Field::Quaternion, 3);
  const Mat r = m * sc::mat_inverse(m) - Mat::identity(Field::Quaternion, 4);
  EXPECT_LE(sc::frobenius_norm(r), 1e-10);
}

TEST(Inverse, ResidualAndEmbeddingOracle) {
  for (Field f : kFields) {
    for (std::size_t n = 1; n <= 12; ++n) {
      const Mat m = sc::random_gaussian(n, n, f, 100 + n) + 3.0 * Mat::identity(f, n);
      const Mat inv = sc::mat_inverse(m);
      const Mat id = Mat::identity(f, n);
      const double scale = 1e-10 * sc::frobenius_norm(m);
      EXPECT_LE(sc::frobenius_norm(m * inv - id), scale);
      EXPECT_LE(sc::frobenius_norm(inv * m - id), scale);
      EXPECT_LE(sc::frobenius_norm(inv - oracle::inverse(m)), 1e-9);
    }
  }
}

TEST(Inverse, SingularDetection) {
  for (Field f : kFields) {
    EXPECT_TRUE(sc::is_invertible(Mat::identity(f, 3)));
    EXPECT_FALSE(sc::is_invertible(Mat::zeros(f, 3, 3)));
    EXPECT_THROW(sc::mat_inverse(Mat::zeros(f, 2, 2)), sc::SingularMatrix);
  }
  EXPECT_FALSE(sc::is_invertible(Mat::real({{1, 1}, {1, 1}})));
  EXPECT_THROW(sc::mat_inverse(Mat::real({{1, 2, 3}})), sc::ShapeMismatch);
}

TEST(Inverse, ScaleFloorCatchesCancellation) {
  const Mat noise = Mat::real({{1e-16}});
  EXPECT_TRUE(sc::is_invertible(noise));
  EXPECT_FALSE(sc::is_invertible(noise, sc::kSingularTol, 1.0));
  EXPECT_TRUE(sc::is_invertible(Mat::real({{0.5}}), sc::kSingularTol, 1.0));
}

TEST(Inverse, QuaternionNeedsLeftOperations) {
  // [[i, j], [1, k]]; right row operations would give a different matrix.
  Mat m(Field::Quaternion, 2, 2);
  m.set(0, 0, Quaternion::unit_i());
  m.set(0, 1, Quaternion::unit_j());
  m.set(1, 0, Quaternion{1.0});
  m.set(1, 1, Quaternion::unit_k());
  EXPECT_FALSE(sc::is_invertible(sc::block2x2(
      scalar(Field::Quaternion, Quaternion::unit_i()),
      scalar(Field::Quaternion, Quaternion::unit_j()),
      scalar(Field::Quaternion, Quaternion::unit_k()),
      scalar(Field::Quaternion, Quaternion{1.0}))));
  const Mat inv = sc::mat_inverse(m);
  EXPECT_LE(sc::frobenius_norm(inv - oracle::inverse(m)), 1e-14);
  EXPECT_LE(sc::frobenius_norm(inv * m - Mat::identity(Field::Quaternion, 2)), 1e-14);
}

TEST(NullSpace, AnnihilatesAndHasFullDimension) {
  for (Field f : kFields) {
    const Mat a = sc::random_gaussian(5, 2, f, 8);
    const Mat b = sc::random_gaussian(2, 6, f, 9);
    const Mat m = a * b;  // rank 2, 6 columns
    const Mat ns = sc::null_space(m);
    EXPECT_EQ(ns.cols(), 4u);
    EXPECT_LE(sc::frobenius_norm(m * ns), 1e-10);
  }
  EXPECT_EQ(sc::null_space(Mat::identity(Field::Real, 3)).cols(), 0u);
}

TEST(Norms, FrobeniusExamples) {
  EXPECT_EQ(sc::frobenius_norm(Mat::zeros(Field::Complex, 3, 2)), 0.0);
  EXPECT_DOUBLE_EQ(sc::frobenius_norm(Mat::identity(Field::Real, 3)), std::sqrt(3.0));
  EXPECT_DOUBLE_EQ(
      sc::frobenius_norm(scalar(Field::Quaternion, Quaternion{1, 1, 1, 1})), 2.0);
}

TEST(Random, DeterministicPerSeed) {
  for (Field f : kFields) {
    EXPECT_EQ(sc::random_gaussian(2, 2, f, 42), sc::random_gaussian(2, 2, f, 42));
    EXPECT_NE(sc::random_gaussian(2, 2, f, 42), sc::random_gaussian(2, 2, f, 43));
  }
}

TEST(Random, StandardNormalMoments) {
  for (Field f : kFields) {
    const Mat m = sc::random_gaussian(100, 100, f, 7);
    const auto c = m.components();
    double mean = 0.0;
    for (double v : c) mean += v;
    mean /= static_cast<double>(c.size());
    double var = 0.0;
    for (double v : c) var += (v - mean) * (v - mean);
    var /= static_cast<double>(c.size() - 1);
    EXPECT_LE(std::abs(mean), 5.0 / 100.0);
    EXPECT_NEAR(var, 1.0, 0.1);
  }
}

TEST(Skew, Examples) {
  const Mat sym = Mat::real({{1, 2}, {2, 5}});
  EXPECT_EQ(sc::skew_hermitian_part(sym), Mat::zeros(Field::Real, 2, 2));
  const Mat skew = Mat::real({{0, 3}, {-3, 0}});
  EXPECT_EQ(sc::skew_hermitian_part(skew), skew);
  EXPECT_EQ(sc::skew_hermitian_part(scalar(Field::Complex, Quaternion{3, 4})),
            scalar(Field::Complex, Quaternion{0, 4}));
}

TEST(Skew, ExactlySkewForAllRings) {
  for (Field f : kFields) {
    const Mat s = sc::skew_hermitian_part(sc::random_gaussian(6, 6, f, 12));
    EXPECT_EQ(s + s.adjoint(), Mat::zeros(f, 6, 6));
    EXPECT_TRUE(sc::is_skew_hermitian(s, 0.0));
    EXPECT_TRUE(sc::is_hermitian(sc::hermitian_part(s + Mat::identity(f, 6)), 0.0));
  }
}

TEST(Blocks, StackAndSplitRoundTrip) {
  const Mat a = sc::random_gaussian(2, 2, Field::Quaternion, 1);
  const Mat b = sc::random_gaussian(2, 3, Field::Quaternion, 2);
  const Mat c = sc::random_gaussian(1, 2, Field::Quaternion, 3);
  const Mat d = sc::random_gaussian(1, 3, Field::Quaternion, 4);
  const Mat m = sc::block2x2(a, b, c, d);
  EXPECT_EQ(m.block(0, 0, 2, 2), a);
  EXPECT_EQ(m.block(0, 2, 2, 3), b);
  EXPECT_EQ(m.bottom_rows(1), sc::hstack(c, d));
  EXPECT_EQ(sc::vstack(m.top_rows(2), m.bottom_rows(1)), m);
  const Mat diag = sc::block_diag(a, d.block(0, 0, 1, 1));
  EXPECT_EQ(diag.block(0, 2, 2, 1), Mat::zeros(Field::Quaternion, 2, 1));
}

TEST(Serialize, MatrixJsonRoundTrip) {
  for (Field f : kFields) {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const Mat m = sc::random_gaussian(1 + s % 4, 1 + s % 3, f, s);
      const Mat back = sc::matrix_from_json(sc::json::parse(sc::to_json(m).dump()));
      EXPECT_EQ(back, m);
    }
  }
  sc::json bad = sc::to_json(Mat::identity(Field::Real, 2));
  bad["rows"] = 3;
  EXPECT_ANY_THROW(sc::matrix_from_json(bad));
}
