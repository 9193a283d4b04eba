#pragma once

// Configuration builders shared by the unit tests and the acceptance runner.

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "stiefel_cayley/stiefel.hpp"

namespace fixtures {

namespace sc = stiefel_cayley;
using sc::Field;
using sc::Mat;
using sc::Quaternion;

inline Quaternion unit_component(std::size_t c) {
  Quaternion q;
  switch (c) {
    case 0: q.w = 1.0; break;
    case 1: q.x = 1.0; break;
    case 2: q.y = 1.0; break;
    default: q.z = 1.0; break;
  }
  return q;
}

inline Mat random_skew(std::size_t k, Field f, std::uint64_t seed,
                       double scale = 1.0) {
  return scale * sc::skew_hermitian_part(sc::random_gaussian(k, k, f, seed));
}

inline sc::Lift random_lift(std::size_t n, std::size_t k, Field f,
                            std::uint64_t seed) {
  return sc::Lift(sc::random_group_element(n, f, seed), k);
}

/// x = (T; 0) with T orthonormal, lifted by complete_lift. Needs n >= 2k.
inline sc::Lift degenerate_lift(std::size_t n, std::size_t k, Field f,
                                std::uint64_t seed) {
  const Mat t = sc::random_stiefel_point(n - k, k, f, seed).matrix();
  return sc::complete_lift(sc::StiefelPoint(sc::vstack(t, Mat::zeros(f, k, k))));
}

/// Tangent coordinates whose beta X + P annihilates the orthonormal columns
/// of U (k x c), so beta X + P has corank >= c. Requires beta of full row
/// rank, which holds generically when n - k >= k.
inline sc::TangentCoords singular_tangent(const sc::Lift& lift, const Mat& u,
                                          std::uint64_t seed) {
  const Field f = lift.field();
  const Mat beta = lift.beta();
  const Mat x0 = sc::random_gaussian(lift.n() - lift.k(), lift.k(), f,
                                     sc::derive_seed(seed, 0));
  const Mat z = beta.adjoint() * sc::mat_inverse(beta * beta.adjoint()) *
                (-(lift.bottom() * u));
  const Mat x = x0 + (z - x0 * u) * u.adjoint();
  return sc::TangentCoords(lift, x,
                           random_skew(lift.k(), f, sc::derive_seed(seed, 1)));
}

/// Real basis of {(M, N) : N skew}, orthonormal for the Frobenius norm of
/// the ambient vector A [M; N].
inline std::vector<std::pair<Mat, Mat>> tangent_basis(std::size_t n,
                                                      std::size_t k, Field f) {
  const std::size_t comps = sc::components(f);
  std::vector<std::pair<Mat, Mat>> basis;
  for (std::size_t r = 0; r < n - k; ++r) {
    for (std::size_t c = 0; c < k; ++c) {
      for (std::size_t p = 0; p < comps; ++p) {
        Mat m(f, n - k, k);
        m.set(r, c, unit_component(p));
        basis.emplace_back(std::move(m), Mat(f, k, k));
      }
    }
  }
  const double s = 1.0 / std::sqrt(2.0);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t c = r; c < k; ++c) {
      for (std::size_t p = (r == c ? 1 : 0); p < comps; ++p) {
        Mat nn(f, k, k);
        const Quaternion q = unit_component(p);
        if (r == c) {
          nn.set(r, r, q);
        } else {
          nn.set(r, c, s * q);
          nn.set(c, r, -(s * q.conj()));
        }
        basis.emplace_back(Mat(f, n - k, k), std::move(nn));
      }
    }
  }
  return basis;
}

inline Eigen::VectorXd flatten(const Mat& m) {
  const auto c = m.components();
  return Eigen::Map<const Eigen::VectorXd>(c.data(),
                                           static_cast<Eigen::Index>(c.size()));
}

/// Real Jacobian of w -> (gamma^A)_{*v}(w) in the basis above.
inline Eigen::MatrixXd differential_jacobian(const sc::TangentCoords& t) {
  const auto basis = tangent_basis(t.lift().n(), t.lift().k(), t.lift().field());
  const std::size_t rows =
      t.lift().n() * t.lift().k() * sc::components(t.lift().field());
  Eigen::MatrixXd j(rows, basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    j.col(static_cast<Eigen::Index>(i)) =
        flatten(sc::gamma_differential(t, basis[i].first, basis[i].second));
  return j;
}

inline double smallest_singular_value(const Eigen::MatrixXd& j) {
  if (j.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(j);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

/// Central difference of gamma along (M, N).
inline Mat central_difference(const sc::TangentCoords& t, const Mat& m,
                              const Mat& n, double h) {
  const sc::TangentCoords plus(t.lift(), t.x() + h * m, t.y() + h * n);
  const sc::TangentCoords minus(t.lift(), t.x() - h * m, t.y() - h * n);
  return (1.0 / (2.0 * h)) *
         (sc::gamma(plus).matrix() - sc::gamma(minus).matrix());
}

/// Unit-norm random direction (M, N) with N skew.
inline std::pair<Mat, Mat> random_direction(std::size_t n, std::size_t k,
                                            Field f, std::uint64_t seed) {
  Mat m = sc::random_gaussian(n - k, k, f, sc::derive_seed(seed, 0));
  Mat nn = random_skew(k, f, sc::derive_seed(seed, 1));
  const double norm = std::sqrt(sc::real_inner(m, m) + sc::real_inner(nn, nn));
  return {(1.0 / norm) * m, (1.0 / norm) * nn};
}

}  // namespace fixtures
