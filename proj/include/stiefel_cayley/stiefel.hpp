#pragma once

// The compact Stiefel manifold O_{n,k} = {x in K^{n x k} : x^* x = I_k} and
// the Cayley transform gamma^A : T_x O_{n,k} -> O_{n,k} built from a lift
// A = [[alpha, T], [beta, P]] of x = [T; P].

#include <cstddef>
#include <cstdint>
#include <optional>

#include "stiefel_cayley/group.hpp"
#include "stiefel_cayley/kalg.hpp"

namespace stiefel_cayley {

class StiefelPoint {
 public:
  /// Throws NotOnManifold if ||x^* x - I_k||_F > kUnitaryTol.
  explicit StiefelPoint(Mat x);

  const Mat& matrix() const { return x_; }
  Field field() const { return x_.field(); }
  std::size_t n() const { return x_.rows(); }
  std::size_t k() const { return x_.cols(); }

  /// T, the top (n-k) x k block.
  Mat top() const { return x_.top_rows(n() - k()); }
  /// P, the bottom k x k block.
  Mat bottom() const { return x_.bottom_rows(k()); }

 private:
  Mat x_;
};

/// ||x^* x - I_k||_F
double orthonormality_residual(const Mat& x);

/// A group element A together with x = rho(A).
class Lift {
 public:
  Lift(GroupElement a, std::size_t k);
  /// Throws InvalidArgument unless the last k columns of A equal x exactly.
  Lift(StiefelPoint x, GroupElement a);

  const StiefelPoint& point() const { return point_; }
  const GroupElement& group_element() const { return a_; }
  const Mat& matrix() const { return a_.matrix(); }
  Field field() const { return a_.field(); }
  std::size_t n() const { return a_.n(); }
  std::size_t k() const { return point_.k(); }

  Mat alpha() const { return matrix().block(0, 0, n() - k(), n() - k()); }
  Mat beta() const { return matrix().block(n() - k(), 0, k(), n() - k()); }
  Mat top() const { return point_.top(); }
  Mat bottom() const { return point_.bottom(); }

  /// A . E = A diag(E, I_k) for E in G(n-k); another lift of the same x.
  Lift right_translate(const GroupElement& e) const;

 private:
  StiefelPoint point_;
  GroupElement a_;
};

/// v = A [X; Y] in T_x O_{n,k}, with Y + Y^* = 0.
class TangentCoords {
 public:
  /// Throws InvalidTangent if Y is not skew-Hermitian.
  TangentCoords(Lift lift, Mat x, Mat y);

  static TangentCoords zero(const Lift& lift);

  const Lift& lift() const { return lift_; }
  const Mat& x() const { return x_; }
  const Mat& y() const { return y_; }

  /// A [X; Y], the ambient n x k tangent vector.
  Mat ambient() const;
  /// A [[0, X], [-X^*, Y]] in (T_A G(n-k))^perp, the horizontal lift.
  Mat horizontal() const;

  TangentCoords scaled(double t) const;
  friend TangentCoords operator+(const TangentCoords& a,
                                 const TangentCoords& b);

 private:
  Lift lift_;
  Mat x_;
  Mat y_;
};

/// Last k columns of A.
StiefelPoint rho(const GroupElement& a, std::size_t k);

/// Completes x to A in G(n) with rho(A) = x: modified Gram-Schmidt of
/// e_1..e_n against the columns of x, keeping candidates whose projected
/// norm exceeds 0.5. Exact at x_0 = [0; I_k], where A = I_n.
Lift complete_lift(const StiefelPoint& x);

/// Computes A^* v = [X; Y]. Throws InvalidTangent unless v^*x + x^*v = 0.
TangentCoords tangent_from_ambient(const Lift& lift, const Mat& v);

/// gamma^A(v) = 2 [-Xb; b] (beta X + P)^* + [beta^*; -P^*].
StiefelPoint gamma(const TangentCoords& t, double tol = kSingularTol);

/// v in Gamma^x, i.e. beta X + P invertible. Independent of the lift.
bool in_injectivity_domain(const TangentCoords& t, double tol = kSingularTol);

/// y = [tau; pi] in Omega^x, i.e. pi + P^* invertible.
bool in_cayley_open(const StiefelPoint& x, const StiefelPoint& y,
                    double tol = kSingularTol);

/// Inverse of gamma^A restricted to Gamma^x:
///   X = -(tau - beta^*)(pi + P^*)^{-1},
///   b = 1/2 (pi + P^*) [(beta X + P)^*]^{-1},
///   Y = skew-Hermitian part of b^{-1}.
/// Throws OutsideCayleyOpen when y is not in Omega^x.
TangentCoords gamma_inverse(const Lift& lift, const StiefelPoint& y,
                            double tol = kSingularTol);

/// (gamma^A)_{*v}(w) for w = A [M; N], N + N^* = 0. Returns the n x k
/// ambient derivative.
Mat gamma_differential(const TangentCoords& t, const Mat& m, const Mat& n,
                       double tol = kSingularTol);

/// Same predicate as in_injectivity_domain.
bool differential_is_injective(const TangentCoords& t,
                               double tol = kSingularTol);

/// A nonzero skew N with (gamma^A)_{*v}(A [0; N]) = 0, built from the left
/// kernel of b (beta X + P)^*. Over C and H one kernel vector u gives
/// N = u i u^*; over R two are needed, N = u w^* - w u^*. Returns nullopt
/// when beta X + P is invertible or (over R) its corank is 1.
std::optional<Mat> differential_kernel_witness(const TangentCoords& t,
                                               double tol = 1e-10);

/// s^A(y) = c_A(A [[0, X], [-X^*, Y]]) with (X, Y) = gamma_inverse(y).
/// Evaluated as c_I(M) A^* in closed form from y, without forming X.
GroupElement local_section(const Lift& lift, const StiefelPoint& y,
                           double tol = kSingularTol);

/// H(y, t) = rho(c_A(t c_{A^*}(s^A(y)))), t in [0, 1]. Contracts Omega^x
/// onto gamma^A(0) = [beta^*; P^*]. A SingularMatrix from an intermediate
/// c_A carries the offending t in its message.
StiefelPoint contraction(const Lift& lift, const StiefelPoint& y, double t,
                         double tol = kSingularTol);

/// ||gamma^{A.E}(v) - diag(E^*, I_k) gamma^A(v)||_F, with v re-expressed in
/// the lift A.E as (E^* X, Y).
double lift_change_equivariance_check(const Lift& lift, const GroupElement& e,
                                      const TangentCoords& t);

/// Modified Gram-Schmidt (with one reorthogonalization pass) of a Gaussian
/// n x k matrix. Retries up to three times on rank deficiency.
StiefelPoint random_stiefel_point(std::size_t n, std::size_t k, Field field,
                                  std::uint64_t seed);
GroupElement random_group_element(std::size_t n, Field field,
                                  std::uint64_t seed);
/// Random (X, Y) at `lift`, Gaussian entries times `scale`.
TangentCoords random_tangent(const Lift& lift, std::uint64_t seed,
                             double scale = 1.0);

}  // namespace stiefel_cayley
