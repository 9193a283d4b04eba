#pragma once

// The classical Cayley transform on G(n) = O(n), U(n) or Sp(n).

#include <cstddef>

#include "stiefel_cayley/kalg.hpp"

namespace stiefel_cayley {

/// ||A A^* - I||_F bound enforced on every GroupElement (and on x^*x for
/// Stiefel frames). Results that drift past it fail loudly.
inline constexpr double kUnitaryTol = 1e-8;
/// Relative bound for skewness and tangency identities.
inline constexpr double kTangentTol = 1e-9;

/// n x n matrix with A A^* = I_n.
class GroupElement {
 public:
  /// Throws NotOnManifold if ||A A^* - I||_F > kUnitaryTol.
  explicit GroupElement(Mat a);

  static GroupElement identity(Field field, std::size_t n) {
    return GroupElement(Mat::identity(field, n));
  }

  const Mat& matrix() const { return a_; }
  std::size_t n() const { return a_.rows(); }
  Field field() const { return a_.field(); }

  /// A^{-1} = A^*.
  GroupElement inverse() const { return GroupElement(a_.adjoint()); }

  friend GroupElement operator*(const GroupElement& a, const GroupElement& b) {
    return GroupElement(a.a_ * b.a_);
  }

 private:
  Mat a_;
};

/// ||A A^* - I||_F
double unitarity_residual(const Mat& a);

/// W in T_A G(n), i.e. A^* W + W^* A = 0.
class GroupTangent {
 public:
  /// Throws InvalidTangent when the tangency identity fails.
  GroupTangent(GroupElement base, Mat w);

  const GroupElement& base() const { return base_; }
  const Mat& vector() const { return w_; }

 private:
  GroupElement base_;
  Mat w_;
};

bool is_group_tangent(const GroupElement& a, const Mat& w,
                      double rel_tol = kTangentTol);

/// (X, Y) encoding M = [[0, X], [-X^*, Y]] in (T_I G(n-k))^perp.
class SkewBlockTangent {
 public:
  /// X is (n-k) x k, Y is k x k with Y + Y^* = 0 (InvalidTangent otherwise).
  SkewBlockTangent(Mat x, Mat y);

  const Mat& x() const { return x_; }
  const Mat& y() const { return y_; }
  std::size_t n() const { return x_.rows() + y_.rows(); }
  std::size_t k() const { return y_.rows(); }
  Field field() const { return y_.field(); }

  /// The full n x n skew-Hermitian matrix M.
  Mat as_matrix() const;

 private:
  Mat x_;
  Mat y_;
};

/// c_I(M) = (I - M)(I + M)^{-1}. Throws SingularMatrix outside Omega(I).
Mat cayley_at_identity(const Mat& m, double tol = kSingularTol);

/// c_A(X) = (I - A^* X)(A + X)^{-1}. Throws SingularMatrix outside Omega(A).
Mat cayley_at(const GroupElement& a, const Mat& x, double tol = kSingularTol);

/// b = (I_k + X^* X + Y)^{-1}. The inverse always exists for skew Y; a
/// SingularMatrix here means rounding defeated that guarantee.
Mat b_matrix(const Mat& x, const Mat& y, double tol = kSingularTol);

/// [-X b; b], read off the last k columns of (I + [[0, X], [-X^*, Y]])^{-1}.
/// Equal to stacking -X b_matrix(X, Y) over b_matrix(X, Y), but never forms
/// X^* X, so it stays accurate when X is large.
Mat b_columns(const Mat& x, const Mat& y, double tol = kSingularTol);

/// c_I on (T_I G(n-k))^perp through the k x k block formula
///   [[I - 2XbX^*, -2Xb], [2bX^*, -I + 2b]].
GroupElement cayley_identity_block(const SkewBlockTangent& t,
                                   double tol = kSingularTol);

/// Writes A^* W = [[Z, X], [-X^*, Y]] (Y being the trailing k x k block)
/// and returns (X, Y), dropping the vertical part Z.
SkewBlockTangent project_skew_tangent(const GroupElement& a, const Mat& w,
                                      std::size_t k);

}  // namespace stiefel_cayley
