#include "stiefel_cayley/group.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace stiefel_cayley {

double unitarity_residual(const Mat& a) {
  if (!a.is_square()) throw ShapeMismatch("unitarity_residual: not square");
  return frobenius_norm(a * a.adjoint() - Mat::identity(a.field(), a.rows()));
}

GroupElement::GroupElement(Mat a) : a_(std::move(a)) {
  if (!a_.is_square()) throw ShapeMismatch("GroupElement: matrix not square");
  const double res = unitarity_residual(a_);
  if (!(res <= kUnitaryTol)) {
    std::ostringstream os;
    os << "GroupElement: ||AA* - I||_F = " << res << " exceeds "
       << kUnitaryTol;
    throw NotOnManifold(os.str());
  }
}

bool is_group_tangent(const GroupElement& a, const Mat& w, double rel_tol) {
  if (w.field() != a.field() || w.rows() != a.n() || w.cols() != a.n())
    return false;
  return is_skew_hermitian(a.matrix().adjoint() * w, rel_tol);
}

GroupTangent::GroupTangent(GroupElement base, Mat w)
    : base_(std::move(base)), w_(std::move(w)) {
  if (!is_group_tangent(base_, w_))
    throw InvalidTangent("GroupTangent: A*W + W*A != 0");
}

SkewBlockTangent::SkewBlockTangent(Mat x, Mat y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.field() != y_.field())
    throw FieldMismatch("SkewBlockTangent: X and Y over different rings");
  if (!y_.is_square() || x_.cols() != y_.rows())
    throw ShapeMismatch("SkewBlockTangent: X must be (n-k)xk, Y kxk");
  if (!is_skew_hermitian(y_, kTangentTol))
    throw InvalidTangent("SkewBlockTangent: Y + Y* != 0");
}

Mat SkewBlockTangent::as_matrix() const {
  const std::size_t m = x_.rows();
  return block2x2(Mat(field(), m, m), x_, -x_.adjoint(), y_);
}

Mat cayley_at_identity(const Mat& m, double tol) {
  if (!m.is_square()) throw ShapeMismatch("cayley_at_identity: not square");
  const Mat id = Mat::identity(m.field(), m.rows());
  // (I - M)(I + M)^{-1} = 2 (I + M)^{-1} - I. Skipping the product with
  // I - M keeps the error O(eps ||M||) rather than O(eps ||M||^2).
  return 2.0 * mat_inverse(id + m, tol) - id;
}

Mat cayley_at(const GroupElement& a, const Mat& x, double tol) {
  const Mat& am = a.matrix();
  // I - A^* X = (I + A^* A) - A^* (A + X), exactly.
  const Mat id = Mat::identity(am.field(), am.rows());
  return (id + am.adjoint() * am) * mat_inverse(am + x, tol) - am.adjoint();
}

Mat b_matrix(const Mat& x, const Mat& y, double tol) {
  if (!is_skew_hermitian(y, kTangentTol))
    throw InvalidTangent("b_matrix: Y + Y* != 0");
  if (x.cols() != y.rows()) throw ShapeMismatch("b_matrix: X, Y mismatch");
  const Mat inner = Mat::identity(y.field(), y.rows()) + x.adjoint() * x + y;
  try {
    return mat_inverse(inner, tol);
  } catch (const SingularMatrix& e) {
    throw InternalError(std::string("I + X*X + Y reported singular: ") +
                        e.what());
  }
}

Mat b_columns(const Mat& x, const Mat& y, double tol) {
  if (!is_skew_hermitian(y, kTangentTol))
    throw InvalidTangent("b_columns: Y + Y* != 0");
  if (x.cols() != y.rows()) throw ShapeMismatch("b_columns: X, Y mismatch");
  const std::size_t m = x.rows();
  const std::size_t k = y.rows();
  const Field f = y.field();
  // b^{-1} is the Schur complement of I_m in I + [[0, X], [-X^*, Y]].
  const Mat shifted = block2x2(Mat::identity(f, m), x, -x.adjoint(),
                               Mat::identity(f, k) + y);
  try {
    return mat_inverse(shifted, tol).right_cols(k);
  } catch (const SingularMatrix& e) {
    throw InternalError(std::string("I + [[0, X], [-X*, Y]] reported singular: ") +
                        e.what());
  }
}

GroupElement cayley_identity_block(const SkewBlockTangent& t, double tol) {
  const Mat& x = t.x();
  const std::size_t m = x.rows();
  const std::size_t k = t.k();
  const Mat cols = b_columns(x, t.y(), tol);
  const Mat xb = -cols.top_rows(m);
  const Mat b = cols.bottom_rows(k);
  return GroupElement(block2x2(
      Mat::identity(t.field(), m) - 2.0 * xb * x.adjoint(), -2.0 * xb,
      2.0 * b * x.adjoint(), -Mat::identity(t.field(), k) + 2.0 * b));
}

SkewBlockTangent project_skew_tangent(const GroupElement& a, const Mat& w,
                                      std::size_t k) {
  if (k > a.n()) throw DimensionError("project_skew_tangent: k > n");
  if (!is_group_tangent(a, w))
    throw InvalidTangent("project_skew_tangent: W is not tangent at A");
  const Mat s = a.matrix().adjoint() * w;
  const std::size_t m = a.n() - k;
  return SkewBlockTangent(s.block(0, m, m, k),
                          skew_hermitian_part(s.block(m, m, k, k)));
}

}  // namespace stiefel_cayley
