#include "stiefel_cayley/stiefel.hpp"

#include <sstream>
#include <utility>
#include <vector>

namespace stiefel_cayley {

namespace {

Mat column(const Mat& m, std::size_t c) { return m.block(0, c, m.rows(), 1); }

Mat unit_vector(Field field, std::size_t n, std::size_t i) {
  Mat e(field, n, 1);
  e.set(i, 0, Quaternion{1.0});
  return e;
}

// v - sum_q q (q^* v), applied twice. Columns of `basis` are orthonormal.
Mat project_out(Mat v, const std::vector<Mat>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const Mat& q : basis) v -= q * (q.adjoint() * v);
  return v;
}

Mat hstack_columns(Field field, std::size_t n, const std::vector<Mat>& cols) {
  Mat out(field, n, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) out.set_block(0, c, cols[c]);
  return out;
}

// Modified Gram-Schmidt of the columns of m; nullopt if some column loses
// more than `drop` of its norm relative to the original.
std::optional<Mat> orthonormalize_columns(const Mat& m, double drop) {
  std::vector<Mat> basis;
  for (std::size_t c = 0; c < m.cols(); ++c) {
    const Mat original = column(m, c);
    const double before = frobenius_norm(original);
    Mat v = project_out(original, basis);
    const double after = frobenius_norm(v);
    if (!(after > drop * before) || after == 0.0) return std::nullopt;
    basis.push_back((1.0 / after) * v);
  }
  return hstack_columns(m.field(), m.rows(), basis);
}

Mat imaginary_unit(Field field) {
  Mat s(field, 1, 1);
  s.set(0, 0, Quaternion::unit_i());
  return s;
}

}  // namespace

double orthonormality_residual(const Mat& x) {
  return frobenius_norm(x.adjoint() * x - Mat::identity(x.field(), x.cols()));
}

StiefelPoint::StiefelPoint(Mat x) : x_(std::move(x)) {
  if (x_.cols() > x_.rows())
    throw DimensionError("StiefelPoint: k > n");
  const double res = orthonormality_residual(x_);
  if (!(res <= kUnitaryTol)) {
    std::ostringstream os;
    os << "StiefelPoint: ||x*x - I||_F = " << res << " exceeds "
       << kUnitaryTol;
    throw NotOnManifold(os.str());
  }
}

Lift::Lift(GroupElement a, std::size_t k)
    : point_(StiefelPoint(a.matrix().right_cols(k))), a_(std::move(a)) {}

Lift::Lift(StiefelPoint x, GroupElement a)
    : point_(std::move(x)), a_(std::move(a)) {
  if (point_.field() != a_.field())
    throw FieldMismatch("Lift: point and group element over different rings");
  if (point_.n() != a_.n() ||
      a_.matrix().right_cols(point_.k()) != point_.matrix())
    throw InvalidArgument("Lift: rho(A) != x");
}

Lift Lift::right_translate(const GroupElement& e) const {
  if (e.n() != n() - k())
    throw ShapeMismatch("right_translate: E must be (n-k)x(n-k)");
  const Mat d = block_diag(e.matrix(), Mat::identity(field(), k()));
  return Lift(GroupElement(matrix() * d), k());
}

TangentCoords::TangentCoords(Lift lift, Mat x, Mat y)
    : lift_(std::move(lift)), x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = lift_.n();
  const std::size_t k = lift_.k();
  if (x_.field() != lift_.field() || y_.field() != lift_.field())
    throw FieldMismatch("TangentCoords: mixed rings");
  if (x_.rows() != n - k || x_.cols() != k || y_.rows() != k ||
      y_.cols() != k)
    throw ShapeMismatch("TangentCoords: X must be (n-k)xk and Y kxk");
  if (!is_skew_hermitian(y_, kTangentTol))
    throw InvalidTangent("TangentCoords: Y + Y* != 0");
}

TangentCoords TangentCoords::zero(const Lift& lift) {
  const std::size_t k = lift.k();
  return TangentCoords(lift, Mat(lift.field(), lift.n() - k, k),
                       Mat(lift.field(), k, k));
}

Mat TangentCoords::ambient() const { return lift_.matrix() * vstack(x_, y_); }

Mat TangentCoords::horizontal() const {
  const std::size_t m = x_.rows();
  return lift_.matrix() *
         block2x2(Mat(x_.field(), m, m), x_, -x_.adjoint(), y_);
}

TangentCoords TangentCoords::scaled(double t) const {
  return TangentCoords(lift_, t * x_, t * y_);
}

TangentCoords operator+(const TangentCoords& a, const TangentCoords& b) {
  if (a.lift_.matrix() != b.lift_.matrix())
    throw InvalidArgument("TangentCoords: sum across different lifts");
  return TangentCoords(a.lift_, a.x_ + b.x_, a.y_ + b.y_);
}

StiefelPoint rho(const GroupElement& a, std::size_t k) {
  if (k > a.n()) throw DimensionError("rho: k > n");
  return StiefelPoint(a.matrix().right_cols(k));
}

Lift complete_lift(const StiefelPoint& x) {
  const std::size_t n = x.n();
  const std::size_t k = x.k();
  const Field field = x.field();
  std::vector<Mat> basis;
  for (std::size_t c = 0; c < k; ++c) basis.push_back(column(x.matrix(), c));

  std::vector<Mat> survivors;
  for (std::size_t j = 0; j < n && survivors.size() < n - k; ++j) {
    Mat v = project_out(unit_vector(field, n, j), basis);
    const double norm = frobenius_norm(v);
    if (norm > 0.5) {
      survivors.push_back((1.0 / norm) * v);
      basis.push_back(survivors.back());
    }
  }
  // The 0.5 threshold can reject every candidate when the complement is
  // spread evenly over the coordinates (e.g. the normal (1,...,1)/sqrt(n) of
  // a hyperplane with n >= 5). Fill up greedily with the largest residual.
  while (survivors.size() < n - k) {
    Mat best;
    double best_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      Mat v = project_out(unit_vector(field, n, j), basis);
      const double norm = frobenius_norm(v);
      if (norm > best_norm) {
        best_norm = norm;
        best = std::move(v);
      }
    }
    if (best_norm < 1e-8)
      throw InternalError("complete_lift: complement basis collapsed");
    survivors.push_back((1.0 / best_norm) * best);
    basis.push_back(survivors.back());
  }

  Mat a(field, n, n);
  for (std::size_t c = 0; c < n - k; ++c) a.set_block(0, c, survivors[c]);
  a.set_block(0, n - k, x.matrix());
  return Lift(x, GroupElement(std::move(a)));
}

TangentCoords tangent_from_ambient(const Lift& lift, const Mat& v) {
  const Mat& x = lift.point().matrix();
  if (v.field() != x.field()) throw FieldMismatch("tangent_from_ambient");
  if (v.rows() != x.rows() || v.cols() != x.cols())
    throw ShapeMismatch("tangent_from_ambient: v must be n x k");
  if (!is_skew_hermitian(x.adjoint() * v, kTangentTol))
    throw InvalidTangent("tangent_from_ambient: v*x + x*v != 0");
  const Mat s = lift.matrix().adjoint() * v;
  const std::size_t k = lift.k();
  return TangentCoords(lift, s.top_rows(lift.n() - k), s.bottom_rows(k));
}

StiefelPoint gamma(const TangentCoords& t, double tol) {
  const Lift& lift = t.lift();
  const Mat& x = t.x();
  const Mat beta = lift.beta();
  const Mat p = lift.bottom();
  const Mat s_adj = (beta * x + p).adjoint();
  return StiefelPoint(2.0 * b_columns(x, t.y(), tol) * s_adj +
                      vstack(beta.adjoint(), -p.adjoint()));
}

bool in_injectivity_domain(const TangentCoords& t, double tol) {
  return is_invertible(t.lift().beta() * t.x() + t.lift().bottom(), tol, 1.0);
}

bool in_cayley_open(const StiefelPoint& x, const StiefelPoint& y, double tol) {
  if (x.field() != y.field()) throw FieldMismatch("in_cayley_open");
  if (x.n() != y.n() || x.k() != y.k())
    throw ShapeMismatch("in_cayley_open: points on different manifolds");
  return is_invertible(y.bottom() + x.bottom().adjoint(), tol, 1.0);
}

TangentCoords gamma_inverse(const Lift& lift, const StiefelPoint& y,
                            double tol) {
  const StiefelPoint& x = lift.point();
  if (x.field() != y.field()) throw FieldMismatch("gamma_inverse");
  if (x.n() != y.n() || x.k() != y.k())
    throw ShapeMismatch("gamma_inverse: points on different manifolds");
  const Mat beta = lift.beta();
  const Mat p = lift.bottom();
  const auto shifted_inv = try_inverse(y.bottom() + p.adjoint(), tol, 1.0);
  if (!shifted_inv)
    throw OutsideCayleyOpen("gamma_inverse: pi + P* is singular");
  const Mat& s_inv = *shifted_inv;
  const Mat x_coord = -((y.top() - beta.adjoint()) * s_inv);
  // b = 1/2 (pi + P^*) [(beta X + P)^*]^{-1} gives
  // b^{-1} = 2 (beta X + P)^* S^{-1} with S = pi + P^*. Since
  // beta beta^* + P P^* = I, beta X + P = G S^{-1} with G = I - beta tau + P pi,
  // so the skew part of b^{-1} is S^{-*} (G^* - G) S^{-1}. This avoids the
  // cancellation against the O(||X||^2) Hermitian part I + X^* X.
  const Mat g = Mat::identity(y.field(), y.k()) - beta * y.top() +
                p * y.bottom();
  const Mat y_coord = s_inv.adjoint() * (g.adjoint() - g) * s_inv;
  return TangentCoords(lift, x_coord, skew_hermitian_part(y_coord));
}

Mat gamma_differential(const TangentCoords& t, const Mat& m, const Mat& n,
                       double tol) {
  const Mat& x = t.x();
  if (m.field() != x.field() || n.field() != x.field())
    throw FieldMismatch("gamma_differential");
  if (m.rows() != x.rows() || m.cols() != x.cols() || !n.is_square() ||
      n.rows() != x.cols())
    throw ShapeMismatch("gamma_differential: M must be (n-k)xk and N kxk");
  if (!is_skew_hermitian(n, kTangentTol))
    throw InvalidTangent("gamma_differential: N + N* != 0");

  const Mat b = b_columns(x, t.y(), tol).bottom_rows(x.cols());
  const Mat xi = x.adjoint() * m + m.adjoint() * x + n;
  const Mat bxib = b * xi * b;
  const Mat beta_adj = t.lift().beta().adjoint();
  const Mat p_adj = t.lift().bottom().adjoint();
  const Mat x_adj = x.adjoint();
  const Mat m_adj = m.adjoint();

  const Mat top = (-2.0 * m * b * x_adj + 2.0 * x * bxib * x_adj -
                   2.0 * x * b * m_adj) *
                      beta_adj +
                  (-2.0 * m * b + 2.0 * x * bxib) * p_adj;
  const Mat bottom =
      (-2.0 * bxib * x_adj + 2.0 * b * m_adj) * beta_adj - 2.0 * bxib * p_adj;
  return vstack(top, bottom);
}

bool differential_is_injective(const TangentCoords& t, double tol) {
  return in_injectivity_domain(t, tol);
}

std::optional<Mat> differential_kernel_witness(const TangentCoords& t,
                                               double tol) {
  const Lift& lift = t.lift();
  const Mat s = lift.beta() * t.x() + lift.bottom();
  if (is_invertible(s, tol, 1.0)) return std::nullopt;
  const Mat c = b_columns(t.x(), t.y()).bottom_rows(t.x().cols()) * s.adjoint();
  // N C = 0 for skew N  <=>  the columns of N^* lie in ker(C^*).
  const Mat kernel = null_space(c.adjoint(), tol, 1.0);
  if (kernel.cols() == 0) return std::nullopt;
  const auto u = orthonormalize_columns(kernel, 1e-8);
  if (!u) throw InternalError("differential_kernel_witness: kernel basis");
  const Mat u1 = column(*u, 0);
  if (t.x().field() != Field::Real)
    return u1 * imaginary_unit(u1.field()) * u1.adjoint();
  if (u->cols() < 2) return std::nullopt;
  const Mat u2 = column(*u, 1);
  return u1 * u2.adjoint() - u2 * u1.adjoint();
}

GroupElement local_section(const Lift& lift, const StiefelPoint& y,
                           double tol) {
  const StiefelPoint& x = lift.point();
  if (x.field() != y.field()) throw FieldMismatch("local_section");
  if (x.n() != y.n() || x.k() != y.k())
    throw ShapeMismatch("local_section: points on different manifolds");
  const Mat beta = lift.beta();
  const Mat p = lift.bottom();
  const Mat s = y.bottom() + p.adjoint();
  if (!is_invertible(s, tol, 1.0))
    throw OutsideCayleyOpen("local_section: pi + P* is singular");
  // Substituting X = -D S^{-1} and b = 1/2 S G^{-*} S^* (D = tau - beta^*,
  // S = pi + P^*) into 2 (I + M)^{-1} - I cancels every S^{-1}. Only G,
  // which stays well conditioned on Omega^x, is inverted.
  const Mat d = y.top() - beta.adjoint();
  const Mat g = Mat::identity(y.field(), y.k()) - beta * y.top() +
                p * y.bottom();
  const auto g_inv = try_inverse(g.adjoint(), tol, 1.0);
  if (!g_inv) throw InternalError("local_section: G singular inside the chart");
  const Mat dg = d * *g_inv;
  const Mat sg = s * *g_inv;
  const Mat c = block2x2(
      Mat::identity(y.field(), y.n() - y.k()) - dg * d.adjoint(),
      dg * s.adjoint(), -(sg * d.adjoint()),
      sg * s.adjoint() - Mat::identity(y.field(), y.k()));
  return GroupElement(c * lift.matrix().adjoint());
}

StiefelPoint contraction(const Lift& lift, const StiefelPoint& y, double t,
                         double tol) {
  if (!(t >= 0.0 && t <= 1.0))
    throw InvalidArgument("contraction: t must lie in [0, 1]");
  const GroupElement section = local_section(lift, y, tol);
  const Mat w = cayley_at(lift.group_element().inverse(), section.matrix(), tol);
  try {
    const Mat h = cayley_at(lift.group_element(), t * w, tol);
    return StiefelPoint(h.right_cols(lift.k()));
  } catch (const SingularMatrix& e) {
    std::ostringstream os;
    os << "contraction: c_A undefined at t = " << t << ": " << e.what();
    throw SingularMatrix(os.str());
  }
}

double lift_change_equivariance_check(const Lift& lift, const GroupElement& e,
                                      const TangentCoords& t) {
  const Lift moved = lift.right_translate(e);
  const TangentCoords moved_coords(moved, e.matrix().adjoint() * t.x(), t.y());
  const Mat d = block_diag(e.matrix().adjoint(),
                           Mat::identity(lift.field(), lift.k()));
  return frobenius_norm(gamma(moved_coords).matrix() -
                        d * gamma(t).matrix());
}

StiefelPoint random_stiefel_point(std::size_t n, std::size_t k, Field field,
                                  std::uint64_t seed) {
  if (k > n) throw DimensionError("random_stiefel_point: k > n");
  for (std::uint64_t attempt = 0; attempt < 4; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, attempt);
    if (auto q = orthonormalize_columns(random_gaussian(n, k, field, s), 1e-6))
      return StiefelPoint(*std::move(q));
  }
  throw RankDeficient("random_stiefel_point: Gaussian draw rank deficient");
}

GroupElement random_group_element(std::size_t n, Field field,
                                  std::uint64_t seed) {
  return GroupElement(random_stiefel_point(n, n, field, seed).matrix());
}

TangentCoords random_tangent(const Lift& lift, std::uint64_t seed,
                             double scale) {
  std::mt19937_64 rng(seed);
  const std::size_t k = lift.k();
  Mat x = scale * random_gaussian(lift.n() - k, k, lift.field(), rng);
  Mat y = scale * skew_hermitian_part(random_gaussian(k, k, lift.field(), rng));
  return TangentCoords(lift, std::move(x), std::move(y));
}

}  // namespace stiefel_cayley
