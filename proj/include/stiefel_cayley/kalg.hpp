#pragma once

// Scalars and dense matrices over the three real division algebras
// R, C and H. One matrix type carries a runtime Field tag; the hot kernels
// (product, inverse, adjoint) are instantiated once per ring.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stiefel_cayley/errors.hpp"

namespace stiefel_cayley {

/// Relative pivot threshold used by every "the inverse exists" test.
inline constexpr double kSingularTol = 1e-12;

enum class Field { Real, Complex, Quaternion };

std::string_view to_string(Field field);
Field parse_field(std::string_view name);

/// Number of real components stored per entry (1, 2 or 4).
constexpr std::size_t components(Field field) {
  switch (field) {
    case Field::Real: return 1;
    case Field::Complex: return 2;
    case Field::Quaternion: return 4;
  }
  return 4;
}

/// w + x i + y j + z k, Hamilton product.
struct Quaternion {
  double w = 0.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_ = 0.0, double y_ = 0.0,
                       double z_ = 0.0)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion unit_i() { return {0.0, 1.0, 0.0, 0.0}; }
  static constexpr Quaternion unit_j() { return {0.0, 0.0, 1.0, 0.0}; }
  static constexpr Quaternion unit_k() { return {0.0, 0.0, 0.0, 1.0}; }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  /// conj(q) / |q|^2; the caller guarantees q != 0.
  constexpr Quaternion inverse() const {
    const double n2 = norm2();
    return {w / n2, -x / n2, -y / n2, -z / n2};
  }
  bool is_finite() const {
    return std::isfinite(w) && std::isfinite(x) && std::isfinite(y) &&
           std::isfinite(z);
  }

  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
  constexpr Quaternion& operator+=(const Quaternion& o) {
    w += o.w; x += o.x; y += o.y; z += o.z;
    return *this;
  }
  constexpr Quaternion& operator-=(const Quaternion& o) {
    w -= o.w; x -= o.x; y -= o.y; z -= o.z;
    return *this;
  }
  friend constexpr Quaternion operator+(Quaternion a, const Quaternion& b) {
    return a += b;
  }
  friend constexpr Quaternion operator-(Quaternion a, const Quaternion& b) {
    return a -= b;
  }
  friend constexpr Quaternion operator*(const Quaternion& a,
                                        const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
  }
  friend constexpr Quaternion operator*(double s, const Quaternion& q) {
    return {s * q.w, s * q.x, s * q.y, s * q.z};
  }
  friend constexpr Quaternion operator*(const Quaternion& q, double s) {
    return s * q;
  }
  friend constexpr bool operator==(const Quaternion&,
                                   const Quaternion&) = default;
};

/// Dense row-major matrix over the ring named by its Field tag. Entries are
/// stored as 1, 2 or 4 doubles. Values are validated (finite, inside the
/// ring) whenever they enter through a public constructor or set().
class Mat {
 public:
  /// 0x0 real matrix.
  Mat() = default;
  /// Zero matrix.
  Mat(Field field, std::size_t rows, std::size_t cols);

  static Mat zeros(Field field, std::size_t rows, std::size_t cols) {
    return Mat(field, rows, cols);
  }
  static Mat identity(Field field, std::size_t n);
  /// Row-major entries; throws InvalidArgument on non-finite values or on
  /// components outside the ring (e.g. a j part in a complex matrix).
  static Mat from_entries(Field field, std::size_t rows, std::size_t cols,
                          std::span<const Quaternion> entries);
  /// Row-major packed components, components(field) doubles per entry.
  static Mat from_components(Field field, std::size_t rows, std::size_t cols,
                             std::vector<double> data);
  /// Convenience for literals: Mat::real({{0, 1}, {-1, 0}}).
  static Mat real(std::initializer_list<std::initializer_list<double>> rows);

  Field field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  Quaternion operator()(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, const Quaternion& q);

  /// Packed real components, row-major.
  std::span<const double> components() const { return data_; }

  Mat block(std::size_t r0, std::size_t c0, std::size_t nr,
            std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Mat& b);
  Mat top_rows(std::size_t nr) const { return block(0, 0, nr, cols_); }
  Mat bottom_rows(std::size_t nr) const {
    return block(rows_ - nr, 0, nr, cols_);
  }
  Mat left_cols(std::size_t nc) const { return block(0, 0, rows_, nc); }
  Mat right_cols(std::size_t nc) const {
    return block(0, cols_ - nc, rows_, nc);
  }

  /// Conjugate transpose.
  Mat adjoint() const;

  Mat& operator+=(const Mat& o);
  Mat& operator-=(const Mat& o);
  Mat& operator*=(double s);

  friend Mat operator+(Mat a, const Mat& b) { return a += b; }
  friend Mat operator-(Mat a, const Mat& b) { return a -= b; }
  friend Mat operator-(Mat a) { return a *= -1.0; }
  friend Mat operator*(double s, Mat a) { return a *= s; }
  friend Mat operator*(Mat a, double s) { return a *= s; }
  friend Mat operator*(const Mat& a, const Mat& b);
  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  friend std::optional<Mat> try_inverse(const Mat&, double, double);
  friend Mat null_space(const Mat&, double, double);

  Field field_ = Field::Real;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Mat conj_transpose(const Mat& m);

/// [top; bottom]
Mat vstack(const Mat& top, const Mat& bottom);
/// [left, right]
Mat hstack(const Mat& left, const Mat& right);
/// [[a, b], [c, d]]
Mat block2x2(const Mat& a, const Mat& b, const Mat& c, const Mat& d);
/// diag(a, b)
Mat block_diag(const Mat& a, const Mat& b);

/// Gauss-Jordan elimination with partial pivoting on the entry norm. Every
/// elimination step multiplies rows on the left, so the result is the
/// two-sided inverse over H as well. Throws SingularMatrix when the best
/// pivot has norm < tol * max(largest entry norm of m, min_scale).
///
/// min_scale = 0 gives the purely relative rule. Callers whose matrix is a
/// sum of unit-scale blocks (pi + P^*, beta X + P) pass 1 so that a sum
/// that cancels to rounding noise is not mistaken for an invertible matrix.
Mat mat_inverse(const Mat& m, double tol = kSingularTol,
                double min_scale = 0.0);
std::optional<Mat> try_inverse(const Mat& m, double tol = kSingularTol,
                               double min_scale = 0.0);
bool is_invertible(const Mat& m, double tol = kSingularTol,
                   double min_scale = 0.0);

/// Basis (as columns) of {u : m u = 0}, u a right vector. Rank is decided
/// with the same pivot rule as mat_inverse. Columns are not orthonormalized.
Mat null_space(const Mat& m, double tol = kSingularTol,
               double min_scale = 0.0);

double frobenius_norm(const Mat& m);
double max_entry_norm(const Mat& m);
/// Re tr(a^* b), the real inner product on K^{n x k}.
double real_inner(const Mat& a, const Mat& b);
/// Re tr(m).
double real_trace(const Mat& m);

/// (m - m^*) / 2
Mat skew_hermitian_part(const Mat& m);
/// (m + m^*) / 2
Mat hermitian_part(const Mat& m);
/// ||m + m^*||_F <= rel_tol * max(1, ||m||_F)
bool is_skew_hermitian(const Mat& m, double rel_tol);
bool is_hermitian(const Mat& m, double rel_tol);

/// Every real component i.i.d. N(0, 1).
Mat random_gaussian(std::size_t rows, std::size_t cols, Field field,
                    std::uint64_t seed);
Mat random_gaussian(std::size_t rows, std::size_t cols, Field field,
                    std::mt19937_64& rng);

/// Deterministic seed derivation for independent sub-streams.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace stiefel_cayley
