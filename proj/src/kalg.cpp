#include "stiefel_cayley/kalg.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

namespace stiefel_cayley {

namespace {

// Per-ring scalar views over the packed storage. Each Ring provides
// load/store, conj, norm2, inv and the product; the kernels below are
// written once against this interface.

struct RealRing {
  using S = double;
  static constexpr std::size_t kComps = 1;
  static S load(const double* p) { return p[0]; }
  static void store(double* p, S s) { p[0] = s; }
  static S conj(S s) { return s; }
  static double norm2(S s) { return s * s; }
  static S inv(S s) { return 1.0 / s; }
  static S mul(S a, S b) { return a * b; }
  static S zero() { return 0.0; }
  static S one() { return 1.0; }
};

struct Cplx {
  double re = 0.0;
  double im = 0.0;
};

struct ComplexRing {
  using S = Cplx;
  static constexpr std::size_t kComps = 2;
  static S load(const double* p) { return {p[0], p[1]}; }
  static void store(double* p, S s) {
    p[0] = s.re;
    p[1] = s.im;
  }
  static S conj(S s) { return {s.re, -s.im}; }
  static double norm2(S s) { return s.re * s.re + s.im * s.im; }
  static S inv(S s) {
    const double n2 = norm2(s);
    return {s.re / n2, -s.im / n2};
  }
  static S mul(S a, S b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  static S zero() { return {}; }
  static S one() { return {1.0, 0.0}; }
};

struct QuatRing {
  using S = Quaternion;
  static constexpr std::size_t kComps = 4;
  static S load(const double* p) { return {p[0], p[1], p[2], p[3]}; }
  static void store(double* p, const S& s) {
    p[0] = s.w;
    p[1] = s.x;
    p[2] = s.y;
    p[3] = s.z;
  }
  static S conj(const S& s) { return s.conj(); }
  static double norm2(const S& s) { return s.norm2(); }
  static S inv(const S& s) { return s.inverse(); }
  static S mul(const S& a, const S& b) { return a * b; }
  static S zero() { return {}; }
  static S one() { return {1.0}; }
};

Cplx operator+(Cplx a, Cplx b) { return {a.re + b.re, a.im + b.im}; }
Cplx operator-(Cplx a, Cplx b) { return {a.re - b.re, a.im - b.im}; }

template <class F>
decltype(auto) dispatch(Field field, F&& f) {
  switch (field) {
    case Field::Real: return f(RealRing{});
    case Field::Complex: return f(ComplexRing{});
    case Field::Quaternion: break;
  }
  return f(QuatRing{});
}

void require_same_field(const Mat& a, const Mat& b, const char* op) {
  if (a.field() != b.field()) {
    std::ostringstream os;
    os << op << ": mixed rings " << to_string(a.field()) << " and "
       << to_string(b.field());
    throw FieldMismatch(os.str());
  }
}

void require_same_shape(const Mat& a, const Mat& b, const char* op) {
  require_same_field(a, b, op);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream os;
    os << op << ": shapes " << a.rows() << "x" << a.cols() << " and "
       << b.rows() << "x" << b.cols() << " differ";
    throw ShapeMismatch(os.str());
  }
}

void require_square(const Mat& m, const char* op) {
  if (!m.is_square()) {
    std::ostringstream os;
    os << op << ": matrix is " << m.rows() << "x" << m.cols()
       << ", expected square";
    throw ShapeMismatch(os.str());
  }
}

bool entry_in_ring(Field field, const Quaternion& q) {
  if (!q.is_finite()) return false;
  switch (field) {
    case Field::Real: return q.x == 0.0 && q.y == 0.0 && q.z == 0.0;
    case Field::Complex: return q.y == 0.0 && q.z == 0.0;
    case Field::Quaternion: return true;
  }
  return false;
}

// Row-reduces `work` (rows x cols, packed in ring R) in place with left row
// operations and partial pivoting. Columns [0, pivot_cols) are eligible as
// pivot columns; the remaining columns ride along (augmented part). Returns
// the pivot column chosen for each pivot row, stopping early in
// `stop_on_singular` mode at the first column without an acceptable pivot.
template <class R>
std::optional<std::vector<std::size_t>> gauss_jordan(
    std::vector<double>& work, std::size_t rows, std::size_t cols,
    std::size_t pivot_cols, double threshold, bool stop_on_singular) {
  using S = typename R::S;
  constexpr std::size_t kc = R::kComps;
  auto at = [&](std::size_t r, std::size_t c) {
    return work.data() + (r * cols + c) * kc;
  };
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < pivot_cols && row < rows; ++col) {
    std::size_t best = row;
    double best_norm2 = -1.0;
    for (std::size_t r = row; r < rows; ++r) {
      const double n2 = R::norm2(R::load(at(r, col)));
      if (n2 > best_norm2) {
        best_norm2 = n2;
        best = r;
      }
    }
    if (!(std::sqrt(best_norm2) >= threshold) || best_norm2 == 0.0) {
      if (stop_on_singular) return std::nullopt;
      continue;
    }
    if (best != row) {
      for (std::size_t c = 0; c < cols * kc; ++c)
        std::swap(work[row * cols * kc + c], work[best * cols * kc + c]);
    }
    const S pinv = R::inv(R::load(at(row, col)));
    for (std::size_t c = 0; c < cols; ++c)
      R::store(at(row, c), R::mul(pinv, R::load(at(row, c))));
    R::store(at(row, col), R::one());
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == row) continue;
      const S factor = R::load(at(r, col));
      if (R::norm2(factor) == 0.0) continue;
      for (std::size_t c = 0; c < cols; ++c) {
        R::store(at(r, c),
                 R::load(at(r, c)) - R::mul(factor, R::load(at(row, c))));
      }
      R::store(at(r, col), R::zero());
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

template <class R>
std::optional<Mat> invert_impl(Field field, std::span<const double> data,
                               std::size_t n, double threshold) {
  constexpr std::size_t kc = R::kComps;
  const std::size_t cols = 2 * n;
  std::vector<double> work(n * cols * kc, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy_n(data.data() + r * n * kc, n * kc,
                work.data() + r * cols * kc);
    R::store(work.data() + (r * cols + n + r) * kc, R::one());
  }
  if (!gauss_jordan<R>(work, n, cols, n, threshold, true)) return std::nullopt;
  std::vector<double> out(n * n * kc);
  for (std::size_t r = 0; r < n; ++r) {
    std::copy_n(work.data() + (r * cols + n) * kc, n * kc,
                out.data() + r * n * kc);
  }
  return Mat::from_components(field, n, n, std::move(out));
}

template <class R>
void multiply_impl(const double* a, const double* b, double* out,
                   std::size_t m, std::size_t inner, std::size_t n) {
  constexpr std::size_t kc = R::kComps;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t p = 0; p < inner; ++p) {
      const auto aip = R::load(a + (i * inner + p) * kc);
      if (R::norm2(aip) == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        double* o = out + (i * n + j) * kc;
        R::store(o, R::load(o) + R::mul(aip, R::load(b + (p * n + j) * kc)));
      }
    }
  }
}

}  // namespace

std::string_view to_string(Field field) {
  switch (field) {
    case Field::Real: return "real";
    case Field::Complex: return "complex";
    case Field::Quaternion: return "quaternion";
  }
  return "quaternion";
}

Field parse_field(std::string_view name) {
  if (name == "real") return Field::Real;
  if (name == "complex") return Field::Complex;
  if (name == "quaternion") return Field::Quaternion;
  throw InvalidArgument("unknown field '" + std::string(name) +
                        "' (expected real|complex|quaternion)");
}

Mat::Mat(Field field, std::size_t rows, std::size_t cols)
    : field_(field),
      rows_(rows),
      cols_(cols),
      data_(rows * cols * stiefel_cayley::components(field), 0.0) {}

Mat Mat::identity(Field field, std::size_t n) {
  Mat m(field, n, n);
  const std::size_t kc = stiefel_cayley::components(field);
  for (std::size_t i = 0; i < n; ++i) m.data_[(i * n + i) * kc] = 1.0;
  return m;
}

Mat Mat::from_entries(Field field, std::size_t rows, std::size_t cols,
                      std::span<const Quaternion> entries) {
  if (entries.size() != rows * cols)
    throw ShapeMismatch("from_entries: entry count does not match shape");
  Mat m(field, rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, entries[r * cols + c]);
  return m;
}

Mat Mat::from_components(Field field, std::size_t rows, std::size_t cols,
                         std::vector<double> data) {
  if (data.size() != rows * cols * stiefel_cayley::components(field))
    throw ShapeMismatch("from_components: component count does not match");
  for (double d : data)
    if (!std::isfinite(d))
      throw InvalidArgument("matrix entries must be finite");
  Mat m;
  m.field_ = field;
  m.rows_ = rows;
  m.cols_ = cols;
  m.data_ = std::move(data);
  return m;
}

Mat Mat::real(std::initializer_list<std::initializer_list<double>> rows) {
  const std::size_t nr = rows.size();
  const std::size_t nc = nr == 0 ? 0 : rows.begin()->size();
  std::vector<double> data;
  data.reserve(nr * nc);
  for (const auto& row : rows) {
    if (row.size() != nc) throw ShapeMismatch("ragged matrix literal");
    data.insert(data.end(), row.begin(), row.end());
  }
  return from_components(Field::Real, nr, nc, std::move(data));
}

Quaternion Mat::operator()(std::size_t r, std::size_t c) const {
  const std::size_t kc = stiefel_cayley::components(field_);
  const double* p = data_.data() + (r * cols_ + c) * kc;
  switch (field_) {
    case Field::Real: return {p[0]};
    case Field::Complex: return {p[0], p[1]};
    case Field::Quaternion: break;
  }
  return {p[0], p[1], p[2], p[3]};
}

void Mat::set(std::size_t r, std::size_t c, const Quaternion& q) {
  if (r >= rows_ || c >= cols_) throw ShapeMismatch("set: index out of range");
  if (!entry_in_ring(field_, q)) {
    throw InvalidArgument("set: entry is not a finite " +
                          std::string(to_string(field_)) + " scalar");
  }
  const std::size_t kc = stiefel_cayley::components(field_);
  double* p = data_.data() + (r * cols_ + c) * kc;
  const double comps[4] = {q.w, q.x, q.y, q.z};
  std::copy_n(comps, kc, p);
}

Mat Mat::block(std::size_t r0, std::size_t c0, std::size_t nr,
               std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_)
    throw ShapeMismatch("block: range exceeds matrix");
  const std::size_t kc = stiefel_cayley::components(field_);
  Mat out(field_, nr, nc);
  for (std::size_t r = 0; r < nr; ++r) {
    std::copy_n(data_.data() + ((r0 + r) * cols_ + c0) * kc, nc * kc,
                out.data_.data() + r * nc * kc);
  }
  return out;
}

void Mat::set_block(std::size_t r0, std::size_t c0, const Mat& b) {
  require_same_field(*this, b, "set_block");
  if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_)
    throw ShapeMismatch("set_block: range exceeds matrix");
  const std::size_t kc = stiefel_cayley::components(field_);
  for (std::size_t r = 0; r < b.rows_; ++r) {
    std::copy_n(b.data_.data() + r * b.cols_ * kc, b.cols_ * kc,
                data_.data() + ((r0 + r) * cols_ + c0) * kc);
  }
}

Mat Mat::adjoint() const {
  return dispatch(field_, [&]<class R>(R) {
    constexpr std::size_t kc = R::kComps;
    Mat out(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        R::store(out.data_.data() + (c * rows_ + r) * kc,
                 R::conj(R::load(data_.data() + (r * cols_ + c) * kc)));
    return out;
  });
}

Mat& Mat::operator+=(const Mat& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

Mat& Mat::operator-=(const Mat& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

Mat& Mat::operator*=(double s) {
  for (double& d : data_) d *= s;
  return *this;
}

Mat operator*(const Mat& a, const Mat& b) {
  require_same_field(a, b, "operator*");
  if (a.cols_ != b.rows_) {
    std::ostringstream os;
    os << "operator*: cannot multiply " << a.rows_ << "x" << a.cols_ << " by "
       << b.rows_ << "x" << b.cols_;
    throw ShapeMismatch(os.str());
  }
  Mat out(a.field_, a.rows_, b.cols_);
  dispatch(a.field_, [&]<class R>(R) {
    multiply_impl<R>(a.data_.data(), b.data_.data(), out.data_.data(),
                     a.rows_, a.cols_, b.cols_);
  });
  return out;
}

Mat conj_transpose(const Mat& m) { return m.adjoint(); }

Mat vstack(const Mat& top, const Mat& bottom) {
  require_same_field(top, bottom, "vstack");
  if (top.cols() != bottom.cols())
    throw ShapeMismatch("vstack: column counts differ");
  Mat out(top.field(), top.rows() + bottom.rows(), top.cols());
  out.set_block(0, 0, top);
  out.set_block(top.rows(), 0, bottom);
  return out;
}

Mat hstack(const Mat& left, const Mat& right) {
  require_same_field(left, right, "hstack");
  if (left.rows() != right.rows())
    throw ShapeMismatch("hstack: row counts differ");
  Mat out(left.field(), left.rows(), left.cols() + right.cols());
  out.set_block(0, 0, left);
  out.set_block(0, left.cols(), right);
  return out;
}

Mat block2x2(const Mat& a, const Mat& b, const Mat& c, const Mat& d) {
  return vstack(hstack(a, b), hstack(c, d));
}

Mat block_diag(const Mat& a, const Mat& b) {
  require_same_field(a, b, "block_diag");
  Mat out(a.field(), a.rows() + b.rows(), a.cols() + b.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), a.cols(), b);
  return out;
}

std::optional<Mat> try_inverse(const Mat& m, double tol, double min_scale) {
  require_square(m, "mat_inverse");
  const std::size_t n = m.rows();
  if (n == 0) return m;
  const double scale = std::max(max_entry_norm(m), min_scale);
  if (scale == 0.0) return std::nullopt;
  return dispatch(m.field_, [&]<class R>(R) {
    return invert_impl<R>(m.field_, m.data_, n, tol * scale);
  });
}

Mat mat_inverse(const Mat& m, double tol, double min_scale) {
  auto inv = try_inverse(m, tol, min_scale);
  if (!inv) {
    std::ostringstream os;
    os << "matrix (" << m.rows() << "x" << m.cols() << ", "
       << to_string(m.field()) << ") is singular at relative tolerance "
       << tol;
    throw SingularMatrix(os.str());
  }
  return *std::move(inv);
}

bool is_invertible(const Mat& m, double tol, double min_scale) {
  return try_inverse(m, tol, min_scale).has_value();
}

Mat null_space(const Mat& m, double tol, double min_scale) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  const double scale = std::max(max_entry_norm(m), min_scale);
  std::vector<double> work = m.data_;
  std::vector<std::size_t> pivots;
  if (scale > 0.0 && rows > 0) {
    pivots = *dispatch(m.field_, [&]<class R>(R) {
      return gauss_jordan<R>(work, rows, cols, cols, tol * scale, false);
    });
  }
  // A column skipped during elimination still carries sub-threshold residue
  // below the current pivot row; it is treated as exactly zero.
  const Mat reduced = Mat::from_components(m.field_, rows, cols, work);
  std::vector<std::size_t> free_cols;
  for (std::size_t c = 0, p = 0; c < cols; ++c) {
    if (p < pivots.size() && pivots[p] == c) {
      ++p;
    } else {
      free_cols.push_back(c);
    }
  }
  Mat basis(m.field_, cols, free_cols.size());
  for (std::size_t f = 0; f < free_cols.size(); ++f) {
    basis.set(free_cols[f], f, Quaternion{1.0});
    for (std::size_t p = 0; p < pivots.size(); ++p)
      basis.set(pivots[p], f, -reduced(p, free_cols[f]));
  }
  return basis;
}

double frobenius_norm(const Mat& m) {
  double s = 0.0;
  for (double d : m.components()) s += d * d;
  return std::sqrt(s);
}

double max_entry_norm(const Mat& m) {
  double best = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      best = std::max(best, m(r, c).norm2());
  return std::sqrt(best);
}

double real_inner(const Mat& a, const Mat& b) {
  require_same_shape(a, b, "real_inner");
  // Re(conj(p) q) is the Euclidean dot product of the components.
  double s = 0.0;
  const auto ca = a.components();
  const auto cb = b.components();
  for (std::size_t i = 0; i < ca.size(); ++i) s += ca[i] * cb[i];
  return s;
}

double real_trace(const Mat& m) {
  require_square(m, "real_trace");
  double s = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i).w;
  return s;
}

Mat skew_hermitian_part(const Mat& m) {
  require_square(m, "skew_hermitian_part");
  return 0.5 * (m - m.adjoint());
}

Mat hermitian_part(const Mat& m) {
  require_square(m, "hermitian_part");
  return 0.5 * (m + m.adjoint());
}

bool is_skew_hermitian(const Mat& m, double rel_tol) {
  if (!m.is_square()) return false;
  return frobenius_norm(m + m.adjoint()) <=
         rel_tol * std::max(1.0, frobenius_norm(m));
}

bool is_hermitian(const Mat& m, double rel_tol) {
  if (!m.is_square()) return false;
  return frobenius_norm(m - m.adjoint()) <=
         rel_tol * std::max(1.0, frobenius_norm(m));
}

Mat random_gaussian(std::size_t rows, std::size_t cols, Field field,
                    std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> data(rows * cols * components(field));
  for (double& d : data) d = normal(rng);
  return Mat::from_components(field, rows, cols, std::move(data));
}

Mat random_gaussian(std::size_t rows, std::size_t cols, Field field,
                    std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_gaussian(rows, cols, field, rng);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finalizer over the combined value
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace stiefel_cayley
