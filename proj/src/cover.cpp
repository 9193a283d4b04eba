#include "stiefel_cayley/cover.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>

namespace stiefel_cayley {

ThetaLadder::ThetaLadder(std::vector<double> angles)
    : angles_(std::move(angles)) {
  if (angles_.empty()) throw InvalidArgument("ThetaLadder: no angles");
  for (std::size_t i = 0; i < angles_.size(); ++i) {
    const double a = angles_[i];
    if (!(a > 0.0 && a < std::numbers::pi / 2))
      throw InvalidArgument("ThetaLadder: angles must lie in (0, pi/2)");
    if (i > 0 && !(a > angles_[i - 1]))
      throw InvalidArgument("ThetaLadder: angles must increase strictly");
  }
}

ThetaLadder ThetaLadder::evenly_spaced(std::size_t k) {
  std::vector<double> angles(k + 1);
  for (std::size_t i = 0; i <= k; ++i)
    angles[i] = static_cast<double>(i + 1) * std::numbers::pi /
                (2.0 * static_cast<double>(k + 2));
  return ThetaLadder(std::move(angles));
}

StiefelPoint theta_frame(std::size_t n, std::size_t k, double theta,
                         Field field) {
  if (n < 2 * k) {
    std::ostringstream os;
    os << "theta_frame: need n >= 2k, got n = " << n << ", k = " << k;
    throw DimensionError(os.str());
  }
  if (!(theta > 0.0 && theta < std::numbers::pi / 2))
    throw InvalidArgument("theta_frame: theta must lie in (0, pi/2)");
  Mat x(field, n, k);
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  for (std::size_t i = 0; i < k; ++i) {
    x.set(n - 2 * k + i, i, Quaternion{s});
    x.set(n - k + i, i, Quaternion{c});
  }
  return StiefelPoint(std::move(x));
}

std::vector<std::size_t> cover_membership(const StiefelPoint& y,
                                          const ThetaLadder& ladder,
                                          double tol) {
  const Mat pi = y.bottom();
  const Mat id = Mat::identity(y.field(), y.k());
  std::vector<std::size_t> members;
  for (std::size_t i = 0; i < ladder.angles().size(); ++i) {
    // P_theta = cos(theta) I_k is Hermitian, so P^* = P.
    if (is_invertible(pi + std::cos(ladder.angles()[i]) * id, tol, 1.0))
      members.push_back(i);
  }
  return members;
}

CoverReport verify_cover(std::size_t n, std::size_t k, Field field,
                         const ThetaLadder& ladder, std::size_t samples,
                         std::uint64_t seed, double tol) {
  if (n < 2 * k) throw DimensionError("verify_cover: need n >= 2k");
  CoverReport report;
  report.n = n;
  report.k = k;
  report.field = field;
  report.angles = ladder.angles();
  report.samples = samples;
  for (std::size_t i = 0; i < samples; ++i) {
    const StiefelPoint y =
        random_stiefel_point(n, k, field, derive_seed(seed, i));
    const std::size_t multiplicity = cover_membership(y, ladder, tol).size();
    ++report.multiplicity_histogram[multiplicity];
    if (multiplicity == 0) {
      ++report.uncovered;
      if (report.witnesses.size() < CoverReport::kMaxWitnesses)
        report.witnesses.push_back(y.matrix());
    }
  }
  return report;
}

}  // namespace stiefel_cayley
