#pragma once

// Cover of the quaternionic Stiefel manifold X_{n,k} (n >= 2k) by the k+1
// Cayley open subsets Omega^{x_theta_i} of the frames
//   x_theta = [0; sin(theta) I_k; cos(theta) I_k].

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "stiefel_cayley/stiefel.hpp"

namespace stiefel_cayley {

/// 0 < theta_0 < theta_1 < ... < theta_k < pi/2.
class ThetaLadder {
 public:
  /// Throws InvalidArgument unless strictly increasing inside (0, pi/2).
  explicit ThetaLadder(std::vector<double> angles);

  /// theta_i = (i + 1) pi / (2 (k + 2)), i = 0..k.
  static ThetaLadder evenly_spaced(std::size_t k);

  const std::vector<double>& angles() const { return angles_; }
  std::size_t k() const { return angles_.size() - 1; }

 private:
  std::vector<double> angles_;
};

/// Throws DimensionError if n < 2k, InvalidArgument if theta is outside
/// (0, pi/2).
StiefelPoint theta_frame(std::size_t n, std::size_t k, double theta,
                         Field field);

/// Indices i with y in Omega^{x_theta_i}, i.e. pi + cos(theta_i) I_k
/// invertible, pi being the bottom block of y.
std::vector<std::size_t> cover_membership(const StiefelPoint& y,
                                          const ThetaLadder& ladder,
                                          double tol = kSingularTol);

struct CoverReport {
  std::size_t n = 0;
  std::size_t k = 0;
  Field field = Field::Quaternion;
  std::vector<double> angles;
  std::size_t samples = 0;
  std::size_t uncovered = 0;
  /// multiplicity (number of sets containing the sample) -> count
  std::map<std::size_t, std::size_t> multiplicity_histogram;
  /// Uncovered samples, capped at kMaxWitnesses.
  std::vector<Mat> witnesses;

  static constexpr std::size_t kMaxWitnesses = 16;
};

/// Samples `samples` random points of O_{n,k} (sample i drawn with
/// derive_seed(seed, i)) and tallies cover membership. The cover claim is
/// for H; R and C runs are exploratory.
CoverReport verify_cover(std::size_t n, std::size_t k, Field field,
                         const ThetaLadder& ladder, std::size_t samples,
                         std::uint64_t seed, double tol = kSingularTol);

}  // namespace stiefel_cayley
