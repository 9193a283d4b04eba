#pragma once

// Minimization on O_{n,k} by curvilinear search along the Cayley curve
//   alpha(t) = c_I(t A) x,  A = F x^* - x F^*,
// where F is the Euclidean gradient at x.

#include <cstddef>
#include <functional>
#include <string_view>
#include <vector>

#include "stiefel_cayley/stiefel.hpp"

namespace stiefel_cayley {

/// f and its Euclidean gradient in ambient coordinates, with respect to the
/// real inner product Re tr(a^* b). Both callables must be reentrant.
struct Objective {
  std::function<double(const StiefelPoint&)> value;
  std::function<Mat(const StiefelPoint&)> egrad;
};

struct SearchParams {
  double initial_step = 1.0;
  double armijo_c = 1e-4;
  double backtrack_factor = 0.5;
  std::size_t max_iters = 5000;
  double grad_tol = 1e-6;
  std::size_t max_backtracks = 40;

  /// Throws InvalidArgument on out-of-range values.
  void validate() const;
};

enum class Termination { Converged, MaxIters, LineSearchFailed };

std::string_view to_string(Termination reason);

struct IterationRecord {
  std::size_t iter = 0;
  StiefelPoint x;
  double f = 0.0;
  double gnorm = 0.0;
  /// Step that produced this iterate (0 for the starting point).
  double step = 0.0;
  std::size_t backtracks = 0;
};

struct OptimTrace {
  std::vector<IterationRecord> records;
  Termination reason = Termination::MaxIters;

  const IterationRecord& final() const { return records.back(); }
};

/// A = F x^* - x F^*.
Mat descent_skew(const StiefelPoint& x, const Mat& f);

/// alpha(t) = c_I(t A) x. Throws SingularMatrix if I + tA is singular.
StiefelPoint curve(const StiefelPoint& x, const Mat& a, double t,
                   double tol = kSingularTol);

/// ||G - x herm(x^* G)||_F for the Euclidean gradient G.
double riemannian_gradient_norm(const StiefelPoint& x, const Mat& egrad);

/// x_{j+1} = curve(x_j, A_j, tau_j), tau_j by Armijo backtracking with the
/// sufficient-decrease rule f(x_{j+1}) <= f(x_j) - c tau ||alpha'(0)||^2,
/// alpha'(0) = -2 A_j x_j. No re-orthonormalization is ever applied.
OptimTrace gradient_descent(const Objective& obj, const StiefelPoint& x0,
                            const SearchParams& params = {});

/// Lift centred at x for the intrinsic curve: A = D^* with
/// D = complete_lift(x).A, so gamma^A(0) = rho(A^*) = x.
Lift intrinsic_lift(const StiefelPoint& x);

/// Experimental retraction t -> gamma^A(t u), u given in coordinates of an
/// intrinsic_lift. Passes through x at t = 0.
StiefelPoint intrinsic_curve(const TangentCoords& u, double t,
                             double tol = kSingularTol);

/// f(x) = Re tr(x^* M x), egrad = 2 M x. Throws NotHermitian.
Objective rayleigh_objective(Mat m);

/// f(x) = ||x B - C||_F^2, egrad = 2 (x B - C) B^*.
Objective procrustes_objective(Mat b, Mat c);

}  // namespace stiefel_cayley
