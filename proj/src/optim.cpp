#include "stiefel_cayley/optim.hpp"

#include <cmath>
#include <memory>
#include <utility>

namespace stiefel_cayley {

void SearchParams::validate() const {
  if (!(initial_step > 0.0))
    throw InvalidArgument("SearchParams: initial_step must be positive");
  if (!(armijo_c > 0.0 && armijo_c < 1.0))
    throw InvalidArgument("SearchParams: armijo_c must lie in (0, 1)");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
    throw InvalidArgument("SearchParams: backtrack_factor must lie in (0, 1)");
  if (!(grad_tol >= 0.0))
    throw InvalidArgument("SearchParams: grad_tol must be non-negative");
}

std::string_view to_string(Termination reason) {
  switch (reason) {
    case Termination::Converged: return "converged";
    case Termination::MaxIters: return "max_iters";
    case Termination::LineSearchFailed: return "linesearch_failed";
  }
  return "max_iters";
}

Mat descent_skew(const StiefelPoint& x, const Mat& f) {
  const Mat& xm = x.matrix();
  if (f.field() != xm.field()) throw FieldMismatch("descent_skew");
  if (f.rows() != xm.rows() || f.cols() != xm.cols())
    throw ShapeMismatch("descent_skew: F must be n x k");
  return f * xm.adjoint() - xm * f.adjoint();
}

StiefelPoint curve(const StiefelPoint& x, const Mat& a, double t, double tol) {
  if (!is_skew_hermitian(a, kTangentTol))
    throw InvalidTangent("curve: A is not skew-Hermitian");
  return StiefelPoint(cayley_at_identity(t * a, tol) * x.matrix());
}

double riemannian_gradient_norm(const StiefelPoint& x, const Mat& egrad) {
  const Mat& xm = x.matrix();
  return frobenius_norm(egrad - xm * hermitian_part(xm.adjoint() * egrad));
}

OptimTrace gradient_descent(const Objective& obj, const StiefelPoint& x0,
                            const SearchParams& params) {
  params.validate();
  OptimTrace trace;
  StiefelPoint x = x0;
  double f = obj.value(x);
  Mat g = obj.egrad(x);
  double gnorm = riemannian_gradient_norm(x, g);
  trace.records.push_back({0, x, f, gnorm, 0.0, 0});

  for (std::size_t iter = 1;; ++iter) {
    if (gnorm <= params.grad_tol) {
      trace.reason = Termination::Converged;
      return trace;
    }
    if (iter > params.max_iters) {
      trace.reason = Termination::MaxIters;
      return trace;
    }
    const Mat a = descent_skew(x, g);
    const Mat slope = -2.0 * a * x.matrix();
    const double slope2 = real_inner(slope, slope);

    double tau = params.initial_step;
    bool accepted = false;
    std::size_t backtracks = 0;
    for (; backtracks <= params.max_backtracks; ++backtracks) {
      try {
        StiefelPoint candidate = curve(x, a, tau);
        const double f_new = obj.value(candidate);
        if (f_new <= f - params.armijo_c * tau * slope2) {
          x = std::move(candidate);
          f = f_new;
          accepted = true;
          break;
        }
      } catch (const SingularMatrix&) {
        // I + tau A singular; a shorter step moves back into Omega(I).
      }
      tau *= params.backtrack_factor;
    }
    if (!accepted) {
      trace.reason = Termination::LineSearchFailed;
      return trace;
    }
    g = obj.egrad(x);
    gnorm = riemannian_gradient_norm(x, g);
    trace.records.push_back({iter, x, f, gnorm, tau, backtracks});
  }
}

Lift intrinsic_lift(const StiefelPoint& x) {
  const Lift d = complete_lift(x);
  return Lift(d.group_element().inverse(), x.k());
}

StiefelPoint intrinsic_curve(const TangentCoords& u, double t, double tol) {
  return gamma(u.scaled(t), tol);
}

Objective rayleigh_objective(Mat m) {
  if (!m.is_square()) throw ShapeMismatch("rayleigh_objective: M not square");
  if (!is_hermitian(m, kTangentTol))
    throw NotHermitian("rayleigh_objective: M != M*");
  auto shared = std::make_shared<const Mat>(std::move(m));
  Objective obj;
  obj.value = [shared](const StiefelPoint& x) {
    return real_trace(x.matrix().adjoint() * (*shared * x.matrix()));
  };
  obj.egrad = [shared](const StiefelPoint& x) {
    return 2.0 * (*shared * x.matrix());
  };
  return obj;
}

Objective procrustes_objective(Mat b, Mat c) {
  if (b.field() != c.field()) throw FieldMismatch("procrustes_objective");
  if (b.cols() != c.cols())
    throw ShapeMismatch("procrustes_objective: B is k x m, C is n x m");
  auto sb = std::make_shared<const Mat>(std::move(b));
  auto sc = std::make_shared<const Mat>(std::move(c));
  Objective obj;
  obj.value = [sb, sc](const StiefelPoint& x) {
    const Mat r = x.matrix() * *sb - *sc;
    return real_inner(r, r);
  };
  obj.egrad = [sb, sc](const StiefelPoint& x) {
    return 2.0 * ((x.matrix() * *sb - *sc) * sb->adjoint());
  };
  return obj;
}

}  // namespace stiefel_cayley
