#include "dflat/legendre.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace dflat {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

Vector newton_direction(const Matrix& hessian, const Vector& residual) {
  Eigen::LLT<Matrix> llt(hessian);
  if (llt.info() == Eigen::Success) {
    return llt.solve(residual);
  }
  // Hessian lost definiteness to rounding; fall back to a pivoted solve.
  return hessian.fullPivLu().solve(residual);
}

}  // namespace

LegendreResult legendre_maximize(const ConvexObjective& f, const Vector& slope, Vector x,
                                 const LegendreOptions& options) {
  if (!f.in_domain(x)) {
    throw DomainError("legendre_maximize: starting point outside the domain");
  }
  const double scale = 1.0 + slope.norm();
  const double tolerance = options.gradient_tolerance * scale;

  double objective = slope.dot(x) - f.value(x);
  Vector residual = slope - f.gradient(x);
  double residual_norm = residual.norm();

  for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
    if (!std::isfinite(residual_norm)) {
      throw ConvergenceError("legendre_maximize: non-finite gradient");
    }
    if (residual_norm < tolerance) {
      // One polishing step; kept only if it does not make things worse.
      const Vector polished = x + newton_direction(f.hessian(x), residual);
      if (f.in_domain(polished)) {
        const Vector polished_residual = slope - f.gradient(polished);
        if (polished_residual.norm() < residual_norm) {
          x = polished;
          residual_norm = polished_residual.norm();
          objective = slope.dot(x) - f.value(x);
        }
      }
      return {x, objective, iteration, residual_norm};
    }

    const Vector step = newton_direction(f.hessian(x), residual);
    double damping = 1.0;
    bool accepted = false;
    bool stayed_in_domain = false;
    for (int halving = 0; halving <= options.max_halvings; ++halving, damping *= 0.5) {
      const Vector candidate = x + damping * step;
      if (!f.in_domain(candidate)) {
        continue;
      }
      stayed_in_domain = true;
      const double candidate_objective = slope.dot(candidate) - f.value(candidate);
      const Vector candidate_residual = slope - f.gradient(candidate);
      const double candidate_norm = candidate_residual.norm();
      // Near the optimum the objective gain drops below rounding, so a
      // shrinking gradient also counts as progress.
      const double slack = 8.0 * kEps * (1.0 + std::abs(objective));
      if (candidate_objective >= objective - slack ||
          (candidate_norm < residual_norm && candidate_objective >= objective - 1e3 * slack)) {
        x = candidate;
        objective = candidate_objective;
        residual = candidate_residual;
        residual_norm = candidate_norm;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!stayed_in_domain) {
        throw DomainError("legendre_maximize: every damped step left the domain");
      }
      throw ConvergenceError("legendre_maximize: line search stalled at gradient norm " +
                             std::to_string(residual_norm));
    }
  }
  if (residual_norm < tolerance) {
    return {x, objective, options.max_iterations, residual_norm};
  }
  throw ConvergenceError("legendre_maximize: no convergence after " +
                         std::to_string(options.max_iterations) + " Newton steps");
}

}  // namespace dflat
