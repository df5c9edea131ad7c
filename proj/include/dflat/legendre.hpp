#pragma once

#include <functional>

#include "dflat/manifold.hpp"

namespace dflat {

// A strictly convex function on an open domain, with first and second
// derivatives.
struct ConvexObjective {
  std::function<double(const Vector&)> value;
  std::function<Vector(const Vector&)> gradient;
  std::function<Matrix(const Vector&)> hessian;
  std::function<bool(const Vector&)> in_domain;
};

struct LegendreOptions {
  int max_iterations = 100;
  // Converged when |slope - grad f(x)| < gradient_tolerance * (1 + |slope|).
  double gradient_tolerance = 1e-10;
  int max_halvings = 60;
};

struct LegendreResult {
  Vector argmax;
  double value;  // slope.x - f(x) at the maximizer
  int iterations;
  double gradient_norm;
};

// Maximizes slope.x - f(x) by damped Newton. Steps are halved until the
// iterate stays inside the domain and the objective does not decrease.
// Throws ConvergenceError when the iteration budget runs out and DomainError
// when no halving brings the step back into the domain.
LegendreResult legendre_maximize(const ConvexObjective& f, const Vector& slope, Vector start,
                                 const LegendreOptions& options = {});

}  // namespace dflat
