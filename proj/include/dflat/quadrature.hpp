#pragma once

#include <array>
#include <functional>

namespace dflat {

// Nodes and weights of the 64-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::array<double, 64> nodes;
  std::array<double, 64> weights;
};

const GaussLegendreRule& gauss_legendre_64();

// Fixed 64-node Gauss-Legendre quadrature on [a, b].
double integrate_gauss_legendre(const std::function<double(double)>& f, double a, double b);

// The 64-node rule applied on panels that are bisected until the two halves
// agree with their parent to `tolerance` relative to the first whole-interval
// estimate. Integrands the single rule integrates exactly stop at one split.
double integrate_gauss_legendre_composite(const std::function<double(double)>& f, double a,
                                          double b, double tolerance = 1e-12,
                                          int max_depth = 16);

// Adaptive Gauss-Kronrod (15-point) quadrature to the given relative tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tolerance);

}  // namespace dflat
