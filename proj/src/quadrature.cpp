#include "dflat/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace dflat {

namespace {

GaussLegendreRule build_rule() {
  constexpr int n = 64;
  GaussLegendreRule rule{};
  for (int i = 0; i < n / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double derivative = 0.0;
    for (int iteration = 0; iteration < 100; ++iteration) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      derivative = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / derivative;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        break;
      }
    }
    const double weight = 2.0 / ((1.0 - x * x) * derivative * derivative);
    rule.nodes[i] = -x;
    rule.weights[i] = weight;
    rule.nodes[n - 1 - i] = x;
    rule.weights[n - 1 - i] = weight;
  }
  return rule;
}

}  // namespace

const GaussLegendreRule& gauss_legendre_64() {
  static const GaussLegendreRule rule = build_rule();
  return rule;
}

double integrate_gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  const GaussLegendreRule& rule = gauss_legendre_64();
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

namespace {

double refine(const std::function<double(double)>& f, double a, double b, double whole,
              double abs_tolerance, int depth) {
  const double mid = 0.5 * (a + b);
  const double left = integrate_gauss_legendre(f, a, mid);
  const double right = integrate_gauss_legendre(f, mid, b);
  const double halves = left + right;
  if (depth <= 0 || std::abs(halves - whole) <= abs_tolerance) {
    return halves;
  }
  return refine(f, a, mid, left, 0.5 * abs_tolerance, depth - 1) +
         refine(f, mid, b, right, 0.5 * abs_tolerance, depth - 1);
}

}  // namespace

double integrate_gauss_legendre_composite(const std::function<double(double)>& f, double a,
                                          double b, double tolerance, int max_depth) {
  const double whole = integrate_gauss_legendre(f, a, b);
  const double abs_tolerance = tolerance * std::max(std::abs(whole), 1e-300);
  return refine(f, a, b, whole, abs_tolerance, max_depth);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tolerance) {
  return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 20, tolerance);
}

}  // namespace dflat
