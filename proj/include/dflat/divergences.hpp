#pragma once

#include <string>
#include <vector>

#include "dflat/manifold.hpp"

namespace dflat {

enum class DivergenceKind { canonical, affine, psi_skew, phi_skew, renyi, combination };

std::string to_string(DivergenceKind kind);

struct DivergenceValue {
  DivergenceKind kind;
  double value;
  std::vector<double> parameters;  // alpha, or (a, b)
  std::vector<std::string> arguments{"P", "Q"};
};

// D(P||Q) = psi(P) + phi(Q) - theta(P).eta(Q).
DivergenceValue canonical(const FamilyDescriptor& family, const CoordinatePair& p,
                          const CoordinatePair& q);

// D_A(P,Q) = (eta(Q) - eta(P)).(theta(Q) - theta(P)); symmetric.
DivergenceValue affine(const FamilyDescriptor& family, const CoordinatePair& p,
                       const CoordinatePair& q);

// <Q,R>_P, the symmetrized cross term of the two charts based at P.
double dual_inner_product(const FamilyDescriptor& family, const CoordinatePair& q,
                          const CoordinatePair& r, const CoordinatePair& base);

// (1-alpha) psi(P) + alpha psi(Q) - psi(R) with theta(R) on the theta segment.
DivergenceValue psi_divergence(const FamilyDescriptor& family, const CoordinatePair& p,
                               const CoordinatePair& q, double alpha);

// (1-alpha) phi(P) + alpha phi(Q) - phi(R) with eta(R) on the eta segment.
DivergenceValue phi_divergence(const FamilyDescriptor& family, const CoordinatePair& p,
                               const CoordinatePair& q, double alpha);

// Point R with chart(R) = a chart(P) + b chart(Q).
CoordinatePair combine(const FamilyDescriptor& family, const CoordinatePair& p,
                       const CoordinatePair& q, double a, double b, Chart chart);

struct SkewCombination {
  double divergence_sum;  // a D(P||R) + b D(Q||R), or a D(R||P) + b D(R||Q) on the eta side
  double potential_form;  // (a+b-1) phi(R) + a psi(P) + b psi(Q) - psi(R), or its dual
  CoordinatePair midpoint;
};

SkewCombination skew_combination(const FamilyDescriptor& family, const CoordinatePair& p,
                                 const CoordinatePair& q, double a, double b, Chart side);

// Renyi divergence of order alpha, (1/(1-alpha)) times the psi-divergence at
// skew 1-alpha. Exponential families only.
DivergenceValue renyi(const FamilyDescriptor& family, const CoordinatePair& p,
                      const CoordinatePair& q, double alpha);

// Rounding slack for divergences that must be nonnegative:
// 1e-12 * (1 + sum of the absolute values of the terms).
double nonnegativity_slack(double term_magnitude);

}  // namespace dflat
