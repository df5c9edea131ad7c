#pragma once

// Randomized residual checks. Every theorem about the canonical, affine and
// potential divergences is evaluated as "left side minus right side" (or as
// the slack of an inequality) over sampled configurations of points.
//
// Check                       Identities
// --------------------------  ------------------------------------------------
// check_triangle_family       triangular relation, Pythagorean specialization,
//                             law of cosines for the affine divergence
// check_division_family       division lemma, reversed division, division
//                             theorem, collinear super-additivity (both charts)
// check_vector_sum_family     both expansion formulas, parallelogram law,
//                             polarization identity, interior-angle sum
//                             (theta- and eta-side parallelograms)
// check_inequalities_family   alpha(1-alpha) D_A >= D_psi, D_phi; generalized
//                             Lin inequalities (JS, Bhattacharyya); Renyi bound
// check_consistency_family    canonical = KL, affine = Jeffreys, psi = B,
//                             phi = JS, phi = -H, skew-combination identity
// check_geodesic_family       integral forms along geodesics, monotone profiles
// check_duality_family        Legendre duality, gradients, metric pair, Fisher
//
// Each sample draws from its own stream keyed by (seed, check name, sample
// index), so results do not depend on evaluation order.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dflat/manifold.hpp"

namespace dflat {

struct SampleConfig {
  std::uint64_t seed = 0;
  int samples = 200;
  double tol_closed = 1e-9;  // algebraic identities, relative residual
  double tol_quad = 1e-6;    // quadrature forms, relative error
};

enum class ReportKind {
  residual,  // passes when the maximum residual is within tolerance
  slack,     // passes when the minimum slack is >= -tolerance
};

struct WorstCase {
  std::uint64_t seed = 0;
  std::uint64_t sample_index = 0;
  struct NamedPoint {
    std::string name;
    Vector theta;
    Vector eta;
  };
  std::vector<NamedPoint> points;
  std::vector<std::pair<std::string, double>> parameters;
};

struct ResidualReport {
  std::string identity;
  ReportKind kind = ReportKind::residual;
  int samples = 0;
  double max_abs_residual = 0.0;
  double max_rel_residual = 0.0;
  double min_slack = 0.0;
  double tolerance = 0.0;
  bool relative = true;  // residual reports: compare the relative or the absolute maximum
  WorstCase worst_case;
  bool passed = true;

  double figure_of_merit() const;
};

std::vector<ResidualReport> check_triangle_family(const FamilyDescriptor& family,
                                                  const SampleConfig& config);
std::vector<ResidualReport> check_division_family(const FamilyDescriptor& family,
                                                  const SampleConfig& config);
std::vector<ResidualReport> check_vector_sum_family(const FamilyDescriptor& family,
                                                    const SampleConfig& config);
std::vector<ResidualReport> check_inequalities_family(const FamilyDescriptor& family,
                                                      const SampleConfig& config);
std::vector<ResidualReport> check_consistency_family(const FamilyDescriptor& family,
                                                     const SampleConfig& config);
std::vector<ResidualReport> check_geodesic_family(const FamilyDescriptor& family,
                                                  const SampleConfig& config);
std::vector<ResidualReport> check_duality_family(const FamilyDescriptor& family,
                                                 const SampleConfig& config);

// Every check above, in a fixed order.
std::vector<ResidualReport> run_all_checks(const FamilyDescriptor& family,
                                           const SampleConfig& config);

}  // namespace dflat
