#pragma once

// Built-in dually flat families and reference oracles that never touch the
// potentials: entropy, KL, Bhattacharyya and Jensen-Shannon by direct
// summation over the support (discrete) or Gaussian closed forms/quadrature.
//
// Family reference table
// ----------------------
//   gaussian1d     theta = (-1/(2 s^2), m/s^2)       eta = (s^2 + m^2, m)
//   binomial:n     theta = ln(p/(1-p))               eta = n p
//   categorical:m  theta_i = ln(p_i/p_m), i < m      eta_i = p_i
//                  (the last outcome is the reference)
//   mixture        p_eta = p_0 + sum_i eta_i (p_i - p_0), phi = -H(p_eta)
//   selfdual:n     theta = eta, psi = phi = |x|^2 / 2
//
// Argument order of the canonical divergence: for every built-in exponential
// and mixture family, canonical(P, Q) = KL(p_Q || p_P).

#include <variant>
#include <vector>

#include "dflat/manifold.hpp"

namespace dflat {

struct Gaussian1dConfig {};

struct BinomialConfig {
  int trials = 1;
};

struct CategoricalConfig {
  int outcomes = 2;
};

// Rows p_0, p_1, ..., p_n over a common finite support.
struct MixtureConfig {
  std::vector<std::vector<double>> components;
};

struct SelfDualConfig {
  int dimension = 1;
};

using FamilyConfig =
    std::variant<Gaussian1dConfig, BinomialConfig, CategoricalConfig, MixtureConfig, SelfDualConfig>;

// Throws ConfigError describing the violated invariant.
FamilyDescriptor make_family(const FamilyConfig& config);

// Configuration the family was built from. Throws UnsupportedError for
// families not created by make_family.
const FamilyConfig& family_config(const FamilyDescriptor& family);

struct GaussianParams {
  double mu = 0.0;
  double sigma = 1.0;
};

struct BinomialParams {
  double p = 0.5;
};

struct CategoricalParams {
  std::vector<double> probabilities;
};

struct MixtureParams {
  std::vector<double> weights;  // eta
};

struct SelfDualParams {
  std::vector<double> values;
};

using NaturalParams =
    std::variant<GaussianParams, BinomialParams, CategoricalParams, MixtureParams, SelfDualParams>;

CoordinatePair point_from_params(const FamilyDescriptor& family, const NaturalParams& params);

// (mu, sigma) of a gaussian1d point.
GaussianParams gaussian_params(const FamilyDescriptor& family, const CoordinatePair& point);

// Probability mass over the support of a discrete family, read from eta.
std::vector<double> probabilities(const FamilyDescriptor& family, const CoordinatePair& point);

// Log density (gaussian1d) or log mass (discrete families; outcome is the
// integer support index).
double log_density(const FamilyDescriptor& family, const CoordinatePair& point, double outcome);

double reference_entropy(const FamilyDescriptor& family, const CoordinatePair& point);
double reference_kl(const FamilyDescriptor& family, const CoordinatePair& p,
                    const CoordinatePair& q);
double reference_jeffreys(const FamilyDescriptor& family, const CoordinatePair& p,
                          const CoordinatePair& q);

// -ln sum p^(1-alpha) q^alpha; Gaussian case by adaptive quadrature.
double reference_bhattacharyya(const FamilyDescriptor& family, const CoordinatePair& p,
                               const CoordinatePair& q, double alpha);

enum class JensenShannonForm { entropy, kullback_leibler };

// alpha-skew Jensen-Shannon divergence with mixture (1-alpha) p + alpha q.
// Discrete families only.
double reference_js(const FamilyDescriptor& family, const CoordinatePair& p,
                    const CoordinatePair& q, double alpha,
                    JensenShannonForm form = JensenShannonForm::entropy);

// E[d_i l d_j l] by exact summation over the support (binomial, categorical).
Matrix fisher_information_by_summation(const FamilyDescriptor& family,
                                       const CoordinatePair& point);

// Closed forms for the two worked examples.
double gaussian_affine_closed_form(const GaussianParams& p, const GaussianParams& q);
double binomial_affine_closed_form(int trials, double p, double q);

// R with theta(R) = a theta(P) + b theta(Q) (chart theta) or the eta analogue,
// expressed in (mu, sigma).
GaussianParams gaussian_combination(const GaussianParams& p, const GaussianParams& q, double a,
                                    double b, Chart chart);
// Success probability of the binomial combination. The theta chart uses
// lambda = ln(p^a q^b / ((1-p)^a (1-q)^b)), p_R = logistic(lambda).
double binomial_combination(double p, double q, double a, double b, Chart chart);

}  // namespace dflat
