#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "dflat/divergences.hpp"
#include "dflat/families.hpp"
#include "dflat/sampling.hpp"

using namespace dflat;

namespace {

FamilyDescriptor gaussian() { return make_family(Gaussian1dConfig{}); }
FamilyDescriptor two_point_mixture() { return make_family(MixtureConfig{{{0.5, 0.5}, {0.9, 0.1}}}); }

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) h -= x * std::log(x);
  return h;
}

// Closed-form alpha-skew Bhattacharyya distance between two normals.
double gaussian_bhattacharyya_oracle(double mu1, double s1, double mu2, double s2, double alpha) {
  const double v1 = s1 * s1;
  const double v2 = s2 * s2;
  const double mixed = (1.0 - alpha) * v2 + alpha * v1;
  const double dm = mu1 - mu2;
  return 0.5 * std::log(mixed / (std::pow(v1, alpha) * std::pow(v2, 1.0 - alpha))) +
         alpha * (1.0 - alpha) * dm * dm / (2.0 * mixed);
}

}  // namespace

TEST(MakeFamily, Dimensions) {
  EXPECT_EQ(gaussian().dimension(), 2);
  EXPECT_EQ(two_point_mixture().dimension(), 1);
  EXPECT_EQ(make_family(BinomialConfig{10}).dimension(), 1);
  EXPECT_EQ(make_family(CategoricalConfig{4}).dimension(), 3);
  EXPECT_EQ(make_family(SelfDualConfig{3}).dimension(), 3);
}

TEST(MakeFamily, RejectsBadConfigs) {
  EXPECT_THROW(make_family(BinomialConfig{0}), ConfigError);
  EXPECT_THROW(make_family(CategoricalConfig{1}), ConfigError);
  EXPECT_THROW(make_family(SelfDualConfig{0}), ConfigError);
  EXPECT_THROW(make_family(MixtureConfig{{{0.5, 0.5}}}), ConfigError);
  EXPECT_THROW(make_family(MixtureConfig{{{0.5, 0.5}, {0.9, 0.2}}}), ConfigError);
  EXPECT_THROW(make_family(MixtureConfig{{{0.5, 0.5}, {0.9, 0.1, 0.0}}}), ConfigError);
  EXPECT_THROW(make_family(MixtureConfig{{{0.5, 0.5}, {0.5, 0.5}}}), ConfigError);
}

TEST(MakeFamily, ConfigRoundTrip) {
  const FamilyDescriptor family = make_family(BinomialConfig{7});
  EXPECT_EQ(std::get<BinomialConfig>(family_config(family)).trials, 7);
}

TEST(PointFromParams, Gaussian) {
  const CoordinatePair p = point_from_params(gaussian(), GaussianParams{1.0, 2.0});
  EXPECT_NEAR(p.theta()[0], -0.125, 1e-15);
  EXPECT_NEAR(p.theta()[1], 0.25, 1e-15);
  EXPECT_NEAR(p.eta()[0], 5.0, 1e-15);
  EXPECT_NEAR(p.eta()[1], 1.0, 1e-15);
  const GaussianParams back = gaussian_params(gaussian(), p);
  EXPECT_NEAR(back.mu, 1.0, 1e-14);
  EXPECT_NEAR(back.sigma, 2.0, 1e-14);
}

TEST(PointFromParams, Binomial) {
  const CoordinatePair p = point_from_params(make_family(BinomialConfig{10}), BinomialParams{0.5});
  EXPECT_NEAR(p.theta()[0], 0.0, 1e-15);
  EXPECT_NEAR(p.eta()[0], 5.0, 1e-15);
}

TEST(PointFromParams, MixtureAtFirstComponent) {
  const CoordinatePair p = point_from_params(two_point_mixture(), MixtureParams{{0.0}});
  EXPECT_NEAR(p.theta()[0], 0.0, 1e-15);
}

TEST(PointFromParams, RejectsOutOfDomain) {
  EXPECT_THROW(point_from_params(gaussian(), GaussianParams{0.0, -1.0}), DomainError);
  EXPECT_THROW(point_from_params(make_family(BinomialConfig{1}), BinomialParams{1.0}),
               DomainError);
  EXPECT_THROW(point_from_params(make_family(CategoricalConfig{3}),
                                 CategoricalParams{{0.5, 0.6, -0.1}}),
               DomainError);
  EXPECT_THROW(point_from_params(two_point_mixture(), MixtureParams{{1.5}}), DomainError);
  EXPECT_THROW(point_from_params(gaussian(), BinomialParams{0.5}), DomainError);
}

TEST(LogDensity, Examples) {
  const FamilyDescriptor bern = make_family(BinomialConfig{1});
  EXPECT_NEAR(log_density(bern, point_from_params(bern, BinomialParams{0.8}), 1.0),
              std::log(0.8), 1e-14);
  EXPECT_NEAR(log_density(gaussian(), point_from_params(gaussian(), GaussianParams{0.0, 1.0}), 0.0),
              -0.9189385332046727, 1e-14);
  const FamilyDescriptor mix = two_point_mixture();
  EXPECT_NEAR(log_density(mix, point_from_params(mix, MixtureParams{{0.5}}), 0.0),
              -0.35667494393873238, 1e-14);
}

TEST(LogDensity, RejectsOutcomeOffSupport) {
  const FamilyDescriptor bern = make_family(BinomialConfig{1});
  const CoordinatePair p = point_from_params(bern, BinomialParams{0.3});
  EXPECT_THROW(log_density(bern, p, 2.0), DomainError);
  EXPECT_THROW(log_density(bern, p, 0.5), DomainError);
}

TEST(ReferenceEntropy, Examples) {
  const FamilyDescriptor mix = two_point_mixture();
  EXPECT_NEAR(reference_entropy(mix, point_from_params(mix, MixtureParams{{0.5}})),
              0.6108643020548935, 1e-14);
  EXPECT_NEAR(reference_entropy(gaussian(), point_from_params(gaussian(), GaussianParams{0.0, 1.0})),
              1.4189385332046727, 1e-14);
  const FamilyDescriptor cat = make_family(CategoricalConfig{4});
  EXPECT_NEAR(reference_entropy(cat, point_from_params(cat, CategoricalParams{{0.25, 0.25, 0.25, 0.25}})),
              std::log(4.0), 1e-14);
}

TEST(ReferenceKl, Examples) {
  const FamilyDescriptor g = gaussian();
  const CoordinatePair p = point_from_params(g, GaussianParams{0.0, 1.0});
  const CoordinatePair q = point_from_params(g, GaussianParams{1.0, 2.0});
  EXPECT_NEAR(reference_kl(g, p, q), std::log(2.0) + 2.0 / 8.0 - 0.5, 1e-14);
  EXPECT_NEAR(reference_kl(g, q, p), -std::log(2.0) + 2.5 - 0.5, 1e-14);
  EXPECT_EQ(reference_kl(g, p, p), 0.0);

  const FamilyDescriptor mix = two_point_mixture();
  const CoordinatePair m0 = point_from_params(mix, MixtureParams{{0.0}});
  const CoordinatePair m1 = point_from_params(mix, MixtureParams{{1.0}});
  EXPECT_NEAR(reference_kl(mix, m0, m1), 0.5108256237659907, 1e-14);
  EXPECT_NEAR(reference_jeffreys(mix, m0, m1), 0.8788898309344878, 1e-13);
}

TEST(ReferenceBhattacharyya, Examples) {
  const FamilyDescriptor bern = make_family(BinomialConfig{1});
  const CoordinatePair p = point_from_params(bern, BinomialParams{0.2});
  const CoordinatePair q = point_from_params(bern, BinomialParams{0.8});
  EXPECT_NEAR(reference_bhattacharyya(bern, p, q, 0.5), -std::log(0.8), 1e-14);
  EXPECT_NEAR(reference_bhattacharyya(bern, p, p, 0.3), 0.0, 1e-15);

  const FamilyDescriptor cat = make_family(CategoricalConfig{2});
  const CoordinatePair c1 = point_from_params(cat, CategoricalParams{{0.5, 0.5}});
  const CoordinatePair c2 = point_from_params(cat, CategoricalParams{{0.9, 0.1}});
  const double oracle = -std::log(std::sqrt(0.45) + std::sqrt(0.05));
  EXPECT_NEAR(reference_bhattacharyya(cat, c1, c2, 0.5), oracle, 1e-14);
  EXPECT_NEAR(oracle, 0.11157177565710488, 1e-15);
}

TEST(ReferenceBhattacharyya, GaussianQuadratureMatchesClosedForm) {
  const FamilyDescriptor g = gaussian();
  const CoordinatePair p = point_from_params(g, GaussianParams{0.0, 1.0});
  const CoordinatePair q = point_from_params(g, GaussianParams{1.0, 2.0});
  const double oracle = gaussian_bhattacharyya_oracle(0.0, 1.0, 1.0, 2.0, 0.3);
  EXPECT_NEAR(oracle, 0.114368997095524048, 1e-15);
  EXPECT_NEAR(reference_bhattacharyya(g, p, q, 0.3), oracle, 1e-9);
}

TEST(ReferenceJs, MixtureExample) {
  const FamilyDescriptor mix = two_point_mixture();
  const CoordinatePair m0 = point_from_params(mix, MixtureParams{{0.0}});
  const CoordinatePair m1 = point_from_params(mix, MixtureParams{{1.0}});
  const double oracle =
      entropy_of({0.7, 0.3}) - 0.5 * entropy_of({0.5, 0.5}) - 0.5 * entropy_of({0.9, 0.1});
  EXPECT_NEAR(oracle, 0.10174922507919669, 1e-15);
  EXPECT_NEAR(reference_js(mix, m0, m1, 0.5), oracle, 1e-14);
  EXPECT_NEAR(reference_js(mix, m0, m1, 0.5, JensenShannonForm::kullback_leibler), oracle, 1e-14);
  EXPECT_NEAR(reference_js(mix, m0, m0, 0.3), 0.0, 1e-15);
}

TEST(ReferenceJs, FormsAgreeOnDiscreteFamilies) {
  for (const FamilyConfig& config :
       {FamilyConfig{CategoricalConfig{4}}, FamilyConfig{BinomialConfig{6}},
        FamilyConfig{MixtureConfig{{{0.2, 0.3, 0.5}, {0.6, 0.2, 0.2}, {0.1, 0.7, 0.2}}}}}) {
    const FamilyDescriptor family = make_family(config);
    for (int i = 0; i < 50; ++i) {
      SampleStream stream(9, "js-forms", static_cast<std::uint64_t>(i));
      const CoordinatePair p = sample_point(family, stream);
      const CoordinatePair q = sample_point(family, stream);
      const double alpha = sample_alpha(stream);
      const double a = reference_js(family, p, q, alpha, JensenShannonForm::entropy);
      const double b = reference_js(family, p, q, alpha, JensenShannonForm::kullback_leibler);
      ASSERT_LT(std::abs(a - b), 1e-12) << family.name();
    }
  }
}

TEST(ReferenceJs, GaussianUnsupported) {
  const FamilyDescriptor g = gaussian();
  const CoordinatePair p = point_from_params(g, GaussianParams{0.0, 1.0});
  EXPECT_THROW(reference_js(g, p, p, 0.5), UnsupportedError);
}

TEST(ReferenceBhattacharyya, RejectsAlphaOutsideUnitInterval) {
  const FamilyDescriptor bern = make_family(BinomialConfig{1});
  const CoordinatePair p = point_from_params(bern, BinomialParams{0.2});
  EXPECT_THROW(reference_bhattacharyya(bern, p, p, 0.0), DomainError);
  EXPECT_THROW(reference_bhattacharyya(bern, p, p, 1.0), DomainError);
}

TEST(FisherInformation, BinomialMatchesHessian) {
  const FamilyDescriptor family = make_family(BinomialConfig{10});
  for (double p : {0.1, 0.37, 0.5, 0.9}) {
    const CoordinatePair point = point_from_params(family, BinomialParams{p});
    const double fisher = fisher_information_by_summation(family, point)(0, 0);
    EXPECT_NEAR(fisher, 10.0 * p * (1.0 - p), 1e-12);
    EXPECT_NEAR(metric(family, point, Chart::theta).entries(0, 0), fisher, 1e-8 * fisher);
  }
}

TEST(FisherInformation, CategoricalMatchesHessian) {
  const FamilyDescriptor family = make_family(CategoricalConfig{4});
  const CoordinatePair point = point_from_params(family, CategoricalParams{{0.1, 0.2, 0.3, 0.4}});
  const Matrix fisher = fisher_information_by_summation(family, point);
  const Matrix g = metric(family, point, Chart::theta).entries;
  EXPECT_LT((fisher - g).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ClosedForms, AffineExamples) {
  EXPECT_NEAR(gaussian_affine_closed_form({0.0, 1.0}, {1.0, 2.0}), 1.75, 1e-14);
  EXPECT_NEAR(binomial_affine_closed_form(1, 0.2, 0.8), 0.6 * std::log(16.0), 1e-14);
}

TEST(ClosedForms, GaussianCombinations) {
  const GaussianParams theta_mid = gaussian_combination({0.0, 1.0}, {0.0, 2.0}, 0.5, 0.5, Chart::theta);
  EXPECT_NEAR(theta_mid.sigma * theta_mid.sigma, 1.6, 1e-14);
  EXPECT_NEAR(theta_mid.mu, 0.0, 1e-15);
  const GaussianParams eta_mid = gaussian_combination({0.0, 1.0}, {0.0, 2.0}, 0.5, 0.5, Chart::eta);
  EXPECT_NEAR(eta_mid.sigma * eta_mid.sigma, 2.5, 1e-14);
  EXPECT_NEAR(eta_mid.mu, 0.0, 1e-15);
}

TEST(ClosedForms, GaussianCombinationMatchesCoordinateCombination) {
  const FamilyDescriptor g = gaussian();
  const GaussianParams a{0.4, 0.8};
  const GaussianParams b{-1.0, 1.7};
  for (Chart chart : {Chart::theta, Chart::eta}) {
    const CoordinatePair r = combine(g, point_from_params(g, a), point_from_params(g, b), 0.3, 0.6,
                                     chart);
    const GaussianParams expected = gaussian_combination(a, b, 0.3, 0.6, chart);
    const GaussianParams got = gaussian_params(g, r);
    EXPECT_NEAR(got.mu, expected.mu, 1e-12);
    EXPECT_NEAR(got.sigma, expected.sigma, 1e-12);
  }
}

TEST(ClosedForms, BinomialCombination) {
  EXPECT_NEAR(binomial_combination(0.2, 0.8, 0.5, 0.5, Chart::theta), 0.5, 1e-15);
  EXPECT_NEAR(binomial_combination(0.2, 0.8, 0.5, 0.5, Chart::eta), 0.5, 1e-15);
  const FamilyDescriptor family = make_family(BinomialConfig{4});
  const CoordinatePair r = combine(family, point_from_params(family, BinomialParams{0.3}),
                                   point_from_params(family, BinomialParams{0.6}), 0.7, 0.2,
                                   Chart::theta);
  EXPECT_NEAR(r.eta()[0] / 4.0, binomial_combination(0.3, 0.6, 0.7, 0.2, Chart::theta), 1e-14);
}

TEST(Sampling, SameKeySameSequence) {
  SampleStream a(42, "label", 3);
  SampleStream b(42, "label", 3);
  SampleStream c(42, "label", 4);
  SampleStream d(42, "other", 3);
  const double first = a.uniform();
  EXPECT_EQ(first, b.uniform());
  EXPECT_NE(first, c.uniform());
  EXPECT_NE(first, d.uniform());
}

TEST(Sampling, PointsStayInsideTheirBoxes) {
  const FamilyDescriptor g = gaussian();
  const FamilyDescriptor cat = make_family(CategoricalConfig{4});
  const FamilyDescriptor sd = make_family(SelfDualConfig{2});
  const FamilyDescriptor bin = make_family(BinomialConfig{3});
  for (int i = 0; i < 500; ++i) {
    SampleStream stream(1, "boxes", static_cast<std::uint64_t>(i));
    const GaussianParams gp = gaussian_params(g, sample_point(g, stream));
    ASSERT_GE(gp.mu, -3.0 - 1e-12);
    ASSERT_LE(gp.mu, 3.0 + 1e-12);
    ASSERT_GE(gp.sigma, 0.3 - 1e-12);
    ASSERT_LE(gp.sigma, 3.0 + 1e-12);
    for (double p : probabilities(cat, sample_point(cat, stream))) ASSERT_GE(p, 0.05 - 1e-12);
    const Vector x = sample_point(sd, stream).theta();
    ASSERT_LE(x.cwiseAbs().maxCoeff(), 3.0);
    const double p = sample_point(bin, stream).eta()[0] / 3.0;
    ASSERT_GE(p, 0.05 - 1e-12);
    ASSERT_LE(p, 0.95 + 1e-12);
    const double alpha = sample_alpha(stream);
    ASSERT_GE(alpha, 0.01);
    ASSERT_LE(alpha, 0.99);
  }
}

TEST(Sampling, MixturePointsKeepMassAwayFromZero) {
  const FamilyDescriptor mix =
      make_family(MixtureConfig{{{0.2, 0.3, 0.5}, {0.6, 0.2, 0.2}, {0.1, 0.7, 0.2}}});
  for (int i = 0; i < 300; ++i) {
    SampleStream stream(2, "mixture-box", static_cast<std::uint64_t>(i));
    for (double p : probabilities(mix, sample_point(mix, stream))) ASSERT_GE(p, 0.01 - 1e-12);
  }
}

TEST(Potentials, PhiIsNegativeEntropyOnDiscreteFamilies) {
  for (const FamilyConfig& config :
       {FamilyConfig{CategoricalConfig{5}}, FamilyConfig{BinomialConfig{1}},
        FamilyConfig{MixtureConfig{{{0.5, 0.5}, {0.9, 0.1}}}}}) {
    const FamilyDescriptor family = make_family(config);
    for (int i = 0; i < 20; ++i) {
      SampleStream stream(4, "entropy", static_cast<std::uint64_t>(i));
      const CoordinatePair p = sample_point(family, stream);
      EXPECT_NEAR(p.phi(), -reference_entropy(family, p), 1e-10) << family.name();
    }
  }
}
