#include "dflat/families.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dflat/quadrature.hpp"
#include "family_models.hpp"

namespace dflat {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void validate_mixture(const MixtureConfig& config) {
  const auto& rows = config.components;
  if (rows.size() < 2) {
    throw ConfigError("mixture: need at least two components");
  }
  const std::size_t support = rows.front().size();
  if (support < 2) {
    throw ConfigError("mixture: support must have at least two points");
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != support) {
      throw ConfigError("mixture: component " + std::to_string(i) + " has " +
                        std::to_string(rows[i].size()) + " entries, expected " +
                        std::to_string(support));
    }
    double total = 0.0;
    for (double p : rows[i]) {
      if (!std::isfinite(p) || p <= 0.0) {
        throw ConfigError("mixture: component " + std::to_string(i) +
                          " must be strictly positive");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw ConfigError("mixture: component " + std::to_string(i) + " sums to " +
                        std::to_string(total));
    }
  }
  Matrix differences(static_cast<Eigen::Index>(support),
                     static_cast<Eigen::Index>(rows.size() - 1));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t x = 0; x < support; ++x) {
      differences(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(i - 1)) =
          rows[i][x] - rows[0][x];
    }
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(differences);
  qr.setThreshold(1e-10);
  if (qr.rank() != differences.cols()) {
    throw ConfigError("mixture: components are not affinely independent");
  }
}

const detail::BuiltinModel& builtin(const FamilyDescriptor& family) {
  const auto* model = dynamic_cast<const detail::BuiltinModel*>(&family.model().underlying());
  if (model == nullptr) {
    throw UnsupportedError(family.name() + " is not a built-in family");
  }
  return *model;
}

bool is_discrete(FamilyKind kind) {
  return kind == FamilyKind::binomial || kind == FamilyKind::categorical ||
         kind == FamilyKind::mixture;
}

double check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1)");
  }
  return alpha;
}

double entropy_of(const std::vector<double>& p) {
  double h = 0.0;
  for (double v : p) h -= v * std::log(v);
  return h;
}

double log_binomial_coefficient(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double gaussian_log_density(const GaussianParams& g, double x) {
  const double z = (x - g.mu) / g.sigma;
  return -0.5 * z * z - std::log(g.sigma) - 0.5 * std::log(2.0 * std::numbers::pi);
}

}  // namespace

FamilyDescriptor make_family(const FamilyConfig& config) {
  return std::visit(
      Overloaded{
          [](const Gaussian1dConfig&) { return FamilyDescriptor(detail::make_gaussian1d()); },
          [](const BinomialConfig& c) {
            if (c.trials < 1) {
              throw ConfigError("binomial: trial count must be at least 1, got " +
                                std::to_string(c.trials));
            }
            return FamilyDescriptor(detail::make_binomial(c.trials));
          },
          [](const CategoricalConfig& c) {
            if (c.outcomes < 2) {
              throw ConfigError("categorical: need at least 2 outcomes, got " +
                                std::to_string(c.outcomes));
            }
            return FamilyDescriptor(detail::make_categorical(c.outcomes));
          },
          [](const MixtureConfig& c) {
            validate_mixture(c);
            return FamilyDescriptor(detail::make_mixture(c));
          },
          [](const SelfDualConfig& c) {
            if (c.dimension < 1) {
              throw ConfigError("selfdual: dimension must be at least 1");
            }
            return FamilyDescriptor(detail::make_selfdual(c.dimension));
          },
      },
      config);
}

const FamilyConfig& family_config(const FamilyDescriptor& family) {
  return builtin(family).config();
}

CoordinatePair point_from_params(const FamilyDescriptor& family, const NaturalParams& params) {
  const FamilyConfig& config = family_config(family);
  const auto mismatch = [&family] {
    return DomainError("point_from_params: parameters do not match family " + family.name());
  };
  return std::visit(
      Overloaded{
          [&](const GaussianParams& g) {
            if (!std::holds_alternative<Gaussian1dConfig>(config)) throw mismatch();
            if (!std::isfinite(g.mu) || !std::isfinite(g.sigma) || !(g.sigma > 0.0)) {
              throw DomainError("gaussian1d: need finite mu and sigma > 0");
            }
            const double variance = g.sigma * g.sigma;
            return point_from_theta(family,
                                    ThetaCoord{Vector{{-0.5 / variance, g.mu / variance}}});
          },
          [&](const BinomialParams& b) {
            const auto* c = std::get_if<BinomialConfig>(&config);
            if (c == nullptr) throw mismatch();
            if (!(b.p > 0.0 && b.p < 1.0)) {
              throw DomainError("binomial: need p in (0, 1)");
            }
            return point_from_eta(family, EtaCoord{Vector::Constant(1, c->trials * b.p)});
          },
          [&](const CategoricalParams& c) {
            const auto* cfg = std::get_if<CategoricalConfig>(&config);
            if (cfg == nullptr) throw mismatch();
            if (static_cast<int>(c.probabilities.size()) != cfg->outcomes) {
              throw DomainError("categorical: expected " + std::to_string(cfg->outcomes) +
                                " probabilities");
            }
            double total = 0.0;
            for (double p : c.probabilities) {
              if (!(p > 0.0)) throw DomainError("categorical: probabilities must be positive");
              total += p;
            }
            if (std::abs(total - 1.0) > 1e-12) {
              throw DomainError("categorical: probabilities must sum to 1");
            }
            Vector eta(cfg->outcomes - 1);
            for (int i = 0; i + 1 < cfg->outcomes; ++i) eta[i] = c.probabilities[i];
            return point_from_eta(family, EtaCoord{eta});
          },
          [&](const MixtureParams& m) {
            if (!std::holds_alternative<MixtureConfig>(config)) throw mismatch();
            return point_from_eta(
                family, EtaCoord{Eigen::Map<const Vector>(m.weights.data(),
                                                          static_cast<Eigen::Index>(m.weights.size()))});
          },
          [&](const SelfDualParams& s) {
            if (!std::holds_alternative<SelfDualConfig>(config)) throw mismatch();
            return point_from_theta(
                family, ThetaCoord{Eigen::Map<const Vector>(s.values.data(),
                                                            static_cast<Eigen::Index>(s.values.size()))});
          },
      },
      params);
}

GaussianParams gaussian_params(const FamilyDescriptor& family, const CoordinatePair& point) {
  if (family.kind() != FamilyKind::gaussian1d) {
    throw UnsupportedError("gaussian_params: " + family.name() + " is not gaussian1d");
  }
  const double variance = point.eta()[0] - point.eta()[1] * point.eta()[1];
  if (!(variance > 0.0)) {
    throw DomainError("gaussian1d: non-positive variance");
  }
  return {point.eta()[1], std::sqrt(variance)};
}

std::vector<double> probabilities(const FamilyDescriptor& family, const CoordinatePair& point) {
  const FamilyConfig& config = family_config(family);
  const Vector& eta = point.eta();
  std::vector<double> p;
  if (const auto* b = std::get_if<BinomialConfig>(&config)) {
    const double success = eta[0] / b->trials;
    if (!(success > 0.0 && success < 1.0)) throw DomainError("binomial: p outside (0, 1)");
    for (int k = 0; k <= b->trials; ++k) {
      p.push_back(std::exp(log_binomial_coefficient(b->trials, k) + k * std::log(success) +
                           (b->trials - k) * std::log1p(-success)));
    }
  } else if (std::holds_alternative<CategoricalConfig>(config)) {
    double last = 1.0;
    for (double v : eta) {
      p.push_back(v);
      last -= v;
    }
    p.push_back(last);
  } else if (const auto* m = std::get_if<MixtureConfig>(&config)) {
    const Vector density = detail::mixture_density(*m, eta);
    p.assign(density.begin(), density.end());
  } else {
    throw UnsupportedError("probabilities: " + family.name() + " is not discrete");
  }
  for (double v : p) {
    if (!(v > 0.0)) throw DomainError("probabilities: non-positive mass");
  }
  return p;
}

double log_density(const FamilyDescriptor& family, const CoordinatePair& point, double outcome) {
  if (family.kind() == FamilyKind::gaussian1d) {
    if (!std::isfinite(outcome)) throw DomainError("log_density: non-finite outcome");
    return gaussian_log_density(gaussian_params(family, point), outcome);
  }
  if (!is_discrete(family.kind())) {
    throw UnsupportedError("log_density: " + family.name() + " has no density");
  }
  const std::vector<double> p = probabilities(family, point);
  if (!(outcome >= 0.0) || outcome != std::floor(outcome) ||
      outcome >= static_cast<double>(p.size())) {
    throw DomainError("log_density: outcome off the support");
  }
  return std::log(p[static_cast<std::size_t>(outcome)]);
}

double reference_entropy(const FamilyDescriptor& family, const CoordinatePair& point) {
  if (family.kind() == FamilyKind::gaussian1d) {
    const double sigma = gaussian_params(family, point).sigma;
    return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * sigma * sigma);
  }
  if (!is_discrete(family.kind())) {
    throw UnsupportedError("reference_entropy: " + family.name() + " has no distribution");
  }
  return entropy_of(probabilities(family, point));
}

double reference_kl(const FamilyDescriptor& family, const CoordinatePair& p,
                    const CoordinatePair& q) {
  if (family.kind() == FamilyKind::gaussian1d) {
    const GaussianParams a = gaussian_params(family, p);
    const GaussianParams b = gaussian_params(family, q);
    const double dm = a.mu - b.mu;
    return std::log(b.sigma / a.sigma) +
           (a.sigma * a.sigma + dm * dm) / (2.0 * b.sigma * b.sigma) - 0.5;
  }
  if (!is_discrete(family.kind())) {
    throw UnsupportedError("reference_kl: " + family.name() + " has no distribution");
  }
  const std::vector<double> pp = probabilities(family, p);
  const std::vector<double> qq = probabilities(family, q);
  double kl = 0.0;
  for (std::size_t i = 0; i < pp.size(); ++i) kl += pp[i] * std::log(pp[i] / qq[i]);
  return kl;
}

double reference_jeffreys(const FamilyDescriptor& family, const CoordinatePair& p,
                          const CoordinatePair& q) {
  return reference_kl(family, p, q) + reference_kl(family, q, p);
}

double reference_bhattacharyya(const FamilyDescriptor& family, const CoordinatePair& p,
                               const CoordinatePair& q, double alpha) {
  check_alpha(alpha);
  if (family.kind() == FamilyKind::gaussian1d) {
    const GaussianParams a = gaussian_params(family, p);
    const GaussianParams b = gaussian_params(family, q);
    const double spread = std::max(a.sigma, b.sigma);
    const double lo = std::min(a.mu, b.mu) - 12.0 * spread;
    const double hi = std::max(a.mu, b.mu) + 12.0 * spread;
    auto integrand = [&](double x) {
      return std::exp((1.0 - alpha) * gaussian_log_density(a, x) +
                      alpha * gaussian_log_density(b, x));
    };
    return -std::log(integrate_adaptive(integrand, lo, hi, 1e-10));
  }
  if (!is_discrete(family.kind())) {
    throw UnsupportedError("reference_bhattacharyya: " + family.name() +
                           " has no distribution");
  }
  const std::vector<double> pp = probabilities(family, p);
  const std::vector<double> qq = probabilities(family, q);
  double coefficient = 0.0;
  for (std::size_t i = 0; i < pp.size(); ++i) {
    coefficient += std::pow(pp[i], 1.0 - alpha) * std::pow(qq[i], alpha);
  }
  return -std::log(coefficient);
}

double reference_js(const FamilyDescriptor& family, const CoordinatePair& p,
                    const CoordinatePair& q, double alpha, JensenShannonForm form) {
  check_alpha(alpha);
  if (!is_discrete(family.kind())) {
    throw UnsupportedError("reference_js: pointwise mixing leaves " + family.name());
  }
  const std::vector<double> pp = probabilities(family, p);
  const std::vector<double> qq = probabilities(family, q);
  std::vector<double> mixed(pp.size());
  for (std::size_t i = 0; i < pp.size(); ++i) mixed[i] = (1.0 - alpha) * pp[i] + alpha * qq[i];

  if (form == JensenShannonForm::entropy) {
    return entropy_of(mixed) - (1.0 - alpha) * entropy_of(pp) - alpha * entropy_of(qq);
  }
  double kl_p = 0.0;
  double kl_q = 0.0;
  for (std::size_t i = 0; i < pp.size(); ++i) {
    kl_p += pp[i] * std::log(pp[i] / mixed[i]);
    kl_q += qq[i] * std::log(qq[i] / mixed[i]);
  }
  return (1.0 - alpha) * kl_p + alpha * kl_q;
}

Matrix fisher_information_by_summation(const FamilyDescriptor& family,
                                       const CoordinatePair& point) {
  const FamilyConfig& config = family_config(family);
  const std::vector<double> p = probabilities(family, point);
  const Vector& eta = point.eta();
  const Eigen::Index n = eta.size();
  Matrix fisher = Matrix::Zero(n, n);
  // Score of an exponential family: d_i l = F_i(x) - eta_i.
  for (std::size_t x = 0; x < p.size(); ++x) {
    Vector score(n);
    if (std::holds_alternative<BinomialConfig>(config)) {
      score[0] = static_cast<double>(x) - eta[0];
    } else if (std::holds_alternative<CategoricalConfig>(config)) {
      for (Eigen::Index i = 0; i < n; ++i) {
        score[i] = (static_cast<Eigen::Index>(x) == i ? 1.0 : 0.0) - eta[i];
      }
    } else {
      throw UnsupportedError("fisher_information_by_summation: " + family.name() +
                             " is not a discrete exponential family");
    }
    fisher += p[x] * score * score.transpose();
  }
  return fisher;
}

double gaussian_affine_closed_form(const GaussianParams& p, const GaussianParams& q) {
  const double vp = p.sigma * p.sigma;
  const double vq = q.sigma * q.sigma;
  const double dm = q.mu - p.mu;
  return (vq - vp) * (vq - vp) / (2.0 * vp * vq) + dm * dm * (0.5 / vp + 0.5 / vq);
}

double binomial_affine_closed_form(int trials, double p, double q) {
  return trials * (q - p) * std::log(q * (1.0 - p) / (p * (1.0 - q)));
}

GaussianParams gaussian_combination(const GaussianParams& p, const GaussianParams& q, double a,
                                    double b, Chart chart) {
  const double vp = p.sigma * p.sigma;
  const double vq = q.sigma * q.sigma;
  if (chart == Chart::theta) {
    const double mu = (a * vq * p.mu + b * vp * q.mu) / (a * vq + b * vp);
    const double precision = a / vp + b / vq;
    if (!(precision > 0.0)) throw DomainError("gaussian_combination: non-positive precision");
    return {mu, std::sqrt(1.0 / precision)};
  }
  const double variance = a * vp + b * vq + a * (1.0 - a) * p.mu * p.mu +
                          b * (1.0 - b) * q.mu * q.mu - 2.0 * a * b * p.mu * q.mu;
  if (!(variance > 0.0)) throw DomainError("gaussian_combination: non-positive variance");
  return {a * p.mu + b * q.mu, std::sqrt(variance)};
}

double binomial_combination(double p, double q, double a, double b, Chart chart) {
  double result = 0.0;
  if (chart == Chart::theta) {
    const double lambda =
        std::log(std::pow(p, a) * std::pow(q, b) / (std::pow(1.0 - p, a) * std::pow(1.0 - q, b)));
    result = std::exp(lambda) / (1.0 + std::exp(lambda));
  } else {
    result = a * p + b * q;
  }
  if (!(result > 0.0 && result < 1.0)) {
    throw DomainError("binomial_combination: p outside (0, 1)");
  }
  return result;
}

}  // namespace dflat
