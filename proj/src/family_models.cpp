#include "family_models.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dflat/legendre.hpp"

namespace dflat::detail {

namespace {

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double logistic(double x) {
  return x >= 0.0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

double xlogx(double x) { return x * std::log(x); }

// ---------------------------------------------------------------------------

class Gaussian1dModel final : public BuiltinModel {
 public:
  Gaussian1dModel() : BuiltinModel(Gaussian1dConfig{}) {}

  FamilyKind kind() const override { return FamilyKind::gaussian1d; }
  int dimension() const override { return 2; }
  std::string name() const override { return "gaussian1d"; }

  bool in_theta_domain(const Vector& theta) const override { return theta[0] < 0.0; }
  bool in_eta_domain(const Vector& eta) const override {
    return eta[0] - eta[1] * eta[1] > 0.0;
  }

  std::optional<double> psi(const Vector& theta) const override {
    return -theta[1] * theta[1] / (4.0 * theta[0]) + 0.5 * std::log(-std::numbers::pi / theta[0]);
  }
  std::optional<double> phi(const Vector& eta) const override {
    const double variance = eta[0] - eta[1] * eta[1];
    return -0.5 * (1.0 + std::log(2.0 * std::numbers::pi * variance));
  }
  std::optional<Vector> eta_from_theta(const Vector& theta) const override {
    const double variance = -0.5 / theta[0];
    const double mean = theta[1] * variance;
    return Vector{{variance + mean * mean, mean}};
  }
  std::optional<Vector> theta_from_eta(const Vector& eta) const override {
    const double variance = eta[0] - eta[1] * eta[1];
    return Vector{{-0.5 / variance, eta[1] / variance}};
  }
  // Covariance of the sufficient statistic (x^2, x).
  std::optional<Matrix> metric_theta(const Vector& theta) const override {
    const double variance = -0.5 / theta[0];
    const double mean = theta[1] * variance;
    Matrix g(2, 2);
    g(0, 0) = 4.0 * mean * mean * variance + 2.0 * variance * variance;
    g(0, 1) = g(1, 0) = 2.0 * mean * variance;
    g(1, 1) = variance;
    return g;
  }
  std::optional<Matrix> metric_eta(const Vector& eta) const override {
    const double s = eta[0] - eta[1] * eta[1];
    const double mean = eta[1];
    Matrix g(2, 2);
    g(0, 0) = 0.5 / (s * s);
    g(0, 1) = g(1, 0) = -mean / (s * s);
    g(1, 1) = 1.0 / s + 2.0 * mean * mean / (s * s);
    return g;
  }

  Vector initial_theta(const Vector& eta) const override {
    // Moment matching.
    if (in_eta_domain(eta)) {
      return *theta_from_eta(eta);
    }
    return interior_theta();
  }
  Vector interior_theta() const override { return Vector{{-0.5, 0.0}}; }
};

// ---------------------------------------------------------------------------

class BinomialModel final : public BuiltinModel {
 public:
  explicit BinomialModel(int trials) : BuiltinModel(BinomialConfig{trials}), n_(trials) {}

  FamilyKind kind() const override { return FamilyKind::binomial; }
  int dimension() const override { return 1; }
  std::string name() const override { return "binomial:" + std::to_string(n_); }

  bool in_theta_domain(const Vector& theta) const override {
    const double p = logistic(theta[0]);
    return p > 0.0 && p < 1.0;
  }
  bool in_eta_domain(const Vector& eta) const override { return eta[0] > 0.0 && eta[0] < n_; }

  std::optional<double> psi(const Vector& theta) const override { return n_ * softplus(theta[0]); }
  std::optional<double> phi(const Vector& eta) const override {
    const double p = eta[0] / n_;
    return n_ * (xlogx(p) + xlogx(1.0 - p));
  }
  std::optional<Vector> eta_from_theta(const Vector& theta) const override {
    return Vector::Constant(1, n_ * logistic(theta[0]));
  }
  std::optional<Vector> theta_from_eta(const Vector& eta) const override {
    const double p = eta[0] / n_;
    return Vector::Constant(1, std::log(p / (1.0 - p)));
  }
  std::optional<Matrix> metric_theta(const Vector& theta) const override {
    const double p = logistic(theta[0]);
    return Matrix::Constant(1, 1, n_ * p * (1.0 - p));
  }
  std::optional<Matrix> metric_eta(const Vector& eta) const override {
    const double p = eta[0] / n_;
    return Matrix::Constant(1, 1, 1.0 / (n_ * p * (1.0 - p)));
  }

  Vector initial_theta(const Vector& eta) const override {
    const double p = std::clamp(eta[0] / n_, 1e-6, 1.0 - 1e-6);
    return Vector::Constant(1, std::log(p / (1.0 - p)));
  }
  Vector interior_theta() const override { return Vector::Zero(1); }

 private:
  int n_;
};

// ---------------------------------------------------------------------------

class CategoricalModel final : public BuiltinModel {
 public:
  explicit CategoricalModel(int outcomes)
      : BuiltinModel(CategoricalConfig{outcomes}), m_(outcomes) {}

  FamilyKind kind() const override { return FamilyKind::categorical; }
  int dimension() const override { return m_ - 1; }
  std::string name() const override { return "categorical:" + std::to_string(m_); }

  bool in_theta_domain(const Vector& theta) const override {
    const Vector p = probabilities_from_theta(theta);
    return p.allFinite() && p.minCoeff() > 0.0 && reference_mass(theta) > 0.0;
  }
  bool in_eta_domain(const Vector& eta) const override {
    return eta.minCoeff() > 0.0 && 1.0 - eta.sum() > 0.0;
  }

  std::optional<double> psi(const Vector& theta) const override {
    // log(1 + sum exp(theta)) with the max factored out.
    const double top = std::max(0.0, theta.maxCoeff());
    return top + std::log(std::exp(-top) + (theta.array() - top).exp().sum());
  }
  std::optional<double> phi(const Vector& eta) const override {
    double total = xlogx(1.0 - eta.sum());
    for (double p : eta) total += xlogx(p);
    return total;
  }
  std::optional<Vector> eta_from_theta(const Vector& theta) const override {
    return probabilities_from_theta(theta);
  }
  std::optional<Vector> theta_from_eta(const Vector& eta) const override {
    const double last = 1.0 - eta.sum();
    return Vector((eta.array() / last).log());
  }
  std::optional<Matrix> metric_theta(const Vector& theta) const override {
    const Vector p = probabilities_from_theta(theta);
    Matrix g = -p * p.transpose();
    g.diagonal() += p;
    return g;
  }
  std::optional<Matrix> metric_eta(const Vector& eta) const override {
    const double last = 1.0 - eta.sum();
    Matrix g = Matrix::Constant(eta.size(), eta.size(), 1.0 / last);
    g.diagonal() += eta.cwiseInverse();
    return g;
  }

  Vector initial_theta(const Vector& eta) const override {
    if (in_eta_domain(eta)) {
      return *theta_from_eta(eta);
    }
    return interior_theta();
  }
  Vector interior_theta() const override { return Vector::Zero(m_ - 1); }

 private:
  Vector probabilities_from_theta(const Vector& theta) const {
    const double top = std::max(0.0, theta.maxCoeff());
    const Vector weights = (theta.array() - top).exp();
    return weights / (std::exp(-top) + weights.sum());
  }
  double reference_mass(const Vector& theta) const {
    const double top = std::max(0.0, theta.maxCoeff());
    return std::exp(-top) / (std::exp(-top) + (theta.array() - top).exp().sum());
  }

  int m_;
};

// ---------------------------------------------------------------------------

class MixtureModel final : public BuiltinModel {
 public:
  explicit MixtureModel(MixtureConfig config) : BuiltinModel(config), config_(std::move(config)) {
    const auto rows = static_cast<Eigen::Index>(config_.components.size());
    const auto support = static_cast<Eigen::Index>(config_.components.front().size());
    base_.resize(support);
    differences_.resize(support, rows - 1);
    for (Eigen::Index x = 0; x < support; ++x) {
      base_[x] = config_.components[0][x];
      for (Eigen::Index i = 1; i < rows; ++i) {
        differences_(x, i - 1) = config_.components[i][x] - base_[x];
      }
    }
    centroid_ = Vector::Constant(rows - 1, 1.0 / static_cast<double>(rows));
  }

  FamilyKind kind() const override { return FamilyKind::mixture; }
  int dimension() const override { return static_cast<int>(differences_.cols()); }
  std::string name() const override {
    return "mixture:" + std::to_string(differences_.cols() + 1) + "x" +
           std::to_string(differences_.rows());
  }

  bool in_theta_domain(const Vector& theta) const override {
    try {
      return solve_eta(theta).has_value();
    } catch (const Error&) {
      return false;
    }
  }
  bool in_eta_domain(const Vector& eta) const override {
    return density(eta).minCoeff() > kMixtureFloor;
  }

  std::optional<double> phi(const Vector& eta) const override {
    const Vector p = density(eta);
    return (p.array() * p.array().log()).sum();
  }
  std::optional<Vector> theta_from_eta(const Vector& eta) const override {
    return Vector(differences_.transpose() * density(eta).array().log().matrix());
  }
  std::optional<Vector> eta_from_theta(const Vector& theta) const override {
    return solve_eta(theta);
  }
  std::optional<Matrix> metric_eta(const Vector& eta) const override {
    const Vector inverse_p = density(eta).cwiseInverse();
    return Matrix(differences_.transpose() * inverse_p.asDiagonal() * differences_);
  }

  Vector initial_theta(const Vector& eta) const override { return *theta_from_eta(eta); }
  Vector interior_theta() const override { return *theta_from_eta(centroid_); }

  Vector density(const Vector& eta) const { return base_ + differences_ * eta; }

 private:
  // eta = grad psi(theta) solves max_eta theta.eta - phi(eta).
  std::optional<Vector> solve_eta(const Vector& theta) const {
    ConvexObjective negentropy;
    negentropy.in_domain = [this](const Vector& e) {
      return e.allFinite() && in_eta_domain(e);
    };
    negentropy.value = [this](const Vector& e) { return *phi(e); };
    negentropy.gradient = [this](const Vector& e) { return *theta_from_eta(e); };
    negentropy.hessian = [this](const Vector& e) { return *metric_eta(e); };
    LegendreResult result = legendre_maximize(negentropy, theta, centroid_);
    return std::move(result.argmax);
  }

  MixtureConfig config_;
  Vector base_;
  Matrix differences_;  // column i: p_{i+1} - p_0
  Vector centroid_;
};

// ---------------------------------------------------------------------------

class SelfDualModel final : public BuiltinModel {
 public:
  explicit SelfDualModel(int dimension) : BuiltinModel(SelfDualConfig{dimension}), n_(dimension) {}

  FamilyKind kind() const override { return FamilyKind::selfdual; }
  int dimension() const override { return n_; }
  std::string name() const override { return "selfdual:" + std::to_string(n_); }

  bool in_theta_domain(const Vector&) const override { return true; }
  bool in_eta_domain(const Vector&) const override { return true; }

  std::optional<double> psi(const Vector& theta) const override {
    return 0.5 * theta.squaredNorm();
  }
  std::optional<double> phi(const Vector& eta) const override { return 0.5 * eta.squaredNorm(); }
  std::optional<Vector> eta_from_theta(const Vector& theta) const override { return theta; }
  std::optional<Vector> theta_from_eta(const Vector& eta) const override { return eta; }
  std::optional<Matrix> metric_theta(const Vector&) const override {
    return Matrix::Identity(n_, n_);
  }
  std::optional<Matrix> metric_eta(const Vector&) const override {
    return Matrix::Identity(n_, n_);
  }

  Vector initial_theta(const Vector& eta) const override { return eta; }
  Vector interior_theta() const override { return Vector::Zero(n_); }

 private:
  int n_;
};

}  // namespace

std::shared_ptr<const BuiltinModel> make_gaussian1d() { return std::make_shared<Gaussian1dModel>(); }

std::shared_ptr<const BuiltinModel> make_binomial(int trials) {
  return std::make_shared<BinomialModel>(trials);
}

std::shared_ptr<const BuiltinModel> make_categorical(int outcomes) {
  return std::make_shared<CategoricalModel>(outcomes);
}

std::shared_ptr<const BuiltinModel> make_mixture(MixtureConfig config) {
  return std::make_shared<MixtureModel>(std::move(config));
}

std::shared_ptr<const BuiltinModel> make_selfdual(int dimension) {
  return std::make_shared<SelfDualModel>(dimension);
}

Vector mixture_density(const MixtureConfig& config, const Vector& eta) {
  const std::size_t support = config.components.front().size();
  Vector p(static_cast<Eigen::Index>(support));
  for (std::size_t x = 0; x < support; ++x) {
    double value = config.components[0][x];
    for (std::size_t i = 1; i < config.components.size(); ++i) {
      value += eta[static_cast<Eigen::Index>(i - 1)] *
               (config.components[i][x] - config.components[0][x]);
    }
    p[static_cast<Eigen::Index>(x)] = value;
  }
  return p;
}

}  // namespace dflat::detail
