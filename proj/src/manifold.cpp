#include "dflat/manifold.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "dflat/legendre.hpp"

namespace dflat {

std::string to_string(Chart chart) { return chart == Chart::theta ? "theta" : "eta"; }

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::gaussian1d:
      return "gaussian1d";
    case FamilyKind::binomial:
      return "binomial";
    case FamilyKind::categorical:
      return "categorical";
    case FamilyKind::mixture:
      return "mixture";
    case FamilyKind::selfdual:
      return "selfdual";
  }
  return "unknown";
}

namespace {

bool all_finite(const Vector& v) { return v.allFinite(); }

void require(const FamilyDescriptor& family, const Vector& v, const char* what,
             bool in_domain) {
  if (v.size() != family.dimension()) {
    throw DomainError(std::string(what) + ": expected dimension " +
                      std::to_string(family.dimension()) + ", got " +
                      std::to_string(v.size()));
  }
  if (!all_finite(v)) {
    throw DomainError(std::string(what) + ": non-finite coordinate");
  }
  if (!in_domain) {
    throw DomainError(std::string(what) + " outside the open domain of " + family.name());
  }
}

Matrix checked_inverse(const Matrix& m, const char* what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError(std::string(what) + ": metric is not positive definite");
  }
  Matrix inverse = llt.solve(Matrix::Identity(m.rows(), m.cols()));
  return 0.5 * (inverse + inverse.transpose());
}

double psi_given_eta(const FamilyDescriptor& family, const Vector& theta, const Vector& eta) {
  if (auto value = family.model().psi(theta)) {
    return *value;
  }
  return theta.dot(eta) - potential_phi(family, EtaCoord{eta});
}

}  // namespace

FamilyDescriptor::FamilyDescriptor(std::shared_ptr<const FamilyModel> model)
    : model_(std::move(model)) {
  if (!model_) {
    throw ConfigError("FamilyDescriptor: null model");
  }
  if (model_->dimension() < 1) {
    throw ConfigError("FamilyDescriptor: dimension must be positive");
  }
}

bool FamilyDescriptor::in_theta_domain(const Vector& theta) const {
  return theta.size() == dimension() && all_finite(theta) && model_->in_theta_domain(theta);
}

bool FamilyDescriptor::in_eta_domain(const Vector& eta) const {
  return eta.size() == dimension() && all_finite(eta) && model_->in_eta_domain(eta);
}

void FamilyDescriptor::require_theta(const Vector& theta, const char* what) const {
  require(*this, theta, what,
          theta.size() == dimension() && all_finite(theta) && model_->in_theta_domain(theta));
}

void FamilyDescriptor::require_eta(const Vector& eta, const char* what) const {
  require(*this, eta, what,
          eta.size() == dimension() && all_finite(eta) && model_->in_eta_domain(eta));
}

CoordinatePair::CoordinatePair(ThetaCoord theta, EtaCoord eta, double psi, double phi)
    : theta_(std::move(theta)), eta_(std::move(eta)), psi_(psi), phi_(phi) {}

Vector central_difference_gradient(const std::function<double(const Vector&)>& f,
                                   const Vector& x) {
  const double base_step = std::cbrt(std::numeric_limits<double>::epsilon());
  Vector gradient(x.size());
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = base_step * (1.0 + std::abs(x[i]));
    probe[i] = x[i] + h;
    const double forward = f(probe);
    probe[i] = x[i] - h;
    const double backward = f(probe);
    probe[i] = x[i];
    gradient[i] = (forward - backward) / (2.0 * h);
  }
  return gradient;
}

Matrix central_difference_jacobian(const std::function<Vector(const Vector&)>& f,
                                   const Vector& x) {
  const double base_step = std::cbrt(std::numeric_limits<double>::epsilon());
  Matrix jacobian;
  Vector probe = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double h = base_step * (1.0 + std::abs(x[j]));
    probe[j] = x[j] + h;
    const Vector forward = f(probe);
    probe[j] = x[j] - h;
    const Vector backward = f(probe);
    probe[j] = x[j];
    if (j == 0) {
      jacobian.resize(forward.size(), x.size());
    }
    jacobian.col(j) = (forward - backward) / (2.0 * h);
  }
  return jacobian;
}

double potential_psi(const FamilyDescriptor& family, const ThetaCoord& theta) {
  family.require_theta(theta.values);
  if (auto value = family.model().psi(theta.values)) {
    if (!std::isfinite(*value)) {
      throw DomainError("potential_psi: non-finite value");
    }
    return *value;
  }
  const Vector eta = eta_from_theta(family, theta).values;
  return theta.values.dot(eta) - potential_phi(family, EtaCoord{eta});
}

double potential_phi(const FamilyDescriptor& family, const EtaCoord& eta) {
  family.require_eta(eta.values);
  if (auto value = family.model().phi(eta.values)) {
    if (!std::isfinite(*value)) {
      throw DomainError("potential_phi: non-finite value");
    }
    return *value;
  }
  return conjugate_solve(family, eta).phi;
}

EtaCoord eta_from_theta(const FamilyDescriptor& family, const ThetaCoord& theta) {
  family.require_theta(theta.values);
  if (auto eta = family.model().eta_from_theta(theta.values)) {
    return EtaCoord{std::move(*eta)};
  }
  if (!family.model().psi(theta.values)) {
    throw UnsupportedError("eta_from_theta: " + family.name() + " provides neither psi nor eta");
  }
  auto psi = [&family](const Vector& t) {
    auto value = family.model().psi(t);
    return value ? *value : std::numeric_limits<double>::quiet_NaN();
  };
  Vector eta = central_difference_gradient(psi, theta.values);
  if (!eta.allFinite()) {
    throw DomainError("eta_from_theta: finite-difference stencil left the domain");
  }
  return EtaCoord{std::move(eta)};
}

ThetaCoord theta_from_eta(const FamilyDescriptor& family, const EtaCoord& eta) {
  family.require_eta(eta.values);
  if (auto theta = family.model().theta_from_eta(eta.values)) {
    return ThetaCoord{std::move(*theta)};
  }
  return conjugate_solve(family, eta).theta;
}

CoordinatePair point_from_theta(const FamilyDescriptor& family, const ThetaCoord& theta) {
  Vector eta = eta_from_theta(family, theta).values;
  if (!family.in_eta_domain(eta)) {
    throw DomainError("point_from_theta: image eta outside the domain of " + family.name());
  }
  const double psi = psi_given_eta(family, theta.values, eta);
  double phi = 0.0;
  if (auto value = family.model().phi(eta)) {
    phi = *value;
  } else {
    phi = theta.values.dot(eta) - psi;
  }
  if (!std::isfinite(psi) || !std::isfinite(phi)) {
    throw DomainError("point_from_theta: non-finite potential");
  }
  return CoordinatePair(theta, EtaCoord{std::move(eta)}, psi, phi);
}

CoordinatePair point_from_eta(const FamilyDescriptor& family, const EtaCoord& eta) {
  family.require_eta(eta.values);
  Vector theta;
  double phi = 0.0;
  if (auto mapped = family.model().theta_from_eta(eta.values)) {
    theta = std::move(*mapped);
    family.require_theta(theta, "theta image");
    phi = potential_phi(family, eta);
  } else {
    ConjugateSolution solution = conjugate_solve(family, eta);
    theta = std::move(solution.theta.values);
    phi = solution.phi;
  }
  const double psi = psi_given_eta(family, theta, eta.values);
  if (!std::isfinite(psi) || !std::isfinite(phi)) {
    throw DomainError("point_from_eta: non-finite potential");
  }
  return CoordinatePair(ThetaCoord{std::move(theta)}, eta, psi, phi);
}

CoordinatePair point_from(const FamilyDescriptor& family, Chart chart, const Vector& coords) {
  return chart == Chart::theta ? point_from_theta(family, ThetaCoord{coords})
                               : point_from_eta(family, EtaCoord{coords});
}

namespace {

// eta may be null, in which case it is computed only if needed.
Matrix metric_theta_form(const FamilyDescriptor& family, const Vector& theta,
                         const Vector* eta) {
  const FamilyModel& model = family.model();
  if (auto g = model.metric_theta(theta)) {
    return *g;
  }
  Vector eta_storage;
  if (eta == nullptr) {
    eta_storage = eta_from_theta(family, ThetaCoord{theta}).values;
    eta = &eta_storage;
  }
  if (auto g_inverse = model.metric_eta(*eta)) {
    return checked_inverse(*g_inverse, "metric");
  }
  auto eta_map = [&family](const Vector& t) {
    if (!family.in_theta_domain(t)) {
      return Vector(Vector::Constant(t.size(), std::numeric_limits<double>::quiet_NaN()));
    }
    return eta_from_theta(family, ThetaCoord{t}).values;
  };
  Matrix jacobian = central_difference_jacobian(eta_map, theta);
  if (!jacobian.allFinite()) {
    throw DomainError("metric: finite-difference stencil left the domain");
  }
  return 0.5 * (jacobian + jacobian.transpose());
}

}  // namespace

MetricMatrix metric(const FamilyDescriptor& family, const CoordinatePair& point,
                    Chart representation) {
  family.require_theta(point.theta());
  family.require_eta(point.eta());
  Matrix entries;
  if (representation == Chart::theta) {
    entries = metric_theta_form(family, point.theta(), &point.eta());
  } else if (auto g_inverse = family.model().metric_eta(point.eta())) {
    entries = *g_inverse;
  } else {
    entries = checked_inverse(metric_theta_form(family, point.theta(), &point.eta()), "metric");
  }
  if (!entries.allFinite()) {
    throw DomainError("metric: non-finite entries");
  }
  Eigen::LLT<Matrix> llt(entries);
  if (llt.info() != Eigen::Success) {
    throw ConditioningError("metric: not positive definite at working precision");
  }
  return {std::move(entries), representation};
}

ConjugateSolution conjugate_solve(const FamilyDescriptor& family, const EtaCoord& eta,
                                  std::optional<ThetaCoord> initial_theta) {
  family.require_eta(eta.values);
  Vector start =
      initial_theta ? initial_theta->values : family.model().initial_theta(eta.values);
  family.require_theta(start, "initial theta");

  ConvexObjective psi;
  psi.in_domain = [&family](const Vector& t) { return family.in_theta_domain(t); };
  psi.value = [&family](const Vector& t) { return potential_psi(family, ThetaCoord{t}); };
  psi.gradient = [&family](const Vector& t) {
    return eta_from_theta(family, ThetaCoord{t}).values;
  };
  psi.hessian = [&family](const Vector& t) {
    return metric_theta_form(family, t, nullptr);
  };
  LegendreResult result = legendre_maximize(psi, eta.values, std::move(start));
  return {ThetaCoord{std::move(result.argmax)}, result.value, result.iterations,
          result.gradient_norm};
}

double duality_residual(const FamilyDescriptor& family, const CoordinatePair& point) {
  const double psi = potential_psi(family, ThetaCoord{point.theta()});
  const double phi = potential_phi(family, EtaCoord{point.eta()});
  return std::abs(psi + phi - point.theta().dot(point.eta()));
}

namespace {

class NumericalDualModel final : public FamilyModel {
 public:
  explicit NumericalDualModel(FamilyDescriptor inner) : inner_(std::move(inner)) {}

  FamilyKind kind() const override { return inner_.kind(); }
  int dimension() const override { return inner_.dimension(); }
  std::string name() const override { return inner_.name() + "+numerical-dual"; }
  bool in_theta_domain(const Vector& theta) const override {
    return inner_.model().in_theta_domain(theta);
  }
  bool in_eta_domain(const Vector& eta) const override {
    return inner_.model().in_eta_domain(eta);
  }
  std::optional<double> psi(const Vector& theta) const override {
    return inner_.model().psi(theta);
  }
  std::optional<Vector> eta_from_theta(const Vector& theta) const override {
    return inner_.model().eta_from_theta(theta);
  }
  std::optional<Matrix> metric_theta(const Vector& theta) const override {
    return inner_.model().metric_theta(theta);
  }
  // Uninformed start: the solver has to do the work.
  Vector initial_theta(const Vector& /*eta*/) const override {
    return inner_.model().interior_theta();
  }
  Vector interior_theta() const override { return inner_.model().interior_theta(); }
  const FamilyModel& underlying() const override { return inner_.model().underlying(); }

 private:
  FamilyDescriptor inner_;
};

}  // namespace

FamilyDescriptor with_numerical_dual(const FamilyDescriptor& family) {
  return FamilyDescriptor(std::make_shared<NumericalDualModel>(family));
}

}  // namespace dflat
