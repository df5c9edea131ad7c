#pragma once

// Dual affine charts, Legendre-dual potentials and the Riemannian metric of a
// dually flat family.
//
// A family is described by a FamilyModel that supplies whatever closed forms
// it has. The free functions below fill the gaps: gradients by central
// differences, the dual potential through the Legendre relation or by
// numerical conjugation, and the metric by inversion or differentiation.

#include <Eigen/Dense>

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "dflat/errors.hpp"

namespace dflat {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// The two affine charts. theta is affine for the e-connection, eta for its dual.
enum class Chart { theta, eta };

std::string to_string(Chart chart);

struct ThetaCoord {
  Vector values;
};

struct EtaCoord {
  Vector values;
};

enum class FamilyKind { gaussian1d, binomial, categorical, mixture, selfdual };

std::string to_string(FamilyKind kind);

// Per-family hooks. Every optional returns std::nullopt when the family has
// no direct evaluation path; callers in this module then fall back to a
// generic numerical route. Inputs are already validated (dimension, finite,
// inside the open domain) when a hook is called.
class FamilyModel {
 public:
  virtual ~FamilyModel() = default;

  virtual FamilyKind kind() const = 0;
  virtual int dimension() const = 0;
  virtual std::string name() const = 0;

  virtual bool in_theta_domain(const Vector& theta) const = 0;
  virtual bool in_eta_domain(const Vector& eta) const = 0;

  virtual std::optional<double> psi(const Vector& /*theta*/) const { return std::nullopt; }
  virtual std::optional<double> phi(const Vector& /*eta*/) const { return std::nullopt; }
  virtual std::optional<Vector> eta_from_theta(const Vector& /*theta*/) const {
    return std::nullopt;
  }
  virtual std::optional<Vector> theta_from_eta(const Vector& /*eta*/) const {
    return std::nullopt;
  }
  virtual std::optional<Matrix> metric_theta(const Vector& /*theta*/) const {
    return std::nullopt;
  }
  virtual std::optional<Matrix> metric_eta(const Vector& /*eta*/) const {
    return std::nullopt;
  }

  // Starting point for numerical conjugation of a given eta.
  virtual Vector initial_theta(const Vector& eta) const = 0;
  // A fixed point inside the theta domain.
  virtual Vector interior_theta() const = 0;

  // The model that owns the family configuration; wrappers forward to the
  // model they wrap.
  virtual const FamilyModel& underlying() const { return *this; }
};

// Immutable handle on a family. Cheap to copy; safe to share across threads.
class FamilyDescriptor {
 public:
  explicit FamilyDescriptor(std::shared_ptr<const FamilyModel> model);

  FamilyKind kind() const { return model_->kind(); }
  int dimension() const { return model_->dimension(); }
  std::string name() const { return model_->name(); }
  const FamilyModel& model() const { return *model_; }

  bool in_theta_domain(const Vector& theta) const;
  bool in_eta_domain(const Vector& eta) const;

  // Throws DomainError naming `what` unless the vector has the family
  // dimension, finite entries, and lies in the open chart domain.
  void require_theta(const Vector& theta, const char* what = "theta") const;
  void require_eta(const Vector& eta, const char* what = "eta") const;

 private:
  std::shared_ptr<const FamilyModel> model_;
};

// A manifold point carried in both charts with both potentials cached.
class CoordinatePair {
 public:
  CoordinatePair(ThetaCoord theta, EtaCoord eta, double psi, double phi);

  const Vector& theta() const { return theta_.values; }
  const Vector& eta() const { return eta_.values; }
  double psi() const { return psi_; }
  double phi() const { return phi_; }

  const Vector& coordinates(Chart chart) const {
    return chart == Chart::theta ? theta_.values : eta_.values;
  }

 private:
  ThetaCoord theta_;
  EtaCoord eta_;
  double psi_;
  double phi_;
};

struct MetricMatrix {
  Matrix entries;
  Chart representation;  // theta: g_ij, eta: g^ij
};

struct ConjugateSolution {
  ThetaCoord theta;
  double phi;
  int iterations;
  double gradient_norm;
};

double potential_psi(const FamilyDescriptor& family, const ThetaCoord& theta);
double potential_phi(const FamilyDescriptor& family, const EtaCoord& eta);

EtaCoord eta_from_theta(const FamilyDescriptor& family, const ThetaCoord& theta);
ThetaCoord theta_from_eta(const FamilyDescriptor& family, const EtaCoord& eta);

CoordinatePair point_from_theta(const FamilyDescriptor& family, const ThetaCoord& theta);
CoordinatePair point_from_eta(const FamilyDescriptor& family, const EtaCoord& eta);
CoordinatePair point_from(const FamilyDescriptor& family, Chart chart, const Vector& coords);

// theta-form is the Hessian of psi, eta-form its inverse. Throws
// ConditioningError when the result is not positive definite.
MetricMatrix metric(const FamilyDescriptor& family, const CoordinatePair& point,
                    Chart representation);

// argmax over theta of theta.eta - psi(theta), by damped Newton.
ConjugateSolution conjugate_solve(const FamilyDescriptor& family, const EtaCoord& eta,
                                  std::optional<ThetaCoord> initial_theta = std::nullopt);

// |psi(theta) + phi(eta) - theta.eta|, using the family's own potentials.
double duality_residual(const FamilyDescriptor& family, const CoordinatePair& point);

// Central differences with per-coordinate step cbrt(eps) * (1 + |x_i|).
Vector central_difference_gradient(const std::function<double(const Vector&)>& f,
                                   const Vector& x);
Matrix central_difference_jacobian(const std::function<Vector(const Vector&)>& f,
                                   const Vector& x);

// Wraps a family so that phi and theta_from_eta are only reachable through
// conjugate_solve. Used to exercise the numerical Legendre path.
FamilyDescriptor with_numerical_dual(const FamilyDescriptor& family);

}  // namespace dflat
