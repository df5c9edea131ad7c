#include "dflat/geodesics.hpp"

#include <cmath>
#include <string>

#include "dflat/divergences.hpp"
#include "dflat/quadrature.hpp"

namespace dflat {

namespace {

constexpr int kCertificationGrid = 65;

bool chart_contains(const FamilyDescriptor& family, Chart chart, const Vector& coords) {
  return chart == Chart::theta ? family.in_theta_domain(coords) : family.in_eta_domain(coords);
}

// a^T g a for the metric at chart coordinates x, in the chart's own form.
double quadratic_form_at(const FamilyDescriptor& family, Chart chart, const Vector& x,
                         const Vector& a) {
  if (!chart_contains(family, chart, x)) {
    throw QuadratureError("quadrature node outside the " + to_string(chart) + " domain");
  }
  const CoordinatePair q = point_from(family, chart, x);
  return a.dot(metric(family, q, chart).entries * a);
}

}  // namespace

GeodesicSpec::GeodesicSpec(const FamilyDescriptor& family, CoordinatePair base, Vector direction,
                           Chart chart, double parameter_bound)
    : base_(std::move(base)),
      direction_(std::move(direction)),
      chart_(chart),
      parameter_bound_(parameter_bound) {
  if (direction_.size() != family.dimension() || !direction_.allFinite()) {
    throw DomainError("GeodesicSpec: direction must be finite with the family dimension");
  }
  if (!std::isfinite(parameter_bound_) || parameter_bound_ < 0.0) {
    throw DomainError("GeodesicSpec: parameter bound must be finite and nonnegative");
  }
  for (int k = 0; k < kCertificationGrid; ++k) {
    const double t = parameter_bound_ * k / (kCertificationGrid - 1);
    if (!chart_contains(family, chart_, coordinates_at(t))) {
      throw DomainError("GeodesicSpec: segment leaves the " + to_string(chart_) +
                        " domain near t = " + std::to_string(t));
    }
  }
}

Vector GeodesicSpec::coordinates_at(double t) const {
  return base_.coordinates(chart_) + t * direction_;
}

GeodesicSpec segment(const FamilyDescriptor& family, const CoordinatePair& p,
                     const CoordinatePair& r, Chart chart) {
  return GeodesicSpec(family, p, r.coordinates(chart) - p.coordinates(chart), chart, 1.0);
}

CoordinatePair interpolate(const FamilyDescriptor& family, const CoordinatePair& p,
                           const CoordinatePair& r, double t, Chart chart) {
  if (t == 0.0) return p;
  if (t == 1.0) return r;
  const Vector coords = (1.0 - t) * p.coordinates(chart) + t * r.coordinates(chart);
  if (!chart_contains(family, chart, coords)) {
    throw DomainError("interpolate: point outside the " + to_string(chart) + " domain");
  }
  return point_from(family, chart, coords);
}

CoordinatePair point_at(const FamilyDescriptor& family, const GeodesicSpec& spec, double t) {
  if (t == 0.0) return spec.base();
  const Vector coords = spec.coordinates_at(t);
  if (!chart_contains(family, spec.chart(), coords)) {
    throw DomainError("point_at: point outside the " + to_string(spec.chart()) + " domain");
  }
  return point_from(family, spec.chart(), coords);
}

double affine_via_metric_integral(const FamilyDescriptor& family, const GeodesicSpec& spec) {
  const double bound = spec.parameter_bound();
  if (bound == 0.0) return 0.0;
  auto integrand = [&](double t) {
    return quadratic_form_at(family, spec.chart(), spec.coordinates_at(t), spec.direction());
  };
  return bound * integrate_gauss_legendre_composite(integrand, 0.0, bound);
}

double canonical_via_weighted_integral(const FamilyDescriptor& family, const GeodesicSpec& spec) {
  const double bound = spec.parameter_bound();
  if (bound == 0.0) return 0.0;
  const bool theta_chart = spec.chart() == Chart::theta;
  auto integrand = [&](double t) {
    const double weight = theta_chart ? t : bound - t;
    return weight *
           quadratic_form_at(family, spec.chart(), spec.coordinates_at(t), spec.direction());
  };
  return integrate_gauss_legendre_composite(integrand, 0.0, bound);
}

GeodesicProfile divergence_profile(const FamilyDescriptor& family, const CoordinatePair& p,
                                   const CoordinatePair& r, Chart chart, int grid_size) {
  if (grid_size < 2) {
    throw DomainError("divergence_profile: grid needs at least two points");
  }
  const GeodesicSpec spec = segment(family, p, r, chart);
  GeodesicProfile profile{chart, {}};
  profile.rows.reserve(static_cast<std::size_t>(grid_size));
  for (int k = 0; k < grid_size; ++k) {
    const double t = static_cast<double>(k) / (grid_size - 1);
    CoordinatePair q = k == grid_size - 1 ? r : point_at(family, spec, t);
    const double d = canonical(family, p, q).value;
    const double d_a = affine(family, p, q).value;
    profile.rows.push_back({t, std::move(q), d, d_a});
  }
  for (std::size_t k = 1; k < profile.rows.size(); ++k) {
    const ProfileRow& prev = profile.rows[k - 1];
    const ProfileRow& row = profile.rows[k];
    const double slack = 1e-10 * (1.0 + std::abs(row.canonical) + std::abs(row.affine));
    if (row.canonical < prev.canonical - slack || row.affine < prev.affine - slack) {
      throw InvariantError("divergence_profile: divergence decreases near t = " +
                           std::to_string(row.t));
    }
  }
  return profile;
}

}  // namespace dflat
