#include "dflat/divergences.hpp"

#include <cmath>

namespace dflat {

std::string to_string(DivergenceKind kind) {
  switch (kind) {
    case DivergenceKind::canonical:
      return "canonical";
    case DivergenceKind::affine:
      return "affine";
    case DivergenceKind::psi_skew:
      return "psi_divergence";
    case DivergenceKind::phi_skew:
      return "phi_divergence";
    case DivergenceKind::renyi:
      return "renyi";
    case DivergenceKind::combination:
      return "skew_combination";
  }
  return "unknown";
}

namespace {

constexpr double kSlack = 1e-12;

void require_point(const FamilyDescriptor& family, const CoordinatePair& point, const char* what) {
  family.require_theta(point.theta(), what);
  family.require_eta(point.eta(), what);
}

double check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw DomainError("alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  return alpha;
}

// Clamps rounding-level negatives to zero; anything larger is a logic error.
double nonnegative(double value, double magnitude, DivergenceKind kind) {
  if (!std::isfinite(value)) {
    throw DomainError(to_string(kind) + ": non-finite value");
  }
  if (value >= 0.0) {
    return value;
  }
  if (value >= -nonnegativity_slack(magnitude)) {
    return 0.0;
  }
  throw InvariantError(to_string(kind) + ": negative value " + std::to_string(value));
}

}  // namespace

double nonnegativity_slack(double term_magnitude) { return kSlack * (1.0 + term_magnitude); }

DivergenceValue canonical(const FamilyDescriptor& family, const CoordinatePair& p,
                          const CoordinatePair& q) {
  require_point(family, p, "P");
  require_point(family, q, "Q");
  const double cross = p.theta().dot(q.eta());
  const double value = p.psi() + q.phi() - cross;
  const double magnitude = std::abs(p.psi()) + std::abs(q.phi()) + std::abs(cross);
  return {DivergenceKind::canonical, nonnegative(value, magnitude, DivergenceKind::canonical), {}};
}

DivergenceValue affine(const FamilyDescriptor& family, const CoordinatePair& p,
                       const CoordinatePair& q) {
  require_point(family, p, "P");
  require_point(family, q, "Q");
  const Vector d_eta = q.eta() - p.eta();
  const Vector d_theta = q.theta() - p.theta();
  // Elementwise products commute, so swapping P and Q is bit-identical.
  const double value = d_eta.dot(d_theta);
  const double magnitude = d_eta.cwiseAbs().dot(d_theta.cwiseAbs());
  return {DivergenceKind::affine, nonnegative(value, magnitude, DivergenceKind::affine), {}};
}

double dual_inner_product(const FamilyDescriptor& family, const CoordinatePair& q,
                          const CoordinatePair& r, const CoordinatePair& base) {
  require_point(family, q, "Q");
  require_point(family, r, "R");
  require_point(family, base, "base");
  const Vector dq_theta = q.theta() - base.theta();
  const Vector dr_theta = r.theta() - base.theta();
  const Vector dq_eta = q.eta() - base.eta();
  const Vector dr_eta = r.eta() - base.eta();
  return 0.5 * dq_theta.dot(dr_eta) + 0.5 * dr_theta.dot(dq_eta);
}

CoordinatePair combine(const FamilyDescriptor& family, const CoordinatePair& p,
                       const CoordinatePair& q, double a, double b, Chart chart) {
  const Vector coords = a * p.coordinates(chart) + b * q.coordinates(chart);
  const bool inside =
      chart == Chart::theta ? family.in_theta_domain(coords) : family.in_eta_domain(coords);
  if (!inside) {
    throw DomainError("combination point outside the " + to_string(chart) + " domain of " +
                      family.name());
  }
  return point_from(family, chart, coords);
}

DivergenceValue psi_divergence(const FamilyDescriptor& family, const CoordinatePair& p,
                               const CoordinatePair& q, double alpha) {
  check_alpha(alpha);
  require_point(family, p, "P");
  require_point(family, q, "Q");
  const CoordinatePair r = combine(family, p, q, 1.0 - alpha, alpha, Chart::theta);
  const double value = (1.0 - alpha) * p.psi() + alpha * q.psi() - r.psi();
  const double magnitude =
      (1.0 - alpha) * std::abs(p.psi()) + alpha * std::abs(q.psi()) + std::abs(r.psi());
  return {DivergenceKind::psi_skew, nonnegative(value, magnitude, DivergenceKind::psi_skew),
          {alpha}};
}

DivergenceValue phi_divergence(const FamilyDescriptor& family, const CoordinatePair& p,
                               const CoordinatePair& q, double alpha) {
  check_alpha(alpha);
  require_point(family, p, "P");
  require_point(family, q, "Q");
  const CoordinatePair r = combine(family, p, q, 1.0 - alpha, alpha, Chart::eta);
  const double value = (1.0 - alpha) * p.phi() + alpha * q.phi() - r.phi();
  const double magnitude =
      (1.0 - alpha) * std::abs(p.phi()) + alpha * std::abs(q.phi()) + std::abs(r.phi());
  return {DivergenceKind::phi_skew, nonnegative(value, magnitude, DivergenceKind::phi_skew),
          {alpha}};
}

SkewCombination skew_combination(const FamilyDescriptor& family, const CoordinatePair& p,
                                 const CoordinatePair& q, double a, double b, Chart side) {
  require_point(family, p, "P");
  require_point(family, q, "Q");
  CoordinatePair r = combine(family, p, q, a, b, side);
  double divergence_sum = 0.0;
  double potential_form = 0.0;
  if (side == Chart::theta) {
    divergence_sum = a * canonical(family, p, r).value + b * canonical(family, q, r).value;
    potential_form = (a + b - 1.0) * r.phi() + a * p.psi() + b * q.psi() - r.psi();
  } else {
    divergence_sum = a * canonical(family, r, p).value + b * canonical(family, r, q).value;
    potential_form = (a + b - 1.0) * r.psi() + a * p.phi() + b * q.phi() - r.phi();
  }
  return {divergence_sum, potential_form, std::move(r)};
}

DivergenceValue renyi(const FamilyDescriptor& family, const CoordinatePair& p,
                      const CoordinatePair& q, double alpha) {
  check_alpha(alpha);
  if (family.kind() == FamilyKind::mixture) {
    throw UnsupportedError("renyi: defined through the psi-divergence of exponential families");
  }
  const double bhattacharyya = psi_divergence(family, p, q, 1.0 - alpha).value;
  return {DivergenceKind::renyi, bhattacharyya / (1.0 - alpha), {alpha}};
}

}  // namespace dflat
