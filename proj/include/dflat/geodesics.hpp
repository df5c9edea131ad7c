#pragma once

#include <vector>

#include "dflat/manifold.hpp"

namespace dflat {

// chart(Q(t)) = chart(base) + t * direction for t in [0, T].
class GeodesicSpec {
 public:
  // Throws DomainError unless the segment stays inside the chart domain on a
  // 65-point grid over [0, T].
  GeodesicSpec(const FamilyDescriptor& family, CoordinatePair base, Vector direction,
               Chart chart, double parameter_bound);

  const CoordinatePair& base() const { return base_; }
  const Vector& direction() const { return direction_; }
  Chart chart() const { return chart_; }
  double parameter_bound() const { return parameter_bound_; }

  // Chart coordinates at parameter t.
  Vector coordinates_at(double t) const;

 private:
  CoordinatePair base_;
  Vector direction_;
  Chart chart_;
  double parameter_bound_;
};

// Geodesic through P (t = 0) and R (t = 1).
GeodesicSpec segment(const FamilyDescriptor& family, const CoordinatePair& p,
                     const CoordinatePair& r, Chart chart);

// Q(t) with chart(Q) = (1-t) chart(P) + t chart(R).
CoordinatePair interpolate(const FamilyDescriptor& family, const CoordinatePair& p,
                           const CoordinatePair& r, double t, Chart chart);

CoordinatePair point_at(const FamilyDescriptor& family, const GeodesicSpec& spec, double t);

// D_A(P, Q(T)) = T a.(int_0^T g(t) dt) a with g the metric in the geodesic's
// chart form, by composite 64-node Gauss-Legendre.
double affine_via_metric_integral(const FamilyDescriptor& family, const GeodesicSpec& spec);

// Both charts give canonical(P, Q(T)):
//   theta chart: a.(int_0^T t g_ij dt) a
//   eta chart:   a.(int_0^T (T - t) g^ij dt) a, the nested double integral
//                reduced to a single one.
double canonical_via_weighted_integral(const FamilyDescriptor& family, const GeodesicSpec& spec);

struct ProfileRow {
  double t;
  CoordinatePair point;
  double canonical;  // D(P || Q(t))
  double affine;     // D_A(P, Q(t))
};

struct GeodesicProfile {
  Chart chart;
  std::vector<ProfileRow> rows;
};

// Uniform grid of grid_size points over [0, 1] along the segment P -> R.
// Throws InvariantError if either divergence column decreases beyond rounding.
GeodesicProfile divergence_profile(const FamilyDescriptor& family, const CoordinatePair& p,
                                   const CoordinatePair& r, Chart chart, int grid_size);

}  // namespace dflat
