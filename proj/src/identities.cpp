#include "dflat/identities.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <limits>

#include "dflat/divergences.hpp"
#include "dflat/families.hpp"
#include "dflat/geodesics.hpp"
#include "dflat/sampling.hpp"

namespace dflat {

namespace {

constexpr int kMaxAttempts = 10;
constexpr double kSlackTolerance = 1e-10;
constexpr double kGradientTolerance = 1e-5;
constexpr double kMetricPairTolerance = 1e-8;
constexpr double kSymmetryTolerance = 1e-10;
constexpr double kRoundTripTolerance = 1e-8;
constexpr double kFisherTolerance = 1e-8;
constexpr double kNumericalDualTolerance = 1e-6;
constexpr int kProfileGrid = 101;

bool is_exponential(FamilyKind kind) {
  return kind == FamilyKind::gaussian1d || kind == FamilyKind::binomial ||
         kind == FamilyKind::categorical;
}

bool has_distribution(FamilyKind kind) { return kind != FamilyKind::selfdual; }

WorstCase::NamedPoint named(const std::string& name, const CoordinatePair& point) {
  return {name, point.theta(), point.eta()};
}

double sum_abs(std::initializer_list<double> terms) {
  double total = 0.0;
  for (double t : terms) total += std::abs(t);
  return total;
}

std::string chart_suffix(Chart chart) { return chart == Chart::theta ? "_theta" : "_eta"; }

// Accumulates one report. `describe` builds the worst-case record lazily.
class ReportBuilder {
 public:
  ReportBuilder(std::string identity, ReportKind kind, double tolerance, std::uint64_t seed,
                bool relative = true) {
    report_.identity = std::move(identity);
    report_.kind = kind;
    report_.tolerance = tolerance;
    report_.relative = relative;
    report_.worst_case.seed = seed;
    report_.min_slack = std::numeric_limits<double>::infinity();
  }

  // |lhs - rhs| with the relative form normalized by 1 + sum of |terms|.
  template <class Describe>
  void identity(double lhs, double rhs, double magnitude, std::uint64_t index,
                Describe&& describe) {
    const double abs_residual = std::abs(lhs - rhs);
    error(abs_residual, abs_residual / (1.0 + magnitude), index, describe);
  }

  template <class Describe>
  void error(double abs_residual, double rel_residual, std::uint64_t index, Describe&& describe) {
    ++report_.samples;
    if (!std::isfinite(abs_residual) || !std::isfinite(rel_residual)) {
      abs_residual = rel_residual = std::numeric_limits<double>::infinity();
    }
    const double merit = report_.relative ? rel_residual : abs_residual;
    const double current = report_.relative ? report_.max_rel_residual : report_.max_abs_residual;
    report_.max_abs_residual = std::max(report_.max_abs_residual, abs_residual);
    report_.max_rel_residual = std::max(report_.max_rel_residual, rel_residual);
    if (merit > current || !has_worst_) record(index, describe);
  }

  template <class Describe>
  void slack(double value, std::uint64_t index, Describe&& describe) {
    ++report_.samples;
    if (std::isnan(value)) value = -std::numeric_limits<double>::infinity();
    if (value < report_.min_slack || !has_worst_) {
      report_.min_slack = std::min(report_.min_slack, value);
      record(index, describe);
    }
  }

  ResidualReport finish() {
    if (report_.kind == ReportKind::slack) {
      if (report_.samples == 0) report_.min_slack = 0.0;
      report_.passed = report_.min_slack >= -report_.tolerance;
    } else {
      report_.min_slack = 0.0;
      const double merit = report_.relative ? report_.max_rel_residual : report_.max_abs_residual;
      report_.passed = merit <= report_.tolerance;
    }
    return report_;
  }

 private:
  template <class Describe>
  void record(std::uint64_t index, Describe&& describe) {
    const std::uint64_t seed = report_.worst_case.seed;
    report_.worst_case = describe();
    report_.worst_case.seed = seed;
    report_.worst_case.sample_index = index;
    has_worst_ = true;
  }

  ResidualReport report_;
  bool has_worst_ = false;
};

CoordinatePair draw(const FamilyDescriptor& family, SampleStream& stream) {
  return sample_point(family, stream);
}

bool in_chart(const FamilyDescriptor& family, Chart chart, const Vector& coords) {
  return chart == Chart::theta ? family.in_theta_domain(coords) : family.in_eta_domain(coords);
}

// ---------------------------------------------------------------------------
// Triangle

struct RightTriangle {
  CoordinatePair p, q, r;
};

// R with eta(R) - eta(Q) orthogonal to theta(P) - theta(Q).
RightTriangle sample_right_triangle(const FamilyDescriptor& family, SampleStream& stream) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    CoordinatePair p = draw(family, stream);
    CoordinatePair q = draw(family, stream);
    const CoordinatePair target = draw(family, stream);
    const Vector w = p.theta() - q.theta();
    Vector v = target.eta() - q.eta();
    const double ww = w.squaredNorm();
    if (ww > 0.0) v -= (v.dot(w) / ww) * w;
    const Vector eta_r = q.eta() + std::ldexp(1.0, -attempt) * v;
    if (!family.in_eta_domain(eta_r)) continue;
    CoordinatePair r = point_from_eta(family, EtaCoord{eta_r});
    return {std::move(p), std::move(q), std::move(r)};
  }
  throw SamplingExhausted("orthogonal completion of a right triangle in " + family.name());
}

// ---------------------------------------------------------------------------
// Division

struct Collinear {
  CoordinatePair p, q, r;
  double t;
};

Collinear sample_collinear(const FamilyDescriptor& family, Chart chart, SampleStream& stream) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    CoordinatePair p = draw(family, stream);
    CoordinatePair r = draw(family, stream);
    const double t = stream.uniform() < 0.5 ? stream.uniform(0.05, 0.95) : stream.uniform(1.05, 1.5);
    const Vector coords = (1.0 - t) * p.coordinates(chart) + t * r.coordinates(chart);
    if (!in_chart(family, chart, coords)) continue;
    CoordinatePair q = point_from(family, chart, coords);
    return {std::move(p), std::move(q), std::move(r), t};
  }
  throw SamplingExhausted("collinear point on the " + to_string(chart) + " segment in " +
                          family.name());
}

// ---------------------------------------------------------------------------
// Parallelograms

struct Parallelogram {
  CoordinatePair p, q, r, s;
};

// chart(P) + chart(R) = chart(Q) + chart(S). Q and S are pulled towards P
// by 2^-attempt when the fourth vertex leaves the domain.
Parallelogram sample_parallelogram(const FamilyDescriptor& family, Chart chart,
                                   SampleStream& stream) {
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    CoordinatePair p = draw(family, stream);
    const CoordinatePair q0 = draw(family, stream);
    const CoordinatePair s0 = draw(family, stream);
    const double scale = std::ldexp(1.0, -attempt);
    const Vector& base = p.coordinates(chart);
    const Vector q_c = base + scale * (q0.coordinates(chart) - base);
    const Vector s_c = base + scale * (s0.coordinates(chart) - base);
    const Vector r_c = q_c + s_c - base;
    if (!in_chart(family, chart, q_c) || !in_chart(family, chart, s_c) ||
        !in_chart(family, chart, r_c)) {
      continue;
    }
    CoordinatePair q = point_from(family, chart, q_c);
    CoordinatePair s = point_from(family, chart, s_c);
    CoordinatePair r = point_from(family, chart, r_c);
    return {std::move(p), std::move(q), std::move(r), std::move(s)};
  }
  throw SamplingExhausted("parallelogram completion on the " + to_string(chart) + " side in " +
                          family.name());
}

// ---------------------------------------------------------------------------
// Skew combination weights: a = c (1 - alpha), b = c alpha; c is pulled
// towards 1 on each retry so the combination ends up convex.

struct Combination {
  CoordinatePair p, q;
  double a, b;
};

Combination sample_combination(const FamilyDescriptor& family, Chart side, SampleStream& stream) {
  CoordinatePair p = draw(family, stream);
  CoordinatePair q = draw(family, stream);
  const double alpha = sample_alpha(stream);
  double c = stream.uniform(0.8, 1.25);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    const double a = c * (1.0 - alpha);
    const double b = c * alpha;
    if (in_chart(family, side, a * p.coordinates(side) + b * q.coordinates(side))) {
      return {std::move(p), std::move(q), a, b};
    }
    c = 1.0 + 0.5 * (c - 1.0);
  }
  throw SamplingExhausted("skew combination on the " + to_string(side) + " side in " +
                          family.name());
}

double relative_to(double abs_error, double reference) {
  const double scale = std::abs(reference);
  return scale > 0.0 ? abs_error / scale : abs_error;
}

double max_relative_vector_error(const Vector& approx, const Vector& exact) {
  const double scale = exact.cwiseAbs().maxCoeff();
  const double err = (approx - exact).cwiseAbs().maxCoeff();
  return scale > 0.0 ? err / scale : err;
}

}  // namespace

double ResidualReport::figure_of_merit() const {
  if (kind == ReportKind::slack) return min_slack;
  return relative ? max_rel_residual : max_abs_residual;
}

std::vector<ResidualReport> check_triangle_family(const FamilyDescriptor& family,
                                                  const SampleConfig& config) {
  const std::uint64_t seed = config.seed;
  ReportBuilder triangular("triangular_relation", ReportKind::residual, config.tol_closed, seed);
  ReportBuilder pythagorean("pythagorean_relation", ReportKind::residual, config.tol_closed, seed);
  ReportBuilder cosines("law_of_cosines", ReportKind::residual, config.tol_closed, seed);

  for (int i = 0; i < config.samples; ++i) {
    const auto index = static_cast<std::uint64_t>(i);
    {
      SampleStream stream(seed, "triangle", index);
      const CoordinatePair p = draw(family, stream);
      const CoordinatePair q = draw(family, stream);
      const CoordinatePair r = draw(family, stream);
      auto describe = [&] {
        WorstCase w;
        w.points = {named("P", p), named("Q", q), named("R", r)};
        return w;
      };

      const double d_pq = canonical(family, p, q).value;
      const double d_qr = canonical(family, q, r).value;
      const double d_pr = canonical(family, p, r).value;
      const double cross = (r.eta() - q.eta()).dot(p.theta() - q.theta());
      triangular.identity(d_pq + d_qr - cross, d_pr, sum_abs({d_pq, d_qr, d_pr, cross}), index,
                          describe);

      const double a_pq = affine(family, p, q).value;
      const double a_qr = affine(family, q, r).value;
      const double a_pr = affine(family, p, r).value;
      const double angle = dual_inner_product(family, p, r, q);
      cosines.identity(a_pq + a_qr - 2.0 * angle, a_pr, sum_abs({a_pq, a_qr, 2.0 * angle, a_pr}),
                       index, describe);
    }
    {
      SampleStream stream(seed, "pythagorean", index);
      const RightTriangle tri = sample_right_triangle(family, stream);
      const double d_pq = canonical(family, tri.p, tri.q).value;
      const double d_qr = canonical(family, tri.q, tri.r).value;
      const double d_pr = canonical(family, tri.p, tri.r).value;
      pythagorean.identity(d_pq + d_qr, d_pr, sum_abs({d_pq, d_qr, d_pr}), index, [&] {
        WorstCase w;
        w.points = {named("P", tri.p), named("Q", tri.q), named("R", tri.r)};
        return w;
      });
    }
  }
  return {triangular.finish(), pythagorean.finish(), cosines.finish()};
}

std::vector<ResidualReport> check_division_family(const FamilyDescriptor& family,
                                                  const SampleConfig& config) {
  std::vector<ResidualReport> reports;
  for (Chart chart : {Chart::theta, Chart::eta}) {
    const std::string suffix = chart_suffix(chart);
    const std::uint64_t seed = config.seed;
    ReportBuilder lemma("division_lemma" + suffix, ReportKind::residual, config.tol_closed, seed);
    ReportBuilder reversed("reversed_division" + suffix, ReportKind::residual, config.tol_closed,
                           seed);
    ReportBuilder theorem("division_theorem" + suffix, ReportKind::residual, config.tol_closed,
                          seed);
    ReportBuilder superadditive("collinear_superadditivity" + suffix, ReportKind::slack,
                                kSlackTolerance, seed);

    for (int i = 0; i < config.samples; ++i) {
      const auto index = static_cast<std::uint64_t>(i);
      SampleStream stream(seed, "division" + suffix, index);
      const Collinear c = sample_collinear(family, chart, stream);
      const double t = c.t;
      auto describe = [&] {
        WorstCase w;
        w.points = {named("P", c.p), named("Q", c.q), named("R", c.r)};
        w.parameters = {{"t", t}};
        return w;
      };

      const double d_pr = canonical(family, c.p, c.r).value;
      const double d_pq = canonical(family, c.p, c.q).value;
      const double d_qr = canonical(family, c.q, c.r).value;
      const double d_rp = canonical(family, c.r, c.p).value;
      const double d_qp = canonical(family, c.q, c.p).value;
      const double d_rq = canonical(family, c.r, c.q).value;
      const double a_pq = affine(family, c.p, c.q).value;
      const double a_qr = affine(family, c.q, c.r).value;
      const double a_pr = affine(family, c.p, c.r).value;

      const double w_t = t / (1.0 - t);
      const double w_s = (1.0 - t) / t;
      // theta: D(P||R) = D(P||Q) + D(Q||R) + t/(1-t) D_A(R,Q)
      // eta:   D(P||R) = D(P||Q) + D(Q||R) + (1-t)/t D_A(P,Q)
      const double lemma_extra = chart == Chart::theta ? w_t * a_qr : w_s * a_pq;
      lemma.identity(d_pr, d_pq + d_qr + lemma_extra, sum_abs({d_pr, d_pq, d_qr, lemma_extra}),
                     index, describe);
      // theta: D(R||P) = D(Q||P) + D(R||Q) + (1-t)/t D_A(Q,P)
      // eta:   D(R||P) = D(Q||P) + D(R||Q) + t/(1-t) D_A(R,Q)
      const double reversed_extra = chart == Chart::theta ? w_s * a_pq : w_t * a_qr;
      reversed.identity(d_rp, d_qp + d_rq + reversed_extra,
                        sum_abs({d_rp, d_qp, d_rq, reversed_extra}), index, describe);
      const double rhs = a_pq / t + a_qr / (1.0 - t);
      theorem.identity(a_pr, rhs, sum_abs({a_pr, a_pq / t, a_qr / (1.0 - t)}), index, describe);
      if (t > 0.0 && t < 1.0) {
        superadditive.slack(d_pr - d_pq - d_qr, index, describe);
      }
    }
    reports.push_back(lemma.finish());
    reports.push_back(reversed.finish());
    reports.push_back(theorem.finish());
    reports.push_back(superadditive.finish());
  }
  return reports;
}

std::vector<ResidualReport> check_vector_sum_family(const FamilyDescriptor& family,
                                                    const SampleConfig& config) {
  std::vector<ResidualReport> reports;
  for (Chart chart : {Chart::theta, Chart::eta}) {
    const std::string suffix = chart_suffix(chart);
    const std::uint64_t seed = config.seed;
    const double tol = config.tol_closed;
    ReportBuilder expansion_r("expansion_formula_base_R" + suffix, ReportKind::residual, tol, seed);
    ReportBuilder expansion_p("expansion_formula_base_P" + suffix, ReportKind::residual, tol, seed);
    ReportBuilder parallelogram("parallelogram_law" + suffix, ReportKind::residual, tol, seed);
    ReportBuilder polarization("polarization_identity" + suffix, ReportKind::residual, tol, seed);
    ReportBuilder angles("interior_angle_sum" + suffix, ReportKind::residual, tol, seed);

    for (int i = 0; i < config.samples; ++i) {
      const auto index = static_cast<std::uint64_t>(i);
      SampleStream stream(seed, "parallelogram" + suffix, index);
      const Parallelogram g = sample_parallelogram(family, chart, stream);
      auto describe = [&] {
        WorstCase w;
        w.points = {named("P", g.p), named("Q", g.q), named("R", g.r), named("S", g.s)};
        return w;
      };

      const double a_pr = affine(family, g.p, g.r).value;
      const double a_pq = affine(family, g.p, g.q).value;
      const double a_ps = affine(family, g.p, g.s).value;
      const double a_rq = affine(family, g.r, g.q).value;
      const double a_rs = affine(family, g.r, g.s).value;
      const double a_qs = affine(family, g.q, g.s).value;
      const double qs_p = dual_inner_product(family, g.q, g.s, g.p);
      const double qs_r = dual_inner_product(family, g.q, g.s, g.r);
      const double pr_q = dual_inner_product(family, g.p, g.r, g.q);
      const double pr_s = dual_inner_product(family, g.p, g.r, g.s);

      expansion_r.identity(a_pr, a_pq + a_ps + 2.0 * qs_r, sum_abs({a_pr, a_pq, a_ps, 2.0 * qs_r}),
                           index, describe);
      expansion_p.identity(a_pr, a_rq + a_rs + 2.0 * qs_p, sum_abs({a_pr, a_rq, a_rs, 2.0 * qs_p}),
                           index, describe);
      // Four sides PQ, QR, RS, SP against the two diagonals.
      parallelogram.identity(a_pq + a_rq + a_rs + a_ps, a_pr + a_qs,
                             sum_abs({a_pq, a_rq, a_rs, a_ps, a_pr, a_qs}), index, describe);
      polarization.identity(2.0 * (qs_p + qs_r), a_pr - a_qs,
                            sum_abs({2.0 * qs_p, 2.0 * qs_r, a_pr, a_qs}), index, describe);
      angles.identity(qs_p + qs_r + pr_q + pr_s, 0.0, sum_abs({qs_p, qs_r, pr_q, pr_s}), index,
                      describe);
    }
    reports.push_back(expansion_r.finish());
    reports.push_back(expansion_p.finish());
    reports.push_back(parallelogram.finish());
    reports.push_back(polarization.finish());
    reports.push_back(angles.finish());
  }
  return reports;
}

std::vector<ResidualReport> check_inequalities_family(const FamilyDescriptor& family,
                                                      const SampleConfig& config) {
  const std::uint64_t seed = config.seed;
  const FamilyKind kind = family.kind();
  const bool exponential = is_exponential(kind);
  const bool mixture = kind == FamilyKind::mixture;

  ReportBuilder psi_bound("affine_bounds_psi_divergence", ReportKind::slack, kSlackTolerance, seed);
  ReportBuilder phi_bound("affine_bounds_phi_divergence", ReportKind::slack, kSlackTolerance, seed);
  ReportBuilder lin_js("jeffreys_bounds_jensen_shannon", ReportKind::slack, kSlackTolerance, seed);
  ReportBuilder lin_b("jeffreys_bounds_bhattacharyya", ReportKind::slack, kSlackTolerance, seed);
  ReportBuilder renyi_bound("jeffreys_bounds_renyi", ReportKind::slack, kSlackTolerance, seed);

  for (int i = 0; i < config.samples; ++i) {
    const auto index = static_cast<std::uint64_t>(i);
    SampleStream stream(seed, "inequalities", index);
    const CoordinatePair p = draw(family, stream);
    const CoordinatePair q = draw(family, stream);
    const double alpha = sample_alpha(stream);
    auto describe = [&] {
      WorstCase w;
      w.points = {named("P", p), named("Q", q)};
      w.parameters = {{"alpha", alpha}};
      return w;
    };
    const double weight = alpha * (1.0 - alpha);
    const double a_pq = affine(family, p, q).value;
    psi_bound.slack(weight * a_pq - psi_divergence(family, p, q, alpha).value, index, describe);
    phi_bound.slack(weight * a_pq - phi_divergence(family, p, q, alpha).value, index, describe);
    if (mixture) {
      const double jeffreys = reference_jeffreys(family, p, q);
      lin_js.slack(weight * jeffreys - reference_js(family, p, q, alpha), index, describe);
    }
    if (exponential) {
      const double jeffreys = reference_jeffreys(family, p, q);
      lin_b.slack(weight * jeffreys - reference_bhattacharyya(family, p, q, alpha), index,
                  describe);
      renyi_bound.slack(alpha * jeffreys - renyi(family, p, q, alpha).value, index, describe);
    }
  }
  std::vector<ResidualReport> reports{psi_bound.finish(), phi_bound.finish()};
  if (mixture) reports.push_back(lin_js.finish());
  if (exponential) {
    reports.push_back(lin_b.finish());
    reports.push_back(renyi_bound.finish());
  }
  return reports;
}

std::vector<ResidualReport> check_consistency_family(const FamilyDescriptor& family,
                                                     const SampleConfig& config) {
  const std::uint64_t seed = config.seed;
  const FamilyKind kind = family.kind();
  const double tol = config.tol_closed;
  // The Gaussian Bhattacharyya oracle is itself a quadrature.
  const double b_tol = kind == FamilyKind::gaussian1d ? config.tol_quad : tol;
  const bool distribution = has_distribution(kind);
  const bool negentropy = kind == FamilyKind::gaussian1d || kind == FamilyKind::categorical ||
                          kind == FamilyKind::mixture;

  ReportBuilder kl("canonical_equals_kl", ReportKind::residual, tol, seed);
  ReportBuilder jeffreys("affine_equals_jeffreys", ReportKind::residual, tol, seed);
  ReportBuilder bhattacharyya("psi_divergence_equals_bhattacharyya", ReportKind::residual, b_tol,
                              seed);
  ReportBuilder js_entropy("phi_divergence_equals_js_entropy_form", ReportKind::residual, tol,
                           seed);
  ReportBuilder js_kl("phi_divergence_equals_js_kl_form", ReportKind::residual, tol, seed);
  ReportBuilder entropy("phi_equals_negative_entropy", ReportKind::residual, tol, seed);
  ReportBuilder skew_theta("skew_combination_theta", ReportKind::residual, tol, seed);
  ReportBuilder skew_eta("skew_combination_eta", ReportKind::residual, tol, seed);

  for (int i = 0; i < config.samples; ++i) {
    const auto index = static_cast<std::uint64_t>(i);
    if (distribution) {
      SampleStream stream(seed, "consistency", index);
      const CoordinatePair p = draw(family, stream);
      const CoordinatePair q = draw(family, stream);
      const double alpha = sample_alpha(stream);
      auto describe = [&] {
        WorstCase w;
        w.points = {named("P", p), named("Q", q)};
        w.parameters = {{"alpha", alpha}};
        return w;
      };
      const double d = canonical(family, p, q).value;
      const double kl_qp = reference_kl(family, q, p);
      kl.identity(d, kl_qp, sum_abs({d, kl_qp}), index, describe);
      const double a = affine(family, p, q).value;
      const double j = reference_jeffreys(family, p, q);
      jeffreys.identity(a, j, sum_abs({a, j}), index, describe);
      if (is_exponential(kind)) {
        const double b = psi_divergence(family, p, q, alpha).value;
        const double b_ref = reference_bhattacharyya(family, p, q, alpha);
        bhattacharyya.identity(b, b_ref, sum_abs({b, b_ref}), index, describe);
      }
      if (kind == FamilyKind::mixture) {
        const double js = phi_divergence(family, p, q, alpha).value;
        const double js_h = reference_js(family, p, q, alpha, JensenShannonForm::entropy);
        const double js_k = reference_js(family, p, q, alpha, JensenShannonForm::kullback_leibler);
        js_entropy.identity(js, js_h, sum_abs({js, js_h}), index, describe);
        js_kl.identity(js, js_k, sum_abs({js, js_k}), index, describe);
      }
      if (negentropy) {
        const double h = reference_entropy(family, p);
        entropy.identity(p.phi(), -h, sum_abs({p.phi(), h}), index, describe);
      }
    }
    for (Chart side : {Chart::theta, Chart::eta}) {
      SampleStream stream(seed, "skew_combination" + chart_suffix(side), index);
      const Combination c = sample_combination(family, side, stream);
      const SkewCombination result = skew_combination(family, c.p, c.q, c.a, c.b, side);
      const CoordinatePair& r = result.midpoint;
      const double magnitude =
          side == Chart::theta
              ? sum_abs({result.divergence_sum, (c.a + c.b - 1.0) * r.phi(), c.a * c.p.psi(),
                         c.b * c.q.psi(), r.psi()})
              : sum_abs({result.divergence_sum, (c.a + c.b - 1.0) * r.psi(), c.a * c.p.phi(),
                         c.b * c.q.phi(), r.phi()});
      ReportBuilder& builder = side == Chart::theta ? skew_theta : skew_eta;
      builder.identity(result.divergence_sum, result.potential_form, magnitude, index, [&] {
        WorstCase w;
        w.points = {named("P", c.p), named("Q", c.q), named("R", r)};
        w.parameters = {{"a", c.a}, {"b", c.b}};
        return w;
      });
    }
  }

  std::vector<ResidualReport> reports;
  if (distribution) {
    reports.push_back(kl.finish());
    reports.push_back(jeffreys.finish());
    if (is_exponential(kind)) reports.push_back(bhattacharyya.finish());
    if (kind == FamilyKind::mixture) {
      reports.push_back(js_entropy.finish());
      reports.push_back(js_kl.finish());
    }
    if (negentropy) reports.push_back(entropy.finish());
  }
  reports.push_back(skew_theta.finish());
  reports.push_back(skew_eta.finish());
  return reports;
}

std::vector<ResidualReport> check_geodesic_family(const FamilyDescriptor& family,
                                                  const SampleConfig& config) {
  std::vector<ResidualReport> reports;
  for (Chart chart : {Chart::theta, Chart::eta}) {
    const std::string suffix = chart_suffix(chart);
    const std::uint64_t seed = config.seed;
    ReportBuilder affine_integral("affine_metric_integral" + suffix, ReportKind::residual,
                                  config.tol_quad, seed);
    ReportBuilder canonical_integral("canonical_weighted_integral" + suffix, ReportKind::residual,
                                     config.tol_quad, seed);
    ReportBuilder profile("divergence_profile_monotone" + suffix, ReportKind::slack,
                          kSlackTolerance, seed);

    for (int i = 0; i < config.samples; ++i) {
      const auto index = static_cast<std::uint64_t>(i);
      SampleStream stream(seed, "geodesic" + suffix, index);
      const CoordinatePair p = draw(family, stream);
      const CoordinatePair r = draw(family, stream);
      const double bound = stream.uniform(0.5, 2.0);
      const GeodesicSpec spec(family, p, (r.coordinates(chart) - p.coordinates(chart)) / bound,
                              chart, bound);
      auto describe = [&] {
        WorstCase w;
        w.points = {named("P", p), named("R", r)};
        w.parameters = {{"T", bound}};
        return w;
      };

      const double a_direct = affine(family, p, r).value;
      const double a_integral = affine_via_metric_integral(family, spec);
      const double a_err = std::abs(a_integral - a_direct);
      affine_integral.error(a_err, relative_to(a_err, a_direct), index, describe);

      const double d_direct = canonical(family, p, r).value;
      const double d_integral = canonical_via_weighted_integral(family, spec);
      const double d_err = std::abs(d_integral - d_direct);
      canonical_integral.error(d_err, relative_to(d_err, d_direct), index, describe);

      const GeodesicSpec unit = segment(family, p, r, chart);
      double prev_d = 0.0;
      double prev_a = 0.0;
      double min_step = std::numeric_limits<double>::infinity();
      for (int k = 1; k < kProfileGrid; ++k) {
        const double t = static_cast<double>(k) / (kProfileGrid - 1);
        const CoordinatePair q = k == kProfileGrid - 1 ? r : point_at(family, unit, t);
        const double d = canonical(family, p, q).value;
        const double a = affine(family, p, q).value;
        min_step = std::min({min_step, d - prev_d, a - prev_a});
        prev_d = d;
        prev_a = a;
      }
      profile.slack(min_step, index, describe);
    }
    reports.push_back(affine_integral.finish());
    reports.push_back(canonical_integral.finish());
    reports.push_back(profile.finish());
  }
  return reports;
}

std::vector<ResidualReport> check_duality_family(const FamilyDescriptor& family,
                                                 const SampleConfig& config) {
  const std::uint64_t seed = config.seed;
  const FamilyKind kind = family.kind();
  const FamilyModel& model = family.model();
  const bool closed_psi = model.psi(model.interior_theta()).has_value();
  const bool fisher = kind == FamilyKind::binomial || kind == FamilyKind::categorical;
  const FamilyDescriptor numerical = with_numerical_dual(family);

  ReportBuilder duality("legendre_duality", ReportKind::residual, config.tol_closed, seed, false);
  ReportBuilder numeric("legendre_duality_numerical", ReportKind::residual,
                        kNumericalDualTolerance, seed, false);
  ReportBuilder round_trip("chart_round_trip", ReportKind::residual, kRoundTripTolerance, seed,
                           false);
  ReportBuilder grad_psi("eta_matches_psi_gradient", ReportKind::residual, kGradientTolerance, seed);
  ReportBuilder grad_phi("theta_matches_phi_gradient", ReportKind::residual, kGradientTolerance,
                         seed);
  ReportBuilder pair("metric_pair_inverse", ReportKind::residual, kMetricPairTolerance, seed, false);
  ReportBuilder symmetry("metric_symmetry", ReportKind::residual, kSymmetryTolerance, seed, false);
  ReportBuilder definite("metric_min_eigenvalue", ReportKind::slack, 0.0, seed);
  ReportBuilder fisher_sum("metric_equals_fisher_sum", ReportKind::residual, kFisherTolerance, seed);

  for (int i = 0; i < config.samples; ++i) {
    const auto index = static_cast<std::uint64_t>(i);
    SampleStream stream(seed, "duality", index);
    const CoordinatePair p = draw(family, stream);
    auto describe = [&] {
      WorstCase w;
      w.points = {named("P", p)};
      return w;
    };

    duality.error(duality_residual(family, p), 0.0, index, describe);

    if (closed_psi) {
      const CoordinatePair solved = point_from_eta(numerical, EtaCoord{p.eta()});
      const CoordinatePair mixed(ThetaCoord{solved.theta()}, EtaCoord{p.eta()}, solved.psi(),
                                 solved.phi());
      numeric.error(duality_residual(family, mixed), 0.0, index, describe);
    }

    const Vector theta_back = theta_from_eta(family, eta_from_theta(family, ThetaCoord{p.theta()}))
                                  .values;
    const Vector eta_back = eta_from_theta(family, theta_from_eta(family, EtaCoord{p.eta()})).values;
    const double trip = std::max((theta_back - p.theta()).cwiseAbs().maxCoeff(),
                                 (eta_back - p.eta()).cwiseAbs().maxCoeff());
    round_trip.error(trip, 0.0, index, describe);

    const Vector fd_eta = central_difference_gradient(
        [&](const Vector& x) { return potential_psi(family, ThetaCoord{x}); }, p.theta());
    const double e_psi = max_relative_vector_error(fd_eta, p.eta());
    grad_psi.error(e_psi, e_psi, index, describe);
    const Vector fd_theta = central_difference_gradient(
        [&](const Vector& x) { return potential_phi(family, EtaCoord{x}); }, p.eta());
    const double e_phi = max_relative_vector_error(fd_theta, p.theta());
    grad_phi.error(e_phi, e_phi, index, describe);

    const Matrix g = metric(family, p, Chart::theta).entries;
    const Matrix g_inv = metric(family, p, Chart::eta).entries;
    const Eigen::Index n = g.rows();
    const double pair_err = (g * g_inv - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    pair.error(pair_err, 0.0, index, describe);
    const double sym = std::max((g - g.transpose()).cwiseAbs().maxCoeff(),
                                (g_inv - g_inv.transpose()).cwiseAbs().maxCoeff());
    symmetry.error(sym, 0.0, index, describe);
    const Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()),
                                                    Eigen::EigenvaluesOnly);
    definite.slack(eig.eigenvalues().minCoeff(), index, describe);

    if (fisher) {
      const Matrix f = fisher_information_by_summation(family, p);
      const double scale = g.cwiseAbs().maxCoeff();
      const double err = (f - g).cwiseAbs().maxCoeff();
      fisher_sum.error(err, scale > 0.0 ? err / scale : err, index, describe);
    }
  }

  std::vector<ResidualReport> reports{duality.finish()};
  if (closed_psi) reports.push_back(numeric.finish());
  reports.push_back(round_trip.finish());
  reports.push_back(grad_psi.finish());
  reports.push_back(grad_phi.finish());
  reports.push_back(pair.finish());
  reports.push_back(symmetry.finish());
  ResidualReport spd = definite.finish();
  spd.passed = spd.min_slack > 0.0;
  reports.push_back(spd);
  if (fisher) reports.push_back(fisher_sum.finish());
  return reports;
}

std::vector<ResidualReport> run_all_checks(const FamilyDescriptor& family,
                                           const SampleConfig& config) {
  if (config.samples < 1) throw ConfigError("samples must be at least 1");
  if (!(config.tol_closed > 0.0) || !(config.tol_quad > 0.0)) {
    throw ConfigError("tolerances must be positive");
  }
  std::vector<ResidualReport> all;
  auto append = [&](std::vector<ResidualReport> part) {
    for (auto& r : part) all.push_back(std::move(r));
  };
  append(check_triangle_family(family, config));
  append(check_division_family(family, config));
  append(check_vector_sum_family(family, config));
  append(check_inequalities_family(family, config));
  append(check_consistency_family(family, config));
  append(check_geodesic_family(family, config));
  append(check_duality_family(family, config));
  return all;
}

}  // namespace dflat
