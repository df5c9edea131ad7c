#include "dflat/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dflat/families.hpp"
#include "family_models.hpp"

namespace dflat {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

constexpr double kMixtureShrink = 0.05;
constexpr double kMixtureMinMass = 0.01;
constexpr int kMixtureRejections = 10000;

CoordinatePair sample_mixture(const FamilyDescriptor& family, const MixtureConfig& config,
                              SampleStream& stream) {
  const Eigen::Index n = family.dimension();
  const std::size_t support = config.components.front().size();
  Vector lo(n);
  Vector hi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < support; ++x) {
      const double base = config.components[0][x];
      const double d = config.components[static_cast<std::size_t>(i) + 1][x] - base;
      if (d > 0.0) lower = std::max(lower, -base / d);
      if (d < 0.0) upper = std::min(upper, base / -d);
    }
    lo[i] = lower + kMixtureShrink;
    hi[i] = upper - kMixtureShrink;
  }
  for (int attempt = 0; attempt < kMixtureRejections; ++attempt) {
    Vector eta(n);
    for (Eigen::Index i = 0; i < n; ++i) eta[i] = stream.uniform(lo[i], hi[i]);
    if (detail::mixture_density(config, eta).minCoeff() >= kMixtureMinMass) {
      return point_from_eta(family, EtaCoord{eta});
    }
  }
  throw SamplingExhausted("sample_point: no admissible mixture weights in the sampling box");
}

}  // namespace

SampleStream::SampleStream(std::uint64_t seed, std::string_view label, std::uint64_t index) {
  const std::uint64_t key = splitmix64(splitmix64(seed) ^ fnv1a(label)) ^ splitmix64(index + 1);
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(seed)};
  engine_.seed(seq);
}

double SampleStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SampleStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double sample_alpha(SampleStream& stream) { return stream.uniform(0.01, 0.99); }

CoordinatePair sample_point(const FamilyDescriptor& family, SampleStream& stream) {
  const FamilyConfig& config = family_config(family);
  if (std::holds_alternative<Gaussian1dConfig>(config)) {
    const double mu = stream.uniform(-3.0, 3.0);
    const double sigma = stream.uniform(0.3, 3.0);
    return point_from_params(family, GaussianParams{mu, sigma});
  }
  if (std::holds_alternative<BinomialConfig>(config)) {
    return point_from_params(family, BinomialParams{stream.uniform(0.05, 0.95)});
  }
  if (const auto* c = std::get_if<CategoricalConfig>(&config)) {
    const int m = c->outcomes;
    const double floor = std::min(0.05, 0.5 / m);
    std::vector<double> weights(static_cast<std::size_t>(m));
    double total = 0.0;
    for (double& w : weights) {
      w = -std::log(1.0 - stream.uniform());
      total += w;
    }
    Vector eta(m - 1);
    for (int i = 0; i + 1 < m; ++i) {
      eta[i] = floor + (1.0 - m * floor) * weights[static_cast<std::size_t>(i)] / total;
    }
    return point_from_eta(family, EtaCoord{eta});
  }
  if (const auto* c = std::get_if<MixtureConfig>(&config)) {
    return sample_mixture(family, *c, stream);
  }
  Vector values(family.dimension());
  for (Eigen::Index i = 0; i < values.size(); ++i) values[i] = stream.uniform(-3.0, 3.0);
  return point_from_theta(family, ThetaCoord{values});
}

}  // namespace dflat
