#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "dflat/manifold.hpp"

namespace dflat {

// Deterministic random stream keyed by (seed, label, index). Two streams with
// the same key produce the same sequence on every platform.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::string_view label, std::uint64_t index);

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);

 private:
  std::mt19937_64 engine_;
};

// Draws a point from the verification box of a built-in family:
//   gaussian1d   mu in [-3, 3], sigma in [0.3, 3]
//   binomial     p in [0.05, 0.95]
//   categorical  every probability >= min(0.05, 0.5/m)
//   mixture      eta in the axis-wise valid box shrunk by 0.05, min p_eta >= 0.01
//   selfdual     every coordinate in [-3, 3]
CoordinatePair sample_point(const FamilyDescriptor& family, SampleStream& stream);

// Skew parameter in [0.01, 0.99].
double sample_alpha(SampleStream& stream);

}  // namespace dflat
