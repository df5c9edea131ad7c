#pragma once

#include <memory>

#include "dflat/families.hpp"

namespace dflat::detail {

class BuiltinModel : public FamilyModel {
 public:
  explicit BuiltinModel(FamilyConfig config) : config_(std::move(config)) {}
  const FamilyConfig& config() const { return config_; }

 private:
  FamilyConfig config_;
};

std::shared_ptr<const BuiltinModel> make_gaussian1d();
std::shared_ptr<const BuiltinModel> make_binomial(int trials);
std::shared_ptr<const BuiltinModel> make_categorical(int outcomes);
std::shared_ptr<const BuiltinModel> make_mixture(MixtureConfig config);
std::shared_ptr<const BuiltinModel> make_selfdual(int dimension);

// p_eta(x) for a mixture configuration; no validation.
Vector mixture_density(const MixtureConfig& config, const Vector& eta);

// Smallest admissible probability of a mixture point.
inline constexpr double kMixtureFloor = 1e-12;

}  // namespace dflat::detail
