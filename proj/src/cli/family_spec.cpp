#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "dflat/cli.hpp"

namespace dflat::cli {

namespace {

double parse_double(std::string_view text, const std::string& context) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ConfigError(context + ": '" + std::string(text) + "' is not a finite number");
  }
  return value;
}

int parse_count(std::string_view text, const std::string& context) {
  int value = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(context + ": '" + std::string(text) + "' is not an integer");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char separator) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(separator, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos
                                                                      : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

MixtureConfig default_mixture() { return MixtureConfig{{{0.5, 0.5}, {0.9, 0.1}}}; }

}  // namespace

FamilyConfig parse_family_spec(const std::string& text) {
  const std::size_t colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const bool has_config = colon != std::string::npos;
  const std::string_view config =
      has_config ? std::string_view(text).substr(colon + 1) : std::string_view();
  const std::string context = "--family " + text;

  if (kind == "gaussian1d") {
    if (has_config) throw ConfigError(context + ": gaussian1d takes no configuration");
    return Gaussian1dConfig{};
  }
  if (kind == "binomial") {
    return BinomialConfig{has_config ? parse_count(config, context) : 1};
  }
  if (kind == "categorical") {
    return CategoricalConfig{has_config ? parse_count(config, context) : 2};
  }
  if (kind == "selfdual") {
    return SelfDualConfig{has_config ? parse_count(config, context) : 1};
  }
  if (kind == "mixture") {
    if (!has_config) return default_mixture();
    MixtureConfig mixture;
    for (std::string_view row : split(config, '/')) {
      std::vector<double> values;
      for (std::string_view cell : split(row, ',')) values.push_back(parse_double(cell, context));
      mixture.components.push_back(std::move(values));
    }
    return mixture;
  }
  throw ConfigError(context + ": unknown family kind '" + kind +
                    "' (expected gaussian1d, binomial, categorical, mixture or selfdual)");
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ec == std::errc() ? ptr : buffer);
}

}  // namespace dflat::cli
