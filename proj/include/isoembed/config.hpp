#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isoembed/common.hpp"
#include "isoembed/crystal_group.hpp"
#include "isoembed/metric_field.hpp"
#include "isoembed/spiral.hpp"

namespace isoembed {

class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& message)
      : Error(path + ": " + message), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct MetricConfig {
  std::string family = "identity";  // identity | constant | conformal | revolution | expression
  std::vector<std::vector<double>> matrix;
  std::string exponent;
  double major_radius = 2.0;
  double minor_radius = 1.0;
  double offset = 0.0;
  std::vector<std::string> entries;
  bool operator==(const MetricConfig&) const = default;
};

struct GeneratorConfig {
  std::vector<std::vector<int>> linear;
  std::vector<std::string> shift;  // rationals: "1/2", "0", "0.25"
  bool operator==(const GeneratorConfig&) const = default;
};

struct GroupConfig {
  std::string name;  // "torus-<n>", "pg", "pgg" or "custom"
  std::vector<GeneratorConfig> generators;
  bool operator==(const GroupConfig&) const = default;
};

struct OracleConfig {
  std::string name = "clifford";  // clifford | revolution | expression
  int n = 0;
  double major_radius = 2.0;
  double minor_radius = 1.0;
  std::vector<std::string> components;
  bool operator==(const OracleConfig&) const = default;
};

struct SplitConfig {
  double fraction = 0.5;
  int resolution = 0;
  bool operator==(const SplitConfig&) const = default;
};

struct SpiralConfig {
  double r_in = 1.0;
  double r_out = 2.0;
  double k = 1.0;
  double tol = 1e-10;
  bool operator==(const SpiralConfig&) const = default;
};

struct VerifyConfig {
  std::uint64_t seed = 0;
  std::size_t samples = 1000;
  double window = 5.0;
  std::size_t jacobian_samples = 100;
  std::size_t translations = 100;
  int translation_radius = 10;
  double bound_window = 1000.0;
  std::size_t bound_samples = 10000;
  std::size_t pairs = 10000;
  double domain_floor = 0.1;
  double image_floor = 1e-4;
  int shift_radius = 10;
  std::size_t properness_samples = 100;
  double properness_floor = 1e-6;
  double spiral_window = 100.0;
  std::size_t spiral_samples = 10000;
  double pullback_tolerance = 1e-8;
  double fd_tolerance = 1e-6;
  double equivariance_tolerance = 1e-9;
  bool operator==(const VerifyConfig&) const = default;
};

struct ExportConfig {
  double window = 2.0;
  int resolution = 128;
  std::size_t samples = 1000;
  std::vector<int> coordinates{0, 1, 2};
  bool operator==(const ExportConfig&) const = default;
};

struct RunConfig {
  int n = 2;
  MetricConfig metric;
  GroupConfig group;
  SplitConfig split;
  OracleConfig oracle;
  SpiralConfig spiral;
  VerifyConfig verify;
  ExportConfig exports;
  bool operator==(const RunConfig&) const = default;
};

// Strict schema: unknown keys, wrong types and failed cross-checks throw
// ConfigError naming the offending path. Expression errors are forwarded
// with their positions. Shorthands: "metric": "identity", "oracle": "clifford",
// "group": "pg".
RunConfig parse_config(std::string_view text);
RunConfig parse_config_document(const nlohmann::json& document);

// The effective config; parse_config(to_json(c)) == c.
nlohmann::ordered_json to_json(const RunConfig& config);

MetricField build_metric(const RunConfig& config);
SymmetryGroup build_group(const RunConfig& config);
SpiralParameters spiral_parameters(const RunConfig& config);

}  // namespace isoembed
