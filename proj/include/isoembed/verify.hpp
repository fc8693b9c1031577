#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "isoembed/common.hpp"
#include "isoembed/construct.hpp"
#include "isoembed/crystal_group.hpp"
#include "isoembed/metric_field.hpp"
#include "isoembed/sampler.hpp"

namespace isoembed {

// Central differences, one column per coordinate.
Matrix fd_jacobian(const AmbientMap& map, const Vector& x, double h);

// Step used for pullback finite differences: 1e-5 (1 + |x|_inf).
double pullback_fd_step(const Vector& x);

// max over samples of || J^T J - target ||_F with J analytic or by central
// differences (step pullback_fd_step).
double pullback_residual(const AmbientMap& map, const MetricField& target,
                         const PointSampler& sampler, bool use_fd);

// Same, each sample's residual divided by max(1, ||target(x)||_F).
double relative_pullback_residual(const AmbientMap& map, const MetricField& target,
                                  const PointSampler& sampler, bool use_fd);

// max over samples of ||J - J_fd||_F / max(1, ||J||_F), step h.
double jacobian_fd_residual(const AmbientMap& map, const PointSampler& sampler, double h = 1e-6);

// max over samples of || d~(F(x)) - F(d x) ||
double equivariance_residual(const AmbientMap& map, const BieberbachElement& element,
                             const AmbientIsometry& extension, const PointSampler& sampler);

struct BoundednessResult {
  double max_norm = 0.0;
  double bound = 0.0;
  bool pass = false;
};

// Samples `budget` points of [-window, window]^n. The bound defaults to the
// map's image radius (infinite when it has none); pass iff
// max_norm <= bound + 1e-9.
BoundednessResult boundedness_check(const AmbientMap& map, double window, std::size_t budget,
                                    std::uint64_t seed, std::optional<double> bound = std::nullopt);

struct InjectivityResult {
  Vector x;
  Vector y;
  double domain_distance = 0.0;
  double image_distance = 0.0;
  std::size_t pairs = 0;
  bool pass = false;
};

// Pairs i are (sampler.point(i), partner) where even i pair with an
// independent sample and odd i with a point at distance in
// [domain_floor, 2 domain_floor]. Pairs closer than domain_floor are
// ignored. Returns the pair of smallest image distance; pass iff it is at
// least image_floor.
InjectivityResult injectivity_probe(const AmbientMap& map, const PointSampler& sampler,
                                    double domain_floor, double image_floor);

struct PropernessResult {
  double min_separation = 0.0;
  Vector x;
  Eigen::VectorXi shift;
  bool pass = false;
};

// min over samples x and all k in Z^n with 1 <= |k|_inf <= shift_radius of
// || Psi(x + k) - Psi(x) ||, Psi being the trailing 2n coordinates of E.
PropernessResult properness_probe(const AmbientMap& bounded_map, int shift_radius,
                                  const PointSampler& sampler);

struct CheckRecord {
  std::string name;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_ms = 0.0;
};

struct SkippedCheck {
  std::string name;
  std::string reason;
  std::optional<double> diagnostic_residual;
};

class VerificationReport {
 public:
  // pass is derived: max_residual < tolerance.
  void add(std::string name, std::size_t samples, std::uint64_t seed, double max_residual,
           double tolerance, double wall_ms = 0.0);
  void skip(std::string name, std::string reason, std::optional<double> diagnostic = std::nullopt);

  const std::vector<CheckRecord>& checks() const { return checks_; }
  const std::vector<SkippedCheck>& skipped() const { return skipped_; }
  const CheckRecord* find(std::string_view name) const;
  bool pass() const;

  nlohmann::ordered_json config;
  nlohmann::ordered_json summary;

  // Wall times are left out unless requested, so identical runs produce
  // identical bytes.
  nlohmann::ordered_json to_json(bool include_timing = false) const;
  std::string serialize(bool include_timing = false) const;

 private:
  std::vector<CheckRecord> checks_;
  std::vector<SkippedCheck> skipped_;
};

}  // namespace isoembed
