#pragma once

#include <functional>
#include <optional>
#include <string>

#include "isoembed/common.hpp"
#include "isoembed/crystal_group.hpp"
#include "isoembed/metric_field.hpp"
#include "isoembed/oracle.hpp"
#include "isoembed/sampler.hpp"
#include "isoembed/spiral.hpp"

namespace isoembed {

enum class MapTag { Covering, Immersion, SpiralFactor, FlatFactor, Bounded, Equivariant };

// Short names used in reports: phi, Phi, Psi, e, E, F.
std::string to_string(MapTag tag);

// Smooth map R^n -> R^D with an analytic Jacobian, together with the metric
// its pullback is supposed to equal and, when known, a bound on the norm of
// every image point.
class AmbientMap {
 public:
  using EvalFn = std::function<Vector(const Vector&)>;
  using JacobianFn = std::function<Matrix(const Vector&)>;

  AmbientMap(MapTag tag, int domain_dimension, int ambient_dimension, EvalFn eval,
             JacobianFn jacobian, std::optional<MetricField> contract = std::nullopt,
             std::optional<double> image_radius = std::nullopt);

  MapTag tag() const { return tag_; }
  int domain_dimension() const { return n_; }
  int ambient_dimension() const { return d_; }
  const std::optional<MetricField>& contract() const { return contract_; }
  const std::optional<double>& image_radius() const { return radius_; }

  Vector operator()(const Vector& x) const;
  Matrix jacobian(const Vector& x) const;

 private:
  MapTag tag_;
  int n_;
  int d_;
  EvalFn eval_;
  JacobianFn jacobian_;
  std::optional<MetricField> contract_;
  std::optional<double> radius_;
};

// x -> (first(x), second(x)); the diagonal map followed by the product map.
AmbientMap pair_maps(MapTag tag, const AmbientMap& first, const AmbientMap& second,
                     std::optional<MetricField> contract, std::optional<double> image_radius);

// Fractional part, coordinatewise. Constructions never route through it; the
// periodic oracle components are evaluated on R^n directly.
AmbientMap covering_phi(int n);

AmbientMap build_Phi(const VerifiedOracle& oracle);
AmbientMap build_Psi(const ProductSpiralMap& spiral);
// x -> sqrt(c) x
AmbientMap build_e(double c, int n);

// x -> (Phi(x), Psi(x)) in R^{N+2n}; bounded, pulls back to split.field.
AmbientMap build_E(const MetricSplit& split, const VerifiedOracle& oracle, const SpiralCurve& curve);
// x -> (Phi(x), sqrt(c) x) in R^{N+n}; pulls back to split.field.
AmbientMap build_F(const MetricSplit& split, const VerifiedOracle& oracle);

inline constexpr double kExtensionTolerance = 1e-9;

class ExtensionUnavailable : public Error {
 public:
  using Error::Error;
};

// Ambient isometry d~ with d~(F(x)) = F(d x): identity on the first N
// coordinates, induced_action(d, c) on the last n. Lattice translations
// always extend. Any other element extends only if both Q1 and the oracle are
// numerically invariant under it; otherwise ExtensionUnavailable.
AmbientIsometry extend_action(const BieberbachElement& element, const MetricSplit& split,
                              const VerifiedOracle& oracle, const PointSampler& sampler);

// The block map identity_N x induced_action(d, c) without any invariance
// check; for diagnostics only.
AmbientIsometry naive_extension(const BieberbachElement& element, const MetricSplit& split,
                                const VerifiedOracle& oracle);

}  // namespace isoembed
