#include "isoembed/construct.hpp"

#include <cmath>

#include <fmt/format.h>

namespace isoembed {

std::string to_string(MapTag tag) {
  switch (tag) {
    case MapTag::Covering: return "phi";
    case MapTag::Immersion: return "Phi";
    case MapTag::SpiralFactor: return "Psi";
    case MapTag::FlatFactor: return "e";
    case MapTag::Bounded: return "E";
    case MapTag::Equivariant: return "F";
  }
  return "?";
}

AmbientMap::AmbientMap(MapTag tag, int domain_dimension, int ambient_dimension, EvalFn eval,
                       JacobianFn jacobian, std::optional<MetricField> contract,
                       std::optional<double> image_radius)
    : tag_(tag),
      n_(domain_dimension),
      d_(ambient_dimension),
      eval_(std::move(eval)),
      jacobian_(std::move(jacobian)),
      contract_(std::move(contract)),
      radius_(image_radius) {
  if (contract_ && contract_->dimension() != n_)
    throw Error("map contract metric has the wrong dimension");
}

Vector AmbientMap::operator()(const Vector& x) const {
  if (x.size() != n_) throw Error(fmt::format("map {} evaluated at a point of dimension {}, expected {}",
                                              to_string(tag_), x.size(), n_));
  return eval_(x);
}

Matrix AmbientMap::jacobian(const Vector& x) const {
  if (x.size() != n_) throw Error(fmt::format("map {} evaluated at a point of dimension {}, expected {}",
                                              to_string(tag_), x.size(), n_));
  return jacobian_(x);
}

AmbientMap pair_maps(MapTag tag, const AmbientMap& first, const AmbientMap& second,
                     std::optional<MetricField> contract, std::optional<double> image_radius) {
  if (first.domain_dimension() != second.domain_dimension())
    throw Error("paired maps have different domain dimensions");
  const int n = first.domain_dimension();
  const int d1 = first.ambient_dimension();
  const int d2 = second.ambient_dimension();
  return AmbientMap(
      tag, n, d1 + d2,
      [first, second, d1, d2](const Vector& x) {
        Vector y(d1 + d2);
        y.head(d1) = first(x);
        y.tail(d2) = second(x);
        return y;
      },
      [first, second, d1, d2](const Vector& x) {
        Matrix j(d1 + d2, x.size());
        j.topRows(d1) = first.jacobian(x);
        j.bottomRows(d2) = second.jacobian(x);
        return j;
      },
      std::move(contract), image_radius);
}

AmbientMap covering_phi(int n) {
  return AmbientMap(
      MapTag::Covering, n, n,
      [](const Vector& x) { return Vector((x.array() - x.array().floor()).matrix()); },
      [n](const Vector&) { return Matrix(Matrix::Identity(n, n)); });
}

AmbientMap build_Phi(const VerifiedOracle& verified) {
  const EmbeddingOracle& oracle = verified.oracle();
  return AmbientMap(
      MapTag::Immersion, oracle.domain_dimension(), oracle.ambient_dimension(),
      [oracle](const Vector& x) { return oracle(x); },
      [oracle](const Vector& x) { return oracle.jacobian(x); }, verified.target(),
      oracle.image_radius());
}

AmbientMap build_Psi(const ProductSpiralMap& spiral) {
  const int n = spiral.domain_dimension();
  const double c = spiral.scale() * spiral.scale();
  return AmbientMap(
      MapTag::SpiralFactor, n, 2 * n, [spiral](const Vector& x) { return spiral(x); },
      [spiral](const Vector& x) { return spiral.jacobian(x); },
      MetricField::constant(c * Matrix::Identity(n, n)), spiral.image_radius());
}

AmbientMap build_e(double c, int n) {
  if (!(c > 0.0)) throw Error("flat factor needs c > 0");
  const double scale = std::sqrt(c);
  return AmbientMap(
      MapTag::FlatFactor, n, n, [scale](const Vector& x) { return Vector(scale * x); },
      [scale, n](const Vector&) { return Matrix(scale * Matrix::Identity(n, n)); },
      MetricField::constant(c * Matrix::Identity(n, n)));
}

namespace {

void check_dimensions(const MetricSplit& split, const VerifiedOracle& oracle) {
  if (oracle.oracle().domain_dimension() != split.field.dimension())
    throw Error(fmt::format("oracle dimension {} does not match metric dimension {}",
                            oracle.oracle().domain_dimension(), split.field.dimension()));
  if (oracle.target().dimension() != split.q1.dimension())
    throw Error("oracle was verified against a metric of another dimension");
}

}  // namespace

AmbientMap build_E(const MetricSplit& split, const VerifiedOracle& oracle, const SpiralCurve& curve) {
  check_dimensions(split, oracle);
  const int n = split.field.dimension();
  const AmbientMap phi = build_Phi(oracle);
  const AmbientMap psi = build_Psi(ProductSpiralMap(curve, split.c, n));
  const double r_phi = oracle.oracle().image_radius();
  const double bound = std::sqrt(r_phi * r_phi + n * curve.r_out() * curve.r_out());
  return pair_maps(MapTag::Bounded, phi, psi, split.field, bound);
}

AmbientMap build_F(const MetricSplit& split, const VerifiedOracle& oracle) {
  check_dimensions(split, oracle);
  const int n = split.field.dimension();
  return pair_maps(MapTag::Equivariant, build_Phi(oracle), build_e(split.c, n), split.field,
                   std::nullopt);
}

AmbientIsometry naive_extension(const BieberbachElement& element, const MetricSplit& split,
                                const VerifiedOracle& oracle) {
  if (element.dimension() != split.field.dimension())
    throw Error("group element and metric have different dimensions");
  const AmbientIsometry induced = induced_action(element, split.c);
  return AmbientIsometry(oracle.oracle().ambient_dimension(), induced.scale(), element);
}

AmbientIsometry extend_action(const BieberbachElement& element, const MetricSplit& split,
                              const VerifiedOracle& oracle, const PointSampler& sampler) {
  check_dimensions(split, oracle);
  if (!element.is_lattice_translation()) {
    const double metric_residual = check_invariance(split.q1, element, sampler);
    const double oracle_residual = invariance_residual(oracle.oracle(), element, sampler);
    if (!(metric_residual < kExtensionTolerance) || !(oracle_residual < kExtensionTolerance))
      throw ExtensionUnavailable(fmt::format(
          "extension unavailable for this element: Q1 residual {:.3g}, oracle residual {:.3g}",
          metric_residual, oracle_residual));
  }
  return naive_extension(element, split, oracle);
}

}  // namespace isoembed
