#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isoembed/common.hpp"
#include "isoembed/crystal_group.hpp"
#include "isoembed/metric_field.hpp"
#include "isoembed/sampler.hpp"

namespace isoembed {

// An explicit Z^n-periodic map u : R^n -> R^N with analytic Jacobian, used in
// place of an abstract isometric embedding of the quotient torus.
class EmbeddingOracle {
 public:
  class Impl {
   public:
    virtual ~Impl() = default;
    virtual Vector eval(const Vector& x) const = 0;
    virtual Matrix jacobian(const Vector& x) const = 0;
  };

  EmbeddingOracle(std::string name, int domain_dimension, int ambient_dimension,
                  double image_radius, std::shared_ptr<const Impl> impl);

  const std::string& name() const { return name_; }
  int domain_dimension() const { return n_; }
  int ambient_dimension() const { return big_n_; }
  // Every image point has norm <= image_radius().
  double image_radius() const { return radius_; }

  Vector operator()(const Vector& x) const;
  Matrix jacobian(const Vector& x) const;

 private:
  std::string name_;
  int n_;
  int big_n_;
  double radius_;
  std::shared_ptr<const Impl> impl_;
};

struct DecompositionTerm {
  double weight = 0.0;
  Eigen::VectorXi direction;
};
using Decomposition = std::vector<DecompositionTerm>;

// Product of circles: pair j is (sqrt(g_j)/2pi)(cos 2pi x_j, sin 2pi x_j).
EmbeddingOracle clifford_diagonal_oracle(const Vector& diagonal);

// {e_i} u {e_i + e_j, e_i - e_j : i < j}
std::vector<Eigen::VectorXi> default_candidates(int n);
// Primitive integer vectors with entries in [-bound, bound], one per +/- pair.
std::vector<Eigen::VectorXi> extended_candidates(int n, int bound = 2);

// Nonnegative weights with || G - sum w_k a_k a_k^T ||_F < 1e-10 over the
// given candidate directions; zero terms are dropped.
Decomposition integer_decomposition(const Matrix& g, const std::vector<Eigen::VectorXi>& candidates);
// Default candidates first, then the extended set.
Decomposition integer_decomposition(const Matrix& g);

Matrix reconstruct(const Decomposition& terms);

// Pair k is (sqrt(w_k)/2pi)(cos 2pi a_k.x, sin 2pi a_k.x); pulls back to
// sum w_k a_k a_k^T.
EmbeddingOracle clifford_general_oracle(const Decomposition& terms);

// Torus of revolution in R^3; pulls back to MetricField::revolution(R, rho).
EmbeddingOracle revolution_oracle(double major_radius, double minor_radius);

// Components given as expressions in x1..xn with symbolic Jacobians. Throws
// when a component is not Z^n-periodic at sampled points.
EmbeddingOracle expression_oracle(const std::vector<std::string>& components, int n);

// max || J^T J - q1 ||_F over the samples.
double verify_oracle(const EmbeddingOracle& oracle, const MetricField& q1,
                     const PointSampler& sampler);
// max || u(x + e_i) - u(x) || over samples and axes.
double periodicity_residual(const EmbeddingOracle& oracle, const PointSampler& sampler);
// max || u(d x) - u(x) ||
double invariance_residual(const EmbeddingOracle& oracle, const BieberbachElement& element,
                           const PointSampler& sampler);

inline constexpr double kOracleTolerance = 1e-8;

// An oracle together with the metric it has been checked against.
class VerifiedOracle {
 public:
  const EmbeddingOracle& oracle() const { return oracle_; }
  const MetricField& target() const { return target_; }
  double residual() const { return residual_; }

 private:
  friend VerifiedOracle certify_oracle(EmbeddingOracle, const MetricField&, const PointSampler&,
                                       double);
  VerifiedOracle(EmbeddingOracle oracle, MetricField target, double residual)
      : oracle_(std::move(oracle)), target_(std::move(target)), residual_(residual) {}

  EmbeddingOracle oracle_;
  MetricField target_;
  double residual_;
};

// Throws unless verify_oracle stays below `tolerance`.
VerifiedOracle certify_oracle(EmbeddingOracle oracle, const MetricField& q1,
                              const PointSampler& sampler, double tolerance = kOracleTolerance);

}  // namespace isoembed
