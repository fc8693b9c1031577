#pragma once

#include <memory>
#include <string>
#include <vector>

#include "isoembed/common.hpp"
#include "isoembed/crystal_group.hpp"
#include "isoembed/expr.hpp"
#include "isoembed/sampler.hpp"

namespace isoembed {

enum class MetricFamily { Constant, Conformal, Revolution, Expression };

std::string to_string(MetricFamily family);

// A Riemannian metric on R^n, periodic under a declared group. Only the upper
// triangle is evaluated, so every evaluation is exactly symmetric.
//
// Families:
//   constant    G
//   conformal   exp(2 f(x)) I
//   revolution  (2 pi rho)^2 dx1^2 + (2 pi)^2 (R + rho cos 2 pi x1)^2 dx2^2
//               (the metric induced by the torus of revolution), n = 2
//   expression  n(n+1)/2 upper-triangle entries, row-major
//
// Every field also carries an isotropic offset s*I added to the family value
// and an isotropic subtraction c*I; the latter is how the first factor of a
// split is represented without tabulating it.
class MetricField {
 public:
  static MetricField identity(int n);
  static MetricField constant(const Matrix& g);
  static MetricField conformal(int n, expr::Expr exponent);
  static MetricField revolution(double major_radius, double minor_radius, double offset = 0.0);
  static MetricField expression(int n, std::vector<expr::Expr> upper_entries);

  MetricField with_symmetry(SymmetryGroup group) const;
  // this - c I
  MetricField minus_isotropic(double c) const;

  int dimension() const { return n_; }
  MetricFamily family() const { return family_; }
  const SymmetryGroup& symmetry() const { return group_; }
  bool is_constant() const { return family_ == MetricFamily::Constant; }
  double subtracted() const { return subtracted_; }

  Matrix operator()(const Vector& x) const;

 private:
  struct Data;
  MetricField(int n, MetricFamily family, std::shared_ptr<const Data> data);

  int n_ = 0;
  MetricFamily family_ = MetricFamily::Constant;
  std::shared_ptr<const Data> data_;
  SymmetryGroup group_;
  double subtracted_ = 0.0;
};

inline Matrix eval_metric(const MetricField& field, const Vector& x) { return field(x); }

// Minimum over the grid {i / resolution}^n of the smallest eigenvalue.
// Non-positive values are returned, not thrown.
double min_eigenvalue_over_domain(const MetricField& field, int resolution);

// max over samples of || A^T g(A x + v) A - g(x) ||_F
double check_invariance(const MetricField& field, const BieberbachElement& element,
                        const PointSampler& sampler);

struct MetricSplit {
  double c = 0.0;         // coefficient of the constant factor c I
  MetricField field;      // the metric being split
  MetricField q1;         // field - c I
  double margin = 0.0;    // lower bound for eig(q1) on the grid
  double min_eigenvalue = 0.0;
  double fraction = 0.5;
  int resolution = 0;
};

// Tolerance on check_invariance used when splitting.
inline constexpr double kInvarianceTolerance = 1e-9;

// c = fraction * min eigenvalue on the grid. Requires the field to be
// invariant under every generator of its declared group. Resolution 0 picks
// default_resolution(n).
MetricSplit split_metric(const MetricField& field, double fraction = 0.5, int resolution = 0);

// 256 for n <= 2, 64 for n = 3, 16 beyond.
int default_resolution(int n);

}  // namespace isoembed
