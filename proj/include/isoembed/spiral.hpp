#pragma once

#include <memory>

#include "isoembed/common.hpp"

namespace isoembed {

struct SpiralParameters {
  double r_in = 1.0;
  double r_out = 2.0;
  double steepness = 1.0;
  double tol = 1e-10;
};

// Unit-speed curve R -> R^2 confined to the annulus r_in <= |y| <= r_out:
//
//   rho(s)   = r_in + (r_out - r_in) / (1 + exp(k s))
//   theta'   = sqrt(1 - rho'^2) / rho,   theta(0) = 0
//   psi(s)   = rho(s) (cos theta(s), sin theta(s))
//
// rho decreases strictly and theta increases strictly, so psi is injective;
// it winds onto the outer circle as s -> -inf and the inner one as s -> +inf.
// theta is tabulated lazily (windows of 64 arc-length units) by an adaptive
// Dormand-Prince integration and read back through cubic Hermite
// interpolation. Once rho is within rounding of its limit the table stops
// and theta continues linearly.
class SpiralCurve {
 public:
  // Throws "speed budget violated" when k (r_out - r_in) / 4 >= 1.
  explicit SpiralCurve(const SpiralParameters& params = {});

  const SpiralParameters& parameters() const { return params_; }
  double r_in() const { return params_.r_in; }
  double r_out() const { return params_.r_out; }

  double radius(double s) const;
  double radius_derivative(double s) const;
  double angle(double s) const;
  double angle_derivative(double s) const;

  Eigen::Vector2d point(double s) const;
  Eigen::Vector2d tangent(double s) const;

  // Current extent of the tabulated window (for tests and diagnostics).
  std::pair<double, double> table_extent() const;

  struct Table;  // opaque; defined in spiral.cpp

 private:
  SpiralParameters params_;
  std::shared_ptr<Table> table_;
};

inline SpiralCurve make_spiral(double r_in, double r_out, double k, double tol) {
  return SpiralCurve(SpiralParameters{r_in, r_out, k, tol});
}
inline Eigen::Vector2d spiral_point(const SpiralCurve& curve, double s) { return curve.point(s); }
inline Eigen::Vector2d spiral_tangent(const SpiralCurve& curve, double s) {
  return curve.tangent(s);
}

// x -> (psi(sqrt(c) x_1), ..., psi(sqrt(c) x_n)), an isometric embedding of
// (R^n, c sum dx_i^2) into a product of annuli.
class ProductSpiralMap {
 public:
  ProductSpiralMap(SpiralCurve curve, double c, int n);

  int domain_dimension() const { return n_; }
  int ambient_dimension() const { return 2 * n_; }
  double scale() const { return scale_; }
  const SpiralCurve& curve() const { return curve_; }
  // sqrt(n) r_out
  double image_radius() const;

  Vector operator()(const Vector& x) const;
  Matrix jacobian(const Vector& x) const;

 private:
  SpiralCurve curve_;
  double scale_;
  int n_;
};

inline ProductSpiralMap product_spiral_map(const SpiralCurve& curve, double c, int n) {
  return ProductSpiralMap(curve, c, n);
}

}  // namespace isoembed
