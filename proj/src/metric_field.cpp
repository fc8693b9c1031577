#include "isoembed/metric_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "isoembed/linalg.hpp"

namespace isoembed {

struct MetricField::Data {
  Matrix constant;
  expr::Expr exponent;
  double major_radius = 0.0;
  double minor_radius = 0.0;
  std::vector<expr::Expr> entries;
  double offset = 0.0;
};

std::string to_string(MetricFamily family) {
  switch (family) {
    case MetricFamily::Constant: return "constant";
    case MetricFamily::Conformal: return "conformal";
    case MetricFamily::Revolution: return "revolution";
    case MetricFamily::Expression: return "expression";
  }
  return "unknown";
}

MetricField::MetricField(int n, MetricFamily family, std::shared_ptr<const Data> data)
    : n_(n), family_(family), data_(std::move(data)), group_(SymmetryGroup::torus(n)) {}

MetricField MetricField::identity(int n) {
  if (n < 1) throw Error("metric dimension must be positive");
  return constant(Matrix::Identity(n, n));
}

MetricField MetricField::constant(const Matrix& g) {
  if (g.rows() != g.cols() || g.rows() == 0) throw Error("constant metric must be a square matrix");
  if (!g.isApprox(g.transpose(), 0.0)) throw Error("constant metric must be symmetric");
  auto data = std::make_shared<Data>();
  data->constant = g;
  return MetricField(static_cast<int>(g.rows()), MetricFamily::Constant, std::move(data));
}

MetricField MetricField::conformal(int n, expr::Expr exponent) {
  if (n < 1) throw Error("metric dimension must be positive");
  if (expr::variable_count(exponent) > n) throw Error("conformal exponent uses too many variables");
  auto data = std::make_shared<Data>();
  data->exponent = std::move(exponent);
  return MetricField(n, MetricFamily::Conformal, std::move(data));
}

MetricField MetricField::revolution(double major_radius, double minor_radius, double offset) {
  if (!(major_radius > minor_radius && minor_radius > 0.0))
    throw Error("revolution metric needs R > rho > 0");
  if (offset < 0.0) throw Error("revolution metric offset must be non-negative");
  auto data = std::make_shared<Data>();
  data->major_radius = major_radius;
  data->minor_radius = minor_radius;
  data->offset = offset;
  return MetricField(2, MetricFamily::Revolution, std::move(data));
}

MetricField MetricField::expression(int n, std::vector<expr::Expr> upper_entries) {
  if (n < 1) throw Error("metric dimension must be positive");
  const auto expected = static_cast<std::size_t>(n * (n + 1) / 2);
  if (upper_entries.size() != expected)
    throw Error(fmt::format("expression metric needs {} entries, got {}", expected,
                            upper_entries.size()));
  for (const auto& e : upper_entries)
    if (expr::variable_count(e) > n) throw Error("metric entry uses too many variables");
  auto data = std::make_shared<Data>();
  data->entries = std::move(upper_entries);
  return MetricField(n, MetricFamily::Expression, std::move(data));
}

MetricField MetricField::with_symmetry(SymmetryGroup group) const {
  if (group.dimension != n_)
    throw Error(fmt::format("group '{}' has dimension {}, metric has {}", group.name,
                            group.dimension, n_));
  MetricField copy = *this;
  copy.group_ = std::move(group);
  return copy;
}

MetricField MetricField::minus_isotropic(double c) const {
  MetricField copy = *this;
  copy.subtracted_ += c;
  return copy;
}

Matrix MetricField::operator()(const Vector& x) const {
  if (x.size() != n_) throw Error("metric evaluated at a point of the wrong dimension");
  Matrix g(n_, n_);
  switch (family_) {
    case MetricFamily::Constant: g = data_->constant; break;
    case MetricFamily::Conformal: {
      const double factor = std::exp(2.0 * expr::eval(data_->exponent, x));
      g = factor * Matrix::Identity(n_, n_);
      break;
    }
    case MetricFamily::Revolution: {
      const double two_pi = 2.0 * std::numbers::pi;
      const double radius = data_->major_radius + data_->minor_radius * std::cos(two_pi * x[0]);
      g.setZero();
      g(0, 0) = std::pow(two_pi * data_->minor_radius, 2);
      g(1, 1) = std::pow(two_pi * radius, 2);
      break;
    }
    case MetricFamily::Expression: {
      std::size_t k = 0;
      for (int i = 0; i < n_; ++i) {
        for (int j = i; j < n_; ++j) {
          g(i, j) = expr::eval(data_->entries[k++], x);
          g(j, i) = g(i, j);
        }
      }
      break;
    }
  }
  if (data_->offset != 0.0) g.diagonal().array() += data_->offset;
  if (subtracted_ != 0.0) g.diagonal().array() -= subtracted_;
  return g;
}

int default_resolution(int n) {
  if (n <= 2) return 256;
  if (n == 3) return 64;
  return 16;
}

double min_eigenvalue_over_domain(const MetricField& field, int resolution) {
  if (resolution < 2) throw Error("grid resolution must be at least 2");
  const int n = field.dimension();
  if (field.is_constant()) return linalg::min_eigenvalue(field(Vector::Zero(n)));
  std::vector<int> index(static_cast<std::size_t>(n), 0);
  Vector x = Vector::Zero(n);
  double best = std::numeric_limits<double>::infinity();
  for (;;) {
    for (int i = 0; i < n; ++i) x[i] = static_cast<double>(index[static_cast<std::size_t>(i)]) / resolution;
    best = std::min(best, linalg::min_eigenvalue(field(x)));
    int axis = 0;
    while (axis < n && ++index[static_cast<std::size_t>(axis)] == resolution) {
      index[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == n) break;
  }
  return best;
}

double check_invariance(const MetricField& field, const BieberbachElement& element,
                        const PointSampler& sampler) {
  if (element.dimension() != field.dimension())
    throw Error("group element and metric have different dimensions");
  const Matrix a = element.linear();
  double worst = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    const Matrix pulled = a.transpose() * field(element.act(x)) * a;
    worst = std::max(worst, (pulled - field(x)).norm());
  }
  return worst;
}

MetricSplit split_metric(const MetricField& field, double fraction, int resolution) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw Error("split fraction must lie in (0, 1)");
  const auto sampler = PointSampler::window(field.dimension(), 2.0, 0, 256);
  for (const auto& generator : field.symmetry().generators) {
    const double residual = check_invariance(field, generator, sampler);
    if (!(residual < kInvarianceTolerance))
      throw Error(fmt::format("metric not invariant under declared group '{}' (residual {:.3g})",
                              field.symmetry().name, residual));
  }
  if (resolution == 0) resolution = default_resolution(field.dimension());
  const double lambda = min_eigenvalue_over_domain(field, resolution);
  if (!(lambda > 0.0))
    throw Error(fmt::format("metric not positive definite (min eigenvalue {:.6g})", lambda));
  const double c = fraction * lambda;
  return MetricSplit{c,        field,      field.minus_isotropic(c), (1.0 - fraction) * lambda,
                     lambda,   fraction,   resolution};
}

}  // namespace isoembed
