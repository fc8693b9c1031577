#include "isoembed/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>

#include <fmt/format.h>

#include "isoembed/expr.hpp"
#include "isoembed/linalg.hpp"

namespace isoembed {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDecompositionTolerance = 1e-10;

class CliffordImpl final : public EmbeddingOracle::Impl {
 public:
  CliffordImpl(std::vector<double> amplitudes, Matrix directions)
      : amplitudes_(std::move(amplitudes)), directions_(std::move(directions)) {}

  // Row k of directions_ is a_k.
  Vector eval(const Vector& x) const override {
    Vector y(2 * directions_.rows());
    for (Eigen::Index k = 0; k < directions_.rows(); ++k) {
      const double phase = kTwoPi * directions_.row(k).dot(x);
      const double r = amplitudes_[static_cast<std::size_t>(k)];
      y[2 * k] = r * std::cos(phase);
      y[2 * k + 1] = r * std::sin(phase);
    }
    return y;
  }

  Matrix jacobian(const Vector& x) const override {
    Matrix j(2 * directions_.rows(), directions_.cols());
    for (Eigen::Index k = 0; k < directions_.rows(); ++k) {
      const double phase = kTwoPi * directions_.row(k).dot(x);
      const double speed = kTwoPi * amplitudes_[static_cast<std::size_t>(k)];
      j.row(2 * k) = -speed * std::sin(phase) * directions_.row(k);
      j.row(2 * k + 1) = speed * std::cos(phase) * directions_.row(k);
    }
    return j;
  }

 private:
  std::vector<double> amplitudes_;
  Matrix directions_;
};

class RevolutionImpl final : public EmbeddingOracle::Impl {
 public:
  RevolutionImpl(double major, double minor) : major_(major), minor_(minor) {}

  Vector eval(const Vector& x) const override {
    const double a = kTwoPi * x[0];
    const double b = kTwoPi * x[1];
    const double r = major_ + minor_ * std::cos(a);
    Vector y(3);
    y << r * std::cos(b), r * std::sin(b), minor_ * std::sin(a);
    return y;
  }

  Matrix jacobian(const Vector& x) const override {
    const double a = kTwoPi * x[0];
    const double b = kTwoPi * x[1];
    const double r = major_ + minor_ * std::cos(a);
    Matrix j(3, 2);
    j << -kTwoPi * minor_ * std::sin(a) * std::cos(b), -kTwoPi * r * std::sin(b),
        -kTwoPi * minor_ * std::sin(a) * std::sin(b), kTwoPi * r * std::cos(b),
        kTwoPi * minor_ * std::cos(a), 0.0;
    return j;
  }

 private:
  double major_;
  double minor_;
};

class ExpressionImpl final : public EmbeddingOracle::Impl {
 public:
  ExpressionImpl(std::vector<expr::Expr> components, int n) : components_(std::move(components)) {
    for (const auto& c : components_) {
      std::vector<expr::Expr> row;
      for (int i = 0; i < n; ++i) row.push_back(expr::differentiate(c, i));
      derivatives_.push_back(std::move(row));
    }
  }

  Vector eval(const Vector& x) const override {
    Vector y(static_cast<Eigen::Index>(components_.size()));
    for (std::size_t k = 0; k < components_.size(); ++k)
      y[static_cast<Eigen::Index>(k)] = expr::eval(components_[k], x);
    return y;
  }

  Matrix jacobian(const Vector& x) const override {
    Matrix j(static_cast<Eigen::Index>(components_.size()), x.size());
    for (std::size_t k = 0; k < derivatives_.size(); ++k)
      for (std::size_t i = 0; i < derivatives_[k].size(); ++i)
        j(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
            expr::eval(derivatives_[k][i], x);
    return j;
  }

 private:
  std::vector<expr::Expr> components_;
  std::vector<std::vector<expr::Expr>> derivatives_;
};

// Upper-triangle coordinates with off-diagonals weighted by sqrt(2), so the
// Euclidean norm of the vector is the Frobenius norm of the matrix.
Vector symmetric_coordinates(const Matrix& m) {
  const auto n = m.rows();
  Vector v(n * (n + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) v[k++] = (i == j ? 1.0 : std::sqrt(2.0)) * m(i, j);
  return v;
}

Matrix outer(const Eigen::VectorXi& a) {
  const Vector v = a.cast<double>();
  return v * v.transpose();
}

bool same_candidates(const std::vector<Eigen::VectorXi>& a, const std::vector<Eigen::VectorXi>& b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

// Closed form over the default set: off-diagonal G_ij goes on e_i + e_j or
// e_i - e_j according to sign, the remainder of the diagonal on e_i. Works
// whenever G is diagonally dominant.
std::optional<Decomposition> exact_default_decomposition(const Matrix& g) {
  const auto n = static_cast<int>(g.rows());
  Decomposition terms;
  Vector diagonal = g.diagonal();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double w = g(i, j);
      if (w == 0.0) continue;
      Eigen::VectorXi a = Eigen::VectorXi::Unit(n, i);
      a[j] = w > 0.0 ? 1 : -1;
      terms.push_back({std::abs(w), a});
      diagonal[i] -= std::abs(w);
      diagonal[j] -= std::abs(w);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (diagonal[i] < 0.0) return std::nullopt;
  }
  Decomposition ordered;
  for (int i = 0; i < n; ++i)
    if (diagonal[i] > 0.0) ordered.push_back({diagonal[i], Eigen::VectorXi::Unit(n, i)});
  ordered.insert(ordered.end(), terms.begin(), terms.end());
  return ordered;
}

// Projected gradient for min || A w - b || subject to w >= 0, step 1/L.
Vector projected_gradient_nnls(const Matrix& a, const Vector& b) {
  const Matrix gram = a.transpose() * a;
  const Vector rhs = a.transpose() * b;
  const double lipschitz = linalg::max_eigenvalue(gram);
  Vector w = Vector::Zero(a.cols());
  if (!(lipschitz > 0.0)) return w;
  for (int iter = 0; iter < 100000; ++iter) {
    if ((a * w - b).norm() < 1e-12) break;
    w = (w - (gram * w - rhs) / lipschitz).cwiseMax(0.0);
  }
  return w;
}

EmbeddingOracle make_clifford(std::string name, const Decomposition& terms) {
  if (terms.empty()) throw Error("clifford oracle needs at least one term");
  const auto n = terms.front().direction.size();
  std::vector<double> amplitudes;
  Matrix directions(static_cast<Eigen::Index>(terms.size()), n);
  double weight_sum = 0.0;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (!(terms[k].weight > 0.0)) throw Error("clifford oracle needs positive weights");
    if (terms[k].direction.size() != n) throw Error("clifford directions disagree in dimension");
    amplitudes.push_back(std::sqrt(terms[k].weight) / kTwoPi);
    directions.row(static_cast<Eigen::Index>(k)) = terms[k].direction.cast<double>().transpose();
    weight_sum += terms[k].weight;
  }
  return EmbeddingOracle(std::move(name), static_cast<int>(n), 2 * static_cast<int>(terms.size()),
                         std::sqrt(weight_sum) / kTwoPi,
                         std::make_shared<CliffordImpl>(std::move(amplitudes), std::move(directions)));
}

}  // namespace

EmbeddingOracle::EmbeddingOracle(std::string name, int domain_dimension, int ambient_dimension,
                                 double image_radius, std::shared_ptr<const Impl> impl)
    : name_(std::move(name)),
      n_(domain_dimension),
      big_n_(ambient_dimension),
      radius_(image_radius),
      impl_(std::move(impl)) {}

Vector EmbeddingOracle::operator()(const Vector& x) const {
  if (x.size() != n_) throw Error("oracle evaluated at a point of the wrong dimension");
  return impl_->eval(x);
}

Matrix EmbeddingOracle::jacobian(const Vector& x) const {
  if (x.size() != n_) throw Error("oracle evaluated at a point of the wrong dimension");
  return impl_->jacobian(x);
}

EmbeddingOracle clifford_diagonal_oracle(const Vector& diagonal) {
  const auto n = static_cast<int>(diagonal.size());
  if (n == 0) throw Error("clifford oracle needs at least one entry");
  Decomposition terms;
  for (int j = 0; j < n; ++j) {
    if (!(diagonal[j] > 0.0)) throw Error("clifford oracle needs positive diagonal entries");
    terms.push_back({diagonal[j], Eigen::VectorXi::Unit(n, j)});
  }
  return make_clifford("clifford-diagonal", terms);
}

std::vector<Eigen::VectorXi> default_candidates(int n) {
  std::vector<Eigen::VectorXi> out;
  for (int i = 0; i < n; ++i) out.push_back(Eigen::VectorXi::Unit(n, i));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Eigen::VectorXi plus = Eigen::VectorXi::Unit(n, i);
      plus[j] = 1;
      Eigen::VectorXi minus = Eigen::VectorXi::Unit(n, i);
      minus[j] = -1;
      out.push_back(plus);
      out.push_back(minus);
    }
  }
  return out;
}

std::vector<Eigen::VectorXi> extended_candidates(int n, int bound) {
  std::vector<Eigen::VectorXi> out;
  const int span = 2 * bound + 1;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= span;
  for (int code = 0; code < total; ++code) {
    Eigen::VectorXi a(n);
    int rest = code;
    for (int i = 0; i < n; ++i) {
      a[i] = rest % span - bound;
      rest /= span;
    }
    int g = 0;
    for (int v : a) g = std::gcd(g, std::abs(v));
    if (g != 1) continue;  // zero or non-primitive
    int lead = 0;
    for (int v : a) {
      if (v != 0) {
        lead = v;
        break;
      }
    }
    if (lead < 0) continue;  // keep one of +/- a
    out.push_back(a);
  }
  return out;
}

Matrix reconstruct(const Decomposition& terms) {
  if (terms.empty()) return Matrix();
  const auto n = terms.front().direction.size();
  Matrix g = Matrix::Zero(n, n);
  for (const auto& t : terms) g += t.weight * outer(t.direction);
  return g;
}

Decomposition integer_decomposition(const Matrix& g,
                                    const std::vector<Eigen::VectorXi>& candidates) {
  if (g.rows() != g.cols() || g.rows() == 0) throw Error("decomposition needs a square matrix");
  if (!g.isApprox(g.transpose(), 0.0)) throw Error("decomposition needs a symmetric matrix");
  if (!(linalg::min_eigenvalue(g) > 0.0)) throw Error("decomposition needs a positive definite matrix");
  const auto n = static_cast<int>(g.rows());
  const auto not_representable = [] {
    return Error("not representable over candidate set; enlarge set");
  };
  if (candidates.empty()) throw not_representable();

  if (same_candidates(candidates, default_candidates(n))) {
    if (auto exact = exact_default_decomposition(g)) return *exact;
  }

  const Vector target = symmetric_coordinates(g);
  Matrix a(target.size(), static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    if (candidates[k].size() != n) throw Error("candidate direction has the wrong dimension");
    a.col(static_cast<Eigen::Index>(k)) = symmetric_coordinates(outer(candidates[k]));
  }
  const Vector w = projected_gradient_nnls(a, target);
  Decomposition terms;
  for (std::size_t k = 0; k < candidates.size(); ++k)
    if (w[static_cast<Eigen::Index>(k)] > 0.0) terms.push_back({w[static_cast<Eigen::Index>(k)], candidates[k]});
  if (terms.empty() || (reconstruct(terms) - g).norm() >= kDecompositionTolerance)
    throw not_representable();
  return terms;
}

Decomposition integer_decomposition(const Matrix& g) {
  const auto n = static_cast<int>(g.rows());
  try {
    return integer_decomposition(g, default_candidates(n));
  } catch (const Error&) {
    return integer_decomposition(g, extended_candidates(n, 2));
  }
}

EmbeddingOracle clifford_general_oracle(const Decomposition& terms) {
  return make_clifford("clifford", terms);
}

EmbeddingOracle revolution_oracle(double major_radius, double minor_radius) {
  if (!(major_radius > minor_radius && minor_radius > 0.0))
    throw Error("revolution oracle needs R > rho > 0 (otherwise the torus self-intersects)");
  return EmbeddingOracle("revolution", 2, 3, major_radius + minor_radius,
                         std::make_shared<RevolutionImpl>(major_radius, minor_radius));
}

EmbeddingOracle expression_oracle(const std::vector<std::string>& components, int n) {
  if (components.empty()) throw Error("expression oracle needs at least one component");
  if (n < 1) throw Error("expression oracle needs n >= 1");
  std::vector<expr::Expr> parsed;
  for (const auto& text : components) parsed.push_back(expr::parse(text, n));
  auto impl = std::make_shared<ExpressionImpl>(parsed, n);
  const auto big_n = static_cast<int>(parsed.size());

  // Image radius from a grid over the unit cube, padded by the largest
  // Jacobian norm times the half cell diagonal.
  const int res = n <= 2 ? 64 : (n == 3 ? 16 : 6);
  std::vector<int> index(static_cast<std::size_t>(n), 0);
  double max_norm = 0.0;
  double max_jac = 0.0;
  Vector x(n);
  for (;;) {
    for (int i = 0; i < n; ++i) x[i] = static_cast<double>(index[static_cast<std::size_t>(i)]) / res;
    max_norm = std::max(max_norm, impl->eval(x).norm());
    max_jac = std::max(max_jac, impl->jacobian(x).norm());
    int axis = 0;
    while (axis < n && ++index[static_cast<std::size_t>(axis)] == res) {
      index[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == n) break;
  }
  const double radius = max_norm + max_jac * std::sqrt(static_cast<double>(n)) / (2.0 * res);
  EmbeddingOracle oracle("expression", n, big_n, radius, impl);

  const auto sampler = PointSampler::window(n, 1.0, 0, 1000);
  const double residual = periodicity_residual(oracle, sampler);
  if (!(residual < 1e-9))
    throw Error(fmt::format("expression oracle is not periodic (residual {:.3g})", residual));
  return oracle;
}

double verify_oracle(const EmbeddingOracle& oracle, const MetricField& q1,
                     const PointSampler& sampler) {
  if (oracle.domain_dimension() != q1.dimension())
    throw Error("oracle and metric have different dimensions");
  double worst = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    worst = std::max(worst, (linalg::pullback(oracle.jacobian(x)) - q1(x)).norm());
  }
  return worst;
}

double periodicity_residual(const EmbeddingOracle& oracle, const PointSampler& sampler) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    const Vector y = oracle(x);
    for (int k = 0; k < oracle.domain_dimension(); ++k)
      worst = std::max(worst, (oracle(x + Vector::Unit(x.size(), k)) - y).norm());
  }
  return worst;
}

double invariance_residual(const EmbeddingOracle& oracle, const BieberbachElement& element,
                           const PointSampler& sampler) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    worst = std::max(worst, (oracle(element.act(x)) - oracle(x)).norm());
  }
  return worst;
}

VerifiedOracle certify_oracle(EmbeddingOracle oracle, const MetricField& q1,
                              const PointSampler& sampler, double tolerance) {
  const double residual = verify_oracle(oracle, q1, sampler);
  if (!(residual < tolerance))
    throw Error(fmt::format("oracle '{}' does not pull back to the target metric (residual {:.6g}, "
                            "tolerance {:.3g})",
                            oracle.name(), residual, tolerance));
  return VerifiedOracle(std::move(oracle), q1, residual);
}

}  // namespace isoembed
