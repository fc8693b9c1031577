#include "isoembed/spiral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <mutex>
#include <shared_mutex>

#include <fmt/format.h>

namespace isoembed {

namespace {

constexpr double kWindow = 64.0;
constexpr double kMaxStep = 1.0 / 64.0;

// 1 / (1 + exp(t)) without overflow.
double logistic_complement(double t) {
  if (t > 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

// Dormand-Prince 5(4) nodes and weights. theta' depends on s only, so each
// step reduces to a weighted quadrature.
constexpr std::array<double, 7> kNodes = {0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0};
constexpr std::array<double, 7> kWeights5 = {35.0 / 384.0,     0.0, 500.0 / 1113.0, 125.0 / 192.0,
                                             -2187.0 / 6784.0, 11.0 / 84.0, 0.0};
constexpr std::array<double, 7> kWeights4 = {5179.0 / 57600.0,     0.0,
                                             7571.0 / 16695.0,     393.0 / 640.0,
                                             -92097.0 / 339200.0,  187.0 / 2100.0,
                                             1.0 / 40.0};

}  // namespace

struct SpiralCurve::Table {
  struct Node {
    double s;
    double theta;
    double dtheta;
  };

  std::deque<Node> nodes;
  double saturation = 0.0;  // |s| beyond which rho equals its limit in doubles
  mutable std::shared_mutex mutex;
};

SpiralCurve::SpiralCurve(const SpiralParameters& params)
    : params_(params), table_(std::make_shared<Table>()) {
  if (!(params.r_in > 0.0 && params.r_out > params.r_in))
    throw Error("spiral needs 0 < r_in < r_out");
  if (!(params.steepness > 0.0)) throw Error("spiral steepness must be positive");
  if (!(params.tol > 0.0)) throw Error("spiral tolerance must be positive");
  const double budget = params.steepness * (params.r_out - params.r_in) / 4.0;
  if (budget >= 1.0)
    throw Error(fmt::format("speed budget violated: k (r_out - r_in) / 4 = {} >= 1", budget));

  const double gap = params.r_out - params.r_in;
  table_->saturation =
      (std::log(std::max(gap / params.r_in, 1.0)) + 40.0) / params.steepness;
  table_->nodes.push_back({0.0, 0.0, angle_derivative(0.0)});
}

double SpiralCurve::radius(double s) const {
  return params_.r_in +
         (params_.r_out - params_.r_in) * logistic_complement(params_.steepness * s);
}

double SpiralCurve::radius_derivative(double s) const {
  const double t = params_.steepness * s;
  return -(params_.r_out - params_.r_in) * params_.steepness * logistic_complement(t) *
         logistic_complement(-t);
}

double SpiralCurve::angle_derivative(double s) const {
  const double dr = radius_derivative(s);
  return std::sqrt(1.0 - dr * dr) / radius(s);
}

namespace {

template <typename Deriv>
void integrate_segment(double from, double to, double tol, const Deriv& f,
                       std::deque<SpiralCurve::Table::Node>& out, bool forward);

}  // namespace

double SpiralCurve::angle(double s) const {
  Table& table = *table_;
  const double sat = table.saturation;
  const double clamped = std::clamp(s, -sat, sat);

  auto interpolate = [&](double x) {
    const auto& nodes = table.nodes;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), x,
                               [](double v, const Table::Node& n) { return v < n.s; });
    if (it == nodes.end()) --it;
    if (it == nodes.begin()) ++it;
    const auto& a = *(it - 1);
    const auto& b = *it;
    const double h = b.s - a.s;
    const double t = (x - a.s) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * a.theta + (t3 - 2 * t2 + t) * h * a.dtheta +
           (-2 * t3 + 3 * t2) * b.theta + (t3 - t2) * h * b.dtheta;
  };

  double base = 0.0;
  {
    std::shared_lock lock(table.mutex);
    if (clamped >= table.nodes.front().s && clamped <= table.nodes.back().s &&
        table.nodes.size() > 1) {
      base = interpolate(clamped);
    } else {
      lock.unlock();
      std::unique_lock write(table.mutex);
      auto deriv = [this](double x) { return angle_derivative(x); };
      while (clamped > table.nodes.back().s || table.nodes.size() < 2) {
        const double from = table.nodes.back().s;
        const double to = std::min((std::floor(from / kWindow) + 1.0) * kWindow, sat);
        integrate_segment(from, to, params_.tol, deriv, table.nodes, true);
      }
      while (clamped < table.nodes.front().s) {
        const double from = table.nodes.front().s;
        const double to = std::max((std::ceil(from / kWindow) - 1.0) * kWindow, -sat);
        integrate_segment(from, to, params_.tol, deriv, table.nodes, false);
      }
      base = interpolate(clamped);
    }
  }
  // Past saturation theta' is the constant 1 / limit radius.
  if (s > sat) return base + (s - sat) / params_.r_in;
  if (s < -sat) return base + (s + sat) / params_.r_out;
  return base;
}

namespace {

template <typename Deriv>
void integrate_segment(double from, double to, double tol, const Deriv& f,
                       std::deque<SpiralCurve::Table::Node>& out, bool forward) {
  const double direction = forward ? 1.0 : -1.0;
  double s = from;
  double theta = forward ? out.back().theta : out.front().theta;
  double h = kMaxStep;
  while (direction * (to - s) > 0.0) {
    h = std::min(h, direction * (to - s));
    const double step = direction * h;
    std::array<double, 7> k{};
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = f(s + kNodes[i] * step);
    double high = 0.0;
    double err = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
      high += kWeights5[i] * k[i];
      err += (kWeights5[i] - kWeights4[i]) * k[i];
    }
    err = std::abs(step * err);
    const double allowed = tol * h;
    if (err <= allowed || h < 1e-12) {
      s = (direction * (to - s) <= h) ? to : s + step;
      theta += step * high;
      const SpiralCurve::Table::Node node{s, theta, k.back()};
      if (forward) {
        out.push_back(node);
      } else {
        out.push_front(node);
      }
    }
    const double factor = err > 0.0 ? 0.9 * std::pow(allowed / err, 0.2) : 5.0;
    h = std::min(kMaxStep, h * std::clamp(factor, 0.2, 5.0));
  }
}

}  // namespace

Eigen::Vector2d SpiralCurve::point(double s) const {
  const double r = radius(s);
  const double theta = angle(s);
  return {r * std::cos(theta), r * std::sin(theta)};
}

Eigen::Vector2d SpiralCurve::tangent(double s) const {
  const double r = radius(s);
  const double dr = radius_derivative(s);
  const double theta = angle(s);
  const double dtheta = angle_derivative(s);
  const double c = std::cos(theta);
  const double sn = std::sin(theta);
  return {dr * c - r * dtheta * sn, dr * sn + r * dtheta * c};
}

std::pair<double, double> SpiralCurve::table_extent() const {
  std::shared_lock lock(table_->mutex);
  return {table_->nodes.front().s, table_->nodes.back().s};
}

ProductSpiralMap::ProductSpiralMap(SpiralCurve curve, double c, int n)
    : curve_(std::move(curve)), scale_(std::sqrt(c)), n_(n) {
  if (!(c > 0.0)) throw Error("product spiral map needs c > 0");
  if (n < 1) throw Error("product spiral map needs n >= 1");
}

double ProductSpiralMap::image_radius() const { return std::sqrt(static_cast<double>(n_)) * curve_.r_out(); }

Vector ProductSpiralMap::operator()(const Vector& x) const {
  if (x.size() != n_) throw Error("dimension mismatch in product spiral map");
  Vector y(2 * n_);
  for (int i = 0; i < n_; ++i) y.segment<2>(2 * i) = curve_.point(scale_ * x[i]);
  return y;
}

Matrix ProductSpiralMap::jacobian(const Vector& x) const {
  if (x.size() != n_) throw Error("dimension mismatch in product spiral map");
  Matrix j = Matrix::Zero(2 * n_, n_);
  for (int i = 0; i < n_; ++i) j.block<2, 1>(2 * i, i) = scale_ * curve_.tangent(scale_ * x[i]);
  return j;
}

}  // namespace isoembed
