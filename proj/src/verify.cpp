#include "isoembed/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isoembed/linalg.hpp"

namespace isoembed {

Matrix fd_jacobian(const AmbientMap& map, const Vector& x, double h) {
  Matrix j(map.ambient_dimension(), x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vector plus = x;
    Vector minus = x;
    plus[i] += h;
    minus[i] -= h;
    j.col(i) = (map(plus) - map(minus)) / (plus[i] - minus[i]);
  }
  return j;
}

double pullback_fd_step(const Vector& x) { return 1e-5 * (1.0 + x.cwiseAbs().maxCoeff()); }

namespace {

double pullback_scan(const AmbientMap& map, const MetricField& target, const PointSampler& sampler,
                     bool use_fd, bool relative) {
  if (map.domain_dimension() != target.dimension())
    throw Error("map and target metric have different dimensions");
  double worst = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    const Matrix g = target(x);
    const Matrix j = use_fd ? fd_jacobian(map, x, pullback_fd_step(x)) : map.jacobian(x);
    const double r = (linalg::pullback(j) - g).norm();
    worst = std::max(worst, relative ? r / std::max(1.0, g.norm()) : r);
  }
  return worst;
}

}  // namespace

double pullback_residual(const AmbientMap& map, const MetricField& target,
                         const PointSampler& sampler, bool use_fd) {
  return pullback_scan(map, target, sampler, use_fd, false);
}

double relative_pullback_residual(const AmbientMap& map, const MetricField& target,
                                  const PointSampler& sampler, bool use_fd) {
  return pullback_scan(map, target, sampler, use_fd, true);
}

double jacobian_fd_residual(const AmbientMap& map, const PointSampler& sampler, double h) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    const Matrix analytic = map.jacobian(x);
    const Matrix numeric = fd_jacobian(map, x, h);
    worst = std::max(worst, (analytic - numeric).norm() / std::max(1.0, analytic.norm()));
  }
  return worst;
}

double equivariance_residual(const AmbientMap& map, const BieberbachElement& element,
                             const AmbientIsometry& extension, const PointSampler& sampler) {
  if (extension.ambient_dimension() != map.ambient_dimension())
    throw Error("ambient isometry and map have different ambient dimensions");
  double worst = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    worst = std::max(worst, (extension(map(x)) - map(element.act(x))).norm());
  }
  return worst;
}

BoundednessResult boundedness_check(const AmbientMap& map, double window, std::size_t budget,
                                    std::uint64_t seed, std::optional<double> bound) {
  if (!(window > 0.0)) throw Error("boundedness window must be positive");
  const auto sampler = PointSampler::window(map.domain_dimension(), window, seed, budget);
  BoundednessResult result;
  result.bound = bound.value_or(map.image_radius().value_or(std::numeric_limits<double>::infinity()));
  for (std::size_t i = 0; i < sampler.size(); ++i)
    result.max_norm = std::max(result.max_norm, map(sampler.point(i)).norm());
  result.pass = result.max_norm <= result.bound + 1e-9;
  return result;
}

InjectivityResult injectivity_probe(const AmbientMap& map, const PointSampler& sampler,
                                    double domain_floor, double image_floor) {
  if (!(domain_floor > 0.0) || !(image_floor > 0.0))
    throw Error("injectivity floors must be positive");
  const int n = map.domain_dimension();
  InjectivityResult result;
  result.image_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    auto engine = sample_engine(sampler.seed() ^ 0x9e3779b97f4a7c15ULL, i);
    Vector y(n);
    if (i % 2 == 0) {
      for (int k = 0; k < n; ++k)
        y[k] = sampler.lo() + (sampler.hi() - sampler.lo()) * unit_draw(engine);
    } else {
      Vector direction(n);
      for (int k = 0; k < n; ++k) direction[k] = 2.0 * unit_draw(engine) - 1.0;
      if (direction.norm() == 0.0) direction = Vector::Unit(n, 0);
      y = x + direction.normalized() * domain_floor * (1.0 + unit_draw(engine));
    }
    const double dx = (x - y).norm();
    if (dx < domain_floor) continue;
    ++result.pairs;
    const double dy = (map(x) - map(y)).norm();
    if (dy < result.image_distance) {
      result.image_distance = dy;
      result.domain_distance = dx;
      result.x = x;
      result.y = y;
    }
  }
  result.pass = result.pairs > 0 && result.image_distance >= image_floor;
  return result;
}

PropernessResult properness_probe(const AmbientMap& bounded_map, int shift_radius,
                                  const PointSampler& sampler) {
  if (shift_radius < 1) throw Error("properness probe needs shift radius >= 1");
  const int n = bounded_map.domain_dimension();
  const int tail = 2 * n;
  if (bounded_map.ambient_dimension() < tail)
    throw Error("properness probe needs a map whose trailing 2n coordinates are the spiral factor");

  std::vector<Eigen::VectorXi> shifts;
  const int span = 2 * shift_radius + 1;
  int total = 1;
  for (int i = 0; i < n; ++i) total *= span;
  for (int code = 0; code < total; ++code) {
    Eigen::VectorXi k(n);
    int rest = code;
    for (int i = 0; i < n; ++i) {
      k[i] = rest % span - shift_radius;
      rest /= span;
    }
    if (k.cwiseAbs().maxCoeff() >= 1) shifts.push_back(k);
  }

  PropernessResult result;
  result.min_separation = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    const Vector base = bounded_map(x).tail(tail);
    for (const auto& k : shifts) {
      const double sep = (bounded_map(x + k.cast<double>()).tail(tail) - base).norm();
      if (sep < result.min_separation) {
        result.min_separation = sep;
        result.x = x;
        result.shift = k;
      }
    }
  }
  result.pass = result.min_separation > 0.0 && std::isfinite(result.min_separation);
  return result;
}

void VerificationReport::add(std::string name, std::size_t samples, std::uint64_t seed,
                             double max_residual, double tolerance, double wall_ms) {
  const bool pass = max_residual < tolerance;
  checks_.push_back({std::move(name), samples, seed, max_residual, tolerance, pass, wall_ms});
}

void VerificationReport::skip(std::string name, std::string reason, std::optional<double> diagnostic) {
  skipped_.push_back({std::move(name), std::move(reason), diagnostic});
}

const CheckRecord* VerificationReport::find(std::string_view name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

bool VerificationReport::pass() const {
  return std::all_of(checks_.begin(), checks_.end(), [](const CheckRecord& c) { return c.pass; });
}

nlohmann::ordered_json VerificationReport::to_json(bool include_timing) const {
  nlohmann::ordered_json out;
  out["tool"] = "isoembed";
  out["version"] = "0.1.0";
  out["environment"] = {
      {"compiler", __VERSION__},
      {"cxx_standard", static_cast<long>(__cplusplus)},
      {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                    std::to_string(EIGEN_MINOR_VERSION)},
  };
  out["config"] = config;
  out["summary"] = summary;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    nlohmann::ordered_json entry = {
        {"name", c.name},           {"samples", c.samples},     {"seed", c.seed},
        {"max_residual", c.max_residual}, {"tolerance", c.tolerance}, {"pass", c.pass},
    };
    if (include_timing) entry["wall_ms"] = c.wall_ms;
    checks.push_back(std::move(entry));
  }
  out["checks"] = std::move(checks);
  auto skipped = nlohmann::ordered_json::array();
  for (const auto& s : skipped_) {
    nlohmann::ordered_json entry = {{"name", s.name}, {"reason", s.reason}};
    if (s.diagnostic_residual) entry["diagnostic_residual"] = *s.diagnostic_residual;
    skipped.push_back(std::move(entry));
  }
  out["skipped"] = std::move(skipped);
  out["pass"] = pass();
  return out;
}

std::string VerificationReport::serialize(bool include_timing) const {
  return to_json(include_timing).dump(2) + "\n";
}

}  // namespace isoembed
