#include "isoembed/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "isoembed/linalg.hpp"

namespace isoembed {

EmbeddingOracle select_oracle(const RunConfig& config, const MetricSplit& split) {
  const auto& o = config.oracle;
  if (o.name == "revolution") return revolution_oracle(o.major_radius, o.minor_radius);
  if (o.name == "expression") return expression_oracle(o.components, config.n);
  if (o.name != "clifford") throw Error(fmt::format("unknown oracle '{}'", o.name));
  if (!split.q1.is_constant())
    throw Error(fmt::format("the clifford oracle needs a constant metric, got a {} metric; "
                            "use a revolution or expression oracle",
                            to_string(split.q1.family())));
  const Matrix g = split.q1(Vector::Zero(config.n));
  const Matrix off = g - Matrix(g.diagonal().asDiagonal());
  if (off.cwiseAbs().maxCoeff() == 0.0) return clifford_diagonal_oracle(g.diagonal());
  return clifford_general_oracle(integer_decomposition(g));
}

namespace {

Pipeline assemble(const RunConfig& config) {
  const MetricField metric = build_metric(config);
  MetricSplit split = split_metric(metric, config.split.fraction, config.split.resolution);
  const auto& v = config.verify;
  const auto sampler = PointSampler::window(config.n, v.window, v.seed, v.samples);
  VerifiedOracle oracle = certify_oracle(select_oracle(config, split), split.q1, sampler,
                                         v.pullback_tolerance);
  SpiralCurve curve(spiral_parameters(config));
  AmbientMap e = build_E(split, oracle, curve);
  AmbientMap f = build_F(split, oracle);
  return Pipeline{config, std::move(split), std::move(oracle), std::move(curve), std::move(e),
                  std::move(f)};
}

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace

Pipeline build_pipeline(const RunConfig& config) {
  try {
    return assemble(config);
  } catch (const ExtensionUnavailable&) {
    throw;
  } catch (const Error& e) {
    throw Error(fmt::format("building the embedding failed: {}", e.what()));
  }
}

VerificationReport run_verification(const Pipeline& p) {
  const RunConfig& config = p.config;
  const auto& v = config.verify;
  const int n = config.n;
  const double c = p.split.c;
  const auto sampler = PointSampler::window(n, v.window, v.seed, v.samples);
  const auto jac_sampler = PointSampler::window(n, v.window, v.seed, v.jacobian_samples);

  VerificationReport report;
  report.config = to_json(config);
  nlohmann::ordered_json probes;

  {
    Stopwatch t;
    double worst = 0.0;
    for (std::size_t i = 0; i < sampler.size(); ++i) {
      const Vector x = sampler.point(i);
      const Matrix recombined = p.split.q1(x) + c * Matrix::Identity(n, n);
      worst = std::max(worst, (p.split.field(x) - recombined).norm());
    }
    report.add("split.recombination", sampler.size(), v.seed, worst, 1e-12, t.ms());
  }
  {
    Stopwatch t;
    const double q1_min = min_eigenvalue_over_domain(p.split.q1, p.split.resolution);
    const std::size_t grid = static_cast<std::size_t>(std::pow(p.split.resolution, n));
    report.add("split.margin", grid, v.seed, p.split.margin - q1_min, 1e-12, t.ms());
  }
  {
    Stopwatch t;
    report.add("oracle.pullback", sampler.size(), v.seed,
               verify_oracle(p.oracle.oracle(), p.split.q1, sampler), v.pullback_tolerance, t.ms());
  }

  for (const AmbientMap* map : {&p.E, &p.F}) {
    const std::string name = to_string(map->tag());
    Stopwatch t1;
    report.add(name + ".pullback", sampler.size(), v.seed,
               pullback_residual(*map, p.split.field, sampler, false), v.pullback_tolerance, t1.ms());
    Stopwatch t2;
    report.add(name + ".pullback_fd", sampler.size(), v.seed,
               pullback_residual(*map, p.split.field, sampler, true), v.fd_tolerance, t2.ms());
    probes[name + "_pullback_fd_relative"] = relative_pullback_residual(*map, p.split.field, sampler, true);
    Stopwatch t3;
    report.add(name + ".jacobian_fd", jac_sampler.size(), v.seed,
               jacobian_fd_residual(*map, jac_sampler), v.fd_tolerance, t3.ms());
  }

  {
    Stopwatch t;
    const AmbientMap psi = build_Psi(ProductSpiralMap(p.curve, c, n));
    report.add("Psi.pullback", sampler.size(), v.seed,
               pullback_residual(psi, MetricField::constant(c * Matrix::Identity(n, n)), sampler, false),
               v.pullback_tolerance, t.ms());
  }
  {
    Stopwatch t;
    const auto s_sampler = PointSampler::window(1, v.spiral_window, v.seed, v.spiral_samples);
    double speed = 0.0;
    double annulus = 0.0;
    for (std::size_t i = 0; i < s_sampler.size(); ++i) {
      const double s = s_sampler.point(i)[0];
      speed = std::max(speed, std::abs(p.curve.tangent(s).norm() - 1.0));
      const double r = p.curve.point(s).norm();
      annulus = std::max({annulus, p.curve.r_in() - r, r - p.curve.r_out()});
    }
    report.add("spiral.unit_speed", s_sampler.size(), v.seed, speed, v.pullback_tolerance, t.ms());
    report.add("spiral.annulus", s_sampler.size(), v.seed, annulus, 1e-12);
  }

  {
    Stopwatch t;
    const auto b = boundedness_check(p.E, v.bound_window, v.bound_samples, v.seed);
    report.add("E.boundedness", v.bound_samples, v.seed, b.max_norm - b.bound, 1e-9, t.ms());
    probes["E_max_norm"] = b.max_norm;
  }
  {
    Stopwatch t;
    const auto pair_sampler = PointSampler::window(n, v.window, v.seed, v.pairs);
    const auto inj = injectivity_probe(p.E, pair_sampler, v.domain_floor, v.image_floor);
    report.add("E.injectivity", inj.pairs, v.seed, v.image_floor - inj.image_distance, 0.0, t.ms());
    probes["injectivity_min_distance"] = inj.image_distance;
  }
  {
    Stopwatch t;
    const auto prop_sampler = PointSampler::window(n, v.window, v.seed, v.properness_samples);
    const auto pr = properness_probe(p.E, v.shift_radius, prop_sampler);
    report.add("E.properness", prop_sampler.size(), v.seed, v.properness_floor - pr.min_separation,
               0.0, t.ms());
    probes["properness_min_separation"] = pr.min_separation;
    probes["properness_shift"] = std::vector<int>(pr.shift.data(), pr.shift.data() + pr.shift.size());
  }

  {
    Stopwatch t;
    const LatticeSampler shifts(n, v.translation_radius, v.seed, v.translations);
    double worst = 0.0;
    for (std::size_t i = 0; i < shifts.size(); ++i) {
      const auto d = BieberbachElement::translation(shifts.shift(i));
      worst = std::max(worst, equivariance_residual(p.F, d, extend_action(d, p.split, p.oracle, sampler),
                                                    sampler));
    }
    report.add("F.equivariance.translations", sampler.size() * shifts.size(), v.seed, worst,
               v.equivariance_tolerance, t.ms());
  }

  std::vector<BieberbachElement> extended;
  const auto& generators = p.split.field.symmetry().generators;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const std::string name = fmt::format("F.equivariance.generator[{}]", i);
    Stopwatch t;
    try {
      const AmbientIsometry ext = extend_action(generators[i], p.split, p.oracle, sampler);
      report.add(name, sampler.size(), v.seed, equivariance_residual(p.F, generators[i], ext, sampler),
                 v.equivariance_tolerance, t.ms());
      extended.push_back(generators[i]);
    } catch (const ExtensionUnavailable& e) {
      const double diagnostic = equivariance_residual(
          p.F, generators[i], naive_extension(generators[i], p.split, p.oracle), sampler);
      report.skip(name, e.what(), diagnostic);
    }
  }

  {
    Stopwatch t;
    std::vector<BieberbachElement> elements = extended;
    const LatticeSampler shifts(n, v.translation_radius, v.seed, 4);
    for (std::size_t i = 0; i < shifts.size(); ++i)
      elements.push_back(BieberbachElement::translation(shifts.shift(i)));
    std::size_t mismatches = 0;
    std::size_t pairs = 0;
    for (const auto& a : elements) {
      const auto ea = extend_action(a, p.split, p.oracle, sampler);
      for (const auto& b : elements) {
        const auto eb = extend_action(b, p.split, p.oracle, sampler);
        const auto eab = extend_action(a.compose(b), p.split, p.oracle, sampler);
        ++pairs;
        if (!(eab == ea.compose(eb))) ++mismatches;
      }
    }
    report.add("F.homomorphism.mismatches", pairs, v.seed, static_cast<double>(mismatches), 1.0, t.ms());
  }

  // Negative controls: pass means the predicted failure signature was seen.
  {
    Stopwatch t;
    const AmbientMap phi = build_Phi(p.oracle);
    const double expected = c * std::sqrt(static_cast<double>(n));
    const double r = pullback_residual(phi, p.split.field, sampler, false);
    report.add("negative.wrong_target", sampler.size(), v.seed, std::abs(r - expected) / expected, 1e-6,
               t.ms());
  }
  {
    Stopwatch t;
    const AmbientMap phi = build_Phi(p.oracle);
    double worst = 0.0;
    for (std::size_t i = 0; i < sampler.size(); ++i) {
      const Vector x = sampler.point(i);
      worst = std::max(worst, (phi(x + Vector::Unit(n, 0)) - phi(x)).norm());
    }
    report.add("negative.phi_injectivity", sampler.size(), v.seed, worst, 1e-9, t.ms());
  }
  {
    Stopwatch t;
    const double window = std::max(v.bound_window, 10.0 * p.curve.r_out() / std::sqrt(c));
    const double e_bound = *p.E.image_radius();
    const auto b = boundedness_check(p.F, window, v.bound_samples, v.seed, e_bound);
    report.add("negative.F_unbounded", v.bound_samples, v.seed, e_bound / b.max_norm, 1.0, t.ms());
    probes["F_max_norm"] = b.max_norm;
  }

  const EmbeddingOracle& oracle = p.oracle.oracle();
  report.summary = {
      {"n", n},
      {"metric", to_string(p.split.field.family())},
      {"group", p.split.field.symmetry().name},
      {"c", c},
      {"margin", p.split.margin},
      {"min_eigenvalue", p.split.min_eigenvalue},
      {"oracle", oracle.name()},
      {"N", oracle.ambient_dimension()},
      {"R_Phi", oracle.image_radius()},
      {"D_E", p.E.ambient_dimension()},
      {"D_F", p.F.ambient_dimension()},
      {"E_bound", *p.E.image_radius()},
      {"probes", probes},
  };
  return report;
}

}  // namespace isoembed
