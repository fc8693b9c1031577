#include <doctest.h>

#include <cmath>
#include <random>

#include "isoembed/linalg.hpp"
#include "isoembed/metric_field.hpp"
#include "reference.hpp"

using namespace isoembed;

namespace {

MetricField conformal_test_metric() {
  return MetricField::conformal(2, expr::parse("0.3*sin(2*pi*x1)", 2));
}

}  // namespace

TEST_SUITE("metric_field") {
  TEST_CASE("evaluation of the built-in families") {
    CHECK(MetricField::identity(2)(Eigen::Vector2d(0.3, 0.7)) == Matrix::Identity(2, 2));

    const Matrix g = conformal_test_metric()(Eigen::Vector2d(0.25, 0.0));
    CHECK(g(0, 0) == doctest::Approx(std::exp(0.6)).epsilon(1e-14));
    CHECK(g(1, 1) == doctest::Approx(std::exp(0.6)).epsilon(1e-14));
    CHECK(g(0, 1) == 0.0);
    CHECK(g(0, 0) == doctest::Approx(1.8221).epsilon(1e-4));

    const Matrix rev = MetricField::revolution(2.0, 1.0)(Eigen::Vector2d(0.0, 0.0));
    const double four_pi2 = 4.0 * reference::pi * reference::pi;
    CHECK(rev(0, 0) == doctest::Approx(four_pi2).epsilon(1e-14));
    CHECK(rev(1, 1) == doctest::Approx(9.0 * four_pi2).epsilon(1e-14));
    CHECK(rev(0, 1) == 0.0);
  }

  TEST_CASE("revolution offset adds an isotropic term") {
    const Eigen::Vector2d x(0.37, 0.81);
    const Matrix plain = MetricField::revolution(2.0, 1.0)(x);
    const Matrix shifted = MetricField::revolution(2.0, 1.0, 3.0)(x);
    CHECK((shifted - plain - 3.0 * Matrix::Identity(2, 2)).norm() < 1e-13);
    CHECK_THROWS(MetricField::revolution(1.0, 1.0));
  }

  TEST_CASE("evaluations are exactly symmetric") {
    const auto field = MetricField::expression(
        3, {expr::parse("2 + sin(2*pi*x1)^2", 3), expr::parse("0.1*cos(2*pi*x2)", 3),
            expr::parse("0.2*sin(2*pi*x3)", 3), expr::parse("3", 3), expr::parse("0.1", 3),
            expr::parse("4 + cos(2*pi*x1)", 3)});
    const auto sampler = PointSampler::window(3, 3.0, 1, 200);
    for (std::size_t i = 0; i < sampler.size(); ++i) {
      const Matrix g = field(sampler.point(i));
      CHECK(g == g.transpose());
    }
  }

  TEST_CASE("expression evaluation errors surface") {
    const auto field = MetricField::expression(1, {expr::parse("log(x1)", 1)});
    CHECK_THROWS_AS(field(Vector::Constant(1, -1.0)), expr::EvalError);
  }

  TEST_CASE("grid minimum eigenvalue") {
    CHECK(min_eigenvalue_over_domain(MetricField::identity(2), 16) == 1.0);
    CHECK(min_eigenvalue_over_domain(MetricField::constant(Eigen::Vector2d(4, 9).asDiagonal().toDenseMatrix()), 8) == 4.0);
    const double computed = min_eigenvalue_over_domain(conformal_test_metric(), 256);
    CHECK(computed == doctest::Approx(std::exp(-0.6)).epsilon(1e-12));
    // The factor depends on x1 only, so the 4096^2 grid reduces to one axis.
    double brute = 1e300;
    for (int i = 0; i < 4096; ++i)
      brute = std::min(brute, reference::min_eigenvalue(std::exp(0.6 * std::sin(2 * reference::pi * i / 4096.0)) *
                                                        Eigen::MatrixXd::Identity(2, 2)));
    CHECK(std::abs(computed - brute) < 1e-6);
    CHECK(computed == doctest::Approx(0.54881).epsilon(1e-4));
  }

  TEST_CASE("grid minimum is non-increasing under nested refinement") {
    const auto field = MetricField::expression(
        2, {expr::parse("2 + sin(2*pi*x1 + 0.3)*cos(2*pi*x2)", 2), expr::parse("0.4*sin(2*pi*x2)", 2),
            expr::parse("2 + cos(2*pi*(x1 + 0.1))^3", 2)});
    double previous = min_eigenvalue_over_domain(field, 4);
    for (int r = 8; r <= 256; r *= 2) {
      const double current = min_eigenvalue_over_domain(field, r);
      CHECK(current <= previous);
      previous = current;
    }
  }

  TEST_CASE("split of documented metrics") {
    const MetricSplit id = split_metric(MetricField::identity(2));
    CHECK(id.c == 0.5);
    CHECK(id.margin == 0.5);
    CHECK(id.q1(Eigen::Vector2d(0.2, 0.4)) == 0.5 * Matrix::Identity(2, 2));

    const MetricSplit diag = split_metric(MetricField::constant(Eigen::Vector2d(4, 9).asDiagonal().toDenseMatrix()));
    CHECK(diag.c == 2.0);
    CHECK(diag.margin == 2.0);
    CHECK(diag.q1(Eigen::Vector2d(0.0, 0.0)) == Eigen::Vector2d(2, 7).asDiagonal().toDenseMatrix());

    const MetricSplit conf = split_metric(conformal_test_metric(), 0.5, 256);
    CHECK(std::abs(conf.c - std::exp(-0.6) / 2.0) < 1e-4);
    CHECK(conf.c == doctest::Approx(0.27441).epsilon(1e-4));
  }

  TEST_CASE("split invariants at random points") {
    for (const auto& field :
         {MetricField::identity(2), conformal_test_metric(), MetricField::revolution(2.0, 1.0),
          MetricField::constant((Matrix(2, 2) << 5, 2, 2, 5).finished())}) {
      const MetricSplit split = split_metric(field, 0.5, 256);
      const auto sampler = PointSampler::window(2, 5.0, 3, 1000);
      for (std::size_t i = 0; i < sampler.size(); ++i) {
        const Vector x = sampler.point(i);
        const Matrix g = field(x);
        CHECK((split.q1(x) + split.c * Matrix::Identity(2, 2) - g).norm() <= 1e-15 * (1.0 + g.norm()) * 4);
        CHECK(reference::min_eigenvalue(split.q1(x)) >= split.margin - 1e-6);
      }
    }
  }

  TEST_CASE("split rejects bad metrics") {
    CHECK_THROWS_WITH(split_metric(MetricField::constant((Matrix(2, 2) << 1, 2, 2, 1).finished())),
                      doctest::Contains("metric not positive definite"));
    const auto even = MetricField::conformal(2, expr::parse("0.3*cos(2*pi*x2)", 2))
                          .with_symmetry(SymmetryGroup::named("pg", 2));
    CHECK_NOTHROW(split_metric(even));
    const auto broken = MetricField::conformal(2, expr::parse("0.3*sin(2*pi*x1)", 2))
                            .with_symmetry(SymmetryGroup::named("pg", 2));
    CHECK_THROWS_WITH(split_metric(broken), doctest::Contains("metric not invariant under declared group"));
  }

  TEST_CASE("invariance residuals") {
    const auto sampler = PointSampler::window(2, 2.0, 0, 1000);
    const auto shift = BieberbachElement::translation(Eigen::Vector2i(1, 0));
    CHECK(check_invariance(MetricField::identity(2), shift, sampler) == 0.0);
    CHECK(check_invariance(conformal_test_metric(), shift, sampler) < 1e-12);

    const auto half = BieberbachElement::make(Matrix::Identity(2, 2), Eigen::Vector2d(0.5, 0.0));
    const double r = check_invariance(conformal_test_metric(), half, sampler);
    const double worst = std::sqrt(2.0) * (std::exp(0.6) - std::exp(-0.6));
    CHECK(r <= worst + 1e-12);
    CHECK(r > 0.99 * worst);
  }

  TEST_CASE("eigenvalue routines agree with a library solver") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    for (int n = 1; n <= 4; ++n)
      for (int k = 0; k < 50; ++k) {
        Matrix a(n, n);
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
        const Matrix s = a + a.transpose();
        Eigen::SelfAdjointEigenSolver<Matrix> solver(s, Eigen::EigenvaluesOnly);
        CHECK((linalg::symmetric_eigenvalues(s) - solver.eigenvalues()).norm() < 1e-10 * (1.0 + s.norm()));
      }
  }
}
