#include <doctest.h>

#include <cmath>

#include "isoembed/linalg.hpp"
#include "isoembed/oracle.hpp"
#include "reference.hpp"

using namespace isoembed;

namespace {

const double two_pi = 2.0 * reference::pi;

Matrix mat2(double a, double b, double c, double d) { return (Matrix(2, 2) << a, b, c, d).finished(); }

double fd_jacobian_residual(const EmbeddingOracle& o, const PointSampler& sampler) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    const Matrix j = o.jacobian(x);
    const Matrix fd = reference::central_jacobian([&](const Eigen::VectorXd& z) { return o(z); }, x, 1e-6);
    worst = std::max(worst, (j - fd).norm() / std::max(1.0, j.norm()));
  }
  return worst;
}

double max_image_norm(const EmbeddingOracle& o, const PointSampler& sampler) {
  double worst = 0.0;
  for (std::size_t i = 0; i < sampler.size(); ++i) worst = std::max(worst, o(sampler.point(i)).norm());
  return worst;
}

}  // namespace

TEST_SUITE("oracle") {
  TEST_CASE("diagonal Clifford oracle") {
    const auto circle = clifford_diagonal_oracle(Vector::Constant(1, 4.0 * reference::pi * reference::pi));
    CHECK(circle.ambient_dimension() == 2);
    CHECK(circle.image_radius() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(circle(Vector::Constant(1, 0.25)).norm() == doctest::Approx(1.0).epsilon(1e-15));

    const auto torus = clifford_diagonal_oracle(Eigen::Vector2d(0.5, 0.5));
    CHECK(torus.ambient_dimension() == 4);
    CHECK(torus.image_radius() == doctest::Approx(1.0 / two_pi).epsilon(1e-15));
    const Matrix g = linalg::pullback(torus.jacobian(Eigen::Vector2d(0.3, 0.7)));
    CHECK((g - 0.5 * Matrix::Identity(2, 2)).norm() < 1e-12);
    CHECK_THROWS(clifford_diagonal_oracle(Eigen::Vector2d(1.0, 0.0)));
  }

  TEST_CASE("integer decomposition") {
    const auto skew = integer_decomposition(mat2(5, 2, 2, 5), default_candidates(2));
    CHECK(skew.size() == 3);
    CHECK((reconstruct(skew) - mat2(5, 2, 2, 5)).norm() < 1e-10);
    for (const auto& term : skew) {
      CHECK(term.weight > 0.0);
      if (term.direction == Eigen::Vector2i(1, 0)) CHECK(term.weight == doctest::Approx(3.0));
      if (term.direction == Eigen::Vector2i(0, 1)) CHECK(term.weight == doctest::Approx(3.0));
      if (term.direction == Eigen::Vector2i(1, 1)) CHECK(term.weight == doctest::Approx(2.0));
    }

    const auto diag = integer_decomposition(mat2(2, 0, 0, 7), default_candidates(2));
    CHECK(diag.size() == 2);
    CHECK((reconstruct(diag) - mat2(2, 0, 0, 7)).norm() < 1e-10);

    CHECK_THROWS_WITH(integer_decomposition(Matrix::Identity(2, 2), {}),
                      doctest::Contains("not representable over candidate set; enlarge set"));
    // Off-diagonal mass too large for the default set; the retry set handles it.
    const Matrix strong = mat2(2, 3, 3, 5);
    CHECK_THROWS(integer_decomposition(strong, default_candidates(2)));
    const auto retried = integer_decomposition(strong);
    CHECK((reconstruct(retried) - strong).norm() < 1e-10);

    Matrix three(3, 3);
    three << 6, 1, -2, 1, 5, 1, -2, 1, 7;
    CHECK((reconstruct(integer_decomposition(three)) - three).norm() < 1e-10);
  }

  TEST_CASE("general Clifford oracle") {
    const auto diag = clifford_general_oracle(integer_decomposition(mat2(2, 0, 0, 7), default_candidates(2)));
    CHECK(diag.ambient_dimension() == 4);
    const auto skew = clifford_general_oracle(integer_decomposition(mat2(5, 2, 2, 5), default_candidates(2)));
    CHECK(skew.ambient_dimension() == 6);
    CHECK(skew.image_radius() == doctest::Approx(std::sqrt(8.0) / two_pi).epsilon(1e-15));
    const auto sampler = PointSampler::window(2, 5.0, 0, 1000);
    CHECK(verify_oracle(skew, MetricField::constant(mat2(5, 2, 2, 5)), sampler) < 1e-12);
    CHECK(max_image_norm(skew, sampler) <= skew.image_radius() + 1e-12);

    // Points of [0,1)^2 at distance >= 0.01 stay apart in the image.
    const auto unit = PointSampler(2, 0.0, 1.0, 5, 2000);
    double closest = 1e300;
    for (std::size_t i = 0; i + 1 < unit.size(); i += 2) {
      const Vector x = unit.point(i);
      const Vector y = unit.point(i + 1);
      Vector d = x - y;
      for (int k = 0; k < 2; ++k) d[k] -= std::round(d[k]);
      if (d.norm() < 0.01) continue;
      closest = std::min(closest, (skew(x) - skew(y)).norm());
    }
    CHECK(closest > 1e-3);
  }

  TEST_CASE("revolution oracle") {
    const auto o = revolution_oracle(2.0, 1.0);
    CHECK(o.ambient_dimension() == 3);
    CHECK((o(Eigen::Vector2d(0, 0)) - Eigen::Vector3d(3, 0, 0)).norm() < 1e-15);
    const double four_pi2 = 4.0 * reference::pi * reference::pi;
    const Matrix g = linalg::pullback(o.jacobian(Eigen::Vector2d(0, 0)));
    CHECK((g - mat2(four_pi2, 0, 0, 36 * reference::pi * reference::pi)).norm() < 1e-12);
    CHECK_THROWS(revolution_oracle(1.0, 1.0));
    CHECK(o.image_radius() == 3.0);

    const auto sampler = PointSampler::window(2, 5.0, 0, 1000);
    CHECK(verify_oracle(o, MetricField::revolution(2.0, 1.0), sampler) < 1e-10);
    const double mismatch = (g - Matrix::Identity(2, 2)).norm();
    const double hand = std::sqrt(std::pow(four_pi2 - 1, 2) + std::pow(9 * four_pi2 - 1, 2));
    CHECK(mismatch == doctest::Approx(hand).epsilon(1e-12));
    CHECK(hand == doctest::Approx(356.39).epsilon(1e-4));
  }

  TEST_CASE("periodicity, finite differences and image radius for built-in oracles") {
    const auto sampler = PointSampler::window(2, 5.0, 9, 100);
    for (const auto& o : {clifford_diagonal_oracle(Eigen::Vector2d(0.5, 2.0)),
                          clifford_general_oracle(integer_decomposition(mat2(5, 2, 2, 5))),
                          revolution_oracle(2.0, 1.0)}) {
      CAPTURE(o.name());
      CHECK(periodicity_residual(o, PointSampler::window(2, 5.0, 9, 1000)) < 1e-12);
      CHECK(fd_jacobian_residual(o, sampler) < 1e-6);
      CHECK(max_image_norm(o, PointSampler::window(2, 5.0, 9, 1000)) <= o.image_radius() + 1e-12);
    }
  }

  TEST_CASE("expression oracle") {
    const std::vector<std::string> clifford = {
        "sqrt(0.5)/(2*pi)*cos(2*pi*x1)", "sqrt(0.5)/(2*pi)*sin(2*pi*x1)",
        "sqrt(0.5)/(2*pi)*cos(2*pi*x2)", "sqrt(0.5)/(2*pi)*sin(2*pi*x2)"};
    const auto o = expression_oracle(clifford, 2);
    const auto sampler = PointSampler::window(2, 5.0, 0, 1000);
    CHECK(verify_oracle(o, MetricField::constant(0.5 * Matrix::Identity(2, 2)), sampler) < 1e-12);
    CHECK_NOTHROW(certify_oracle(o, MetricField::constant(0.5 * Matrix::Identity(2, 2)), sampler));
    CHECK(max_image_norm(o, sampler) <= o.image_radius() + 1e-12);
    CHECK(fd_jacobian_residual(o, PointSampler::window(2, 5.0, 0, 100)) < 1e-6);

    CHECK_THROWS_WITH(expression_oracle({"x1", "sin(2*pi*x2)"}, 2), doctest::Contains("periodic"));

    const auto rev_expr = expression_oracle({"(2 + cos(2*pi*x1))*cos(2*pi*x2)",
                                             "(2 + cos(2*pi*x1))*sin(2*pi*x2)", "sin(2*pi*x1)"},
                                            2);
    const auto rev = revolution_oracle(2.0, 1.0);
    const auto q1 = MetricField::revolution(2.0, 1.0);
    CHECK(std::abs(verify_oracle(rev_expr, q1, sampler) - verify_oracle(rev, q1, sampler)) < 1e-9);
    CHECK(max_image_norm(rev_expr, sampler) <= rev_expr.image_radius() + 1e-12);
  }

  TEST_CASE("certification rejects mismatched targets") {
    const auto sampler = PointSampler::window(2, 5.0, 0, 1000);
    CHECK_THROWS(certify_oracle(revolution_oracle(2.0, 1.0), MetricField::identity(2), sampler));
    const auto split = split_metric(MetricField::revolution(2.0, 1.0));
    const double r = verify_oracle(revolution_oracle(2.0, 1.0), split.q1, sampler);
    CHECK(r == doctest::Approx(split.c * std::sqrt(2.0)).epsilon(1e-9));
    CHECK_THROWS(certify_oracle(revolution_oracle(2.0, 1.0), split.q1, sampler));
  }

  TEST_CASE("invariance under holonomy") {
    const auto sampler = PointSampler::window(2, 3.0, 0, 1000);
    const auto glide = SymmetryGroup::named("pg", 2).generators[0];
    const auto klein = expression_oracle({"cos(4*pi*x1)/(2*pi)", "sin(4*pi*x1)/(2*pi)", "cos(2*pi*x2)/(2*pi)",
                                          "sin(2*pi*x2)*cos(2*pi*x1)/(2*pi)",
                                          "sin(2*pi*x2)*sin(2*pi*x1)/(2*pi)"},
                                         2);
    CHECK(invariance_residual(klein, glide, sampler) < 1e-12);
    CHECK(invariance_residual(clifford_diagonal_oracle(Eigen::Vector2d(0.5, 0.5)), glide, sampler) > 0.1);
  }
}
