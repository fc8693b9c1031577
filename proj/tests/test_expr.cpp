#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "isoembed/expr.hpp"
#include "reference.hpp"

using namespace isoembed;
using namespace isoembed::expr;

namespace {

Vector point(std::initializer_list<double> values) {
  Vector x(values.size());
  int i = 0;
  for (double v : values) x[i++] = v;
  return x;
}

std::string fmt_number(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6f", std::abs(v));
  return v < 0 ? std::string("(-") + buffer + ")" : std::string(buffer);
}

// Random expressions in x1, x2 that stay finite and smooth on [-2, 2]^2.
std::string random_expression(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 11);
  std::uniform_real_distribution<double> literal(-3.0, 3.0);
  switch (pick(rng)) {
    case 0: return "x1";
    case 1: return "x2";
    case 2: return fmt_number(literal(rng));
    case 3: return "(" + random_expression(rng, depth - 1) + " + " + random_expression(rng, depth - 1) + ")";
    case 4: return "(" + random_expression(rng, depth - 1) + " - " + random_expression(rng, depth - 1) + ")";
    case 5: return "(" + random_expression(rng, depth - 1) + " * " + random_expression(rng, depth - 1) + ")";
    case 6: return "(" + random_expression(rng, depth - 1) + " / (2 + sin(" + random_expression(rng, depth - 1) + ")))";
    case 7: return "sin(" + random_expression(rng, depth - 1) + ")";
    case 8: return "cos(" + random_expression(rng, depth - 1) + ")";
    case 9: return "exp(0.3*sin(" + random_expression(rng, depth - 1) + "))";
    case 10: return "sqrt(1 + " + random_expression(rng, depth - 1) + "^2)";
    default: return "-" + random_expression(rng, depth - 1);
  }
}

}  // namespace

TEST_SUITE("exprlang") {
  TEST_CASE("parse and evaluate literals, variables, pi") {
    CHECK(eval(parse("2*pi*x1", 2), point({0.5, 0.0})) == doctest::Approx(reference::pi).epsilon(1e-15));
    CHECK(eval(parse("exp(0.6)", 1), point({0.0})) == doctest::Approx(std::exp(0.6)).epsilon(1e-15));
    CHECK(eval(parse("pow(x1,2)", 1), point({-3.0})) == 9.0);
    CHECK(eval(parse("x1^2", 1), point({-3.0})) == 9.0);
  }

  TEST_CASE("pythagorean identity holds to rounding") {
    const Expr e = parse("sin(2*pi*x1)^2 + cos(2*pi*x1)^2", 2);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) CHECK(std::abs(eval(e, point({u(rng), u(rng)})) - 1.0) <= 1e-15 * 4);
  }

  TEST_CASE("precedence and associativity") {
    const Vector x = point({2.0, 3.0});
    CHECK(eval(parse("1 + 2 * 3", 2), x) == 7.0);
    CHECK(eval(parse("2 ^ 3 ^ 2", 2), x) == 64.0);
    CHECK(eval(parse("8 / 4 / 2", 2), x) == 1.0);
    CHECK(eval(parse("10 - 4 - 3", 2), x) == 3.0);
    CHECK(eval(parse("-x1^2", 2), x) == 4.0);
    CHECK(eval(parse("2 * -x2", 2), x) == -6.0);
    CHECK(eval(parse("(1 + 2) * 3", 2), x) == 9.0);
  }

  TEST_CASE("parse errors carry positions") {
    CHECK_THROWS_WITH_AS(parse("x3", 2), doctest::Contains("unknown identifier"), ParseError);
    CHECK_THROWS_WITH_AS(parse("sin(x1, x2)", 2), doctest::Contains("arity"), ParseError);
    CHECK_THROWS_AS(parse("", 2), ParseError);
    try {
      parse("1 + * 2", 2);
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 4);
    }
  }

  TEST_CASE("evaluation errors name the subexpression") {
    CHECK_THROWS_AS(eval(parse("1/x1", 1), point({0.0})), EvalError);
    CHECK_THROWS_AS(eval(parse("log(x1)", 1), point({-1.0})), EvalError);
    CHECK_THROWS_AS(eval(parse("sqrt(x1)", 1), point({-1.0})), EvalError);
    try {
      eval(parse("2 + log(x1 - 1)", 1), point({0.5}));
      FAIL("expected an evaluation error");
    } catch (const EvalError& e) {
      CHECK(e.subexpression().find("log") != std::string::npos);
    }
  }

  TEST_CASE("derivatives of the documented examples") {
    const Expr s = parse("sin(2*pi*x1)", 1);
    CHECK(eval(differentiate(s, 0), point({0.0})) == doctest::Approx(2.0 * reference::pi).epsilon(1e-15));
    CHECK(eval(differentiate(parse("x1", 2), 1), point({0.3, 0.4})) == 0.0);
    CHECK(differentiate(parse("x1", 2), 1).is_number());
    const Expr chain = differentiate(parse("exp(0.3*sin(2*pi*x1))", 1), 0);
    CHECK(std::abs(eval(chain, point({0.25}))) < 1e-14);
  }

  TEST_CASE("derivatives agree with central differences on random expressions") {
    std::mt19937_64 rng(20261016);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const double h = 1e-6;
    for (int k = 0; k < 100; ++k) {
      const std::string text = random_expression(rng, 4);
      CAPTURE(text);
      const Expr e = parse(text, 2);
      const Expr d[2] = {differentiate(e, 0), differentiate(e, 1)};
      for (int p = 0; p < 100; ++p) {
        const Vector x = point({u(rng), u(rng)});
        for (int i = 0; i < 2; ++i) {
          const double numeric = reference::central_difference(
              [&](double t) {
                Vector y = x;
                y[i] = t;
                return eval(e, y);
              },
              x[i], h);
          const double analytic = eval(d[i], x);
          CHECK(std::abs(analytic - numeric) < 1e-5 * (1.0 + std::abs(analytic)));
        }
      }
    }
  }

  TEST_CASE("print and parse round trip") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 100; ++k) {
      const Expr e = parse(random_expression(rng, 5), 2);
      const std::string printed = print(e);
      CAPTURE(printed);
      CHECK(parse(printed, 2) == e);
      CHECK(parse(print(differentiate(e, 0)), 2) == differentiate(e, 0));
    }
    CHECK(parse(print(parse("-2.5e-3 * x1", 1)), 1) == parse("-2.5e-3 * x1", 1));
  }

  TEST_CASE("variable count") {
    CHECK(variable_count(parse("1 + pi", 3)) == 0);
    CHECK(variable_count(parse("x1 * x3", 3)) == 3);
  }
}
