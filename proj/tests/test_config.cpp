#include <doctest.h>

#include <fstream>
#include <sstream>

#include "isoembed/config.hpp"
#include "isoembed/expr.hpp"

using namespace isoembed;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("minimal config gets defaults") {
    const RunConfig c = parse_config(R"({"n": 2, "metric": "identity", "oracle": "clifford"})");
    CHECK(c.n == 2);
    CHECK(c.metric.family == "identity");
    CHECK(c.oracle.name == "clifford");
    CHECK(c.split.fraction == 0.5);
    CHECK(c.spiral.r_in == 1.0);
    CHECK(c.spiral.r_out == 2.0);
    CHECK(c.spiral.k == 1.0);
    CHECK(c.verify.samples == 1000);
    CHECK(c.verify.seed == 0);
    CHECK(c.group.name == "torus-2");
  }

  TEST_CASE("oracle dimension mismatch names the field") {
    CHECK_THROWS_WITH(parse_config(R"({"n": 2, "oracle": {"name": "clifford", "n": 3}})"),
                      doctest::Contains("oracle.n"));
    CHECK_THROWS_WITH(parse_config(R"({"n": 2, "oracle": {"name": "clifford", "n": 3}})"),
                      doctest::Contains("does not match"));
  }

  TEST_CASE("invalid values are rejected with a path") {
    CHECK_THROWS_WITH(parse_config(R"({"n": 2, "metric": {"family": "revolution", "R": 1, "rho": 1}})"),
                      doctest::Contains("metric"));
    CHECK_THROWS_WITH(parse_config(R"({"n": 2, "colour": "red"})"), doctest::Contains("colour"));
    CHECK_THROWS_WITH(parse_config(R"({"n": 2, "spiral": {"k": 1, "speed": 2}})"), doctest::Contains("spiral.speed"));
    CHECK_THROWS_AS(parse_config(R"({"n": 7})"), ConfigError);
    CHECK_THROWS_AS(parse_config(R"({"n": "two"})"), ConfigError);
    CHECK_THROWS_AS(parse_config("{"), ConfigError);
    CHECK_THROWS_WITH(parse_config(R"({"n": 2, "spiral": {"k": 5}})"), doctest::Contains("speed budget"));
    CHECK_THROWS_AS(parse_config(R"({"n": 2, "verify": {"samples": 0}})"), ConfigError);
  }

  TEST_CASE("expression errors keep their positions") {
    try {
      parse_config(R"({"n": 2, "metric": {"family": "conformal", "exponent": "sin(x1 +"}})");
      FAIL("expected an error");
    } catch (const ConfigError& e) {
      CHECK(e.path() == "metric.exponent");
      CHECK(std::string(e.what()).find("at position") != std::string::npos);
    }
    CHECK_THROWS_WITH(parse_config(R"({"n": 2, "metric": {"family": "conformal", "exponent": "x3"}})"),
                      doctest::Contains("metric.exponent"));
  }

  TEST_CASE("round trip through the effective config") {
    for (const char* text :
         {R"({"n": 2, "metric": "identity", "oracle": "clifford"})",
          R"({"n": 1})",
          R"({"n": 3, "verify": {"seed": 42, "samples": 10}})",
          R"({"n": 2, "metric": {"family": "constant", "matrix": [[5, 2], [2, 5]]}})",
          R"cfg({"n": 2, "metric": {"family": "conformal", "exponent": "0.3*sin(2*pi*x1)"}})cfg",
          R"({"n": 2, "metric": {"family": "revolution", "R": 2, "rho": 1, "offset": 3},
              "oracle": {"name": "revolution", "R": 2, "rho": 1}, "spiral": {"k": 0.1}})",
          R"({"n": 2, "group": {"name": "custom", "generators": [{"A": [[1, 0], [0, -1]], "v": ["1/2", "0"]}]}})"}) {
      CAPTURE(text);
      const RunConfig c = parse_config(text);
      const RunConfig again = parse_config(to_json(c).dump());
      CHECK(again == c);
      CHECK(to_json(again).dump() == to_json(c).dump());
    }
  }

  TEST_CASE("shipped configs parse") {
    for (const char* name : {"default", "diagonal", "skew", "revolution", "conformal", "pg_klein", "pg_flat", "line", "cube"}) {
      CAPTURE(name);
      const std::string text = read_file(std::string(ISOEMBED_CONFIG_DIR) + "/" + name + ".json");
      REQUIRE_FALSE(text.empty());
      const RunConfig c = parse_config(text);
      CHECK_NOTHROW(build_metric(c));
      CHECK_NOTHROW(build_group(c));
    }
  }

  TEST_CASE("custom generators become exact group elements") {
    const RunConfig c = parse_config(
        R"({"n": 2, "group": {"name": "custom", "generators": [{"A": [[1, 0], [0, -1]], "v": ["1/2", "0"]}]}})");
    const SymmetryGroup g = build_group(c);
    REQUIRE(g.generators.size() >= 1);
    CHECK(g.generators[0] == SymmetryGroup::named("pg", 2).generators[0]);
    CHECK_THROWS_AS(
        parse_config(R"({"n": 2, "group": {"name": "custom", "generators": [{"A": [[1, 1], [0, 1]], "v": ["0", "0"]}]}})"),
        ConfigError);
  }
}
