#include <doctest.h>

#include <sstream>
#include <string>

#include "isoembed/export.hpp"

using namespace isoembed;

namespace {

int count_prefix(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  int count = 0;
  for (std::string line; std::getline(in, line);)
    if (line.rfind(prefix, 0) == 0) ++count;
  return count;
}

AmbientMap identity_F() {
  const MetricSplit split = split_metric(MetricField::identity(2));
  const VerifiedOracle oracle = certify_oracle(clifford_diagonal_oracle(Eigen::Vector2d(0.5, 0.5)), split.q1,
                                               PointSampler::window(2, 5.0, 0, 100));
  return build_F(split, oracle);
}

}  // namespace

TEST_SUITE("export") {
  TEST_CASE("sha256") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  }

  TEST_CASE("csv") {
    const AmbientMap f = identity_F();
    const std::string csv = export_csv(f, PointSampler::window(2, 2.0, 0, 10));
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "x1,x2,y1,y2,y3,y4,y5,y6");
    int rows = 0;
    for (std::string line; std::getline(in, line);) {
      ++rows;
      std::istringstream fields(line);
      std::string cell;
      int columns = 0;
      std::getline(fields, cell, ',');
      const double x1 = std::stod(cell);
      ++columns;
      while (std::getline(fields, cell, ',')) ++columns;
      CHECK(columns == 8);
      CHECK(x1 == PointSampler::window(2, 2.0, 0, 10).point(rows - 1)[0]);
    }
    CHECK(rows == 10);
    CHECK(csv == export_csv(f, PointSampler::window(2, 2.0, 0, 10)));
  }

  TEST_CASE("spiral csv") {
    const std::string csv = export_spiral_csv(SpiralCurve(), 10.0, 5);
    CHECK(csv.rfind("s,x,y\n", 0) == 0);
    CHECK(count_prefix(csv, "0,1.5,0") == 1);
  }

  TEST_CASE("obj") {
    const AmbientMap f = identity_F();
    const std::string obj = export_obj(f, 2.0, 128, {0, 1, 2}, "deadbeef");
    CHECK(count_prefix(obj, "v ") == 128 * 128);
    CHECK(count_prefix(obj, "f ") == 127 * 127);
    CHECK(obj.find("# config sha256 deadbeef") != std::string::npos);
    CHECK(obj == export_obj(f, 2.0, 128, {0, 1, 2}, "deadbeef"));
    CHECK_THROWS(export_obj(f, 2.0, 128, {0, 1, 9}, "x"));
  }
}
