#include "isoembed/export.hpp"

#include <openssl/evp.h>

#include <fmt/format.h>

namespace isoembed {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  std::string out;
  for (unsigned int i = 0; i < length; ++i) out += fmt::format("{:02x}", digest[i]);
  return out;
}

namespace {

void append_row(std::string& out, const Vector& a, const Vector& b) {
  bool first = true;
  for (const Vector* v : {&a, &b})
    for (Eigen::Index i = 0; i < v->size(); ++i) {
      if (!first) out += ',';
      out += fmt::format("{:.17g}", (*v)[i]);
      first = false;
    }
  out += '\n';
}

}  // namespace

std::string export_csv(const AmbientMap& map, const PointSampler& sampler) {
  std::string out;
  for (int i = 0; i < map.domain_dimension(); ++i) out += fmt::format("{}x{}", i ? "," : "", i + 1);
  for (int i = 0; i < map.ambient_dimension(); ++i) out += fmt::format(",y{}", i + 1);
  out += '\n';
  for (std::size_t i = 0; i < sampler.size(); ++i) {
    const Vector x = sampler.point(i);
    append_row(out, x, map(x));
  }
  return out;
}

std::string export_spiral_csv(const SpiralCurve& curve, double half_width, std::size_t count) {
  if (count < 2) throw Error("spiral export needs at least two samples");
  std::string out = "s,x,y\n";
  for (std::size_t i = 0; i < count; ++i) {
    const double s = -half_width + 2.0 * half_width * static_cast<double>(i) / static_cast<double>(count - 1);
    const Eigen::Vector2d p = curve.point(s);
    out += fmt::format("{:.17g},{:.17g},{:.17g}\n", s, p[0], p[1]);
  }
  return out;
}

std::string export_obj(const AmbientMap& map, double window, int resolution,
                       const std::vector<int>& coordinates, std::string_view config_hash) {
  if (map.domain_dimension() != 2) throw Error("OBJ export needs a two-dimensional domain");
  if (resolution < 2) throw Error("OBJ export needs resolution >= 2");
  if (coordinates.size() != 3) throw Error("OBJ export needs three coordinates");
  for (int c : coordinates)
    if (c < 0 || c >= map.ambient_dimension())
      throw Error(fmt::format("coordinate {} out of range for ambient dimension {}", c,
                              map.ambient_dimension()));

  std::string out;
  out += fmt::format("# isoembed {} map, window {:.17g}, {}x{} grid\n", to_string(map.tag()), window,
                     resolution, resolution);
  out += fmt::format("# config sha256 {}\n", config_hash);
  out += fmt::format("# coordinates {} {} {} of {}\n", coordinates[0], coordinates[1], coordinates[2],
                     map.ambient_dimension());
  const double step = 2.0 * window / (resolution - 1);
  for (int i = 0; i < resolution; ++i)
    for (int j = 0; j < resolution; ++j) {
      const Vector y = map(Eigen::Vector2d(-window + i * step, -window + j * step));
      out += fmt::format("v {:.17g} {:.17g} {:.17g}\n", y[coordinates[0]], y[coordinates[1]],
                         y[coordinates[2]]);
    }
  for (int i = 0; i + 1 < resolution; ++i)
    for (int j = 0; j + 1 < resolution; ++j) {
      const int a = i * resolution + j + 1;
      out += fmt::format("f {} {} {} {}\n", a, a + resolution, a + resolution + 1, a + 1);
    }
  return out;
}

}  // namespace isoembed
