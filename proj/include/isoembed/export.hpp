#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "isoembed/construct.hpp"
#include "isoembed/sampler.hpp"
#include "isoembed/spiral.hpp"

namespace isoembed {

std::string sha256_hex(std::string_view data);

// Header x1..xn,y1..yD; one sample per line, 17 significant digits.
std::string export_csv(const AmbientMap& map, const PointSampler& sampler);

// Columns s, x, y at `count` evenly spaced s in [-half_width, half_width].
std::string export_spiral_csv(const SpiralCurve& curve, double half_width, std::size_t count);

// Grid of resolution x resolution vertices over [-window, window]^2, the
// image projected to the three selected coordinates, quad faces between
// neighbours. Needs n = 2.
std::string export_obj(const AmbientMap& map, double window, int resolution,
                       const std::vector<int>& coordinates, std::string_view config_hash);

}  // namespace isoembed
