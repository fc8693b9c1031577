#include "isoembed/sampler.hpp"

namespace isoembed {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

SampleStream::result_type SampleStream::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return mix(state_);
}

SampleStream sample_engine(std::uint64_t seed, std::uint64_t index) {
  return SampleStream(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^ index));
}

double unit_draw(SampleStream& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

PointSampler::PointSampler(int dimension, double lo, double hi, std::uint64_t seed,
                           std::size_t count)
    : dimension_(dimension), lo_(lo), hi_(hi), seed_(seed), count_(count) {
  if (dimension < 1) throw Error("sampler dimension must be positive");
  if (!(hi > lo)) throw Error("sampler window must have hi > lo");
}

Vector PointSampler::point(std::size_t i) const {
  auto engine = sample_engine(seed_, i);
  Vector x(dimension_);
  const double width = hi_ - lo_;
  const double slab = (static_cast<double>(i % count_) + unit_draw(engine)) /
                      static_cast<double>(count_);
  x[0] = lo_ + width * slab;
  for (int k = 1; k < dimension_; ++k) x[k] = lo_ + width * unit_draw(engine);
  return x;
}

LatticeSampler::LatticeSampler(int dimension, int radius, std::uint64_t seed, std::size_t count)
    : dimension_(dimension), radius_(radius), seed_(seed), count_(count) {
  if (radius < 1) throw Error("lattice shift radius must be at least 1");
}

Eigen::VectorXi LatticeSampler::shift(std::size_t i) const {
  // Separate stream from PointSampler with the same seed.
  auto engine = sample_engine(seed_ ^ 0x5bd1e995ULL, i);
  const auto span = static_cast<std::uint64_t>(2 * radius_ + 1);
  Eigen::VectorXi k(dimension_);
  do {
    for (int j = 0; j < dimension_; ++j)
      k[j] = static_cast<int>(engine() % span) - radius_;
  } while (k.cwiseAbs().maxCoeff() == 0);
  return k;
}

}  // namespace isoembed
