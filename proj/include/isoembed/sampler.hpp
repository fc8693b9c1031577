#pragma once

#include <cstddef>
#include <cstdint>

#include "isoembed/common.hpp"

namespace isoembed {

// splitmix64 stream. Cheap to start, which matters because every sample gets
// its own stream.
class SampleStream {
 public:
  using result_type = std::uint64_t;
  explicit SampleStream(std::uint64_t state) : state_(state) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

 private:
  std::uint64_t state_;
};

// Per-index generator: the stream for sample i depends only on (seed, i), so
// samples can be produced in any order or in parallel with identical results.
SampleStream sample_engine(std::uint64_t seed, std::uint64_t index);

// Uniform double in [0, 1) from one engine draw (53 random bits).
double unit_draw(SampleStream& engine);

// Stratified uniform points in the box [lo, hi]^n. The first coordinate of
// sample i is drawn from the i-th of `count` equal slabs, the others
// uniformly from the whole interval.
class PointSampler {
 public:
  PointSampler(int dimension, double lo, double hi, std::uint64_t seed, std::size_t count);

  // Symmetric window [-half_width, half_width]^n.
  static PointSampler window(int dimension, double half_width, std::uint64_t seed,
                             std::size_t count) {
    return {dimension, -half_width, half_width, seed, count};
  }

  Vector point(std::size_t i) const;
  std::size_t size() const { return count_; }
  int dimension() const { return dimension_; }
  std::uint64_t seed() const { return seed_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  int dimension_;
  double lo_;
  double hi_;
  std::uint64_t seed_;
  std::size_t count_;
};

// Nonzero integer vectors with max-norm at most `radius`, one per index.
class LatticeSampler {
 public:
  LatticeSampler(int dimension, int radius, std::uint64_t seed, std::size_t count);

  Eigen::VectorXi shift(std::size_t i) const;
  std::size_t size() const { return count_; }

 private:
  int dimension_;
  int radius_;
  std::uint64_t seed_;
  std::size_t count_;
};

}  // namespace isoembed
