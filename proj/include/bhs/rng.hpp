// Seedable, splittable random stream. No global RNG state anywhere in the
// library; every sampler takes an explicit RandomStream.
#pragma once

#include <cstdint>
#include <random>

namespace bhs {

namespace detail {

// splitmix64 finalizer; used to decorrelate seeds of split streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed)
      : seed_(seed), gen_(detail::mix64(seed)) {}

  // Derived stream, independent of this stream's consumption state.
  RandomStream split(std::uint64_t stream_id) const {
    return RandomStream(detail::mix64(seed_ ^ detail::mix64(stream_id + 1)));
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(gen_);
  }

  double normal() {
    // fresh distribution object each call: no hidden cache, so copies of a
    // stream reproduce draws exactly
    return std::normal_distribution<double>(0.0, 1.0)(gen_);
  }

  // shape-scale parametrization, mean = shape*scale
  double gamma(double shape, double scale) {
    return std::gamma_distribution<double>(shape, scale)(gen_);
  }

  double exponential(double mean = 1.0) {
    return -mean * std::log1p(-uniform());
  }

  std::uint64_t seed() const { return seed_; }

  bool operator==(const RandomStream& other) const {
    return gen_ == other.gen_ && seed_ == other.seed_;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace bhs
