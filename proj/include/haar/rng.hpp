#pragma once

#include <cstdint>
#include <random>

#include "haar/linalg.hpp"

namespace haar {

// Counter-based generator: the n-th output of stream (seed, stream_id) is a fixed
// hash of (seed, stream_id, n), so substreams never share state and a stream can
// be reconstructed anywhere from its two keys.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  double uniform();                        // [0, 1)
  double normal();                         // N(0, 1)
  Complex complex_normal();                // real and imaginary parts N(0, 1/2)
  std::uint64_t below(std::uint64_t n);    // uniform on [0, n)

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace haar
