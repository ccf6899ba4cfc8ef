#include "haar/rng.hpp"

#include <cmath>

namespace haar {

namespace {

constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(mix64(mix64(seed + kGamma) ^ mix64(~stream_id))) {}

RandomStream::result_type RandomStream::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RandomStream::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double RandomStream::normal() { return normal_(*this); }

Complex RandomStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) * M_SQRT1_2;
}

std::uint64_t RandomStream::below(std::uint64_t n) {
  std::uniform_int_distribution<std::uint64_t> dist(0, n - 1);
  return dist(*this);
}

}  // namespace haar
