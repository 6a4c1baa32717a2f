#pragma once

#include <cstdint>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace inac::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based child seed: depends only on (seed, index).
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

enum class Stream : std::uint64_t { Symbols = 0x53594d42, Noise = 0x4e4f4953, Phase = 0x50484153 };

constexpr std::uint64_t substream(std::uint64_t seed, Stream s) {
  return derive(seed, static_cast<std::uint64_t>(s));
}

using Engine = std::mt19937_64;

/// Fair +-1 draws, 64 per engine call.
class SignSource {
 public:
  explicit SignSource(Engine& eng) : eng_(eng) {}

  int operator()() {
    if (left_ == 0) {
      bits_ = eng_();
      left_ = 64;
    }
    const int s = (bits_ & 1U) ? -1 : 1;
    bits_ >>= 1;
    --left_;
    return s;
  }

 private:
  Engine& eng_;
  std::uint64_t bits_ = 0;
  int left_ = 0;
};

/// Ziggurat normal from boost; identical output on every platform.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : eng_(seed) {}
  double operator()() { return dist_(eng_); }
  Engine& engine() { return eng_; }

 private:
  Engine eng_;
  boost::random::normal_distribution<double> dist_;
};

}  // namespace inac::rng
