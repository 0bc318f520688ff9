#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace cnsga {

// Seeded generator shared by every stochastic operator. All draws go through
// this type so a run is reproducible from its seed alone.
class Rng {
 public:
  using engine_type = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform double in [0, 1) built from the top 53 bits of one engine draw.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive.
  std::size_t below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  bool coin() { return (engine_() >> 63) != 0; }

  engine_type& engine() { return engine_; }

 private:
  engine_type engine_;
};

}  // namespace cnsga
