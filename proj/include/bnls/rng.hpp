#pragma once

#include <cstdint>
#include <random>

namespace bnls {

// Seeded generator built on std::mt19937_64. Distributions are derived from the
// raw 64-bit output by hand so that streams are bitwise identical across
// standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed);

  // Independent stream for sample `index` of a run seeded with `master`.
  static Rng stream(std::uint64_t master, std::uint64_t index);

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller.
  double normal();
  std::uint64_t next() { return engine_(); }

private:
  explicit Rng(std::mt19937_64 engine) : engine_(engine) {}
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

} // namespace bnls
