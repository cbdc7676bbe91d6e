#pragma once

#include <array>
#include <cstdint>

namespace suotbary {

/// xoshiro256** seeded through splitmix64. Normal deviates use Box-Muller on
/// top of the generator's own uniforms, so a seed reproduces the same stream
/// bit-for-bit on every platform and standard library.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed);

  std::uint64_t next();
  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace suotbary
