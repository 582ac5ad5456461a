#pragma once

#include <cstdint>
#include <random>

namespace lac {

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t z);

/// Deterministic per-agent random stream. Uniform draws are computed from the
/// raw 64-bit output so they are identical across standard libraries.
class RandomStream {
 public:
  RandomStream() = default;
  RandomStream(std::uint64_t seed, std::uint64_t stream);

  /// Uniform in [0, 1).
  double uniform01();
  std::uint64_t next() { return engine_(); }

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  std::mt19937_64 engine_;
};

}  // namespace lac
