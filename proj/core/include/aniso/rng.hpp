#pragma once

#include <cstdint>
#include <random>

namespace aniso {

/// Reproducibility key. A (seed, stream) pair always yields the same
/// generator state; distinct streams are statistically independent.
struct Seed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Deterministic sub-stream for a named purpose within one replication
  /// (e.g. 0 = locations, 1 = field values).
  Seed child(std::uint64_t purpose) const noexcept;

  friend bool operator==(const Seed&, const Seed&) = default;
};

using Engine = std::mt19937_64;

/// mt19937_64 initialised through std::seed_seq from all 128 bits of the
/// seed. Output is bit-identical for a given standard library.
Engine make_engine(const Seed& seed);

}  // namespace aniso
