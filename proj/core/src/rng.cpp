#include "aniso/rng.hpp"

namespace aniso {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Seed Seed::child(std::uint64_t purpose) const noexcept {
  return Seed{seed, splitmix64(stream ^ splitmix64(purpose + 1))};
}

Engine make_engine(const Seed& seed) {
  std::seed_seq seq{
      static_cast<std::uint32_t>(seed.seed), static_cast<std::uint32_t>(seed.seed >> 32),
      static_cast<std::uint32_t>(seed.stream), static_cast<std::uint32_t>(seed.stream >> 32)};
  return Engine(seq);
}

}  // namespace aniso
