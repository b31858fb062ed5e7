#include "wmce/rng.hpp"

namespace wmce {

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t RngPolicy::derive_seed(std::uint64_t replication, std::uint64_t coordinate,
                                     StreamPurpose purpose) const noexcept {
  std::uint64_t h = mix(master_seed_);
  h = mix(h ^ replication);
  h = mix(h ^ (coordinate * 0xd1342543de82ef95ULL));
  h = mix(h ^ static_cast<std::uint64_t>(purpose));
  return h;
}

RngPolicy::Engine RngPolicy::stream(std::uint64_t replication, std::uint64_t coordinate,
                                    StreamPurpose purpose) const noexcept {
  return Engine(derive_seed(replication, coordinate, purpose));
}

}  // namespace wmce
