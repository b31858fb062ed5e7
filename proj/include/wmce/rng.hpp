#pragma once

#include <cstdint>
#include <random>

namespace wmce {

enum class StreamPurpose : std::uint64_t { Path = 0, InitialCondition = 1, Auxiliary = 2 };

/// Derives an independent generator for every (replication, coordinate, purpose)
/// triple from one master seed. Identical inputs give bit-identical streams.
class RngPolicy {
 public:
  using Engine = std::mt19937_64;

  explicit RngPolicy(std::uint64_t master_seed) noexcept : master_seed_(master_seed) {}

  std::uint64_t master_seed() const noexcept { return master_seed_; }

  Engine stream(std::uint64_t replication, std::uint64_t coordinate,
                StreamPurpose purpose = StreamPurpose::Path) const noexcept;

  /// The 64-bit seed that `stream` feeds to the engine.
  std::uint64_t derive_seed(std::uint64_t replication, std::uint64_t coordinate,
                            StreamPurpose purpose) const noexcept;

 private:
  std::uint64_t master_seed_;
};

}  // namespace wmce
