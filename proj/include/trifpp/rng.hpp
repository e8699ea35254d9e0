#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace trifpp {

using Rng = std::mt19937_64;

// Stream roles used when deriving per-object random streams.
enum class Role : std::uint64_t {
  Replica = 1,
  Column = 2,
  Slot = 3,
  Weight = 4,
  Spine = 5,
  Layer = 6,
  Hull = 7,
};

std::uint64_t mix64(std::uint64_t x);

// Hash of a master seed and a tuple of tags; stable across platforms.
std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::int64_t> tags);

inline Rng make_stream(std::uint64_t master, std::initializer_list<std::int64_t> tags) {
  return Rng(derive_seed(master, tags));
}

// Uniform in (0, 1), never returns 0.
inline double uniform_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double unit_from_bits(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace trifpp
