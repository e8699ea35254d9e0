#include "trifpp/rng.hpp"

namespace trifpp {

std::uint64_t mix64(std::uint64_t x) {
  // splitmix64 finalizer
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::int64_t> tags) {
  std::uint64_t h = mix64(master);
  for (std::int64_t t : tags) h = mix64(h ^ static_cast<std::uint64_t>(t));
  return h;
}

}  // namespace trifpp
