#pragma once

// Seed derivation. Every random stream in the library is derived from one
// user seed plus a label (component name) and/or an index (replicate, draw),
// so streams are disjoint and independent of evaluation order.

#include <cstdint>
#include <random>
#include <string_view>

namespace randinf::rng {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a
constexpr std::uint64_t label_hash(std::string_view label) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr std::uint64_t derive(std::uint64_t seed, std::string_view label) noexcept {
  return splitmix64(seed ^ label_hash(label));
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) + index);
}

inline Engine engine(std::uint64_t seed) { return Engine(seed); }

}  // namespace randinf::rng
