#pragma once

#include <cstdint>

namespace fel::detail {

// splitmix64 finalizer; full-avalanche 64-bit mixer
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// counter-based keyed stream: chain the mixer over the inputs.
// Deterministic and O(1) random access, which is what lets encoder and
// decoder reconstruct identical infinite codebooks from a shared seed.
inline uint64_t keyed(uint64_t seed, uint64_t domain) {
  return mix64(seed ^ mix64(domain));
}

inline uint64_t keyed(uint64_t seed, uint64_t domain, uint64_t a) {
  return mix64(keyed(seed, domain) + a);
}

inline uint64_t keyed(uint64_t seed, uint64_t domain, uint64_t a, uint64_t b) {
  return mix64(keyed(seed, domain, a) + b);
}

inline uint64_t keyed(uint64_t seed, uint64_t domain, uint64_t a, uint64_t b,
                      uint64_t c) {
  return mix64(keyed(seed, domain, a, b) + c);
}

// uniform double in [0,1) from the top 53 bits
inline double to_unit(uint64_t r) {
  return static_cast<double>(r >> 11) * 0x1.0p-53;
}

// unbiased-enough integer in [0, n): fixed-point multiply (bias < 2^-64)
inline uint64_t bounded(uint64_t r, uint64_t n) {
  return static_cast<uint64_t>((static_cast<__uint128_t>(r) * n) >> 64);
}

}  // namespace fel::detail
