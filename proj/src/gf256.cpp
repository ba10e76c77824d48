#include "gf256.hpp"

#include <array>
#include <mutex>
#include <stdexcept>

namespace fel {

namespace {

// primitive polynomials, index = m; m=8 is the AES polynomial
constexpr std::array<uint32_t, 9> kPoly = {0,    0,    0x7,  0xB, 0x13,
                                           0x25, 0x43, 0x89, 0x11B};

uint8_t poly_mul(uint32_t a, uint32_t b, uint32_t poly, int bits) {
  uint32_t r = 0;
  uint32_t hi = 1u << bits;
  while (b) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
    if (a & hi) a ^= poly;
  }
  return static_cast<uint8_t>(r);
}

// smallest element of full multiplicative order (0x03 for the AES field)
uint8_t find_generator(uint32_t poly, int bits) {
  const int order = (1 << bits) - 1;
  for (int g = 2; g < (1 << bits); ++g) {
    int n = 0;
    uint8_t v = 1;
    do {
      v = poly_mul(v, static_cast<uint32_t>(g), poly, bits);
      ++n;
    } while (v != 1 && n <= order);
    if (n == order) return static_cast<uint8_t>(g);
  }
  throw std::logic_error("no generator found");  // unreachable for primitive poly
}

}  // namespace

GaloisField::GaloisField(int bits) : bits_(bits), q_(1 << bits) {
  if (bits < 2 || bits > 8)
    throw std::invalid_argument("field bits must be in [2, 8]");
  poly_ = kPoly[bits];
  uint8_t g = find_generator(poly_, bits);
  exp_.assign(2 * (q_ - 1), 0);
  log_.assign(q_, -1);
  uint8_t v = 1;
  for (int i = 0; i < q_ - 1; ++i) {
    exp_[i] = v;
    exp_[i + q_ - 1] = v;
    log_[v] = i;
    v = poly_mul(v, g, poly_, bits);
  }
}

uint8_t GaloisField::div(uint8_t a, uint8_t b) const {
  if (b == 0) throw std::invalid_argument("division by zero field element");
  if (a == 0) return 0;
  int e = log_[a] - log_[b];
  if (e < 0) e += order();
  return exp_[e];
}

uint8_t GaloisField::inv(uint8_t a) const {
  if (a == 0) throw std::invalid_argument("zero field element has no inverse");
  return exp_[order() - log_[a]];  // doubled exp table absorbs the wrap
}

int GaloisField::log(uint8_t a) const {
  if (a == 0) throw std::invalid_argument("log of zero field element");
  return log_[a];
}

const GaloisField& gf(int bits) {
  static std::array<const GaloisField*, 9> cache{};
  static std::mutex mu;
  if (bits < 2 || bits > 8)
    throw std::invalid_argument("field bits must be in [2, 8]");
  std::lock_guard<std::mutex> lock(mu);
  if (!cache[bits]) cache[bits] = new GaloisField(bits);
  return *cache[bits];
}

}  // namespace fel
