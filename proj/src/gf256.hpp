#pragma once

#include <cstdint>
#include <vector>

namespace fel {

// GF(2^m) arithmetic via log/exp tables, 2 <= m <= 8. The primary field is
// GF(2^8) with the AES polynomial x^8+x^4+x^3+x+1; smaller fields exist for
// the codec's reduced-alphabet rate-compatible mode.
class GaloisField {
 public:
  explicit GaloisField(int bits = 8);

  int bits() const { return bits_; }
  int size() const { return q_; }        // 2^m
  int order() const { return q_ - 1; }   // multiplicative group order

  uint8_t add(uint8_t a, uint8_t b) const { return a ^ b; }
  uint8_t sub(uint8_t a, uint8_t b) const { return a ^ b; }

  uint8_t mul(uint8_t a, uint8_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[log_[a] + log_[b]];
  }

  uint8_t div(uint8_t a, uint8_t b) const;  // b == 0 rejected
  uint8_t inv(uint8_t a) const;             // a == 0 rejected

  // alpha^e for any integer e (alpha = table generator)
  uint8_t alpha_pow(int e) const {
    e %= order();
    if (e < 0) e += order();
    return exp_[e];
  }

  int log(uint8_t a) const;  // a == 0 rejected

 private:
  int bits_, q_;
  uint32_t poly_;
  std::vector<uint8_t> exp_;  // doubled to skip a mod in mul
  std::vector<int> log_;
};

// shared immutable instance per field size (tables built once)
const GaloisField& gf(int bits = 8);

}  // namespace fel
