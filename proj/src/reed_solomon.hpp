#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gf256.hpp"

namespace fel {

// MDS outer code parameters over GF(2^field_bits).
struct OuterCodeSpec {
  int n_o = 0;
  int k_o = 0;
  int field_bits = 8;

  double rate() const { return static_cast<double>(k_o) / n_o; }
  void validate() const;  // 1 <= k_o < n_o <= 2^field_bits - 1
};

// Systematic Reed-Solomon code with errors-and-erasures decoding: succeeds
// whenever 2t + d <= n_o - k_o, reports failure otherwise (never silently
// corrupts: corrected words are re-checked against the syndrome and radius).
class ReedSolomon {
 public:
  explicit ReedSolomon(OuterCodeSpec spec);

  const OuterCodeSpec& spec() const { return spec_; }

  // message (k_o symbols) -> codeword (n_o symbols, message-first)
  std::vector<uint8_t> encode(const std::vector<uint8_t>& message) const;

  // received has n_o symbols; erasures lists distinct positions in [0, n_o).
  // Values at erased positions are ignored.
  std::optional<std::vector<uint8_t>> decode_errors_erasures(
      const std::vector<uint8_t>& received,
      const std::vector<int>& erasures) const;

 private:
  std::vector<uint8_t> syndromes(const std::vector<uint8_t>& word) const;

  OuterCodeSpec spec_;
  const GaloisField& f_;
  std::vector<uint8_t> gpoly_;  // generator polynomial, ascending degree
};

// GMD candidate erasure patterns: for j = 0..max_erasures, erase the j
// lowest-weight positions; ties in alpha break toward the lower index.
std::vector<std::vector<int>> gmd_erasure_patterns(
    const std::vector<double>& alpha, int max_erasures);

}  // namespace fel
