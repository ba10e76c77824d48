#include "reed_solomon.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace fel {

namespace {

// polynomial helpers; coefficients ascending by degree
int poly_degree(const std::vector<uint8_t>& p) {
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p[i]) return i;
  return -1;
}

uint8_t poly_eval(const GaloisField& f, const std::vector<uint8_t>& p,
                  uint8_t x) {
  uint8_t acc = 0;
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    acc = f.add(f.mul(acc, x), p[i]);
  return acc;
}

}  // namespace

void OuterCodeSpec::validate() const {
  if (field_bits < 2 || field_bits > 8)
    throw std::invalid_argument("field_bits must be in [2, 8]");
  if (k_o < 1 || k_o >= n_o || n_o > (1 << field_bits) - 1)
    throw std::invalid_argument("need 1 <= k_o < n_o <= 2^field_bits - 1");
}

ReedSolomon::ReedSolomon(OuterCodeSpec spec) : spec_(spec), f_(gf(spec.field_bits)) {
  spec_.validate();
  // g(x) = prod_{j=1..n-k} (x - alpha^j)
  const int parity = spec_.n_o - spec_.k_o;
  gpoly_.assign(1, 1);
  for (int j = 1; j <= parity; ++j) {
    std::vector<uint8_t> next(gpoly_.size() + 1, 0);
    uint8_t root = f_.alpha_pow(j);
    for (size_t i = 0; i < gpoly_.size(); ++i) {
      next[i + 1] ^= gpoly_[i];
      next[i] ^= f_.mul(gpoly_[i], root);
    }
    gpoly_ = std::move(next);
  }
}

std::vector<uint8_t> ReedSolomon::encode(const std::vector<uint8_t>& message) const {
  if (static_cast<int>(message.size()) != spec_.k_o)
    throw std::invalid_argument("message length mismatch");
  for (uint8_t s : message)
    if (s >= f_.size()) throw std::invalid_argument("symbol outside field");
  const int parity = spec_.n_o - spec_.k_o;
  // systematic: codeword poly = m(x) x^parity + (m(x) x^parity mod g)
  std::vector<uint8_t> rem(parity, 0);  // ascending degree
  for (int i = 0; i < spec_.k_o; ++i) {
    uint8_t feedback = f_.add(message[i], parity ? rem[parity - 1] : 0);
    for (int j = parity - 1; j > 0; --j)
      rem[j] = f_.add(rem[j - 1], f_.mul(feedback, gpoly_[j]));
    rem[0] = f_.mul(feedback, gpoly_[0]);
  }
  std::vector<uint8_t> cw(spec_.n_o);
  std::copy(message.begin(), message.end(), cw.begin());
  for (int t = 0; t < parity; ++t) cw[spec_.k_o + t] = rem[parity - 1 - t];
  return cw;
}

std::vector<uint8_t> ReedSolomon::syndromes(const std::vector<uint8_t>& word) const {
  const int parity = spec_.n_o - spec_.k_o;
  std::vector<uint8_t> s(parity, 0);
  for (int j = 0; j < parity; ++j) {
    // S_j = r(alpha^(j+1)), r(x) = sum_i word[i] x^(n-1-i)
    uint8_t x = f_.alpha_pow(j + 1);
    uint8_t acc = 0;
    for (int i = 0; i < spec_.n_o; ++i) acc = f_.add(f_.mul(acc, x), word[i]);
    s[j] = acc;
  }
  return s;
}

std::optional<std::vector<uint8_t>> ReedSolomon::decode_errors_erasures(
    const std::vector<uint8_t>& received, const std::vector<int>& erasures) const {
  if (static_cast<int>(received.size()) != spec_.n_o)
    throw std::invalid_argument("received length mismatch");
  for (uint8_t s : received)
    if (s >= f_.size()) throw std::invalid_argument("symbol outside field");
  const int n = spec_.n_o, k = spec_.k_o, parity = n - k;
  std::vector<bool> erased(n, false);
  for (int pos : erasures) {
    if (pos < 0 || pos >= n) throw std::invalid_argument("erasure out of range");
    if (erased[pos]) throw std::invalid_argument("duplicate erasure position");
    erased[pos] = true;
  }
  const int d = static_cast<int>(erasures.size());
  if (d > parity) return std::nullopt;

  std::vector<uint8_t> word = received;
  for (int pos : erasures) word[pos] = 0;

  std::vector<uint8_t> S = syndromes(word);
  bool all_zero = std::all_of(S.begin(), S.end(), [](uint8_t v) { return !v; });
  if (all_zero && d == 0)
    return std::vector<uint8_t>(word.begin(), word.begin() + k);

  // erasure locator psi(x) = prod (1 - X_e x), X_e = alpha^(n-1-pos)
  std::vector<uint8_t> lambda(parity + 1, 0);
  lambda[0] = 1;
  for (int pos : erasures) {
    uint8_t loc = f_.alpha_pow(n - 1 - pos);
    for (int i = poly_degree(lambda); i >= 0; --i) {
      lambda[i + 1] = f_.add(lambda[i + 1], f_.mul(lambda[i], loc));
    }
  }

  // Berlekamp-Massey seeded with the erasure locator
  std::vector<uint8_t> B = lambda;
  int el = d;
  for (int r = d + 1; r <= parity; ++r) {
    uint8_t delta = 0;
    for (int i = 0; i < r && i <= parity; ++i)
      delta = f_.add(delta, f_.mul(lambda[i], S[r - 1 - i]));
    if (delta == 0) {
      B.insert(B.begin(), 0);  // B <- x B
      B.resize(parity + 1);
      continue;
    }
    std::vector<uint8_t> T(parity + 1, 0);
    T[0] = lambda[0];
    for (int i = 0; i < parity; ++i)
      T[i + 1] = f_.add(lambda[i + 1], f_.mul(delta, B[i]));
    if (2 * el <= r + d - 1) {
      el = r + d - el;
      for (int i = 0; i <= parity; ++i) B[i] = f_.div(lambda[i], delta);
    } else {
      B.insert(B.begin(), 0);
      B.resize(parity + 1);
    }
    lambda = std::move(T);
  }

  int deg = poly_degree(lambda);
  if (deg < 0) return std::nullopt;
  if (deg != el || 2 * (deg - d) + d > parity) return std::nullopt;

  // Chien search over the n code positions
  std::vector<int> err_pos;
  for (int i = 0; i < n && static_cast<int>(err_pos.size()) <= deg; ++i) {
    uint8_t xinv = f_.alpha_pow(-(n - 1 - i));
    if (poly_eval(f_, lambda, xinv) == 0) err_pos.push_back(i);
  }
  if (static_cast<int>(err_pos.size()) != deg) return std::nullopt;

  // omega(x) = lambda(x) S(x) mod x^parity
  std::vector<uint8_t> omega(parity, 0);
  for (int i = 0; i <= deg && i < parity; ++i) {
    if (!lambda[i]) continue;
    for (int j = 0; i + j < parity && j < parity; ++j)
      omega[i + j] = f_.add(omega[i + j], f_.mul(lambda[i], S[j]));
  }
  // formal derivative of lambda
  std::vector<uint8_t> lprime;
  for (int i = 1; i <= deg; i += 2) {
    lprime.resize(i, 0);
    lprime[i - 1] = lambda[i];  // char-2: even-degree terms vanish
  }
  if (lprime.empty()) return std::nullopt;

  int t_errors = 0;
  for (int pos : err_pos) {
    uint8_t xinv = f_.alpha_pow(-(n - 1 - pos));
    uint8_t den = poly_eval(f_, lprime, xinv);
    if (den == 0) return std::nullopt;
    uint8_t mag = f_.div(poly_eval(f_, omega, xinv), den);
    word[pos] = f_.add(word[pos], mag);
    if (!erased[pos] && mag != 0) ++t_errors;
  }

  // no-silent-corruption gate: must be a codeword within the claimed radius
  std::vector<uint8_t> check = syndromes(word);
  if (!std::all_of(check.begin(), check.end(), [](uint8_t v) { return !v; }))
    return std::nullopt;
  if (2 * t_errors + d > parity) return std::nullopt;
  return std::vector<uint8_t>(word.begin(), word.begin() + k);
}

std::vector<std::vector<int>> gmd_erasure_patterns(
    const std::vector<double>& alpha, int max_erasures) {
  const int n = static_cast<int>(alpha.size());
  if (max_erasures < 0 || max_erasures > n)
    throw std::invalid_argument("max_erasures outside [0, n]");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (alpha[a] != alpha[b]) return alpha[a] < alpha[b];
    return a < b;
  });
  std::vector<std::vector<int>> patterns;
  patterns.reserve(max_erasures + 1);
  for (int j = 0; j <= max_erasures; ++j)
    patterns.emplace_back(order.begin(), order.begin() + j);
  return patterns;
}

}  // namespace fel
