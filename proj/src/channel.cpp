#include "channel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace fel {

namespace {

constexpr double kDistTol = 1e-12;

bool rows_and_columns_permuted(int in, int out, const std::vector<double>& p) {
  std::vector<double> first_row(p.begin(), p.begin() + out);
  std::sort(first_row.begin(), first_row.end());
  std::vector<double> row(out);
  for (int x = 1; x < in; ++x) {
    std::copy(p.begin() + static_cast<size_t>(x) * out,
              p.begin() + static_cast<size_t>(x + 1) * out, row.begin());
    std::sort(row.begin(), row.end());
    if (row != first_row) return false;
  }
  std::vector<double> first_col(in), col(in);
  for (int x = 0; x < in; ++x) first_col[x] = p[static_cast<size_t>(x) * out];
  std::sort(first_col.begin(), first_col.end());
  for (int y = 1; y < out; ++y) {
    for (int x = 0; x < in; ++x) col[x] = p[static_cast<size_t>(x) * out + y];
    std::sort(col.begin(), col.end());
    if (col != first_col) return false;
  }
  return true;
}

}  // namespace

InputDist InputDist::uniform(int n) {
  return InputDist{std::vector<double>(n, 1.0 / n)};
}

void InputDist::validate(int expected_size) const {
  if (static_cast<int>(probs.size()) != expected_size)
    throw std::invalid_argument("input distribution size mismatch");
  double sum = 0;
  for (double v : probs) {
    if (!(v >= 0.0)) throw std::invalid_argument("input distribution entry < 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kDistTol)
    throw std::invalid_argument("input distribution does not sum to 1");
}

Channel::Channel(int input_size, int output_size, std::vector<double> transition)
    : in_(input_size), out_(output_size), p_(std::move(transition)) {
  if (in_ < 2 || out_ < 2)
    throw std::invalid_argument("channel alphabets must have size >= 2");
  if (p_.size() != static_cast<size_t>(in_) * out_)
    throw std::invalid_argument("transition matrix size mismatch");
  for (int x = 0; x < in_; ++x) {
    double sum = 0;
    for (int y = 0; y < out_; ++y) {
      double v = p(x, y);
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("transition entry outside [0, 1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kDistTol)
      throw std::invalid_argument("transition row does not sum to 1");
  }
  symmetric_ = rows_and_columns_permuted(in_, out_, p_);
}

Channel Channel::bsc(double crossover) {
  if (!(crossover >= 0.0 && crossover <= 0.5))
    throw std::invalid_argument("BSC crossover must be in [0, 1/2]");
  return Channel(2, 2,
                 {1.0 - crossover, crossover, crossover, 1.0 - crossover});
}

std::pair<Channel, std::optional<InputDist>> load_channel_json(
    const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("channel JSON parse error: ") +
                                e.what());
  }
  if (!doc.contains("transition") || !doc["transition"].is_array())
    throw std::invalid_argument("channel JSON missing \"transition\" matrix");
  const auto& rows = doc["transition"];
  int in = static_cast<int>(rows.size());
  if (in < 2) throw std::invalid_argument("transition needs >= 2 rows");
  int out = static_cast<int>(rows[0].size());
  std::vector<double> p;
  p.reserve(static_cast<size_t>(in) * out);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != out)
      throw std::invalid_argument("transition rows have unequal lengths");
    for (const auto& v : row) p.push_back(v.get<double>());
  }
  Channel ch(in, out, std::move(p));
  std::optional<InputDist> px;
  if (doc.contains("input_dist")) {
    InputDist d{doc["input_dist"].get<std::vector<double>>()};
    d.validate(in);
    px = std::move(d);
  }
  return {std::move(ch), std::move(px)};
}

namespace {

// rho > -1 accepted here; the public entry point restricts to [0, 1]
Nats e0_raw(const Channel& ch, const InputDist& px, double rho) {
  const double a = 1.0 / (1.0 + rho);
  double sum = 0;
  for (int y = 0; y < ch.output_size(); ++y) {
    double inner = 0;
    for (int x = 0; x < ch.input_size(); ++x) {
      double v = ch.p(x, y);
      if (v > 0) inner += px.probs[x] * std::pow(v, a);
    }
    sum += std::pow(inner, 1.0 + rho);
  }
  return -std::log(sum);
}

}  // namespace

Nats gallager_e0(const Channel& ch, const InputDist& px, double rho) {
  if (!(rho >= 0.0 && rho <= 1.0))
    throw std::invalid_argument("rho must be in [0, 1]");
  px.validate(ch.input_size());
  return e0_raw(ch, px, rho);
}

Nats mutual_information(const Channel& ch, const InputDist& px) {
  px.validate(ch.input_size());
  std::vector<double> q(ch.output_size(), 0.0);
  for (int x = 0; x < ch.input_size(); ++x)
    for (int y = 0; y < ch.output_size(); ++y)
      q[y] += px.probs[x] * ch.p(x, y);
  double info = 0;
  for (int x = 0; x < ch.input_size(); ++x) {
    if (px.probs[x] == 0) continue;
    for (int y = 0; y < ch.output_size(); ++y) {
      double v = ch.p(x, y);
      if (v > 0) info += px.probs[x] * v * std::log(v / q[y]);
    }
  }
  return std::max(info, 0.0);
}

CapacityResult capacity(const Channel& ch, double tol) {
  if (!(tol > 0)) throw std::invalid_argument("capacity tolerance must be > 0");
  if (ch.symmetric()) {
    InputDist u = InputDist::uniform(ch.input_size());
    return {mutual_information(ch, u), std::move(u), 0, 0.0};
  }
  const int n = ch.input_size(), m = ch.output_size();
  std::vector<double> r(n, 1.0 / n), q(m), d(n);
  constexpr int kMaxIter = 200000;
  double gap = std::numeric_limits<double>::infinity();
  for (int it = 1; it <= kMaxIter; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < m; ++y) q[y] += r[x] * ch.p(x, y);
    // d[x] = D(p(.|x) || q); capacity bounds close around the iterate
    double lower = 0, upper = -std::numeric_limits<double>::infinity();
    for (int x = 0; x < n; ++x) {
      double kl = 0;
      for (int y = 0; y < m; ++y) {
        double v = ch.p(x, y);
        if (v > 0) kl += v * std::log(v / q[y]);
      }
      d[x] = kl;
      lower += r[x] * kl;
      upper = std::max(upper, kl);
    }
    gap = upper - lower;
    if (gap <= tol) {
      InputDist px{r};
      return {std::max(lower, 0.0), std::move(px), it, gap};
    }
    double norm = 0;
    for (int x = 0; x < n; ++x) {
      r[x] *= std::exp(d[x]);
      norm += r[x];
    }
    for (int x = 0; x < n; ++x) r[x] /= norm;
  }
  throw ConvergenceError("capacity iteration did not converge", gap);
}

Nats e0_slope_at_zero(const Channel& ch, const InputDist& px, double h) {
  if (!(h > 0 && h <= 1e-3))
    throw std::invalid_argument("finite-difference step must be in (0, 1e-3]");
  px.validate(ch.input_size());
  return (e0_raw(ch, px, h) - e0_raw(ch, px, -h)) / (2 * h);
}

}  // namespace fel
