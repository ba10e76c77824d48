#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace fel {

// All rates and exponents are in nats per received channel symbol.
using Nats = double;

// Input distribution over the channel input alphabet.
struct InputDist {
  std::vector<double> probs;

  static InputDist uniform(int n);
  // entries >= 0, sum within 1e-12 of 1, size must match the channel
  void validate(int expected_size) const;
};

// Discrete memoryless channel: row-stochastic transition matrix p(y|x),
// rows indexed by input symbol.
class Channel {
 public:
  Channel(int input_size, int output_size, std::vector<double> transition);

  static Channel bsc(double crossover);  // crossover in [0, 1/2]

  int input_size() const { return in_; }
  int output_size() const { return out_; }
  double p(int x, int y) const { return p_[static_cast<size_t>(x) * out_ + y]; }
  const std::vector<double>& transition() const { return p_; }

  // Conservative symmetry test (sorted rows identical and sorted columns
  // identical); uniform input is provably optimal for both capacity and the
  // Gallager function on such channels.
  bool symmetric() const { return symmetric_; }

 private:
  int in_, out_;
  std::vector<double> p_;
  bool symmetric_;
};

// {"transition": [[...],[...]], "input_dist": [...]} — input_dist optional
std::pair<Channel, std::optional<InputDist>> load_channel_json(
    const std::string& json_text);

// Gallager function E0(rho, px) = -log sum_y (sum_x px(x) p(y|x)^(1/(1+rho)))^(1+rho),
// rho in [0,1]. Zero channel entries follow the 0^a = 0 convention.
Nats gallager_e0(const Channel& ch, const InputDist& px, double rho);

// I(X;Y) in nats, with 0 log 0 = 0.
Nats mutual_information(const Channel& ch, const InputDist& px);

struct CapacityResult {
  Nats value;
  InputDist px;
  int iterations;
  double residual;
};

// Channel capacity via alternating maximization, with a uniform-input fast
// path for symmetric channels. Throws ConvergenceError if the upper/lower
// capacity bounds fail to close within the iteration cap.
CapacityResult capacity(const Channel& ch, double tol = 1e-10);

// Central-difference estimate of dE0/drho at rho = 0; h in (0, 1e-3].
Nats e0_slope_at_zero(const Channel& ch, const InputDist& px, double h = 1e-4);

}  // namespace fel
