#pragma once

#include <string>
#include <vector>

#include "fountain.hpp"

namespace fel {

struct PeEstimate {
  int64_t n = 0;
  int64_t failures = 0;
  int64_t trials = 0;
  double p_hat = 0;
  double ci_low = 0;   // 95% Wilson interval
  double ci_high = 0;
};

PeEstimate wilson_estimate(int64_t n, int64_t failures, int64_t trials);

struct ExperimentManifest {
  ConcatConfig config;
  ScheduleSpec schedule;
  std::vector<int64_t> n_values;  // strictly increasing received-symbol counts
  int64_t trials_per_point = 0;   // >= 100
  uint64_t master_seed = 0;
  int threads = 0;  // 0: FEL_THREADS env or hardware concurrency

  void validate() const;
};

// Monte Carlo Pe-versus-N sweep. Trials run concurrently with per-trial seed
// streams; aggregation is count-based, so results are identical for any
// thread count.
std::vector<PeEstimate> run_sweep(const ExperimentManifest& manifest);

struct SlopeFit {
  double slope = 0;    // of -log p_hat versus N
  double std_err = 0;
  int points_used = 0;
  std::vector<int64_t> censored;  // N values with p_hat = 0, excluded
};

// Least-squares slope over points with >= 5 failures; requires >= 3 usable
// points, refuses p_hat = 0 (censored).
SlopeFit fit_exponent(const std::vector<PeEstimate>& estimates);

// Wilson-wrapped table for the plain random fountain code.
std::vector<PeEstimate> random_fountain_sweep(const Channel& ch,
                                              const InputDist& px, Nats rate,
                                              int n_messages, uint64_t seed,
                                              int64_t trials,
                                              std::vector<int64_t> n_values = {});

// header "n,trials,failures,p_hat,ci_low,ci_high"
std::string sweep_csv(const std::vector<PeEstimate>& estimates);

// JSON manifest capturing everything needed for an exact rerun.
std::string manifest_json(const ExperimentManifest& manifest);

// pooled two-proportion z statistic
double two_proportion_z(int64_t f1, int64_t n1, int64_t f2, int64_t n2);

int resolve_thread_count(int requested);

}  // namespace fel
