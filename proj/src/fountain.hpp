#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "channel.hpp"
#include "reed_solomon.hpp"

namespace fel {

// Shared codebook library index: one 64-bit seed reproduces the switch
// sequence, every inner codebook, and (with a trial seed) the noise stream,
// so encoder and decoder stay in exact agreement.
struct CodebookSeed {
  uint64_t master = 0;
};

// One-level concatenated fountain code, optionally stacking `levels` outer
// codewords into macro symbols for rate-compatible operation (the trailing
// `known_levels` are side information at the decoder).
struct ConcatConfig {
  OuterCodeSpec outer;
  int n_i = 0;  // expected received symbols per inner code at the nominal N
  Channel channel;
  InputDist px;
  CodebookSeed seed;
  double weight_scale = 0;  // <= 0 selects E_z(1) at the operating point
  double z_cap = 2.0;       // per-code retention cap, in units of n_i
  int levels = 1;
  int known_levels = 0;

  int macro_bits() const { return levels * outer.field_bits; }
  int unknown_levels() const { return levels - known_levels; }
  // nats per received channel symbol at the nominal N = n_o * n_i
  Nats fountain_rate() const;
  // inner-code rate: log(macro message count) / n_i
  Nats inner_rate() const;
  void validate() const;
};

double resolved_weight_scale(const ConcatConfig& cfg);

enum class ScheduleKind { Prefix, IidThinning, PerCodeStarve };

struct ScheduleSpec {
  ScheduleKind kind = ScheduleKind::Prefix;
  double param = 0;  // keep probability / starved fraction
};

// Concrete receive schedule: strictly increasing 0-based stream slots.
struct Schedule {
  std::vector<int64_t> indices;
};

Schedule build_schedule(const ConcatConfig& cfg, const ScheduleSpec& spec,
                        int64_t n_receive, uint64_t sched_seed);

// j-th channel input symbol of inner code k for a macro message value.
// Deterministic in (seed, k, message, j); marginally distributed as px.
int inner_symbol(const ConcatConfig& cfg, int k, uint32_t message, int64_t j);

// Random-switch selection of the inner code transmitting at stream slot l.
int switch_index(const ConcatConfig& cfg, int64_t l);

struct StreamSymbol {
  int code;  // inner code index
  int x;     // channel input symbol
};

// First `length` transmitted symbols for a macro outer codeword.
std::vector<StreamSymbol> transmit_stream(const ConcatConfig& cfg,
                                          const std::vector<uint32_t>& codeword,
                                          int64_t length);

struct ReceivedSymbol {
  int64_t j;  // position within the inner code's symbol stream
  int y;      // channel output symbol
};

// Pass scheduled symbols through the memoryless channel and group them per
// inner code; retention beyond z_cap * n_i_eff symbols per code is dropped.
std::vector<std::vector<ReceivedSymbol>> apply_schedule(
    const ConcatConfig& cfg, const std::vector<StreamSymbol>& stream,
    const Schedule& schedule, double n_i_eff, uint64_t noise_seed);

struct InnerDecision {
  uint32_t xi_hat = 0;
  double alpha = 0;  // reliability weight in [0, 1]
  double z = 0;      // normalized effective codeword length
  double loglik_best = 0;
  double loglik_second = 0;
};

// Exhaustive ML over the candidate macro messages (all of them when
// `candidates` is null). Ties break toward the lower message value.
InnerDecision inner_ml_decode(const ConcatConfig& cfg, int k,
                              const std::vector<ReceivedSymbol>& received,
                              double n_i_eff,
                              const std::vector<uint32_t>* candidates = nullptr);

// level-th outer symbol inside a macro value
uint8_t level_symbol(const ConcatConfig& cfg, uint32_t macro, int level);

// GMD decoding of one outer codeword: walks the erasure patterns from the
// reliability weights, accepts the first candidate codeword c satisfying
// sum_k alpha_k mu_k > r_o n_o with mu_k = +-1 on agreement with xi_hat.
std::optional<std::vector<uint8_t>> gmd_decode(
    const ConcatConfig& cfg, const std::vector<InnerDecision>& decisions,
    int level = 0);

struct TrialOutcome {
  bool success = false;
  std::vector<double> z;
  std::vector<double> alpha;
  int wrong_inner = 0;  // inner decisions disagreeing with the true codeword
};

// Full pipeline for one Monte Carlo trial: draw messages, encode, transmit,
// schedule, inner-decode (with rate-compatible strike-out when levels are
// known), GMD-decode every unknown level. All randomness derives from
// (cfg.seed, trial_seed).
TrialOutcome run_concat_trial(const ConcatConfig& cfg, const ScheduleSpec& sched,
                              int64_t n_receive, uint64_t trial_seed);

// Deterministic digest of a slice of the codebook library; encoder/decoder
// instances built from the same seed must agree.
uint64_t codebook_digest(const ConcatConfig& cfg, int codes, int messages,
                         int symbols);

struct PeRow {
  int64_t n = 0;
  int64_t failures = 0;
  int64_t trials = 0;
};

// Plain (non-concatenated) random fountain code with ML decoding over the
// received prefix; W <= 64 messages. n_values empty selects
// {N0, 2 N0, 4 N0} with N0 = ceil(log(W) / rate).
std::vector<PeRow> random_fountain_sim(const Channel& ch, const InputDist& px,
                                       Nats rate, int n_messages, uint64_t seed,
                                       int64_t trials,
                                       std::vector<int64_t> n_values = {});

}  // namespace fel
