#include "fountain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "detail/mix.hpp"
#include "exponents.hpp"

namespace fel {

namespace {

using detail::bounded;
using detail::keyed;
using detail::mix64;
using detail::to_unit;

// PRF domains
constexpr uint64_t kDomSwitch = 0x5357495443480001ULL;
constexpr uint64_t kDomCode = 0x434f4445424b0002ULL;
constexpr uint64_t kDomNoise = 0x4e4f4953450003ULL;
constexpr uint64_t kDomSched = 0x53434845440004ULL;
constexpr uint64_t kDomMsg = 0x4d45535341470005ULL;
constexpr uint64_t kDomTrial = 0x545249414c0006ULL;

constexpr double kLogZero = -1e18;

// inverse-CDF sampler with 64-bit fixed-point cutoffs
class DistSampler {
 public:
  explicit DistSampler(const std::vector<double>& p) {
    cut_.resize(p.size());
    long double cum = 0;
    for (size_t i = 0; i < p.size(); ++i) {
      cum += p[i];
      long double scaled = cum * 18446744073709551616.0L;  // 2^64
      cut_[i] = scaled >= 18446744073709551615.0L
                    ? UINT64_MAX
                    : static_cast<uint64_t>(scaled);
    }
    cut_.back() = UINT64_MAX;
  }
  int operator()(uint64_t r) const {
    for (size_t i = 0; i < cut_.size(); ++i)
      if (r < cut_[i] || cut_[i] == UINT64_MAX) return static_cast<int>(i);
    return static_cast<int>(cut_.size()) - 1;
  }

 private:
  std::vector<uint64_t> cut_;
};

std::vector<double> log_transitions(const Channel& ch) {
  std::vector<double> lp(static_cast<size_t>(ch.input_size()) *
                         ch.output_size());
  for (int x = 0; x < ch.input_size(); ++x)
    for (int y = 0; y < ch.output_size(); ++y) {
      double v = ch.p(x, y);
      lp[static_cast<size_t>(x) * ch.output_size() + y] =
          v > 0 ? std::log(v) : kLogZero;
    }
  return lp;
}

int64_t retention_cap(const ConcatConfig& cfg, double n_i_eff) {
  return static_cast<int64_t>(std::floor(cfg.z_cap * n_i_eff + 1e-9));
}

}  // namespace

Nats ConcatConfig::fountain_rate() const {
  return levels * outer.rate() * outer.field_bits * std::log(2.0) / n_i;
}

Nats ConcatConfig::inner_rate() const {
  return macro_bits() * std::log(2.0) / n_i;
}

void ConcatConfig::validate() const {
  outer.validate();
  if (n_i < 1) throw std::invalid_argument("n_i must be >= 1");
  if (levels < 1 || known_levels < 0 || known_levels > levels)
    throw std::invalid_argument("invalid level counts");
  if (macro_bits() > 16)
    throw std::invalid_argument(
        "inner message space above the 2^16 ML tractability cap");
  if (!(z_cap > 0)) throw std::invalid_argument("z_cap must be > 0");
  px.validate(channel.input_size());
  Nats cap = capacity(channel, 1e-9).value;
  if (!(fountain_rate() < cap))
    throw InfeasibleError("fountain rate not below channel capacity");
}

double resolved_weight_scale(const ConcatConfig& cfg) {
  if (cfg.weight_scale > 0) return cfg.weight_scale;
  Nats ez1 = adjusted_exponent(1.0, cfg.inner_rate(), cfg.channel, cfg.px);
  return std::max(ez1, 0.02);
}

int switch_index(const ConcatConfig& cfg, int64_t l) {
  return static_cast<int>(bounded(
      keyed(cfg.seed.master, kDomSwitch, static_cast<uint64_t>(l)),
      static_cast<uint64_t>(cfg.outer.n_o)));
}

int inner_symbol(const ConcatConfig& cfg, int k, uint32_t message, int64_t j) {
  DistSampler sample(cfg.px.probs);
  uint64_t prefix = keyed(cfg.seed.master, kDomCode, static_cast<uint64_t>(k),
                          message);
  return sample(mix64(prefix + static_cast<uint64_t>(j)));
}

Schedule build_schedule(const ConcatConfig& cfg, const ScheduleSpec& spec,
                        int64_t n_receive, uint64_t sched_seed) {
  if (n_receive < 1) throw std::invalid_argument("schedule needs n >= 1");
  Schedule s;
  s.indices.reserve(n_receive);
  switch (spec.kind) {
    case ScheduleKind::Prefix:
      for (int64_t i = 0; i < n_receive; ++i) s.indices.push_back(i);
      break;
    case ScheduleKind::IidThinning: {
      if (!(spec.param > 0 && spec.param <= 1))
        throw std::invalid_argument("thinning keep probability in (0, 1]");
      for (int64_t i = 0; static_cast<int64_t>(s.indices.size()) < n_receive;
           ++i) {
        if (to_unit(keyed(sched_seed, kDomSched, static_cast<uint64_t>(i))) <
            spec.param)
          s.indices.push_back(i);
      }
      break;
    }
    case ScheduleKind::PerCodeStarve: {
      if (!(spec.param >= 0 && spec.param < 1))
        throw std::invalid_argument("starved fraction in [0, 1)");
      const int n_o = cfg.outer.n_o;
      int starve_count = static_cast<int>(std::ceil(spec.param * n_o));
      std::vector<int> perm(n_o);
      std::iota(perm.begin(), perm.end(), 0);
      for (int i = n_o - 1; i > 0; --i) {
        int j = static_cast<int>(bounded(
            keyed(sched_seed, kDomSched, 0xfeed, static_cast<uint64_t>(i)),
            static_cast<uint64_t>(i + 1)));
        std::swap(perm[i], perm[static_cast<size_t>(j)]);
      }
      std::vector<bool> starved(n_o, false);
      for (int i = 0; i < starve_count; ++i) starved[perm[i]] = true;
      for (int64_t i = 0; static_cast<int64_t>(s.indices.size()) < n_receive;
           ++i) {
        if (!starved[switch_index(cfg, i)]) s.indices.push_back(i);
      }
      break;
    }
  }
  return s;
}

std::vector<StreamSymbol> transmit_stream(const ConcatConfig& cfg,
                                          const std::vector<uint32_t>& codeword,
                                          int64_t length) {
  if (static_cast<int>(codeword.size()) != cfg.outer.n_o)
    throw std::invalid_argument("codeword length mismatch");
  if (length < 1) throw std::invalid_argument("stream length must be >= 1");
  DistSampler sample(cfg.px.probs);
  std::vector<uint64_t> prefix(cfg.outer.n_o);
  for (int k = 0; k < cfg.outer.n_o; ++k)
    prefix[k] = keyed(cfg.seed.master, kDomCode, static_cast<uint64_t>(k),
                      codeword[k]);
  std::vector<int64_t> next_j(cfg.outer.n_o, 0);
  std::vector<StreamSymbol> stream;
  stream.reserve(length);
  for (int64_t l = 0; l < length; ++l) {
    int k = switch_index(cfg, l);
    int64_t j = next_j[k]++;
    stream.push_back(
        {k, sample(mix64(prefix[k] + static_cast<uint64_t>(j)))});
  }
  return stream;
}

std::vector<std::vector<ReceivedSymbol>> apply_schedule(
    const ConcatConfig& cfg, const std::vector<StreamSymbol>& stream,
    const Schedule& schedule, double n_i_eff, uint64_t noise_seed) {
  std::vector<std::vector<ReceivedSymbol>> groups(cfg.outer.n_o);
  if (schedule.indices.empty()) return groups;
  if (schedule.indices.back() >= static_cast<int64_t>(stream.size()))
    throw std::invalid_argument("schedule index beyond stream length");
  std::vector<DistSampler> rows;
  rows.reserve(cfg.channel.input_size());
  for (int x = 0; x < cfg.channel.input_size(); ++x) {
    std::vector<double> row(cfg.channel.output_size());
    for (int y = 0; y < cfg.channel.output_size(); ++y)
      row[y] = cfg.channel.p(x, y);
    rows.emplace_back(row);
  }
  const int64_t cap = retention_cap(cfg, n_i_eff);
  std::vector<int64_t> next_j(cfg.outer.n_o, 0);
  size_t cursor = 0;
  for (int64_t l = 0; l <= schedule.indices.back(); ++l) {
    int k = stream[l].code;
    int64_t j = next_j[k]++;
    if (cursor < schedule.indices.size() && schedule.indices[cursor] == l) {
      ++cursor;
      if (static_cast<int64_t>(groups[k].size()) < cap) {
        int y = rows[stream[l].x](
            keyed(noise_seed, kDomNoise, static_cast<uint64_t>(l)));
        groups[k].push_back({j, y});
      }
    }
  }
  return groups;
}

InnerDecision inner_ml_decode(const ConcatConfig& cfg, int k,
                              const std::vector<ReceivedSymbol>& received,
                              double n_i_eff,
                              const std::vector<uint32_t>* candidates) {
  InnerDecision d;
  d.z = n_i_eff > 0 ? static_cast<double>(received.size()) / n_i_eff : 0.0;
  const uint32_t space = 1u << cfg.macro_bits();
  if (received.empty()) {
    d.xi_hat = candidates && !candidates->empty() ? candidates->front() : 0;
    d.alpha = 0;
    return d;
  }
  DistSampler sample(cfg.px.probs);
  std::vector<double> lp = log_transitions(cfg.channel);
  const int out = cfg.channel.output_size();
  double best = -1e300, second = -1e300;
  uint32_t best_m = 0;
  auto consider = [&](uint32_t m) {
    uint64_t prefix =
        keyed(cfg.seed.master, kDomCode, static_cast<uint64_t>(k), m);
    double ll = 0;
    for (const auto& r : received) {
      int x = sample(mix64(prefix + static_cast<uint64_t>(r.j)));
      ll += lp[static_cast<size_t>(x) * out + r.y];
    }
    if (ll > best) {
      second = best;
      best = ll;
      best_m = m;
    } else if (ll > second) {
      second = ll;
    }
  };
  if (candidates) {
    for (uint32_t m : *candidates) consider(m);
  } else {
    for (uint32_t m = 0; m < space; ++m) consider(m);
  }
  d.xi_hat = best_m;
  d.loglik_best = best;
  d.loglik_second = second <= -1e300 ? kLogZero : second;
  double w = resolved_weight_scale(cfg);
  double gap = best - d.loglik_second;
  d.alpha = std::clamp(gap / (w * n_i_eff), 0.0, 1.0);
  return d;
}

uint8_t level_symbol(const ConcatConfig& cfg, uint32_t macro, int level) {
  return static_cast<uint8_t>((macro >> (level * cfg.outer.field_bits)) &
                              ((1u << cfg.outer.field_bits) - 1));
}

std::optional<std::vector<uint8_t>> gmd_decode(
    const ConcatConfig& cfg, const std::vector<InnerDecision>& decisions,
    int level) {
  if (static_cast<int>(decisions.size()) != cfg.outer.n_o)
    throw std::invalid_argument("decision count mismatch");
  const int n_o = cfg.outer.n_o, k_o = cfg.outer.k_o;
  std::vector<uint8_t> xi(n_o);
  std::vector<double> alpha(n_o);
  for (int k = 0; k < n_o; ++k) {
    xi[k] = level_symbol(cfg, decisions[k].xi_hat, level);
    alpha[k] = decisions[k].alpha;
  }
  ReedSolomon rs(cfg.outer);
  for (const auto& pattern : gmd_erasure_patterns(alpha, n_o - k_o)) {
    auto message = rs.decode_errors_erasures(xi, pattern);
    if (!message) continue;
    std::vector<uint8_t> cw = rs.encode(*message);
    double sum = 0;
    for (int k = 0; k < n_o; ++k) sum += cw[k] == xi[k] ? alpha[k] : -alpha[k];
    if (sum > static_cast<double>(k_o)) return message;
  }
  return std::nullopt;
}

TrialOutcome run_concat_trial(const ConcatConfig& cfg, const ScheduleSpec& sched,
                              int64_t n_receive, uint64_t trial_seed) {
  const int n_o = cfg.outer.n_o, k_o = cfg.outer.k_o;
  const int fb = cfg.outer.field_bits;
  ConcatConfig trial_cfg = cfg;
  trial_cfg.seed.master = keyed(cfg.seed.master, kDomTrial, trial_seed);
  trial_cfg.weight_scale = resolved_weight_scale(cfg);  // hoist out of the loop
  const uint64_t tm = trial_cfg.seed.master;

  // draw one submessage per level, encode into the stacked macro codeword
  ReedSolomon rs(cfg.outer);
  std::vector<std::vector<uint8_t>> messages(cfg.levels);
  std::vector<std::vector<uint8_t>> codewords(cfg.levels);
  for (int lev = 0; lev < cfg.levels; ++lev) {
    messages[lev].resize(k_o);
    for (int i = 0; i < k_o; ++i)
      messages[lev][i] = static_cast<uint8_t>(
          bounded(keyed(tm, kDomMsg, static_cast<uint64_t>(lev),
                        static_cast<uint64_t>(i)),
                  1u << fb));
    codewords[lev] = rs.encode(messages[lev]);
  }
  std::vector<uint32_t> macro(n_o, 0);
  for (int k = 0; k < n_o; ++k)
    for (int lev = 0; lev < cfg.levels; ++lev)
      macro[k] |= static_cast<uint32_t>(codewords[lev][k]) << (lev * fb);

  Schedule schedule = build_schedule(trial_cfg, sched, n_receive,
                                     keyed(tm, kDomSched, 1));
  int64_t stream_len = schedule.indices.back() + 1;
  auto stream = transmit_stream(trial_cfg, macro, stream_len);
  const double n_i_eff = static_cast<double>(n_receive) / n_o;
  auto groups = apply_schedule(trial_cfg, stream, schedule, n_i_eff,
                               keyed(tm, kDomNoise, 2));

  // rate-compatible strike-out: candidates consistent with the known levels
  const int unknown = cfg.unknown_levels();
  const uint32_t unknown_space = 1u << (unknown * fb);
  TrialOutcome out;
  out.z.resize(n_o);
  out.alpha.resize(n_o);
  std::vector<InnerDecision> decisions(n_o);
  std::vector<uint32_t> cands;
  for (int k = 0; k < n_o; ++k) {
    const std::vector<uint32_t>* cand_ptr = nullptr;
    if (cfg.known_levels > 0) {
      uint32_t known_bits = 0;
      for (int lev = unknown; lev < cfg.levels; ++lev)
        known_bits |= static_cast<uint32_t>(codewords[lev][k])
                      << ((lev - unknown) * fb);
      cands.clear();
      for (uint32_t u = 0; u < unknown_space; ++u)
        cands.push_back(u | (known_bits << (unknown * fb)));
      cand_ptr = &cands;
    }
    decisions[k] = inner_ml_decode(trial_cfg, k, groups[k], n_i_eff, cand_ptr);
    out.z[k] = decisions[k].z;
    out.alpha[k] = decisions[k].alpha;
    if (decisions[k].xi_hat != macro[k]) ++out.wrong_inner;
  }

  out.success = true;
  for (int lev = 0; lev < unknown; ++lev) {
    auto decoded = gmd_decode(trial_cfg, decisions, lev);
    if (!decoded || *decoded != messages[lev]) {
      out.success = false;
      break;
    }
  }
  return out;
}

uint64_t codebook_digest(const ConcatConfig& cfg, int codes, int messages,
                         int symbols) {
  uint64_t h = 1469598103934665603ULL;  // FNV offset basis
  for (int k = 0; k < codes; ++k)
    for (uint32_t m = 0; m < static_cast<uint32_t>(messages); ++m)
      for (int64_t j = 0; j < symbols; ++j) {
        h ^= static_cast<uint64_t>(inner_symbol(cfg, k, m, j));
        h *= 1099511628211ULL;
      }
  return h;
}

std::vector<PeRow> random_fountain_sim(const Channel& ch, const InputDist& px,
                                       Nats rate, int n_messages, uint64_t seed,
                                       int64_t trials,
                                       std::vector<int64_t> n_values) {
  if (n_messages < 2 || n_messages > 64)
    throw std::invalid_argument("message count must be in [2, 64]");
  if (!(rate > 0)) throw std::invalid_argument("rate must be > 0");
  px.validate(ch.input_size());
  if (n_values.empty()) {
    int64_t n0 = static_cast<int64_t>(
        std::ceil(std::log(static_cast<double>(n_messages)) / rate));
    n_values = {n0, 2 * n0, 4 * n0};
  }
  std::vector<double> lp = log_transitions(ch);
  const int out_size = ch.output_size();
  DistSampler sample_x(px.probs);
  std::vector<DistSampler> rows;
  for (int x = 0; x < ch.input_size(); ++x) {
    std::vector<double> row(out_size);
    for (int y = 0; y < out_size; ++y) row[y] = ch.p(x, y);
    rows.emplace_back(row);
  }
  std::vector<PeRow> table;
  for (int64_t n : n_values) {
    PeRow row{n, 0, trials};
    for (int64_t t = 0; t < trials; ++t) {
      uint64_t tm = keyed(seed, kDomTrial, static_cast<uint64_t>(t),
                          static_cast<uint64_t>(n));
      uint32_t true_m = static_cast<uint32_t>(
          bounded(keyed(tm, kDomMsg, 0), static_cast<uint64_t>(n_messages)));
      // received prefix
      std::vector<int> y(n);
      uint64_t tx_prefix = keyed(tm, kDomCode, 0, true_m);
      for (int64_t j = 0; j < n; ++j) {
        int x = sample_x(mix64(tx_prefix + static_cast<uint64_t>(j)));
        y[j] = rows[x](keyed(tm, kDomNoise, static_cast<uint64_t>(j)));
      }
      double best = -1e300;
      uint32_t best_m = 0;
      for (uint32_t m = 0; m < static_cast<uint32_t>(n_messages); ++m) {
        uint64_t prefix = keyed(tm, kDomCode, 0, m);
        double ll = 0;
        for (int64_t j = 0; j < n; ++j) {
          int x = sample_x(mix64(prefix + static_cast<uint64_t>(j)));
          ll += lp[static_cast<size_t>(x) * out_size + y[j]];
        }
        if (ll > best) {
          best = ll;
          best_m = m;
        }
      }
      if (best_m != true_m) ++row.failures;
    }
    table.push_back(row);
  }
  return table;
}

}  // namespace fel
