#include "sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "detail/mix.hpp"
#include "json.hpp"

namespace fel {

namespace {
constexpr double kZ95 = 1.959963984540054;
constexpr uint64_t kDomSweep = 0x53574545500007ULL;
}  // namespace

PeEstimate wilson_estimate(int64_t n, int64_t failures, int64_t trials) {
  if (trials <= 0) throw std::invalid_argument("trials must be > 0");
  if (failures < 0 || failures > trials)
    throw std::invalid_argument("failures outside [0, trials]");
  PeEstimate e;
  e.n = n;
  e.failures = failures;
  e.trials = trials;
  double t = static_cast<double>(trials);
  double p = static_cast<double>(failures) / t;
  e.p_hat = p;
  double z2 = kZ95 * kZ95;
  double denom = 1 + z2 / t;
  double center = (p + z2 / (2 * t)) / denom;
  double half = kZ95 * std::sqrt(p * (1 - p) / t + z2 / (4 * t * t)) / denom;
  e.ci_low = std::max(0.0, center - half);
  e.ci_high = std::min(1.0, center + half);
  return e;
}

void ExperimentManifest::validate() const {
  config.validate();
  if (trials_per_point < 100)
    throw std::invalid_argument("trials_per_point must be >= 100");
  if (n_values.empty())
    throw std::invalid_argument("n_values must not be empty");
  for (size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1)
      throw std::invalid_argument("n_values must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1])
      throw std::invalid_argument("n_values must be strictly increasing");
  }
}

int resolve_thread_count(int requested) {
  if (requested > 0) return std::min(requested, 64);
  if (const char* env = std::getenv("FEL_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return std::min(v, 64);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? std::min<int>(static_cast<int>(hw), 16) : 4;
}

std::vector<PeEstimate> run_sweep(const ExperimentManifest& manifest) {
  manifest.validate();
  const int threads = resolve_thread_count(manifest.threads);
  std::vector<PeEstimate> out;
  out.reserve(manifest.n_values.size());
  for (size_t pi = 0; pi < manifest.n_values.size(); ++pi) {
    const int64_t n = manifest.n_values[pi];
    std::atomic<int64_t> next{0}, failures{0};
    std::atomic<bool> failed{false};
    std::string error_text;
    std::mutex error_mu;
    auto worker = [&]() {
      for (;;) {
        int64_t t = next.fetch_add(1);
        if (t >= manifest.trials_per_point || failed.load()) return;
        try {
          uint64_t trial_seed =
              detail::keyed(manifest.master_seed, kDomSweep, pi, static_cast<uint64_t>(t));
          auto outcome =
              run_concat_trial(manifest.config, manifest.schedule, n, trial_seed);
          if (!outcome.success) failures.fetch_add(1);
        } catch (const std::exception& e) {
          std::lock_guard<std::mutex> lock(error_mu);
          error_text = e.what();
          failed.store(true);
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) {
      char buf[64];
      std::snprintf(buf, sizeof buf, " (at N=%lld)",
                    static_cast<long long>(n));
      throw std::runtime_error(error_text + buf);
    }
    out.push_back(wilson_estimate(n, failures.load(), manifest.trials_per_point));
  }
  return out;
}

SlopeFit fit_exponent(const std::vector<PeEstimate>& estimates) {
  SlopeFit fit;
  std::vector<double> xs, ys;
  for (const auto& e : estimates) {
    if (e.failures == 0) {
      fit.censored.push_back(e.n);
      continue;
    }
    if (e.failures < 5) continue;
    xs.push_back(static_cast<double>(e.n));
    ys.push_back(-std::log(e.p_hat));
  }
  const int u = static_cast<int>(xs.size());
  if (u < 3)
    throw std::invalid_argument(
        "fit_exponent needs >= 3 points with >= 5 failures each");
  double xbar = 0, ybar = 0;
  for (int i = 0; i < u; ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= u;
  ybar /= u;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < u; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  fit.slope = sxy / sxx;
  double ss_res = 0;
  for (int i = 0; i < u; ++i) {
    double pred = ybar + fit.slope * (xs[i] - xbar);
    ss_res += (ys[i] - pred) * (ys[i] - pred);
  }
  fit.std_err = std::sqrt(ss_res / (u - 2) / sxx);
  fit.points_used = u;
  return fit;
}

std::vector<PeEstimate> random_fountain_sweep(const Channel& ch,
                                              const InputDist& px, Nats rate,
                                              int n_messages, uint64_t seed,
                                              int64_t trials,
                                              std::vector<int64_t> n_values) {
  auto rows = random_fountain_sim(ch, px, rate, n_messages, seed, trials,
                                  std::move(n_values));
  std::vector<PeEstimate> out;
  out.reserve(rows.size());
  for (const auto& r : rows)
    out.push_back(wilson_estimate(r.n, r.failures, r.trials));
  return out;
}

std::string sweep_csv(const std::vector<PeEstimate>& estimates) {
  std::string out = "n,trials,failures,p_hat,ci_low,ci_high\n";
  char buf[256];
  for (const auto& e : estimates) {
    std::snprintf(buf, sizeof buf, "%lld,%lld,%lld,%.12g,%.12g,%.12g\n",
                  static_cast<long long>(e.n), static_cast<long long>(e.trials),
                  static_cast<long long>(e.failures), e.p_hat, e.ci_low,
                  e.ci_high);
    out += buf;
  }
  return out;
}

std::string manifest_json(const ExperimentManifest& m) {
  nlohmann::json j;
  const auto& c = m.config;
  j["outer"] = {{"n_o", c.outer.n_o},
                {"k_o", c.outer.k_o},
                {"field_bits", c.outer.field_bits}};
  j["n_i"] = c.n_i;
  std::vector<std::vector<double>> tr(c.channel.input_size());
  for (int x = 0; x < c.channel.input_size(); ++x) {
    tr[x].resize(c.channel.output_size());
    for (int y = 0; y < c.channel.output_size(); ++y) tr[x][y] = c.channel.p(x, y);
  }
  j["channel"] = {{"transition", tr}, {"input_dist", c.px.probs}};
  j["seed"] = c.seed.master;
  j["weight_scale"] = c.weight_scale;
  j["z_cap"] = c.z_cap;
  j["levels"] = c.levels;
  j["known_levels"] = c.known_levels;
  const char* kind = m.schedule.kind == ScheduleKind::Prefix ? "prefix"
                     : m.schedule.kind == ScheduleKind::IidThinning
                         ? "iid_thinning"
                         : "per_code_starve";
  j["schedule"] = {{"kind", kind}, {"param", m.schedule.param}};
  j["n_values"] = m.n_values;
  j["trials_per_point"] = m.trials_per_point;
  j["master_seed"] = m.master_seed;
  return j.dump(2);
}

double two_proportion_z(int64_t f1, int64_t n1, int64_t f2, int64_t n2) {
  if (n1 <= 0 || n2 <= 0) throw std::invalid_argument("sample sizes must be > 0");
  double p1 = static_cast<double>(f1) / n1;
  double p2 = static_cast<double>(f2) / n2;
  double pooled = static_cast<double>(f1 + f2) / (n1 + n2);
  double denom = std::sqrt(pooled * (1 - pooled) * (1.0 / n1 + 1.0 / n2));
  if (denom == 0) return 0.0;
  return (p1 - p2) / denom;
}

}  // namespace fel
