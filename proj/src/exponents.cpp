#include "exponents.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <future>
#include <random>

#include "detail/opt.hpp"

namespace fel {

namespace {

using detail::Max1D;

constexpr double kFeasSlack = 1e-9;

// E0 sampled on the rho grid once per (channel, px); inner maxima scan the
// table and then golden-refine against exact evaluations. All the
// rho-objectives used here are unimodal (E0 concave nondecreasing, brackets
// applied while E0' keeps a single sign change), so golden is safe.
class GallagerTable {
 public:
  GallagerTable(const Channel& ch, const InputDist& px, const OptimizerGrid& g)
      : ch_(ch), px_(px), refine_(g.refine_rounds) {
    int n = std::max(g.rho_steps, 64);
    rho_.resize(n + 1);
    e0_.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
      rho_[i] = static_cast<double>(i) / n;
      e0_[i] = e0_exact(rho_[i]);
    }
  }

  double e0_exact(double rho) const {
    const double a = 1.0 / (1.0 + rho);
    double sum = 0;
    for (int y = 0; y < ch_.output_size(); ++y) {
      double inner = 0;
      for (int x = 0; x < ch_.input_size(); ++x) {
        double v = ch_.p(x, y);
        if (v > 0) inner += px_.probs[x] * std::pow(v, a);
      }
      sum += std::pow(inner, 1.0 + rho);
    }
    return -std::log(sum);
  }

  double e0_at_one() const { return e0_.back(); }

  // max_rho (-rho x + z E0)
  Max1D max_linear(double x, double z) const {
    return maximize([&](double e0, double rho) { return -rho * x + z * e0; });
  }

  // max_rho (-rho x + E0 [1 - c E0])
  Max1D max_bracket(double x, double c) const {
    return maximize(
        [&](double e0, double rho) { return -rho * x + e0 * (1 - c * e0); });
  }

  // table-only variant for quadrature nodes (no refinement)
  double max_bracket_fast(double x, double c) const {
    double best = -1e300;
    for (size_t i = 0; i < rho_.size(); ++i) {
      double v = -rho_[i] * x + e0_[i] * (1 - c * e0_[i]);
      if (v > best) best = v;
    }
    return best;
  }

  double max_linear_fast(double x) const {
    double best = -1e300;
    for (size_t i = 0; i < rho_.size(); ++i) {
      double v = -rho_[i] * x + e0_[i];
      if (v > best) best = v;
    }
    return best;
  }

 private:
  template <typename Obj>
  Max1D maximize(Obj obj) const {
    double best = -1e300, arg = 0;
    for (size_t i = 0; i < rho_.size(); ++i) {
      double v = obj(e0_[i], rho_[i]);
      if (v > best) {
        best = v;
        arg = rho_[i];
      }
    }
    double h = rho_[1] - rho_[0];
    auto f = [&](double rho) { return obj(e0_exact(rho), rho); };
    for (int r = 0; r < refine_; ++r) {
      auto m = detail::golden_max(f, std::max(0.0, arg - h),
                                  std::min(1.0, arg + h));
      if (m.value > best) {
        best = m.value;
        arg = m.arg;
      }
      h *= 0.05;
      if (h < 1e-13) break;
    }
    return {best, arg};
  }

  const Channel& ch_;
  InputDist px_;
  int refine_;
  std::vector<double> rho_, e0_;
};

// grid scan + repeated zoom; tolerant of -inf (infeasible) cells
template <typename F>
Max1D zoom_max(F&& f, double lo, double hi, int steps, int rounds) {
  double best_v = -1e300, best_x = lo;
  double a = lo, b = hi;
  for (int r = 0; r <= rounds; ++r) {
    for (int i = 0; i <= steps; ++i) {
      double x = a + (b - a) * i / steps;
      double v = f(x);
      if (v > best_v) {
        best_v = v;
        best_x = x;
      }
    }
    double h = (b - a) / steps;
    a = std::max(lo, best_x - h);
    b = std::min(hi, best_x + h);
    if (b - a < 1e-14) break;
  }
  return {best_v, best_x};
}

Nats checked_capacity(const Channel& ch) { return capacity(ch, 1e-11).value; }

// rate <= C_F accepted (zero exponent at equality); above is infeasible
double feasibility_lo(Nats rate, Nats cap, const char* op) {
  if (!(rate >= 0)) throw std::invalid_argument("rate must be >= 0");
  if (rate > cap * (1 + kFeasSlack) + 1e-15) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%s: rate not achievable (rate %.9g >= capacity %.9g)", op,
                  rate, cap);
    throw InfeasibleError(buf);
  }
  return std::min(rate / cap, 1.0);
}

ExponentPoint zero_point(Nats rate, const InputDist& px) {
  ExponentPoint p;
  p.rate = rate;
  p.value = 0;
  p.rho_star = 0;
  p.ro_star = 1;
  p.px = px;
  return p;
}

// ---- fixed-px cores -------------------------------------------------------

ExponentPoint random_coding_core(Nats rate, const Channel& ch,
                                 const InputDist& px,
                                 const OptimizerGrid& grid) {
  GallagerTable t(ch, px, grid);
  auto m = t.max_linear(rate, 1.0);
  ExponentPoint p;
  p.rate = rate;
  p.value = std::max(m.value, 0.0);
  p.rho_star = m.value > 0 ? m.arg : 0.0;
  p.ro_star = 1;
  p.px = px;
  return p;
}

// shared driver for the three one-level brackets:
//   kind 0: (1-ro)(-rho R/ro + E0[1-(1+ro)/2 E0])
//   kind 1: (1-ro)(-rho R/ro + E0[1-E0])
//   kind 2: (1-ro)(-rho R/ro + E0)
ExponentPoint one_level_core(Nats rate, const Channel& ch, const InputDist& px,
                             const OptimizerGrid& grid, int kind, Nats cap,
                             const char* op) {
  double lo = feasibility_lo(rate, cap, op);
  GallagerTable t(ch, px, grid);
  auto inner = [&](double ro) -> Max1D {
    double x = rate == 0 ? 0.0 : rate / ro;
    switch (kind) {
      case 0: return t.max_bracket(x, (1 + ro) / 2);
      case 1: return t.max_bracket(x, 1.0);
      default: return t.max_linear(x, 1.0);
    }
  };
  auto value_at = [&](double ro) {
    return (1 - ro) * std::max(inner(ro).value, 0.0);
  };
  double lo_eff = std::max(lo, 1e-9);
  auto best = zoom_max(value_at, lo_eff, 1.0, grid.ro_steps, grid.refine_rounds);
  ExponentPoint p;
  p.rate = rate;
  p.value = std::max(best.value, 0.0);
  p.ro_star = best.arg;
  p.rho_star = p.value > 0 ? inner(best.arg).arg : 0.0;
  p.px = px;
  return p;
}

ExponentPoint multilevel_core(Nats rate, const Channel& ch, const InputDist& px,
                              int m, const OptimizerGrid& grid, Nats cap) {
  double lo = feasibility_lo(rate, cap, "multilevel_exponent");
  if (rate >= cap * (1 - 1e-12)) return zero_point(rate, px);
  GallagerTable t(ch, px, grid);
  bool any_feasible = false;
  auto value_at = [&](double ro) {
    double x_up = rate / ro;
    double sum = 0;
    for (int i = 1; i <= m; ++i) {
      double e = t.max_bracket(x_up * i / m, 1.0).value;
      if (e <= 0) return -1e300;  // infeasible ro, skipped
      sum += 1.0 / e;
    }
    any_feasible = true;
    return (1 - ro) * m / sum;
  };
  auto best = zoom_max(value_at, std::max(lo, 1e-9), 1.0, grid.ro_steps,
                       grid.refine_rounds);
  if (!any_feasible)
    throw InfeasibleError("multilevel_exponent: no feasible outer rate");
  ExponentPoint p;
  p.rate = rate;
  p.value = std::max(best.value, 0.0);
  p.ro_star = best.arg;
  p.rho_star = t.max_bracket(rate / best.arg, 1.0).arg;
  p.px = px;
  p.m = m;
  return p;
}

ExponentPoint integral_core(Nats rate, const Channel& ch, const InputDist& px,
                            const OptimizerGrid& grid, int quad_steps,
                            bool penalized, Nats cap, const char* op) {
  if (quad_steps < 256)
    throw std::invalid_argument("quad_steps must be >= 256");
  double lo = feasibility_lo(rate, cap, op);
  if (rate >= cap * (1 - 1e-12)) return zero_point(rate, px);
  GallagerTable t(ch, px, grid);
  const double c = penalized ? 1.0 : 0.0;
  bool any_feasible = false;
  auto value_at = [&](double ro) {
    double up = rate / ro;
    double sum = 0;
    for (int i = 0; i < quad_steps; ++i) {
      double x = up * (i + 0.5) / quad_steps;
      double e = penalized ? t.max_bracket_fast(x, c) : t.max_linear_fast(x);
      if (e <= 0) return -1e300;  // integrand nonpositive: infeasible config
      sum += 1.0 / e;
    }
    any_feasible = true;
    double integral = sum * up / quad_steps;
    return (up - rate) / integral;
  };
  auto best = zoom_max(value_at, std::max(lo, 1e-9), 1.0, grid.ro_steps,
                       grid.refine_rounds);
  if (!any_feasible)
    throw InfeasibleError(std::string(op) + ": no feasible outer rate");
  ExponentPoint p;
  p.rate = rate;
  p.value = std::max(best.value, 0.0);
  p.ro_star = best.arg;
  p.rho_star = 0;
  p.px = px;
  return p;
}

// ---- input-distribution optimization --------------------------------------

void project_to_simplex(std::vector<double>& v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<double>());
  double css = 0, theta = 0;
  int k = 0;
  for (size_t i = 0; i < u.size(); ++i) {
    css += u[i];
    double t = (css - 1.0) / static_cast<double>(i + 1);
    if (u[i] - t > 0) {
      k = static_cast<int>(i + 1);
      theta = t;
    }
  }
  double sum = 0;
  for (auto& x : v) {
    x = std::max(x - theta, 0.0);
    sum += x;
  }
  for (auto& x : v) x /= sum;  // guard round-off
}

template <typename Eval>
InputDist optimize_px(const Channel& ch, Eval eval) {
  if (ch.symmetric()) return InputDist::uniform(ch.input_size());
  const int n = ch.input_size();
  std::mt19937_64 rng(0xfe1c0de);
  std::vector<InputDist> starts;
  starts.push_back(InputDist::uniform(n));
  for (int x = 0; x < n && static_cast<int>(starts.size()) < 5; ++x) {
    std::vector<double> v(n, 0.2 / (n - 1 + 1e-300));
    v[x] = 0.8;
    double s = 0;
    for (double e : v) s += e;
    for (auto& e : v) e /= s;
    starts.push_back(InputDist{v});
  }
  std::exponential_distribution<double> ed(1.0);
  while (static_cast<int>(starts.size()) < 8) {
    std::vector<double> v(n);
    double s = 0;
    for (auto& e : v) {
      e = ed(rng);
      s += e;
    }
    for (auto& e : v) e /= s;
    starts.push_back(InputDist{v});
  }

  InputDist best_px = starts[0];
  double best_v = -1e300;
  for (auto& start : starts) {
    InputDist px = start;
    double v = eval(px);
    double step = 0.1;
    for (int it = 0; it < 80 && step > 1e-7; ++it) {
      // envelope gradient via central differences on the simplex
      std::vector<double> g(n);
      const double h = 1e-5;
      for (int x = 0; x < n; ++x) {
        InputDist up = px, dn = px;
        up.probs[x] += h;
        dn.probs[x] = std::max(dn.probs[x] - h, 0.0);
        double su = 0, sd = 0;
        for (double e : up.probs) su += e;
        for (double e : dn.probs) sd += e;
        for (auto& e : up.probs) e /= su;
        for (auto& e : dn.probs) e /= sd;
        g[x] = (eval(up) - eval(dn)) / (2 * h);
      }
      InputDist cand = px;
      for (int x = 0; x < n; ++x) cand.probs[x] += step * g[x];
      project_to_simplex(cand.probs);
      double cv = eval(cand);
      if (cv > v + 1e-15) {
        px = cand;
        v = cv;
      } else {
        step *= 0.5;
      }
    }
    if (v > best_v) {
      best_v = v;
      best_px = px;
    }
  }
  return best_px;
}

}  // namespace

void OptimizerGrid::validate() const {
  if (rho_steps < 64 || ro_steps < 64)
    throw std::invalid_argument("optimizer grids need >= 64 steps");
  if (refine_rounds < 1)
    throw std::invalid_argument("refine_rounds must be >= 1");
  if (!(tol > 0)) throw std::invalid_argument("tol must be > 0");
}

ExponentPoint random_coding_exponent(Nats rate, const Channel& ch,
                                     const InputDist& px,
                                     const OptimizerGrid& grid) {
  grid.validate();
  px.validate(ch.input_size());
  if (!(rate >= 0)) throw std::invalid_argument("rate must be >= 0");
  return random_coding_core(rate, ch, px, grid);
}

ExponentPoint random_fountain_exponent(Nats rate, const Channel& ch,
                                       const OptimizerGrid& grid) {
  grid.validate();
  Nats cap = checked_capacity(ch);
  feasibility_lo(rate, cap, "random_fountain_exponent");
  InputDist px = optimize_px(ch, [&](const InputDist& d) {
    return random_coding_core(rate, ch, d, grid).value;
  });
  return random_coding_core(rate, ch, px, grid);
}

ExponentPoint one_level_exponent(Nats rate, const Channel& ch,
                                 const OptimizerGrid& grid) {
  grid.validate();
  Nats cap = checked_capacity(ch);
  InputDist px = optimize_px(ch, [&](const InputDist& d) {
    return one_level_core(rate, ch, d, grid, 0, cap, "one_level_exponent").value;
  });
  return one_level_core(rate, ch, px, grid, 0, cap, "one_level_exponent");
}

ExponentPoint one_level_lower_bound(Nats rate, const Channel& ch,
                                    const OptimizerGrid& grid) {
  grid.validate();
  Nats cap = checked_capacity(ch);
  InputDist px = optimize_px(ch, [&](const InputDist& d) {
    return one_level_core(rate, ch, d, grid, 1, cap, "one_level_lower_bound")
        .value;
  });
  return one_level_core(rate, ch, px, grid, 1, cap, "one_level_lower_bound");
}

ExponentPoint forney_exponent(Nats rate, const Channel& ch,
                              const OptimizerGrid& grid) {
  grid.validate();
  Nats cap = checked_capacity(ch);
  InputDist px = optimize_px(ch, [&](const InputDist& d) {
    return one_level_core(rate, ch, d, grid, 2, cap, "forney_exponent").value;
  });
  return one_level_core(rate, ch, px, grid, 2, cap, "forney_exponent");
}

ExponentPoint multilevel_exponent(Nats rate, const Channel& ch, int m,
                                  const OptimizerGrid& grid) {
  grid.validate();
  if (m < 1) throw std::invalid_argument("m must be >= 1");
  Nats cap = checked_capacity(ch);
  InputDist px = optimize_px(ch, [&](const InputDist& d) {
    return multilevel_core(rate, ch, d, m, grid, cap).value;
  });
  return multilevel_core(rate, ch, px, m, grid, cap);
}

ExponentPoint infinite_level_exponent(Nats rate, const Channel& ch,
                                      const OptimizerGrid& grid,
                                      int quad_steps) {
  grid.validate();
  Nats cap = checked_capacity(ch);
  InputDist px = optimize_px(ch, [&](const InputDist& d) {
    return integral_core(rate, ch, d, grid, quad_steps, true, cap,
                         "infinite_level_exponent")
        .value;
  });
  return integral_core(rate, ch, px, grid, quad_steps, true, cap,
                       "infinite_level_exponent");
}

ExponentPoint classical_infinite_level_exponent(Nats rate, const Channel& ch,
                                                const OptimizerGrid& grid,
                                                int quad_steps) {
  grid.validate();
  Nats cap = checked_capacity(ch);
  InputDist px = optimize_px(ch, [&](const InputDist& d) {
    return integral_core(rate, ch, d, grid, quad_steps, false, cap,
                         "classical_infinite_level_exponent")
        .value;
  });
  return integral_core(rate, ch, px, grid, quad_steps, false, cap,
                       "classical_infinite_level_exponent");
}

ExponentPoint one_level_objective(Nats rate, const Channel& ch,
                                  const InputDist& px, double ro,
                                  const OptimizerGrid& grid) {
  grid.validate();
  px.validate(ch.input_size());
  if (!(ro > 0 && ro <= 1)) throw std::invalid_argument("ro must be in (0, 1]");
  if (!(rate >= 0)) throw std::invalid_argument("rate must be >= 0");
  GallagerTable t(ch, px, grid);
  auto m = t.max_bracket(rate / ro, (1 + ro) / 2);
  ExponentPoint p;
  p.rate = rate;
  p.value = std::max((1 - ro) * std::max(m.value, 0.0), 0.0);
  p.rho_star = m.value > 0 ? m.arg : 0.0;
  p.ro_star = ro;
  p.px = px;
  return p;
}

Nats adjusted_exponent(double z, Nats rate_over_ro, const Channel& ch,
                       const InputDist& px, const OptimizerGrid& grid) {
  grid.validate();
  px.validate(ch.input_size());
  if (!(z >= 0)) throw std::invalid_argument("z must be >= 0");
  GallagerTable t(ch, px, grid);
  return std::max(t.max_linear(rate_over_ro, z).value, 0.0);
}

double gmd_phi(double z, double s, Nats rate_over_ro, double ro,
               const Channel& ch, const InputDist& px,
               const OptimizerGrid& grid) {
  if (!(s >= 0)) throw std::invalid_argument("s must be >= 0");
  double e = adjusted_exponent(z, rate_over_ro, ch, px, grid);
  if (e < s / 2) return -s * ro;
  if (e < s) return 2 * e - (1 + ro) * s;
  return (1 - ro) * s;
}

SaddleResult one_level_saddle(Nats rate, const Channel& ch, const InputDist& px,
                              double ro, const SaddleConfig& sconf,
                              const OptimizerGrid& grid) {
  grid.validate();
  px.validate(ch.input_size());
  if (sconf.z0_steps < 2 || sconf.gamma_steps < 2 || sconf.s_steps < 1)
    throw std::invalid_argument("saddle grids too coarse");
  Nats cap = checked_capacity(ch);
  if (!(ro > rate / cap && ro < 1.0))
    throw InfeasibleError("one_level_saddle: ro outside (rate/C_F, 1)");
  const double x = rate / ro;
  GallagerTable t(ch, px, grid);
  const double smax = sconf.s_max > 0 ? sconf.s_max : 4 * t.e0_at_one();

  auto ez = [&](double z) { return std::max(t.max_linear(x, z).value, 0.0); };
  auto phi = [&](double e, double s) {
    if (e < s / 2) return -s * ro;
    if (e < s) return 2 * e - (1 + ro) * s;
    return (1 - ro) * s;
  };

  struct Cell {
    double value, s_star;
    bool at_ez;
  };
  auto cell = [&](double z0, double g) -> Cell {
    double e1 = ez(z0);
    double z2 = (1 - g * z0) / (1 - g);
    double e2 = ez(z2);
    double best = -1e300, s_star = 0;
    bool at_ez = false;
    auto consider = [&](double s, bool is_ez) {
      if (s < 0) return;
      double v = g * phi(e1, s) + (1 - g) * phi(e2, s);
      if (v > best + 1e-15) {
        best = v;
        s_star = s;
        at_ez = is_ez;
      } else if (is_ez && std::abs(v - best) <= 1e-15) {
        at_ez = true;  // tie resolves in favor of the breakpoint
        s_star = s;
      }
    };
    for (int k = 0; k <= sconf.s_steps; ++k)
      consider(smax * k / sconf.s_steps, false);
    consider(e1, true);
    consider(e2, true);
    consider(2 * e1, false);
    consider(2 * e2, false);
    return {best + g / (1 - g) * (1 - z0) * (1 - z0) / 2, s_star, at_ez};
  };

  SaddleResult r;
  double best = 1e300;
  Cell best_cell{0, 0, false};
  for (int i = 0; i <= sconf.z0_steps; ++i) {
    double z0 = static_cast<double>(i) / sconf.z0_steps;
    for (int j = 1; j < sconf.gamma_steps; ++j) {
      double g = static_cast<double>(j) / sconf.gamma_steps;
      Cell c = cell(z0, g);
      if (c.value < best) {
        best = c.value;
        best_cell = c;
        r.z0_star = z0;
        r.gamma_star = g;
      }
    }
  }
  r.grid_value = best;
  r.s_star = best_cell.s_star;
  r.s_star_at_ez = best_cell.at_ez;

  // local 2-D zoom refinement around the grid argmin
  double z_lo = std::max(0.0, r.z0_star - 1.0 / sconf.z0_steps);
  double z_hi = std::min(1.0, r.z0_star + 1.0 / sconf.z0_steps);
  double g_lo = std::max(1e-6, r.gamma_star - 1.0 / sconf.gamma_steps);
  double g_hi = std::min(1.0 - 1e-6, r.gamma_star + 1.0 / sconf.gamma_steps);
  double bz = r.z0_star, bg = r.gamma_star, bv = best;
  for (int round = 0; round < 6; ++round) {
    for (int i = 0; i <= 8; ++i) {
      for (int j = 0; j <= 8; ++j) {
        double z0 = z_lo + (z_hi - z_lo) * i / 8;
        double g = g_lo + (g_hi - g_lo) * j / 8;
        double v = cell(z0, g).value;
        if (v < bv) {
          bv = v;
          bz = z0;
          bg = g;
        }
      }
    }
    double hz = (z_hi - z_lo) / 8, hg = (g_hi - g_lo) / 8;
    z_lo = std::max(0.0, bz - hz);
    z_hi = std::min(1.0, bz + hz);
    g_lo = std::max(1e-6, bg - hg);
    g_hi = std::min(1.0 - 1e-6, bg + hg);
  }
  r.value = bv;
  r.z0_refined = bz;
  r.gamma_refined = bg;
  return r;
}

double closed_form_saddle_z0(double ro, Nats e0) {
  if (!(ro >= 0 && ro <= 1)) throw std::invalid_argument("ro must be in [0, 1]");
  if (!(e0 >= 0)) throw std::invalid_argument("e0 must be >= 0");
  double v = (1 + ro) * e0;
  if (v > 1 + 1e-12)
    throw InfeasibleError("closed_form_saddle_z0: outside closed-form regime");
  return std::max(1.0 - v, 0.0);
}

double suboptimal_outer_rate(double gamma) {
  if (!(gamma > 0 && gamma <= 1))
    throw std::invalid_argument("gamma must be in (0, 1]");
  return (std::sqrt(gamma * gamma + 8 * gamma) - gamma) / 2;
}

ExponentPoint one_level_exponent_at_gamma(double gamma, const Channel& ch,
                                          const InputDist& px, double ro,
                                          const OptimizerGrid& grid) {
  grid.validate();
  px.validate(ch.input_size());
  if (!(gamma > 0 && gamma <= 1))
    throw std::invalid_argument("gamma must be in (0, 1]");
  if (!(ro >= gamma - 1e-12 && ro <= 1))
    throw InfeasibleError("one_level_exponent_at_gamma: ro outside [gamma, 1]");
  Nats info = mutual_information(ch, px);
  Nats rate = gamma * info;
  GallagerTable t(ch, px, grid);
  double x = ro > 0 ? rate / ro : 0.0;
  auto m = t.max_bracket(x, (1 + ro) / 2);
  ExponentPoint p;
  p.rate = rate;
  p.gamma = gamma;
  p.value = std::max((1 - ro) * std::max(m.value, 0.0), 0.0);
  p.rho_star = p.value > 0 ? m.arg : 0.0;
  p.ro_star = ro;
  p.px = px;
  return p;
}

ExponentPoint one_level_gamma_optimal(double gamma, const Channel& ch,
                                      const InputDist& px,
                                      const OptimizerGrid& grid) {
  grid.validate();
  px.validate(ch.input_size());
  if (!(gamma > 0 && gamma <= 1))
    throw std::invalid_argument("gamma must be in (0, 1]");
  GallagerTable t(ch, px, grid);
  Nats rate = gamma * mutual_information(ch, px);
  auto value_at = [&](double ro) {
    double x = rate / ro;
    return (1 - ro) * std::max(t.max_bracket(x, (1 + ro) / 2).value, 0.0);
  };
  auto best = zoom_max(value_at, std::max(gamma, 1e-9), 1.0, grid.ro_steps,
                       grid.refine_rounds);
  ExponentPoint p;
  p.rate = rate;
  p.gamma = gamma;
  p.value = std::max(best.value, 0.0);
  p.ro_star = best.arg;
  p.rho_star = t.max_bracket(rate / best.arg, (1 + best.arg) / 2).arg;
  p.px = px;
  return p;
}

ExponentPoint one_level_suboptimal_ro(double gamma, const Channel& ch,
                                      const InputDist& px,
                                      const OptimizerGrid& grid) {
  return one_level_exponent_at_gamma(gamma, ch, px, suboptimal_outer_rate(gamma),
                                     grid);
}

std::vector<ExponentPoint> evaluate_curve(const Channel& ch, CurveKind kind,
                                          const std::vector<double>& xs, int m,
                                          const OptimizerGrid& grid,
                                          int quad_steps, int threads) {
  auto eval_one = [&](double x) -> ExponentPoint {
    switch (kind) {
      case CurveKind::EFr: return random_fountain_exponent(x, ch, grid);
      case CurveKind::EFc: return one_level_exponent(x, ch, grid);
      case CurveKind::EFcTilde: return one_level_lower_bound(x, ch, grid);
      case CurveKind::Ec: return forney_exponent(x, ch, grid);
      case CurveKind::EFcM: return multilevel_exponent(x, ch, m, grid);
      case CurveKind::EFcInf:
        return infinite_level_exponent(x, ch, grid, quad_steps);
      case CurveKind::EcInf:
        return classical_infinite_level_exponent(x, ch, grid, quad_steps);
      case CurveKind::EFcGamma: {
        auto px = capacity(ch, 1e-11).px;
        return one_level_gamma_optimal(x, ch, px, grid);
      }
      case CurveKind::EFcs: {
        auto px = capacity(ch, 1e-11).px;
        return one_level_suboptimal_ro(x, ch, px, grid);
      }
    }
    throw std::invalid_argument("unknown curve kind");
  };

  std::vector<ExponentPoint> out(xs.size());
  if (threads <= 1 || xs.size() <= 1) {
    for (size_t i = 0; i < xs.size(); ++i) out[i] = eval_one(xs[i]);
    return out;
  }
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= xs.size()) return;
      out[i] = eval_one(xs[i]);
    }
  };
  std::vector<std::future<void>> pool;
  int nthreads = std::min<int>(threads, static_cast<int>(xs.size()));
  for (int i = 0; i < nthreads; ++i)
    pool.push_back(std::async(std::launch::async, worker));
  for (auto& f : pool) f.get();
  return out;
}

std::string curve_csv(const std::vector<ExponentPoint>& points,
                      CurveKind kind) {
  const bool with_m = kind == CurveKind::EFcM;
  const bool with_gamma =
      kind == CurveKind::EFcGamma || kind == CurveKind::EFcs;
  std::string out = "rate_nats,exponent_nats,rho_star,ro_star";
  if (with_m) out += ",m";
  if (with_gamma) out += ",gamma";
  out += "\n";
  char buf[256];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g", p.rate, p.value,
                  p.rho_star, p.ro_star);
    out += buf;
    if (with_m) {
      std::snprintf(buf, sizeof buf, ",%d", p.m);
      out += buf;
    }
    if (with_gamma) {
      std::snprintf(buf, sizeof buf, ",%.12g", p.gamma);
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace fel
