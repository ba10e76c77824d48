#pragma once

#include <string>
#include <vector>

#include "channel.hpp"

namespace fel {

// Grid-search + local-refinement settings for the exponent optimizers.
struct OptimizerGrid {
  int rho_steps = 128;     // >= 64; grid covers rho in [0, 1]
  int ro_steps = 128;      // >= 64; grid covers ro in [R/C_F, 1]
  int refine_rounds = 2;   // >= 1
  double tol = 1e-6;
  void validate() const;
};

// An exponent value with its argmax witnesses.
struct ExponentPoint {
  Nats rate = 0;
  Nats value = 0;
  double rho_star = 0;
  double ro_star = 1;
  InputDist px;
  double gamma = 0;  // set by the normalized-rate ops
  int m = 0;         // set by multilevel_exponent
};

// Grids for the numeric min-max verifier of the one-level exponent.
struct SaddleConfig {
  int z0_steps = 20;     // z0 grid on [0, 1]
  int gamma_steps = 20;  // gamma grid on (0, 1), endpoints excluded
  int s_steps = 64;      // s grid on [0, s_max]
  double s_max = 0;      // <= 0 selects 4 * E0(1, px)
};

struct SaddleResult {
  Nats value = 0;            // locally refined min-max value
  double z0_star = 0;        // grid-level argmin (one-grid-step semantics)
  double gamma_star = 0;
  double z0_refined = 0;
  double gamma_refined = 0;
  double s_star = 0;         // inner argmax at the grid argmin cell
  bool s_star_at_ez = false; // s* coincides with E_z(z0) or E_z(z2)
  Nats grid_value = 0;       // min over the raw grid, before refinement
};

// max_rho (-rho R + E0(rho, px)) at a fixed input distribution.
ExponentPoint random_coding_exponent(Nats rate, const Channel& ch,
                                     const InputDist& px,
                                     const OptimizerGrid& grid = {});

// Same with the input distribution optimized (uniform fast path when the
// channel is symmetric, multi-start projected ascent otherwise).
ExponentPoint random_fountain_exponent(Nats rate, const Channel& ch,
                                       const OptimizerGrid& grid = {});

// One-level concatenated exponent:
// max over (px, ro in [R/C_F,1], rho) of
//   (1-ro) * (-rho R/ro + E0 [1 - (1+ro)/2 E0]).
ExponentPoint one_level_exponent(Nats rate, const Channel& ch,
                                 const OptimizerGrid& grid = {});

// Lower-bound variant: bracket [1 - E0] replaces [1 - (1+ro)/2 E0].
ExponentPoint one_level_lower_bound(Nats rate, const Channel& ch,
                                    const OptimizerGrid& grid = {});

// Classical one-level concatenation (no fountain penalty bracket);
// the comparison upper curve.
ExponentPoint forney_exponent(Nats rate, const Channel& ch,
                              const OptimizerGrid& grid = {});

// m-level exponent: harmonic-mean form over the penalized inner exponent.
ExponentPoint multilevel_exponent(Nats rate, const Channel& ch, int m,
                                  const OptimizerGrid& grid = {});

// m -> infinity limit: (R/ro - R) / integral of 1/E(x) dx on (0, R/ro),
// composite midpoint rule with quad_steps >= 256 subintervals.
ExponentPoint infinite_level_exponent(Nats rate, const Channel& ch,
                                      const OptimizerGrid& grid = {},
                                      int quad_steps = 1024);

// Same integral form without the fountain penalty bracket; emitted only as
// the classical multilevel comparison curve, not as ground truth.
ExponentPoint classical_infinite_level_exponent(Nats rate, const Channel& ch,
                                                const OptimizerGrid& grid = {},
                                                int quad_steps = 1024);

// One-level objective at fixed input distribution and fixed outer rate:
// (1-ro) * max_rho (-rho R/ro + E0 [1 - (1+ro)/2 E0]).
ExponentPoint one_level_objective(Nats rate, const Channel& ch,
                                  const InputDist& px, double ro,
                                  const OptimizerGrid& grid = {});

// Adjusted exponent E_z(z) = max_rho (-rho x + z E0(rho)), clamped at 0,
// with x the per-inner-code rate R/ro.
Nats adjusted_exponent(double z, Nats rate_over_ro, const Channel& ch,
                       const InputDist& px, const OptimizerGrid& grid = {});

// Three-branch Chernoff weight function keyed on E_z(z) versus s/2 and s.
double gmd_phi(double z, double s, Nats rate_over_ro, double ro,
               const Channel& ch, const InputDist& px,
               const OptimizerGrid& grid = {});

// Numeric min over (z0, gamma) of max over s of the two-point-density
// program, quadratic length penalty included. Verifier for the closed form.
SaddleResult one_level_saddle(Nats rate, const Channel& ch, const InputDist& px,
                              double ro, const SaddleConfig& sconf = {},
                              const OptimizerGrid& grid = {});

// Closed-form minimizing z0 = 1 - (1+ro) E0, valid while (1+ro) E0 <= 1.
double closed_form_saddle_z0(double ro, Nats e0);

// Channel-independent outer rate (sqrt(g^2+8g) - g)/2.
double suboptimal_outer_rate(double gamma);

// One-level exponent at normalized rate gamma = R / I(px), fixed outer rate.
ExponentPoint one_level_exponent_at_gamma(double gamma, const Channel& ch,
                                          const InputDist& px, double ro,
                                          const OptimizerGrid& grid = {});

// ... maximized over ro in [gamma, 1].
ExponentPoint one_level_gamma_optimal(double gamma, const Channel& ch,
                                      const InputDist& px,
                                      const OptimizerGrid& grid = {});

// ... at the channel-independent suboptimal outer rate.
ExponentPoint one_level_suboptimal_ro(double gamma, const Channel& ch,
                                      const InputDist& px,
                                      const OptimizerGrid& grid = {});

enum class CurveKind {
  EFr,       // random fountain
  EFc,       // one-level concatenated
  EFcTilde,  // one-level lower bound
  Ec,        // classical one-level comparison
  EFcM,      // m-level
  EFcInf,    // infinite-level
  EcInf,     // classical infinite-level comparison
  EFcGamma,  // optimal-ro curve over normalized rate gamma
  EFcs,      // suboptimal-ro curve over gamma
};

// Evaluate one curve over xs (rates in nats, or gammas for the gamma kinds).
// Points are independent; evaluation is parallel over xs when threads > 1
// and deterministic regardless of thread count.
std::vector<ExponentPoint> evaluate_curve(const Channel& ch, CurveKind kind,
                                          const std::vector<double>& xs, int m,
                                          const OptimizerGrid& grid = {},
                                          int quad_steps = 1024,
                                          int threads = 1);

// CSV with header "rate_nats,exponent_nats,rho_star,ro_star" (",m" appended
// for the multilevel kind, ",gamma" for the gamma kinds), one row per point,
// 12 significant digits.
std::string curve_csv(const std::vector<ExponentPoint>& points, CurveKind kind);

}  // namespace fel
