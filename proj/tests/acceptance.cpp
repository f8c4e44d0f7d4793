// Acceptance run: one PASS/FAIL line per criterion, tolerances fixed below.
// Exit status is the number of failing criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "onsager/budget.hpp"
#include "onsager/channel.hpp"
#include "onsager/commutator.hpp"
#include "onsager/flux.hpp"
#include "onsager/holder.hpp"
#include "onsager/mollify.hpp"
#include "onsager/quadrature.hpp"
#include "onsager/solver.hpp"
#include "onsager/synthesis.hpp"
#include "support.hpp"

using namespace onsager;

namespace {

constexpr double kIdentityRel = 1e-8;
constexpr double kSmoothRel = 1e-10;
constexpr double kIdentitySeconds = 120.0;

constexpr double kLemmaRatio = 1.1;
constexpr double kGradSlack = 0.1;
constexpr double kMollifierSeconds = 300.0;

constexpr double kDecaySlope = 0.5;

constexpr double kSingleModeRel = 1e-6;
constexpr double kTaylorGreenRel = 1e-4;
constexpr double kRefinementFactor = 4.0;
constexpr double kInviscidRel = 1e-6;
constexpr double kBudgetSeconds = 600.0;

constexpr double kNoiseFloor = 1e-8;

constexpr double kDivergence = 1e-10;
constexpr double kSeedSpread = 0.3;
constexpr double kChannelSeconds = 300.0;

constexpr double kConvolution = 1e-6;
constexpr double kRoll = 1e-12;
constexpr double kRefinement = 1e-6;

constexpr double kScaling = 1e-15;

const std::vector<double> kDyadic6{0.25, 0.125, 0.0625, 0.03125, 0.015625};
const std::vector<double> kDyadic5{0.25, 0.125, 0.0625, 0.03125};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

GridField synth(double alpha, std::uint64_t seed, Dims d, int k_max = 0) {
  SynthesisSpec s;
  s.target_alpha = alpha;
  s.seed = seed;
  s.k_max = k_max;
  return synthesize_holder_field(s, d);
}

SolverConfig solver(double nu, double dt, double t_end, int n) {
  SolverConfig c;
  c.nu = nu;
  c.dt = dt;
  c.t_end = t_end;
  c.dims = {n, n, n};
  c.snapshot_stride = 1 << 20;
  return c;
}

int failures = 0;

void report(int id, const char* name, bool ok, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", ok ? "PASS" : "FAIL", id, name, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Decomposition identity over random fields, quadrature and spectral routes.
void identity_suite() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> alpha(0.15, 0.85);
  double worst_res = 0.0, worst_smooth = 0.0;
  int fields = 0;
  for (auto [n, count] : {std::pair{16, 34}, {24, 10}, {32, 6}}) {
    for (int m = 0; m < count; ++m, ++fields) {
      const GridField v = synth(alpha(rng), rng(), {n, n, n});
      for (double eps : {0.1, 0.2, 0.4}) {
        const MollifierKernel k = kernel_for(v, eps);
        FluxOptions quad;
        quad.route = RemainderRoute::kQuadrature;
        for (const FluxTerms& t : {flux_terms(v, k, quad), flux_terms(v, k)}) {
          worst_res = std::max(worst_res, std::abs(t.residual) / t.max_term());
          worst_smooth = std::max(worst_smooth, std::abs(t.pi_smooth) / t.scale);
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  report(1, "identity suite",
         worst_res <= kIdentityRel && worst_smooth <= kSmoothRel && secs <= kIdentitySeconds,
         fmt("%d fields x 3 eps x 2 routes, max residual/max-term %.2e (<= %.0e), max |pi_smooth|/S %.2e (<= %.0e), %.0f s",
             fields, worst_res, kIdentityRel, worst_smooth, kSmoothRel, secs));
}

// 2. Mollifier estimates on synthesized fields.
void mollifier_suite() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst_ratio = 0.0, worst_margin = INFINITY;
  for (double a : {0.3, 0.5, 0.7}) {
    for (std::uint64_t seed : {1, 2, 3}) {
      const ConvEstimateTable t = check_conv_estimates(synth(a, seed, {64, 64, 64}), a, kDyadic6);
      worst_ratio = std::max(worst_ratio, t.max_ratio1);
      worst_margin = std::min(worst_margin, t.grad_slope - (a - 1.0 - kGradSlack));
      ok = ok && t.max_ratio1 <= kLemmaRatio && t.grad_slope >= a - 1.0 - kGradSlack;
    }
  }
  const double secs = seconds_since(t0);
  report(2, "mollifier suite", ok && secs <= kMollifierSeconds,
         fmt("9 fields at 64^3, max ratio1 %.3f (<= %.1f), min grad-slope margin %+.3f, %.0f s", worst_ratio, kLemmaRatio,
             worst_margin, secs));
}

// 3. Flux decay exponent: paired α = 0.6 / α = 0.2 syntheses with the same seeds.
void decay_exponent() {
  const auto t0 = Clock::now();
  const Dims d{128, 128, 128};
  const int seeds = 8;
  std::vector<double> ms_hi(kDyadic6.size()), ms_lo(kDyadic6.size());
  double hi1 = NAN, lo1 = NAN;
  for (int seed = 1; seed <= seeds; ++seed) {
    const FluxSweepReport hi = sweep(synth(0.6, static_cast<std::uint64_t>(seed), d), 0.6, kDyadic6, 2.0);
    const FluxSweepReport lo = sweep(synth(0.2, static_cast<std::uint64_t>(seed), d), 0.2, kDyadic6, 2.0);
    if (seed == 1) {
      hi1 = hi.slopes.total;
      lo1 = lo.slopes.total;
    }
    for (std::size_t i = 0; i < kDyadic6.size(); ++i) {
      ms_hi[i] += hi.rows[i].pi_total * hi.rows[i].pi_total / seeds;
      ms_lo[i] += lo.rows[i].pi_total * lo.rows[i].pi_total / seeds;
    }
  }
  for (auto* v : {&ms_hi, &ms_lo}) {
    for (double& x : *v) x = std::sqrt(x);
  }
  const double rms_hi = asymptotic_slope(kDyadic6, ms_hi), rms_lo = asymptotic_slope(kDyadic6, ms_lo);
  const double gamma = gamma_exponent(0.6, 2.0);
  const bool ok = hi1 >= kDecaySlope && lo1 < hi1 && rms_hi >= kDecaySlope && rms_lo < rms_hi;
  report(3, "decay exponent", ok,
         fmt("128^3, gamma_theory %.2f; seed 1: slope %.3f (>= %.1f) vs alpha=0.2 %.3f; rms over %d seeds: %.3f vs %.3f, "
             "%.0f s",
             gamma, hi1, kDecaySlope, lo1, seeds, rms_hi, rms_lo, seconds_since(t0)));
}

// 4. Admissible splitting exponents at analytic spot values.
void threshold_logic() {
  const double spots[] = {0.05, 0.2, 0.3, 1.0 / 3.0, 0.34, 0.4, 0.5, 0.6, 0.75, 0.9};
  int good = 0;
  for (double a : spots) {
    const EtaInterval iv = admissible_eta(a);
    bool ok;
    if (a <= 1.0 / 3.0) {
      ok = iv.empty;
    } else {
      const double lower = (1.0 - a) / a;
      ok = !iv.empty && iv.lower == lower && iv.upper == 2.0 && !iv.contains(lower) && iv.contains(2.0) &&
           iv.contains(0.5 * (lower + 2.0)) && !iv.contains(2.0 + 1e-12);
    }
    good += ok ? 1 : 0;
  }
  report(4, "threshold logic", good == 10, fmt("%d/10 spot values: empty for alpha <= 1/3, ((1-alpha)/alpha, 2] above", good));
}

// 5. Energy budgets.
void budget_suite() {
  const auto t0 = Clock::now();
  // (a) sin x2 decaying at rate ν, against the closed form
  const double nu_a = 0.1;
  const Trajectory shear = run(shear_mode({16, 16, 16}), solver(nu_a, 0.01, 1.0, 16));
  const EnergyBudget a = audit(shear);
  const double e_ratio = shear.log.back().energy / shear.log.front().energy;
  const double closed = std::abs(e_ratio - std::exp(-2.0 * nu_a)) / std::exp(-2.0 * nu_a);
  const bool ok_a = a.max_abs_relative <= kSingleModeRel && closed <= kSingleModeRel;

  // (b) Taylor–Green, 32^3 then 64^3 with dt ∝ h² (diffusive refinement)
  const EnergyBudget b32 = audit(run(taylor_green({32, 32, 32}), solver(0.05, 1.0 / 32, 2.0, 32)));
  const EnergyBudget b64 = audit(run(taylor_green({64, 64, 64}), solver(0.05, 1.0 / 128, 2.0, 64)));
  const double shrink = b32.max_abs_relative / b64.max_abs_relative;
  const bool ok_b = b32.max_abs_relative <= kTaylorGreenRel && shrink >= kRefinementFactor;

  // (c) inviscid Taylor–Green
  const EnergyBudget c = audit(run(taylor_green({32, 32, 32}), solver(0.0, 0.01, 1.0, 32)));
  const bool ok_c = c.max_abs_relative <= kInviscidRel;

  const double secs = seconds_since(t0);
  report(5, "energy budget", ok_a && ok_b && ok_c && secs <= kBudgetSeconds,
         fmt("(a) single mode %.1e, closed form %.1e (<= %.0e); (b) TG 32^3 %.3e (<= %.0e), 64^3 %.3e, shrink %.2fx "
             "(>= %.0f); (c) inviscid %.1e (<= %.0e); %.0f s",
             a.max_abs_relative, closed, kSingleModeRel, b32.max_abs_relative, kTaylorGreenRel, b64.max_abs_relative,
             shrink, kRefinementFactor, c.max_abs_relative, kInviscidRel, secs));
}

// 6. Residual over [s, t] as s halves towards the initial time.
void initial_time() {
  const double dt = 1.0 / 64;
  const Trajectory traj = run(taylor_green({32, 32, 32}), solver(0.05, dt, 2.0, 32));
  std::vector<double> s;
  for (double x = 1.0; x >= dt; x /= 2) s.push_back(x);
  const InitialTimeTable tab = initial_time_limit(traj, s, 2.0, kNoiseFloor);
  const double first = tab.rows.front().deviation, last = tab.rows.back().deviation;
  const bool ok = tab.monotone && last < first;
  report(6, "initial-time limit", ok,
         fmt("%zu values of s from 1 to 1/64, deviation %.2e -> %.2e from the [0,t] residual %.2e, monotone within %.0e: %s",
             s.size(), first, last, tab.reference, kNoiseFloor, tab.monotone ? "yes" : "no"));
}

// 7. Channel: horizontal mollification lemma and the rough-term ratio.
void channel_suite() {
  const auto t0 = Clock::now();
  const Dims d{64, 64, 33};
  const Modulus omega = Modulus::power(0.3);
  bool lemma_ok = true, bounded = true;
  double worst_lemma = 0.0, worst_div = 0.0, worst_wall = 0.0;
  std::vector<double> constants;
  for (std::uint64_t seed : {1, 2, 3}) {
    SynthesisSpec s;
    s.target_alpha = 0.5;
    s.seed = seed;
    const GridField v = synthesize_channel_field(s, d);
    const double semi = horizontal_seminorm(v, omega).seminorm;
    for (double eps : kDyadic5) {
      const HorizontalLemmaCheck c = check_horizontal_lemma(v, horizontal_kernel_for(v, eps), omega, semi);
      worst_lemma = std::max(worst_lemma, c.ratio);
      worst_div = std::max(worst_div, c.divergence_after);
      worst_wall = std::max(worst_wall, c.wall_max);
      lemma_ok = lemma_ok && c.wall_max == 0.0 && c.divergence_after <= kDivergence && c.ratio <= kLemmaRatio;
    }
    const ChannelFluxReport r = channel_flux_bound(v, omega, kDyadic5);
    for (const ChannelFluxRow& row : r.rows) {
      bounded = bounded && row.rough_ratio <= row.rough_abs_ratio && row.rough_abs_ratio <= r.rough_ratio_bound;
    }
    constants.push_back(r.max_rough_abs_ratio);
  }
  double mean = 0.0;
  for (double c : constants) mean += c / static_cast<double>(constants.size());
  double spread = 0.0;
  for (double c : constants) spread = std::max(spread, std::abs(c - mean) / mean);
  const double secs = seconds_since(t0);
  report(7, "channel suite", lemma_ok && bounded && spread <= kSeedSpread && secs <= kChannelSeconds,
         fmt("64x64x33, omega power:0.3, 3 seeds: walls %.0e, div %.1e (<= %.0e), lemma ratio %.3f (<= %.1f); "
             "rough ratio C = %.3e/%.3e/%.3e, spread %.0f%% (<= %.0f%%), bounded by 2 f_omega: %s; %.0f s",
             worst_wall, worst_div, kDivergence, worst_lemma, kLemmaRatio, constants[0], constants[1], constants[2],
             100 * spread, 100 * kSeedSpread, bounded ? "yes" : "no", secs));
}

// Real-space ∫ ρ_ε(y) u(x - y) dy by Gauss–Legendre in r, cos θ and a uniform φ rule.
std::array<double, 3> convolve_direct(const testsupport::TrigSum& F, const std::array<double, 3>& x, double eps) {
  const GaussRule rr = gauss_legendre(96, 0.0, 1.0);
  const GaussRule ct = gauss_legendre(16, -1.0, 1.0);
  const int nphi = 32;
  double mass = 0.0;
  std::array<double, 3> acc{};
  for (std::size_t a = 0; a < rr.nodes.size(); ++a) {
    const double r = rr.nodes[a];
    const double wr = rr.weights[a] * r * r * testsupport::bump(r);
    for (std::size_t b = 0; b < ct.nodes.size(); ++b) {
      const double c = ct.nodes[b], s = std::sqrt(1.0 - c * c);
      for (int p = 0; p < nphi; ++p) {
        const double phi = kTwoPi * p / nphi;
        const double w = wr * ct.weights[b] * kTwoPi / nphi;
        const auto u = F({x[0] - eps * r * s * std::cos(phi), x[1] - eps * r * s * std::sin(phi), x[2] - eps * r * c});
        for (std::size_t k = 0; k < 3; ++k) acc[k] += w * u[k];
        mass += w;
      }
    }
  }
  for (double& v : acc) v /= mass;
  return acc;
}

// 8. Independent oracles.
void oracles() {
  const Dims d{16, 16, 16};
  // (a) spectral mollification vs real-space convolution of the trigonometric sum
  const GridField u = testsupport::random_solenoidal(21, d, 2);
  const testsupport::TrigSum F(forward_transform(u));
  const GridField m = mollify(u, kernel_for(u, 0.3));
  double conv = 0.0;
  for (int n = 0; n < 12; ++n) {
    const int i = (5 * n) % 16, j = (3 * n + 1) % 16, k = (7 * n + 2) % 16;
    const auto direct = convolve_direct(F, {u.coordinate(0, i), u.coordinate(1, j), u.coordinate(2, k)}, 0.3);
    for (int c = 0; c < 3; ++c) conv = std::max(conv, std::abs(direct[static_cast<std::size_t>(c)] - m.at(c, i, j, k)));
  }

  // (b) phase-shift increment vs array roll
  const GridField r = testsupport::random_field(5, d);
  double roll = 0.0;
  for (std::array<int, 3> s : {std::array<int, 3>{1, 0, 0}, {0, -3, 2}, {5, 7, -4}, {8, 8, 8}}) {
    const std::array<double, 3> y{s[0] * r.spacing(0), s[1] * r.spacing(1), s[2] * r.spacing(2)};
    const GridField expected = testsupport::roll(r, s).axpby(1.0, r, -1.0);
    roll = std::max(roll, testsupport::max_abs_diff(increment(r, y), expected));
  }

  // (c) remainder tensor under quadrature refinement
  double refine = 0.0;
  for (int k_max : {2, 3}) {
    const GridField v = synth(0.5, 7, d, k_max);
    const MollifierKernel k = kernel_for(v, 0.2);
    const TensorField coarse = remainder(v, k, {7, 7, 7});
    const TensorField fine = remainder(v, k, {11, 11, 11});
    double diff = 0.0;
    for (std::size_t p = 0; p < 6; ++p) {
      for (std::size_t x = 0; x < coarse.comps[p].size(); ++x) {
        diff = std::max(diff, std::abs(coarse.comps[p][x] - fine.comps[p][x]));
      }
    }
    refine = std::max(refine, diff / fine.max_abs());
  }
  report(8, "oracle equivalences", conv <= kConvolution && roll <= kRoll && refine <= kRefinement,
         fmt("convolution %.1e (<= %.0e), shift vs roll %.1e (<= %.0e), quadrature 7^3 -> 11^3 %.1e (<= %.0e)", conv,
             kConvolution, roll, kRoll, refine, kRefinement));
}

// 9. Time and space exponents of the critical class.
void scaling_identity() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> a(1e-6, 1.0 - 1e-6);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) worst = std::max(worst, scaling_check(a(rng)).error);
  report(9, "scaling identity", worst <= kScaling, fmt("100 values of alpha, max |lhs - 2| = %.1e (<= %.0e)", worst, kScaling));
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  const std::vector<std::function<void()>> criteria{identity_suite, mollifier_suite, decay_exponent,
                                                    threshold_logic, budget_suite,   initial_time,
                                                    channel_suite,  oracles,         scaling_identity};
  std::vector<bool> selected(criteria.size(), argc == 1);
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (id >= 1 && id <= static_cast<int>(criteria.size())) selected[static_cast<std::size_t>(id - 1)] = true;
  }
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (selected[i]) criteria[i]();
  }
  return failures;
}
