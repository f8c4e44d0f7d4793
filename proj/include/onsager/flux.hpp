#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "onsager/commutator.hpp"
#include "onsager/modulus.hpp"
#include "onsager/solver.hpp"

namespace onsager {

struct SweepOptions {
  FluxOptions flux;
  /// Conserving verdict needs terminal |pi_total| / S at or below this.
  double floor_rel = 1e-3;
  /// ... and a fitted |pi_total| slope above this.
  double slope_threshold = 0.0;
  /// Magnitudes below this are left out of log fits.
  double clamp = 1e-13;
  /// sweep_omega: the ratio series counts as bounded when its fitted slope
  /// is at least -ratio_tolerance.
  double ratio_tolerance = 0.1;
};

struct FittedSlopes {
  double total = std::numeric_limits<double>::quiet_NaN();
  double remainder = std::numeric_limits<double>::quiet_NaN();
  double rough = std::numeric_limits<double>::quiet_NaN();
  int points = 0;  ///< ε values in the asymptotic window
};

struct Verdict {
  bool conserving = false;
  bool slope_positive = false;
  bool below_floor = false;
  bool fit_skipped = false;  ///< every |pi_total| in the window was below the clamp
  double slope_threshold = 0.0;
  double floor_rel = 0.0;
  double terminal_rel = 0.0;
};

struct FluxSweepReport {
  double alpha = 0.0;
  double eta = 0.0;
  double gamma_theory = 0.0;
  bool eta_forced = false;
  std::vector<std::string> warnings;
  std::string modulus = "constant";
  /// ‖v‖²‖∇v‖/|Ω|^{1/2} (time-averaged for series sweeps)
  double scale = 0.0;
  std::vector<FluxTerms> rows;  ///< decreasing ε
  FittedSlopes slopes;
  Verdict verdict;
  /// sweep_omega only: |pi_total| / (ω(ε)^{1+η} ε^γ) per row.
  std::vector<double> omega_ratio;
  double omega_ratio_slope = std::numeric_limits<double>::quiet_NaN();
  bool omega_ratio_bounded = true;
  double ratio_tolerance = 0.0;
};

/// Log-log slope of |values| against ε over the smallest max(4, ⌈n/2⌉) ε's,
/// weighted by 1/ε; NaN when fewer than two magnitudes exceed `clamp`.
double asymptotic_slope(const std::vector<double>& eps, const std::vector<double>& values, double clamp = 1e-13);

/// Flux terms for every ε (at least four), slopes of |pi_total|,
/// |pi_remainder|, |pi_rough|, and the verdict. For α > 1/3, η must lie in
/// admissible_eta(α); for α <= 1/3 any η is accepted with a warning.
FluxSweepReport sweep(const GridField& v, double alpha, const std::vector<double>& eps_list, double eta,
                      const SweepOptions& options = {});

/// Time-series form: each term's magnitude is integrated over the snapshots
/// with the trapezoid rule before fitting.
FluxSweepReport sweep_series(const std::vector<Snapshot>& snapshots, double alpha, const std::vector<double>& eps_list,
                             double eta, const SweepOptions& options = {});

/// η = (1-α)/α for α in [1/3, 1]; reports |pi_total| / (ω(ε)^{1+η} ε^γ).
FluxSweepReport sweep_omega(const GridField& v, double alpha, const Modulus& omega,
                            const std::vector<double>& eps_list, const SweepOptions& options = {});

struct ScalingReport {
  double alpha = 0.0;
  double time_exponent = 0.0;   ///< 2/(1+α)
  double space_exponent = 0.0;  ///< 3/(1-α), the W^{1,p} comparison exponent
  double time_term = 0.0;       ///< 2 / (2/(1+α))
  double space_term = 0.0;      ///< 3 / (3/(1-α))
  double lhs = 0.0;
  double error = 0.0;  ///< |lhs - 2|
};

ScalingReport scaling_check(double alpha);

/// One row per ε with all four terms; `geometry` fills an extra column.
void write_flux_csv(std::ostream& out, const FluxSweepReport& report, const std::string& geometry = "periodic3");

}  // namespace onsager
