#pragma once

#include <array>
#include <limits>
#include <string>
#include <vector>

#include "onsager/grid_field.hpp"
#include "onsager/kernels.hpp"
#include "onsager/modulus.hpp"

namespace onsager {

/// Sup-increment profile: for every distinct lattice displacement length r,
/// max over displacements of that length of sup_x |u(x+y) - u(x)|.
struct IncrementProfile {
  double max_radius = 0.0;
  bool horizontal_only = false;
  std::vector<double> radius;
  std::vector<double> sup_increment;
};

/// Lattice displacements y with 0 < |y| <= max_radius (one of each ±y pair).
/// horizontal_only restricts to y3 = 0. max_radius <= 0 selects a quarter of
/// the shortest periodic length.
IncrementProfile increment_profile(const GridField& u, double max_radius = 0.0, bool horizontal_only = false,
                                   kernels::Backend backend = kernels::Backend::kParallel);

/// Dyadic shell (r_inner, r_outer] with r_outer = 2^-j · (L/4).
struct HolderShell {
  double r_inner = 0.0;
  double r_outer = 0.0;
  double sup_increment = 0.0;
  /// max over displacements in the shell of increment / (ω(r) r^α)
  double max_ratio = 0.0;
};

struct HolderEstimate {
  double alpha = 0.0;
  std::string modulus = "constant";
  double max_radius = 0.0;
  double seminorm = 0.0;
  double argmax_radius = 0.0;
  std::vector<HolderShell> shells;
  /// Least-squares slope of log(max_ratio) against log(r_outer).
  double ratio_slope = std::numeric_limits<double>::quiet_NaN();
  /// Shell ratios grow as r → 0 faster than the tolerance allows.
  bool diverging = false;
  double divergence_tolerance = 0.1;
  double zeta2 = std::numeric_limits<double>::quiet_NaN();
};

/// [u]_{ω,α} = max_y sup_x |u(x+y) - u(x)| / (ω(|y|)|y|^α) from a profile.
HolderEstimate seminorm_from_profile(const IncrementProfile& profile, double alpha,
                                     const Modulus& omega = Modulus::constant(), double divergence_tolerance = 0.1);

HolderEstimate estimate_seminorm(const GridField& u, double alpha, double max_radius = 0.0,
                                 const Modulus& omega = Modulus::constant());

/// Second-order structure function exponent from the isotropic spectral form
/// S2(r) = 2 Σ_k |û(k)|² (1 - sin(|k|r)/(|k|r)), which equals the average of
/// |u(x+y) - u(x)|² over x and over the sphere |y| = r.
struct StructureFunctionFit {
  std::vector<double> radius;
  std::vector<double> s2;
  double zeta2 = 0.0;
  /// ζ₂ below `rough_threshold`: increments are essentially uncorrelated.
  bool rough = false;
  double rough_threshold = 0.2;
};

/// Fit over quarter-octave radii r = 2^{-j/4} r_max down to r_min. Zero
/// bounds select r_max = L/5 and r_min = 2π/k_top (k_top the highest active
/// wavenumber), falling back to the grid spacing when that leaves fewer than
/// four radii. Throws ValidationError with fewer than four radii.
StructureFunctionFit structure_function(const GridField& u, double r_min = 0.0, double r_max = 0.0);
double estimate_zeta2(const GridField& u);

struct TimeSeminormSeries {
  std::vector<double> times;
  std::vector<double> f_alpha;
  double beta = 1.0;
};

struct ExponentNorm {
  std::string label;
  double beta = 0.0;
  double norm = 0.0;
};

struct TimeIntegrability {
  double beta = 0.0;
  double norm = 0.0;
  double alpha = 0.0;
  double delta = 0.0;
  /// Norms at β = 1/α + δ, 1/α, and 2/(1+α) (the viscous threshold).
  std::array<ExponentNorm, 3> thresholds;
};

/// (∫ f^β dt)^{1/β} by the trapezoid rule on the sampled times.
double lebesgue_time_norm(const std::vector<double>& times, const std::vector<double>& f, double beta);
TimeIntegrability time_integrability(const TimeSeminormSeries& series, double alpha, double delta = 0.1);

/// The half-open interval ((1-α)/α, 2] of splitting exponents η with
/// γ = αη + α - 1 > 0; empty exactly when α <= 1/3.
struct EtaInterval {
  double lower = 0.0;
  double upper = 2.0;
  bool empty = true;
  bool contains(double eta) const { return !empty && eta > lower && eta <= upper; }
};

/// Accepts α in (0, 1]; throws ValidationError otherwise.
EtaInterval admissible_eta(double alpha);
double gamma_exponent(double alpha, double eta);

}  // namespace onsager
