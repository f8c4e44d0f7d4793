#pragma once

#include <string>
#include <vector>

#include "onsager/solver.hpp"

namespace onsager {

struct BudgetOptions {
  /// Relative tolerance for a resolved run; echoed into every report.
  double tolerance = 1e-6;
};

struct EnergyBudget {
  double nu = 0.0;
  double tolerance = 0.0;
  std::string source;  ///< "step-log" or "snapshots"
  std::vector<double> times;
  std::vector<double> kinetic;     ///< ½‖v(t)‖²
  std::vector<double> dissip_cum;  ///< ν ∫ ‖∇v‖² from the first time
  std::vector<double> residual;    ///< kinetic(0) - kinetic(t) - dissip_cum
  std::vector<double> relative_residual;
  double max_abs_relative = 0.0;
  double min_relative = 0.0;
  bool resolved = false;  ///< every |relative_residual| <= tolerance
  /// "ok" (no negative residual), "numerical" (negative within tolerance),
  /// or "under-resolved" (negative beyond tolerance).
  std::string sign_verdict;
  /// Largest |dissip_cum(snapshots) - dissip_cum(step log)| at snapshot
  /// times; negative when only one source is available.
  double snapshot_log_gap = -1.0;
};

/// Budget of a sampled history (strictly increasing or strictly decreasing
/// times, at least two samples) with trapezoid time integration.
EnergyBudget audit_series(const std::vector<double>& times, const std::vector<double>& kinetic,
                          const std::vector<double>& grad_norm_sq, double nu, const BudgetOptions& options = {});

/// Uses the per-step log when present, otherwise the snapshots.
EnergyBudget audit(const Trajectory& traj, const BudgetOptions& options = {});

struct InitialTimeRow {
  double s = 0.0;
  double residual = 0.0;   ///< [K(s) - K(t) - ν∫_s^t ‖∇v‖²] / K(first)
  double deviation = 0.0;  ///< |residual - reference|
};

struct InitialTimeTable {
  double t = 0.0;
  double reference = 0.0;  ///< relative residual over the full interval
  double noise_floor = 1e-8;
  std::vector<InitialTimeRow> rows;
  bool monotone = false;  ///< deviations non-increasing within the noise floor
};

/// Residuals over [s, t] along a decreasing sequence of s; values between
/// samples are interpolated linearly. Throws ValidationError for s outside
/// the data range or a non-decreasing s sequence.
InitialTimeTable initial_time_limit(const std::vector<double>& times, const std::vector<double>& kinetic,
                                    const std::vector<double>& grad_norm_sq, double nu,
                                    const std::vector<double>& s_list, double t, double noise_floor = 1e-8);
InitialTimeTable initial_time_limit(const Trajectory& traj, const std::vector<double>& s_list, double t,
                                    double noise_floor = 1e-8);

}  // namespace onsager
