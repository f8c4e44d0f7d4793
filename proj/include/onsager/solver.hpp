#pragma once

#include <string>
#include <vector>

#include "onsager/grid_field.hpp"
#include "onsager/spectral.hpp"

namespace onsager {

struct SolverConfig {
  double nu = 0.0;  ///< 0 selects the Euler equations
  double dt = 1e-3;
  double t_end = 1.0;
  Dims dims{32, 32, 32};
  bool dealias = true;
  int snapshot_stride = 1;
  double cfl_limit = 0.5;

  /// Throws ValidationError; t_end must be a whole number of steps.
  void validate() const;
  long steps() const;
};

struct Snapshot {
  double t = 0.0;
  GridField field;
};

struct StepRecord {
  double t = 0.0;
  double energy = 0.0;         ///< ½‖v‖²
  double grad_norm_sq = 0.0;   ///< ‖∇v‖²
};

struct Trajectory {
  SolverConfig config;
  std::vector<Snapshot> snapshots;
  std::vector<StepRecord> log;
  std::vector<std::string> notes;
};

/// -P[∇·(v⊗v)], with the two-thirds truncation applied when `dealias`.
SpectralField nonlinear_term(const SpectralField& v, bool dealias);

/// One integrating-factor RK4 step of dv/dt = -P[(v·∇)v] - ν|k|²v.
/// Throws CflError carrying `step_index` when dt·max|v|/h exceeds the limit.
SpectralField step(const SpectralField& v, const SolverConfig& config, long step_index = 0);

/// Integrates from v0 (projected onto zero-mean divergence-free fields, with
/// a note, if needed), recording snapshots every `snapshot_stride` steps and
/// energy/enstrophy after every step.
Trajectory run(const GridField& v0, const SolverConfig& config);

/// (sin x1 cos x2 cos x3, -cos x1 sin x2 cos x3, 0)
GridField taylor_green(Dims dims);
/// (sin x2, 0, 0)
GridField shear_mode(Dims dims);

}  // namespace onsager
