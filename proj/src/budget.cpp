#include "onsager/budget.hpp"

#include <algorithm>
#include <cmath>

#include "onsager/error.hpp"

namespace onsager {
namespace {

void check_series(const std::vector<double>& times, const std::vector<double>& kinetic,
                  const std::vector<double>& grad) {
  if (times.size() < 2) throw ValidationError("budget: at least two samples are required");
  if (kinetic.size() != times.size() || grad.size() != times.size()) throw ValidationError("budget: ragged series");
  const bool increasing = times[1] > times[0];
  for (std::size_t n = 1; n < times.size(); ++n) {
    if (increasing ? !(times[n] > times[n - 1]) : !(times[n] < times[n - 1])) {
      throw ValidationError("budget: times must be strictly monotone");
    }
  }
}

std::vector<double> cumulative_trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  std::vector<double> out(t.size(), 0.0);
  for (std::size_t n = 1; n < t.size(); ++n) out[n] = out[n - 1] + 0.5 * (t[n] - t[n - 1]) * (f[n] + f[n - 1]);
  return out;
}

// Linear interpolation of (times, f) at s; times increasing.
double interpolate(const std::vector<double>& times, const std::vector<double>& f, double s) {
  auto it = std::lower_bound(times.begin(), times.end(), s);
  const std::size_t hi = static_cast<std::size_t>(it - times.begin());
  if (hi < times.size() && times[hi] == s) return f[hi];
  const std::size_t lo = hi - 1;
  const double w = (s - times[lo]) / (times[hi] - times[lo]);
  return (1.0 - w) * f[lo] + w * f[hi];
}

// ∫_a^b f dt by the trapezoid rule on the samples, with linear interpolation
// at non-sample end points.
double integral(const std::vector<double>& times, const std::vector<double>& f, double a, double b) {
  std::vector<double> t{a}, v{interpolate(times, f, a)};
  for (std::size_t n = 0; n < times.size(); ++n) {
    if (times[n] > a && times[n] < b) {
      t.push_back(times[n]);
      v.push_back(f[n]);
    }
  }
  t.push_back(b);
  v.push_back(interpolate(times, f, b));
  return cumulative_trapezoid(t, v).back();
}

}  // namespace

EnergyBudget audit_series(const std::vector<double>& times, const std::vector<double>& kinetic,
                          const std::vector<double>& grad_norm_sq, double nu, const BudgetOptions& options) {
  check_series(times, kinetic, grad_norm_sq);
  EnergyBudget b;
  b.nu = nu;
  b.tolerance = options.tolerance;
  b.source = "series";
  b.times = times;
  b.kinetic = kinetic;
  b.dissip_cum = cumulative_trapezoid(times, grad_norm_sq);
  for (double& d : b.dissip_cum) d *= nu;
  const double k0 = kinetic.front();
  b.min_relative = 0.0;
  for (std::size_t n = 0; n < times.size(); ++n) {
    const double r = k0 - kinetic[n] - b.dissip_cum[n];
    b.residual.push_back(r);
    const double rel = k0 > 0.0 ? r / k0 : r;
    b.relative_residual.push_back(rel);
    b.max_abs_relative = std::max(b.max_abs_relative, std::abs(rel));
    b.min_relative = std::min(b.min_relative, rel);
  }
  b.resolved = b.max_abs_relative <= options.tolerance;
  b.sign_verdict = b.min_relative >= 0.0 ? "ok" : (b.min_relative >= -options.tolerance ? "numerical" : "under-resolved");
  return b;
}

EnergyBudget audit(const Trajectory& traj, const BudgetOptions& options) {
  const double nu = traj.config.nu;
  std::vector<double> st, sk, sg;
  for (const Snapshot& s : traj.snapshots) {
    st.push_back(s.t);
    sk.push_back(energy(s.field));
    sg.push_back(grad_norm_sq(s.field));
  }
  if (traj.log.size() >= 2) {
    std::vector<double> t, k, g;
    for (const StepRecord& r : traj.log) {
      t.push_back(r.t);
      k.push_back(r.energy);
      g.push_back(r.grad_norm_sq);
    }
    EnergyBudget b = audit_series(t, k, g, nu, options);
    b.source = "step-log";
    if (st.size() >= 2) {
      const EnergyBudget snap = audit_series(st, sk, sg, nu, options);
      b.snapshot_log_gap = 0.0;
      for (std::size_t n = 0; n < st.size(); ++n) {
        b.snapshot_log_gap =
            std::max(b.snapshot_log_gap, std::abs(snap.dissip_cum[n] - interpolate(b.times, b.dissip_cum, st[n])));
      }
    }
    return b;
  }
  EnergyBudget b = audit_series(st, sk, sg, nu, options);
  b.source = "snapshots";
  return b;
}

InitialTimeTable initial_time_limit(const std::vector<double>& times, const std::vector<double>& kinetic,
                                    const std::vector<double>& grad_norm_sq, double nu,
                                    const std::vector<double>& s_list, double t, double noise_floor) {
  check_series(times, kinetic, grad_norm_sq);
  if (!(times[1] > times[0])) throw ValidationError("initial_time_limit: times must increase");
  if (s_list.empty()) throw ValidationError("initial_time_limit: s_list is empty");
  if (!(t > times.front() && t <= times.back())) throw ValidationError("initial_time_limit: t outside the data range");
  for (std::size_t m = 0; m < s_list.size(); ++m) {
    if (s_list[m] < times.front()) throw ValidationError("initial_time_limit: s below the data range");
    if (!(s_list[m] < t)) throw ValidationError("initial_time_limit: s must precede t");
    if (m > 0 && !(s_list[m] < s_list[m - 1])) throw ValidationError("initial_time_limit: s_list must decrease");
  }
  const double k0 = kinetic.front();
  const double scale = k0 > 0.0 ? k0 : 1.0;
  auto residual = [&](double s) {
    return (interpolate(times, kinetic, s) - interpolate(times, kinetic, t) - nu * integral(times, grad_norm_sq, s, t)) /
           scale;
  };
  InitialTimeTable table;
  table.t = t;
  table.noise_floor = noise_floor;
  table.reference = residual(times.front());
  table.monotone = true;
  for (double s : s_list) {
    InitialTimeRow row{s, residual(s), 0.0};
    row.deviation = std::abs(row.residual - table.reference);
    if (!table.rows.empty() && row.deviation > table.rows.back().deviation + noise_floor) table.monotone = false;
    table.rows.push_back(row);
  }
  return table;
}

InitialTimeTable initial_time_limit(const Trajectory& traj, const std::vector<double>& s_list, double t,
                                    double noise_floor) {
  std::vector<double> times, k, g;
  if (traj.log.size() >= 2) {
    for (const StepRecord& r : traj.log) {
      times.push_back(r.t);
      k.push_back(r.energy);
      g.push_back(r.grad_norm_sq);
    }
  } else {
    for (const Snapshot& s : traj.snapshots) {
      times.push_back(s.t);
      k.push_back(energy(s.field));
      g.push_back(grad_norm_sq(s.field));
    }
  }
  return initial_time_limit(times, k, g, traj.config.nu, s_list, t, noise_floor);
}

}  // namespace onsager
