#include "onsager/flux.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "onsager/csv.hpp"
#include "onsager/error.hpp"
#include "onsager/fit.hpp"
#include "onsager/holder.hpp"
#include "onsager/mollify.hpp"

namespace onsager {
namespace {

std::vector<double> sorted_eps(const std::vector<double>& eps_list) {
  if (eps_list.size() < 4) throw ValidationError("flux sweep needs at least four epsilon values");
  std::vector<double> eps = eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  if (std::adjacent_find(eps.begin(), eps.end()) != eps.end()) throw ValidationError("flux sweep: repeated epsilon");
  return eps;
}

double natural_scale(const GridField& v) {
  const double volume = v.lengths()[0] * v.lengths()[1] * v.lengths()[2];
  return 2.0 * energy(v) * std::sqrt(grad_norm_sq(v)) / std::sqrt(volume);
}

void check_eta(FluxSweepReport& r, double alpha, double eta) {
  const EtaInterval iv = admissible_eta(alpha);
  if (!iv.empty) {
    if (!iv.contains(eta)) throw ValidationError("eta lies outside the admissible interval ((1-alpha)/alpha, 2]");
  } else {
    r.eta_forced = true;
    r.warnings.push_back("alpha <= 1/3: no admissible eta, the forced choice is not expected to give decay");
  }
  r.alpha = alpha;
  r.eta = eta;
  r.gamma_theory = gamma_exponent(alpha, eta);
}

void finish(FluxSweepReport& r, const SweepOptions& options) {
  std::vector<double> eps, total, rem, rough;
  for (const FluxTerms& t : r.rows) {
    eps.push_back(t.epsilon);
    total.push_back(t.pi_total);
    rem.push_back(t.pi_remainder);
    rough.push_back(t.pi_rough);
  }
  r.slopes.points = std::max(4, static_cast<int>((eps.size() + 1) / 2));
  r.slopes.total = asymptotic_slope(eps, total, options.clamp);
  r.slopes.remainder = asymptotic_slope(eps, rem, options.clamp);
  r.slopes.rough = asymptotic_slope(eps, rough, options.clamp);

  Verdict& v = r.verdict;
  v.slope_threshold = options.slope_threshold;
  v.floor_rel = options.floor_rel;
  v.terminal_rel = r.scale > 0.0 ? std::abs(r.rows.back().pi_total) / r.scale : 0.0;
  v.fit_skipped = std::isnan(r.slopes.total);
  v.slope_positive = v.fit_skipped || r.slopes.total > options.slope_threshold;
  v.below_floor = v.terminal_rel <= options.floor_rel;
  v.conserving = v.slope_positive && v.below_floor;
}

}  // namespace

double asymptotic_slope(const std::vector<double>& eps, const std::vector<double>& values, double clamp) {
  std::vector<std::size_t> order(eps.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return eps[a] < eps[b]; });
  const std::size_t window = std::min(eps.size(), std::max<std::size_t>(4, (eps.size() + 1) / 2));
  std::vector<double> x, y, w;
  for (std::size_t n = 0; n < window; ++n) {
    const std::size_t i = order[n];
    const double mag = std::abs(values[i]);
    if (!(mag > clamp)) continue;
    x.push_back(std::log(eps[i]));
    y.push_back(std::log(mag));
    w.push_back(1.0 / eps[i]);
  }
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return fit::weighted_line(x, y, w).slope;
}

FluxSweepReport sweep(const GridField& v, double alpha, const std::vector<double>& eps_list, double eta,
                      const SweepOptions& options) {
  FluxSweepReport r;
  check_eta(r, alpha, eta);
  r.scale = natural_scale(v);
  for (double e : sorted_eps(eps_list)) r.rows.push_back(flux_terms(v, kernel_for(v, e), options.flux));
  finish(r, options);
  return r;
}

FluxSweepReport sweep_series(const std::vector<Snapshot>& snapshots, double alpha, const std::vector<double>& eps_list,
                             double eta, const SweepOptions& options) {
  if (snapshots.size() < 2) throw ValidationError("series sweep needs at least two snapshots");
  for (std::size_t n = 1; n < snapshots.size(); ++n) {
    if (!(snapshots[n].t > snapshots[n - 1].t)) throw ValidationError("series sweep: snapshot times must increase");
  }
  FluxSweepReport r;
  check_eta(r, alpha, eta);
  const double span = snapshots.back().t - snapshots.front().t;
  std::vector<double> scales;
  for (const Snapshot& s : snapshots) scales.push_back(natural_scale(s.field));
  for (std::size_t n = 1; n < snapshots.size(); ++n) {
    r.scale += 0.5 * (snapshots[n].t - snapshots[n - 1].t) * (scales[n] + scales[n - 1]) / span;
  }
  for (double e : sorted_eps(eps_list)) {
    std::vector<FluxTerms> per;
    for (const Snapshot& s : snapshots) per.push_back(flux_terms(s.field, kernel_for(s.field, e), options.flux));
    FluxTerms acc;
    acc.epsilon = e;
    acc.route = per.front().route;
    acc.work_dims = per.front().work_dims;
    for (std::size_t n = 1; n < per.size(); ++n) {
      const double h = 0.5 * (snapshots[n].t - snapshots[n - 1].t);
      acc.pi_total += h * (std::abs(per[n].pi_total) + std::abs(per[n - 1].pi_total));
      acc.pi_smooth += h * (std::abs(per[n].pi_smooth) + std::abs(per[n - 1].pi_smooth));
      acc.pi_remainder += h * (std::abs(per[n].pi_remainder) + std::abs(per[n - 1].pi_remainder));
      acc.pi_rough += h * (std::abs(per[n].pi_rough) + std::abs(per[n - 1].pi_rough));
    }
    for (const FluxTerms& t : per) acc.residual = std::max(acc.residual, std::abs(t.residual));
    acc.scale = r.scale;
    r.rows.push_back(acc);
  }
  // Time integrals are compared against the time-integrated scale.
  r.scale *= span;
  finish(r, options);
  return r;
}

FluxSweepReport sweep_omega(const GridField& v, double alpha, const Modulus& omega,
                            const std::vector<double>& eps_list, const SweepOptions& options) {
  if (!(3.0 * alpha >= 1.0 && alpha <= 1.0)) throw ValidationError("sweep_omega needs alpha in [1/3, 1]");
  const double eta = (1.0 - alpha) / alpha;
  FluxSweepReport r;
  r.alpha = alpha;
  r.eta = eta;
  r.gamma_theory = gamma_exponent(alpha, eta);
  r.modulus = omega.name();
  r.ratio_tolerance = options.ratio_tolerance;
  r.scale = natural_scale(v);
  for (double e : sorted_eps(eps_list)) r.rows.push_back(flux_terms(v, kernel_for(v, e), options.flux));
  finish(r, options);

  std::vector<double> eps;
  for (const FluxTerms& t : r.rows) {
    eps.push_back(t.epsilon);
    const double rate = std::pow(omega(t.epsilon), 1.0 + eta) * std::pow(t.epsilon, r.gamma_theory);
    r.omega_ratio.push_back(std::abs(t.pi_total) / rate);
  }
  // The ratio inherits the clamp of the flux it is built from.
  std::vector<double> masked = r.omega_ratio;
  for (std::size_t i = 0; i < masked.size(); ++i) {
    if (!(std::abs(r.rows[i].pi_total) > options.clamp)) masked[i] = 0.0;
  }
  r.omega_ratio_slope = asymptotic_slope(eps, masked, 0.0);
  r.omega_ratio_bounded = std::isnan(r.omega_ratio_slope) || r.omega_ratio_slope >= -options.ratio_tolerance;
  return r;
}

ScalingReport scaling_check(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("scaling_check needs alpha in (0,1)");
  const long double a = alpha;
  const long double p = 2.0L / (1.0L + a);
  const long double q = 3.0L / (1.0L - a);
  const long double t = 2.0L / p;
  const long double s = 3.0L / q;
  ScalingReport r;
  r.alpha = alpha;
  r.time_exponent = static_cast<double>(p);
  r.space_exponent = static_cast<double>(q);
  r.time_term = static_cast<double>(t);
  r.space_term = static_cast<double>(s);
  r.lhs = static_cast<double>(t + s);
  r.error = std::abs(r.lhs - 2.0);
  return r;
}

void write_flux_csv(std::ostream& out, const FluxSweepReport& report, const std::string& geometry) {
  csv::Writer w(out, {"geometry", "eps", "pi_total", "pi_smooth", "pi_remainder", "pi_rough", "residual", "route",
                      "quadrature_nodes"});
  for (const FluxTerms& t : report.rows) {
    w.row({geometry, csv::Writer::format(t.epsilon), csv::Writer::format(t.pi_total), csv::Writer::format(t.pi_smooth),
           csv::Writer::format(t.pi_remainder), csv::Writer::format(t.pi_rough), csv::Writer::format(t.residual),
           t.route, std::to_string(t.quadrature_nodes)});
  }
}

}  // namespace onsager
