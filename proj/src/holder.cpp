#include "onsager/holder.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "onsager/error.hpp"
#include "onsager/fit.hpp"
#include "onsager/spectral.hpp"

namespace onsager {
namespace {

double quarter_period(const GridField& u, bool horizontal_only) {
  const int axes = (horizontal_only || u.geometry() == Geometry::kChannel) ? 2 : 3;
  double q = u.lengths()[0];
  for (int a = 1; a < axes; ++a) q = std::min(q, u.lengths()[static_cast<std::size_t>(a)]);
  return q / 4.0;
}

}  // namespace

IncrementProfile increment_profile(const GridField& u, double max_radius, bool horizontal_only,
                                   kernels::Backend backend) {
  if (u.geometry() == Geometry::kChannel) horizontal_only = true;
  const double quarter = quarter_period(u, horizontal_only);
  if (max_radius <= 0.0) max_radius = quarter;
  if (max_radius > quarter * (1.0 + 1e-12)) throw ValidationError("max_radius exceeds a quarter period");

  const double h1 = u.spacing(0), h2 = u.spacing(1), h3 = u.spacing(2);
  const int a_max = static_cast<int>(std::floor(max_radius / h1 + 1e-9));
  const int b_max = static_cast<int>(std::floor(max_radius / h2 + 1e-9));
  const int c_max = horizontal_only ? 0 : static_cast<int>(std::floor(max_radius / h3 + 1e-9));
  const double limit_sq = max_radius * max_radius * (1.0 + 1e-12);

  std::vector<std::array<int, 3>> shifts;
  std::vector<double> radii;
  for (int c = 0; c <= c_max; ++c) {
    for (int b = (c == 0 ? 0 : -b_max); b <= b_max; ++b) {
      for (int a = (c == 0 && b == 0 ? 1 : -a_max); a <= a_max; ++a) {
        const double r2 = (a * h1) * (a * h1) + (b * h2) * (b * h2) + (c * h3) * (c * h3);
        if (r2 > limit_sq) continue;
        shifts.push_back({a, b, c});
        radii.push_back(std::sqrt(r2));
      }
    }
  }
  const std::vector<double> sups = kernels::sup_increments(kernels::view(u), u.dims(), shifts, backend);

  std::vector<std::size_t> order(radii.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return radii[x] < radii[y]; });

  IncrementProfile profile;
  profile.max_radius = max_radius;
  profile.horizontal_only = horizontal_only;
  for (std::size_t idx : order) {
    const double r = radii[idx];
    if (!profile.radius.empty() && std::abs(profile.radius.back() - r) <= 1e-12 * r) {
      profile.sup_increment.back() = std::max(profile.sup_increment.back(), sups[idx]);
    } else {
      profile.radius.push_back(r);
      profile.sup_increment.push_back(sups[idx]);
    }
  }
  return profile;
}

HolderEstimate seminorm_from_profile(const IncrementProfile& profile, double alpha, const Modulus& omega,
                                     double divergence_tolerance) {
  HolderEstimate est;
  est.alpha = alpha;
  est.modulus = omega.name();
  est.max_radius = profile.max_radius;
  est.divergence_tolerance = divergence_tolerance;
  if (profile.radius.empty()) return est;

  // Shell j holds radii in (R 2^{-j-1}, R 2^{-j}], R = profile.max_radius.
  const double base = profile.max_radius;
  std::map<int, HolderShell> shells;
  for (std::size_t n = 0; n < profile.radius.size(); ++n) {
    const double r = profile.radius[n];
    const double ratio = profile.sup_increment[n] / (omega(r) * std::pow(r, alpha));
    if (ratio > est.seminorm) {
      est.seminorm = ratio;
      est.argmax_radius = r;
    }
    const int j = std::max(0, static_cast<int>(std::floor(std::log2(base / r) + 1e-12)));
    HolderShell& shell = shells[j];
    shell.r_outer = std::ldexp(base, -j);
    shell.r_inner = shell.r_outer / 2.0;
    shell.sup_increment = std::max(shell.sup_increment, profile.sup_increment[n]);
    shell.max_ratio = std::max(shell.max_ratio, ratio);
  }
  for (const auto& [j, shell] : shells) est.shells.push_back(shell);

  std::vector<double> x, y;
  for (const HolderShell& s : est.shells) {
    if (s.max_ratio > 0.0) {
      x.push_back(std::log(s.r_outer));
      y.push_back(std::log(s.max_ratio));
    }
  }
  if (x.size() >= 3) {
    est.ratio_slope = fit::least_squares_slope(x, y);
    est.diverging = est.ratio_slope < -divergence_tolerance;
  }
  return est;
}

HolderEstimate estimate_seminorm(const GridField& u, double alpha, double max_radius, const Modulus& omega) {
  if (u.geometry() != Geometry::kPeriodic3) throw ValidationError("estimate_seminorm expects a periodic field");
  return seminorm_from_profile(increment_profile(u, max_radius), alpha, omega);
}

StructureFunctionFit structure_function(const GridField& u, double r_min, double r_max) {
  if (u.geometry() != Geometry::kPeriodic3) throw ValidationError("structure_function expects a periodic field");
  const SpectralField F = forward_transform(u);
  const ModeGrid grid(F.dims(), F.lengths());
  std::vector<double> kmag, power;
  double total = 0.0;
  grid.for_each([&](std::size_t idx, int i, int, int, const std::array<double, 3>& k, bool) {
    double p = 0.0;
    for (int c = 0; c < 3; ++c) p += std::norm(F.component(c)[idx]);
    if (p == 0.0) return;
    kmag.push_back(std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
    power.push_back(grid.parseval_weight(i) * p);
    total += power.back();
  });
  double k_top = 0.0;
  for (std::size_t m = 0; m < kmag.size(); ++m) {
    if (power[m] > 1e-20 * total) k_top = std::max(k_top, kmag[m]);
  }

  // Default window: one wavelength of the highest active mode up to a fifth
  // of the shortest period, on quarter-octave radii.
  const double h = std::max({u.spacing(0), u.spacing(1), u.spacing(2)});
  const double top = r_max > 0.0 ? r_max : 0.8 * quarter_period(u, false);
  const auto radii = [&](double lo) {
    std::vector<double> r;
    for (int j = 0;; ++j) {
      const double x = top * std::exp2(-0.25 * j);
      if (x < lo * (1.0 - 1e-12)) break;
      r.push_back(x);
    }
    return r;
  };
  StructureFunctionFit fit;
  if (r_min > 0.0) {
    fit.radius = radii(r_min);
  } else {
    fit.radius = radii(k_top > 0.0 ? std::max(h, kTwoPi / k_top) : h);
    if (fit.radius.size() < 4) fit.radius = radii(h);
  }
  if (fit.radius.size() < 4) throw ValidationError("fewer than four structure-function radii in the band");

  std::vector<double> lx, ly;
  for (double r : fit.radius) {
    double s = 0.0;
    for (std::size_t m = 0; m < kmag.size(); ++m) {
      const double kr = kmag[m] * r;
      if (kr == 0.0) continue;
      s += 2.0 * power[m] * (1.0 - std::sin(kr) / kr);
    }
    fit.s2.push_back(s);
    if (s > 0.0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(s));
    }
  }
  fit.zeta2 = lx.size() >= 2 ? fit::least_squares_slope(lx, ly) : 0.0;
  fit.rough = fit.zeta2 < fit.rough_threshold;
  return fit;
}

double estimate_zeta2(const GridField& u) { return structure_function(u).zeta2; }

double lebesgue_time_norm(const std::vector<double>& times, const std::vector<double>& f, double beta) {
  if (times.empty() || times.size() != f.size()) throw ValidationError("time series is empty or ragged");
  if (!(beta >= 1.0)) throw ValidationError("integrability exponent must be >= 1");
  double integral = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) {
    if (!std::isfinite(f[n]) || f[n] < 0.0) throw ValidationError("seminorm samples must be finite and >= 0");
    if (n > 0) {
      if (!(times[n] > times[n - 1])) throw ValidationError("times must be strictly increasing");
      integral += 0.5 * (times[n] - times[n - 1]) * (std::pow(f[n], beta) + std::pow(f[n - 1], beta));
    }
  }
  return std::pow(integral, 1.0 / beta);
}

TimeIntegrability time_integrability(const TimeSeminormSeries& series, double alpha, double delta) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0,1]");
  TimeIntegrability out;
  out.alpha = alpha;
  out.delta = delta;
  out.beta = series.beta;
  out.norm = lebesgue_time_norm(series.times, series.f_alpha, series.beta);
  const std::array<std::pair<const char*, double>, 3> exps{{{"1/alpha+delta", 1.0 / alpha + delta},
                                                            {"1/alpha", 1.0 / alpha},
                                                            {"2/(1+alpha)", 2.0 / (1.0 + alpha)}}};
  for (std::size_t i = 0; i < exps.size(); ++i) {
    out.thresholds[i] = {exps[i].first, exps[i].second,
                         lebesgue_time_norm(series.times, series.f_alpha, exps[i].second)};
  }
  return out;
}

EtaInterval admissible_eta(double alpha) {
  // α = 1 (Lipschitz fields) is admitted so smooth inputs can be swept.
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ValidationError("alpha must lie in (0,1]");
  EtaInterval iv;
  iv.lower = (1.0 - alpha) / alpha;
  iv.upper = 2.0;
  // (1-α)/α < 2 is equivalent to 3α > 1; testing the product avoids the
  // rounding of the quotient at α = 1/3.
  iv.empty = !(3.0 * alpha > 1.0);
  return iv;
}

double gamma_exponent(double alpha, double eta) { return alpha * eta + alpha - 1.0; }

}  // namespace onsager
