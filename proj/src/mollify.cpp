#include "onsager/mollify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "onsager/csv.hpp"
#include "onsager/error.hpp"
#include "onsager/fit.hpp"
#include "onsager/holder.hpp"

namespace onsager {

MollifierKernel kernel_for(Dims dims, const Lengths& lengths, double epsilon) {
  return MollifierKernel(3, epsilon,
                         MollifierKernel::table_range({{dims.n1, lengths[0]}, {dims.n2, lengths[1]}, {dims.n3, lengths[2]}}));
}

MollifierKernel kernel_for(const GridField& u, double epsilon) { return kernel_for(u.dims(), u.lengths(), epsilon); }

SpectralField mollify(const SpectralField& F, const MollifierKernel& kernel) {
  if (kernel.dim() != 3) throw ValidationError("mollify needs a three-dimensional kernel");
  const double half_period = *std::min_element(F.lengths().begin(), F.lengths().end()) / 2.0;
  if (!(kernel.epsilon() < half_period)) throw ValidationError("mollify: epsilon must stay below half a period");
  SpectralField out = apply_radial_multiplier(F, [&](double k) { return kernel.multiplier(k); });
  if (spectral_energy(out) > spectral_energy(F) * (1.0 + 1e-14)) {
    throw IdentityError("mollify increased the L2 norm");
  }
  return out;
}

GridField mollify(const GridField& u, const MollifierKernel& kernel) {
  return inverse_transform(mollify(forward_transform(u), kernel));
}

namespace {

double sup_distance(const GridField& a, const GridField& b) {
  double best = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) {
    double s = 0.0;
    for (int c = 0; c < 3; ++c) {
      const double d = a.component(c)[n] - b.component(c)[n];
      s += d * d;
    }
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

double sup_frobenius(const std::array<std::vector<double>, 9>& g) {
  double best = 0.0;
  for (std::size_t n = 0; n < g[0].size(); ++n) {
    double s = 0.0;
    for (const auto& comp : g) s += comp[n] * comp[n];
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

}  // namespace

ConvEstimateTable check_conv_estimates_omega(const GridField& u, double alpha, const Modulus& omega,
                                             const std::vector<double>& eps_list, std::optional<double> seminorm) {
  if (u.geometry() != Geometry::kPeriodic3) throw ValidationError("check_conv_estimates expects a periodic field");
  if (eps_list.empty()) throw ValidationError("eps_list is empty");
  ConvEstimateTable table;
  table.alpha = alpha;
  table.modulus = omega.name();
  table.seminorm = seminorm ? *seminorm : estimate_seminorm(u, alpha, 0.0, omega).seminorm;

  std::vector<double> eps = eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  const SpectralField F = forward_transform(u);
  std::vector<double> lx, ly;
  for (double e : eps) {
    const MollifierKernel kernel = kernel_for(u, e);
    table.grad_constant = kernel.grad_constant();
    const SpectralField Fe = mollify(F, kernel);
    ConvEstimateRow row;
    row.eps = e;
    row.sup_diff = sup_distance(u, inverse_transform(Fe));
    row.sup_grad = sup_frobenius(gradient_grid(Fe));
    const double scale = table.seminorm * omega(e);
    row.ratio1 = scale > 0.0 ? row.sup_diff / (scale * std::pow(e, alpha)) : 0.0;
    row.ratio2 = scale > 0.0 ? row.sup_grad / (scale * std::pow(e, alpha - 1.0)) : 0.0;
    if (row.sup_grad > 0.0) {
      lx.push_back(std::log(e));
      ly.push_back(std::log(row.sup_grad));
    }
    row.slope_so_far = lx.size() >= 2 ? fit::least_squares_slope(lx, ly) : std::numeric_limits<double>::quiet_NaN();
    table.max_ratio1 = std::max(table.max_ratio1, row.ratio1);
    table.max_ratio2 = std::max(table.max_ratio2, row.ratio2);
    table.rows.push_back(row);
  }
  table.grad_slope = lx.size() >= 2 ? fit::least_squares_slope(lx, ly) : 0.0;
  return table;
}

ConvEstimateTable check_conv_estimates(const GridField& u, double alpha, const std::vector<double>& eps_list,
                                       std::optional<double> seminorm) {
  return check_conv_estimates_omega(u, alpha, Modulus::constant(), eps_list, seminorm);
}

void write_conv_csv(std::ostream& out, const ConvEstimateTable& table) {
  csv::Writer w(out, {"eps", "sup_diff", "sup_grad", "ratio1", "ratio2", "slope_so_far"});
  for (const ConvEstimateRow& r : table.rows) w.row({r.eps, r.sup_diff, r.sup_grad, r.ratio1, r.ratio2, r.slope_so_far});
}

}  // namespace onsager
