#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "onsager/grid_field.hpp"
#include "onsager/modulus.hpp"
#include "onsager/mollifier.hpp"
#include "onsager/spectral.hpp"

namespace onsager {

/// Three-dimensional kernel whose table covers every wavevector of u's lattice.
MollifierKernel kernel_for(const GridField& u, double epsilon);
MollifierKernel kernel_for(Dims dims, const Lengths& lengths, double epsilon);

/// û_ε(k) = ρ̂(ε|k|) û(k). Keeps the divergence-free flag and the mean.
SpectralField mollify(const SpectralField& F, const MollifierKernel& kernel);
/// Periodic fields only; ε must stay below half of the shortest period.
GridField mollify(const GridField& u, const MollifierKernel& kernel);

struct ConvEstimateRow {
  double eps = 0.0;
  double sup_diff = 0.0;  ///< sup |u - u_ε|
  double sup_grad = 0.0;  ///< sup |∇u_ε| (Frobenius norm)
  double ratio1 = 0.0;    ///< sup_diff / ([u] ω(ε) ε^α)
  double ratio2 = 0.0;    ///< sup_grad / ([u] ω(ε) ε^(α-1))
  double slope_so_far = 0.0;  ///< log-log slope of sup_grad over rows so far (NaN for the first)
};

struct ConvEstimateTable {
  double alpha = 0.0;
  std::string modulus = "constant";
  double seminorm = 0.0;
  double grad_constant = 0.0;  ///< ∫|∇ρ|, the bound for ratio2
  std::vector<ConvEstimateRow> rows;
  double grad_slope = 0.0;  ///< least-squares slope of log sup_grad vs log ε
  double max_ratio1 = 0.0;
  double max_ratio2 = 0.0;
};

/// Ratios of the calculus estimates sup|u - u_ε| ≤ [u]_α ε^α and
/// sup|∇u_ε| ≤ C [u]_α ε^(α-1). The seminorm is estimated when not given.
ConvEstimateTable check_conv_estimates(const GridField& u, double alpha, const std::vector<double>& eps_list,
                                       std::optional<double> seminorm = std::nullopt);
/// Same with the weighted seminorm [u]_{ω,α} and the extra factor ω(ε).
ConvEstimateTable check_conv_estimates_omega(const GridField& u, double alpha, const Modulus& omega,
                                             const std::vector<double>& eps_list,
                                             std::optional<double> seminorm = std::nullopt);

/// Columns: eps, sup_diff, sup_grad, ratio1, ratio2, slope_so_far.
void write_conv_csv(std::ostream& out, const ConvEstimateTable& table);

}  // namespace onsager
