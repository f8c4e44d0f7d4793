#pragma once

#include <memory>
#include <vector>

namespace onsager {

/// Unnormalized radial bump exp(-1/(1-r²)) for r < 1, zero otherwise.
double bump_profile(double r);

/// Tabulated radial data shared by every kernel of one dimension and table
/// range: normalization, ∫|∇ρ|, and ρ̂ on a uniform ξ grid.
struct KernelShape {
  int dim = 3;
  double normalization = 0.0;  ///< c such that ∫ c·bump = 1
  double grad_l1 = 0.0;        ///< ∫ |∇ρ| (Euclidean pointwise norm)
  double mass = 0.0;           ///< ∫ρ re-evaluated after normalization
  double xi_max = 0.0;
  std::vector<double> transform;  ///< ρ̂(ξ_i), ξ_i = i·xi_max/(n-1), clipped to [-1,1]
};

inline constexpr int kTransformTableSize = 16384;

/// Friedrichs mollifier ρ_ε(x) = ε^{-d} ρ(x/ε) in d = 3 (full mollification)
/// or d = 2 (horizontal mollification). Immutable; copies share the table.
class MollifierKernel {
 public:
  /// xi_max bounds the arguments ε|k| the kernel will be asked for.
  MollifierKernel(int dim, double epsilon, double xi_max, int table_size = kTransformTableSize);

  /// Table range covering every lattice wavevector of the given periodic
  /// axes (π times the largest Nyquist wavenumber).
  static double table_range(const std::vector<std::pair<int, double>>& axes);

  int dim() const { return shape_->dim; }
  double epsilon() const { return epsilon_; }
  const KernelShape& shape() const { return *shape_; }
  double xi_max() const { return shape_->xi_max; }
  int table_size() const { return static_cast<int>(shape_->transform.size()); }

  /// ρ̂(ξ) by cubic interpolation of the table; ρ̂(0) = 1 exactly.
  double transform(double xi) const;
  /// Fourier multiplier of ρ_ε at wavenumber magnitude |k|.
  double multiplier(double k) const { return transform(epsilon_ * k); }
  /// Pointwise density ρ_ε(y) at distance |y| = r.
  double density(double r) const;
  /// ∫|∇ρ| (constant of the gradient estimate).
  double grad_constant() const { return shape_->grad_l1; }

  MollifierKernel with_epsilon(double epsilon) const;

 private:
  MollifierKernel(std::shared_ptr<const KernelShape> shape, double epsilon);
  std::shared_ptr<const KernelShape> shape_;
  double epsilon_;
};

/// Direct quadrature of ρ̂(ξ) (no table); used to build and check tables.
double bump_transform_direct(int dim, double xi, int nodes = 1024);

}  // namespace onsager
