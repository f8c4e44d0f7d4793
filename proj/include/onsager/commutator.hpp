#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "onsager/grid_field.hpp"
#include "onsager/kernels.hpp"
#include "onsager/mollifier.hpp"
#include "onsager/quadrature.hpp"
#include "onsager/spectral.hpp"

namespace onsager {

/// Symmetric tensor-valued lattice field, components in kernels::kSymPairs order.
struct TensorField {
  Dims dims;
  Lengths lengths = kTorusLengths;
  kernels::SymTensor comps;

  static TensorField zeros(Dims dims, Lengths lengths);
  /// Component (i, j) for any index order.
  const std::vector<double>& at(int i, int j) const;
  double max_abs() const;
};

/// δ_y u = u(· - y) - u, with the shift applied as the phase e^{-ik·y}.
GridField increment(const GridField& u, const std::array<double, 3>& y);

/// r_ε(u,u) = ∫ ρ_ε(y) δ_y u ⊗ δ_y u dy by the radial–angular product rule
/// over B(0, ε).
TensorField remainder(const GridField& u, const MollifierKernel& kernel, QuadratureOrder order = {});
/// The same tensor from (u⊗u)_ε - u⊗u_ε - u_ε⊗u + u⊗u, exact for the
/// lattice trigonometric polynomial.
TensorField remainder_spectral(const GridField& u, const MollifierKernel& kernel);

enum class RemainderRoute { kSpectral, kQuadrature };

struct FluxOptions {
  RemainderRoute route = RemainderRoute::kSpectral;
  /// Quadrature route only; empty selects a rule sized from the spectrum.
  std::optional<QuadratureOrder> order;
  /// Target error of the auto-sized rule on plane waves.
  double rule_tolerance = 1e-11;
  /// Relative tolerance of the decomposition identity.
  double identity_tolerance = 1e-8;
};

struct FluxTerms {
  double epsilon = 0.0;
  double pi_total = 0.0;      ///< ∫ (v⊗v)_ε : ∇v_ε
  double pi_smooth = 0.0;     ///< ∫ (v_ε⊗v_ε) : ∇v_ε
  double pi_remainder = 0.0;  ///< ∫ r_ε(v,v) : ∇v_ε
  double pi_rough = 0.0;      ///< ∫ (v-v_ε)⊗(v-v_ε) : ∇v_ε
  /// pi_total - (pi_smooth + pi_remainder - pi_rough)
  double residual = 0.0;
  /// ‖v‖² ‖∇v_ε‖ / |Ω|^{1/2}, the natural size of every term.
  double scale = 0.0;
  std::string route = "spectral";
  int quadrature_nodes = 0;
  Dims work_dims;

  double max_term() const;
};

/// Picks (n, n, 2n) radial/polar/azimuthal counts so that the rule
/// reproduces ρ̂(ε|q|) for plane waves with |q| <= q_max within `tolerance`.
QuadratureOrder auto_ball_order(const MollifierKernel& kernel, double q_max, double tolerance);

/// All four flux integrals. Fields that are not dealiased are re-sampled on
/// a padded lattice first so every cubic integrand is integrated exactly.
/// Throws IdentityError when the decomposition identity fails.
FluxTerms flux_terms(const GridField& v, const MollifierKernel& kernel, const FluxOptions& options = {});

struct ViscousSplitBound {
  double term = 0.0;  ///< |pi_rough|
  /// f_α (2‖v‖)^{1+α} ‖∇v_ε‖^{1-α}
  double bound = 0.0;
  /// f_α ‖v - v_ε‖^{1+α} ‖∇v_ε‖^{1-α}, the sharper intermediate form
  double intermediate = 0.0;
  /// (∫|∇ρ|)^α · bound: the inequality with the gradient constant retained
  double bound_with_constant = 0.0;
  double slack = 0.05;
  bool violated = false;
};

ViscousSplitBound viscous_split_bound(const GridField& v, const MollifierKernel& kernel, double alpha,
                                      double seminorm);

}  // namespace onsager
