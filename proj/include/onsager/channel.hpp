#pragma once

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "onsager/commutator.hpp"
#include "onsager/grid_field.hpp"
#include "onsager/holder.hpp"
#include "onsager/modulus.hpp"
#include "onsager/mollifier.hpp"
#include "onsager/synthesis.hpp"

namespace onsager {

/// Velocity gradient of a channel field, g[3*i + j] = ∂_j u_i: spectral in
/// x1, x2 and fourth-order differences in x3 (one-sided at and next to the
/// walls).
std::array<std::vector<double>, 9> channel_gradient(const GridField& f);

/// Trapezoid weights of the x3 planes: 1/2 on the walls, 1 inside.
std::vector<double> channel_plane_weights(const GridField& f);

/// max over nodes of |∂_1 u_1 + ∂_2 u_2 + ∂_3 u_3| with channel_gradient.
double channel_divergence(const GridField& f);

/// E(x3) = (x3 (L3 - x3))² / (L3/2)⁴ and its derivative.
double channel_envelope(double z, double L3);
double channel_envelope_derivative(double z, double L3);

/// v = curl(E(x3) A(x_h)) with a random horizontally band-limited potential
/// A whose coefficients scale as |k_h|^-(alpha + 2); unit rms speed.
/// The band defaults to the dealiased range of min(n1, n2).
GridField synthesize_channel_field(const SynthesisSpec& spec, Dims dims, Lengths lengths = kTorusLengths);

/// Same construction from an explicit potential sampled on one plane
/// (three n1·n2 arrays); no normalization.
GridField channel_curl(const std::array<std::vector<double>, 3>& potential, Dims dims, Lengths lengths);

/// Two-dimensional kernel covering the horizontal lattice of v.
MollifierKernel horizontal_kernel_for(const GridField& v, double epsilon);

/// Per-plane multiplier ρ̃̂(ε|k_h|). Asserts that the walls stay exactly zero
/// and that the discrete divergence does not grow beyond 1e-10.
GridField horizontal_mollify(const GridField& v, const MollifierKernel& kernel2d);

/// [v]_{ω,hor} = sup over heights and horizontal displacements of
/// |v(x_h + y_h, x3) - v(x_h, x3)| / ω(|y_h|).
HolderEstimate horizontal_seminorm(const GridField& v, const Modulus& omega, double max_radius = 0.0);

/// Horizontal second-order structure exponent on one x3 plane, from
/// S2(r) = 2 Σ |û(k_h)|² (1 - J0(|k_h| r)) at dyadic radii.
double horizontal_zeta2(const GridField& v, int plane);

struct HorizontalLemmaCheck {
  double epsilon = 0.0;
  double wall_max = 0.0;        ///< max |ṽ_ε| on the walls (must be exactly 0)
  double divergence_before = 0.0;
  double divergence_after = 0.0;
  double sup_diff = 0.0;        ///< sup |v - ṽ_ε|
  double seminorm = 0.0;        ///< [v]_{ω,hor}
  double omega_eps = 0.0;
  double ratio = 0.0;           ///< sup_diff / ([v]_{ω,hor} ω(ε))
};

HorizontalLemmaCheck check_horizontal_lemma(const GridField& v, const MollifierKernel& kernel2d, const Modulus& omega,
                                            std::optional<double> seminorm = std::nullopt);

struct ChannelFluxRow {
  double eps = 0.0;
  double pi_total = 0.0;
  double pi_smooth = 0.0;
  double pi_smooth_horizontal = 0.0;  ///< ∫ (ṽ_h·∇_h)ṽ · ṽ
  double pi_smooth_vertical = 0.0;    ///< ∫ ṽ_3 ∂_3 ṽ · ṽ
  double pi_remainder = 0.0;
  double pi_rough = 0.0;
  double residual = 0.0;
  double omega_eps = 0.0;
  double rough_abs = 0.0;        ///< ∫ |v-ṽ|² |∇ṽ|, which bounds |pi_rough|
  double rough_ratio = 0.0;      ///< |pi_rough| / (ω(ε)‖v‖‖∇v‖)
  double rough_abs_ratio = 0.0;  ///< rough_abs / (ω(ε)‖v‖‖∇v‖)
  double remainder_ratio = 0.0;  ///< |pi_remainder| / (ω(ε)‖v‖‖∇v‖)
  double smooth_relative = 0.0;  ///< |pi_smooth| / (‖v‖²‖∇v‖/|Ω|^{1/2})
  int quadrature_nodes = 0;
};

struct ChannelFluxReport {
  std::string modulus;
  double seminorm = 0.0;  ///< f_ω = [v]_{ω,hor}
  double norm = 0.0;      ///< ‖v‖
  double grad_norm = 0.0; ///< ‖∇v‖
  std::vector<ChannelFluxRow> rows;  ///< decreasing ε
  double max_rough_ratio = 0.0;
  double max_remainder_ratio = 0.0;
  double max_rough_abs_ratio = 0.0;
  /// Bound 2 f_ω of the rough ratio implied by the estimate.
  double rough_ratio_bound = 0.0;
};

/// Horizontal decomposition (ṽ⊗ṽ) + r̃ - (v-ṽ)⊗(v-ṽ) of the mollified
/// product tested against ∇ṽ_ε. Throws IdentityError when the identity fails.
ChannelFluxReport channel_flux_bound(const GridField& v, const Modulus& omega, const std::vector<double>& eps_list,
                                     const FluxOptions& options = {});

}  // namespace onsager
