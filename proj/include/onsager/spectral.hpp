#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "onsager/grid_field.hpp"

namespace onsager {

using Complex = std::complex<double>;

/// Fourier coefficients of a real periodic field, stored as the r2c half
/// spectrum (kx >= 0). Normalized so that u(x) = Σ_k û(k) e^{ik·x}; the
/// half storage makes the Hermitian symmetry û(-k) = conj û(k) structural.
class SpectralField {
 public:
  using Components = std::array<std::vector<Complex>, 3>;

  SpectralField() = default;
  SpectralField(Dims dims, Lengths lengths, Components coefficients, bool divergence_free = false);

  static SpectralField zeros(Dims dims, Lengths lengths = kTorusLengths);

  const Dims& dims() const { return dims_; }
  const Lengths& lengths() const { return lengths_; }
  bool divergence_free() const { return divergence_free_; }
  int half_n1() const { return dims_.n1 / 2 + 1; }
  std::size_t size() const { return coefficients_[0].size(); }

  std::span<const Complex> component(int c) const { return coefficients_[static_cast<std::size_t>(c)]; }
  const Components& coefficients() const { return coefficients_; }

  std::size_t index(int i, int j, int l) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(half_n1()) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_.n2) * static_cast<std::size_t>(l));
  }

 private:
  Dims dims_{};
  Lengths lengths_ = kTorusLengths;
  Components coefficients_{};
  bool divergence_free_ = false;
};

/// Wavenumber bookkeeping for the half-spectrum layout.
struct ModeGrid {
  Dims dims;
  Lengths lengths;

  explicit ModeGrid(Dims d, Lengths l = kTorusLengths) : dims(d), lengths(l) {}

  int half_n1() const { return dims.n1 / 2 + 1; }
  std::size_t size() const {
    return static_cast<std::size_t>(half_n1()) * static_cast<std::size_t>(dims.n2) *
           static_cast<std::size_t>(dims.n3);
  }
  /// Signed integer mode along an axis for storage index `idx`.
  static int signed_mode(int idx, int n) { return idx <= n / 2 ? idx : idx - n; }
  /// True if `idx` sits on the Nyquist plane of an even axis.
  static bool is_nyquist(int idx, int n) { return n % 2 == 0 && idx == n / 2; }
  double wavenumber(int axis, int mode) const { return kTwoPi / lengths[static_cast<std::size_t>(axis)] * mode; }
  /// Parseval weight of the x-index: 1 on self-conjugate planes, 2 otherwise.
  double parseval_weight(int i) const {
    return (i == 0 || (dims.n1 % 2 == 0 && i == dims.n1 / 2)) ? 1.0 : 2.0;
  }

  /// Calls f(linear_index, i, j, l, kvec, nyquist) for every stored coefficient,
  /// where kvec is the physical wavevector.
  template <class F>
  void for_each(F&& f) const {
    const int nh = half_n1();
    std::size_t idx = 0;
    for (int l = 0; l < dims.n3; ++l) {
      const int ml = signed_mode(l, dims.n3);
      const double kz = wavenumber(2, ml);
      for (int j = 0; j < dims.n2; ++j) {
        const int mj = signed_mode(j, dims.n2);
        const double ky = wavenumber(1, mj);
        for (int i = 0; i < nh; ++i, ++idx) {
          const double kx = wavenumber(0, i);
          const bool nyq = is_nyquist(i, dims.n1) || is_nyquist(j, dims.n2) || is_nyquist(l, dims.n3);
          f(idx, i, j, l, std::array<double, 3>{kx, ky, kz}, nyq);
        }
      }
    }
  }
};

SpectralField forward_transform(const GridField& f);
GridField inverse_transform(const SpectralField& F);

/// (I - k kᵀ/|k|²) û(k) for k ≠ 0, û(0) = 0. Output flagged divergence-free.
SpectralField leray_project(const SpectralField& F);

/// max_k |k·û(k)|.
double max_divergence(const SpectralField& F);
/// sqrt(Σ_k |û(k)|²) over the full (Hermitian) spectrum.
double coefficient_norm(const SpectralField& F);

/// ½‖u‖² computed from the coefficients.
double spectral_energy(const SpectralField& F);
/// ‖∇u‖² computed from the coefficients.
double spectral_grad_norm_sq(const SpectralField& F);

/// Multiplies every coefficient by m(|k|) (radial real multiplier).
template <class M>
SpectralField apply_radial_multiplier(const SpectralField& F, M&& m) {
  ModeGrid grid(F.dims(), F.lengths());
  SpectralField::Components out = F.coefficients();
  grid.for_each([&](std::size_t idx, int, int, int, const std::array<double, 3>& k, bool) {
    const double factor = m(std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
    for (auto& c : out) c[idx] *= factor;
  });
  return SpectralField(F.dims(), F.lengths(), std::move(out), F.divergence_free());
}

/// Coefficients of ∂u_c/∂x_axis; Nyquist coefficients are zeroed.
std::vector<Complex> spectral_derivative(const SpectralField& F, int c, int axis);

/// Grid values of the full velocity gradient, g[3*i + j] = ∂_j u_i.
std::array<std::vector<double>, 9> gradient_grid(const SpectralField& F);

/// Largest |m_d| (integer mode, per axis) over coefficients with magnitude
/// above `threshold` times the largest coefficient.
int max_active_mode(const SpectralField& F, double threshold = 1e-14);
/// Largest physical |k| over active coefficients.
double max_active_wavenumber(const SpectralField& F, double threshold = 1e-14);

/// True if every active mode satisfies 3|m_d| < n_d, so that cubic products
/// are integrated exactly by the lattice sum.
bool is_dealiased(const SpectralField& F, double threshold = 1e-14);

/// Zero every mode with 3|m_d| >= n_d on any axis.
SpectralField truncate_two_thirds(const SpectralField& F);

/// Re-samples the trigonometric polynomial on a finer lattice (zero padding).
/// Nyquist coefficients of the source are dropped.
SpectralField pad_spectrum(const SpectralField& F, Dims target);

/// Exact spectral translation: coefficients of u(· - y).
SpectralField translate(const SpectralField& F, const std::array<double, 3>& y);

}  // namespace onsager
