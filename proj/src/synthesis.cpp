#include "onsager/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "onsager/error.hpp"

namespace onsager {

int SynthesisSpec::effective_k_max(Dims dims) const {
  if (k_max > 0) return k_max;
  const int n = std::min({dims.n1, dims.n2, dims.n3});
  return (n - 1) / 3;
}

void SynthesisSpec::validate(Dims dims) const {
  if (!(target_alpha > 0.0 && target_alpha < 1.0)) {
    throw ValidationError("synthesis: target_alpha must lie in (0,1), got " + std::to_string(target_alpha));
  }
  const int nyquist = std::min({dims.n1, dims.n2, dims.n3}) / 2;
  const int kmax = effective_k_max(dims);
  if (k_min < 1 || kmax < k_min || kmax > nyquist) {
    throw ValidationError("synthesis: need 1 <= k_min <= k_max <= Nyquist (" + std::to_string(nyquist) +
                          "), got k_min=" + std::to_string(k_min) + " k_max=" + std::to_string(kmax));
  }
}

namespace {

// Visits every half-spectrum coefficient that owns an independent random
// value: the kx = 0 plane keeps one representative of each ±(j,l) pair.
template <class F>
void for_each_independent_mode(const ModeGrid& grid, F&& f) {
  const Dims d = grid.dims;
  grid.for_each([&](std::size_t idx, int i, int j, int l, const std::array<double, 3>&, bool nyq) {
    if (nyq) return;
    const int mj = ModeGrid::signed_mode(j, d.n2);
    const int ml = ModeGrid::signed_mode(l, d.n3);
    if (i == 0 && !(ml > 0 || (ml == 0 && mj > 0))) return;
    f(idx, i, mj, ml);
  });
}

std::size_t partner_index(const ModeGrid& grid, int mj, int ml) {
  const Dims d = grid.dims;
  const int j = (-mj + d.n2) % d.n2;
  const int l = (-ml + d.n3) % d.n3;
  return static_cast<std::size_t>(grid.half_n1()) * (static_cast<std::size_t>(j) + static_cast<std::size_t>(d.n2) * l);
}

void normalize_unit_rms(SpectralField::Components& u, const ModeGrid& grid) {
  double s = 0.0;
  grid.for_each([&](std::size_t idx, int i, int, int, const std::array<double, 3>&, bool) {
    for (const auto& c : u) s += grid.parseval_weight(i) * std::norm(c[idx]);
  });
  if (s <= 0.0) return;
  const double scale = 1.0 / std::sqrt(s);
  for (auto& c : u) {
    for (auto& z : c) z *= scale;
  }
}

SpectralField random_spectrum(std::uint64_t seed, Dims dims, Lengths lengths, int k_min, int k_max, double exponent) {
  ModeGrid grid(dims, lengths);
  SpectralField::Components u;
  for (auto& c : u) c.assign(grid.size(), Complex{});
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  std::size_t active = 0;
  for_each_independent_mode(grid, [&](std::size_t idx, int i, int mj, int ml) {
    const double m = std::sqrt(static_cast<double>(i) * i + static_cast<double>(mj) * mj + static_cast<double>(ml) * ml);
    // Draw for every mode so the realization of a shell does not depend on the band.
    std::array<double, 3> theta{phase(rng), phase(rng), phase(rng)};
    if (m < k_min || m > k_max) return;
    const double amp = std::pow(m, -exponent);
    for (std::size_t c = 0; c < 3; ++c) u[c][idx] = std::polar(amp, theta[c]);
    if (i == 0) {
      const std::size_t p = partner_index(grid, mj, ml);
      for (std::size_t c = 0; c < 3; ++c) u[c][p] = std::conj(u[c][idx]);
    }
    ++active;
  });
  if (active == 0) throw ValidationError("synthesis: the requested band contains no resolvable modes");
  return SpectralField(dims, lengths, std::move(u));
}

}  // namespace

SpectralField synthesize_holder_spectrum(const SynthesisSpec& spec, Dims dims, Lengths lengths) {
  spec.validate(dims);
  SpectralField raw =
      random_spectrum(spec.seed, dims, lengths, spec.k_min, spec.effective_k_max(dims), spec.target_alpha + 1.5);
  SpectralField projected = leray_project(raw);
  auto coeffs = projected.coefficients();
  normalize_unit_rms(coeffs, ModeGrid(dims, lengths));
  return SpectralField(dims, lengths, std::move(coeffs), true);
}

GridField synthesize_holder_field(const SynthesisSpec& spec, Dims dims, Lengths lengths) {
  return inverse_transform(synthesize_holder_spectrum(spec, dims, lengths));
}

GridField white_noise_field(std::uint64_t seed, Dims dims, Lengths lengths) {
  const int nyquist = std::min({dims.n1, dims.n2, dims.n3}) / 2;
  SpectralField raw = random_spectrum(seed, dims, lengths, 1, 4 * nyquist, 0.0);
  SpectralField projected = leray_project(raw);
  auto coeffs = projected.coefficients();
  normalize_unit_rms(coeffs, ModeGrid(dims, lengths));
  return inverse_transform(SpectralField(dims, lengths, std::move(coeffs), true));
}

}  // namespace onsager
