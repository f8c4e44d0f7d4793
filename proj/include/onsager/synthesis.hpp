#pragma once

#include <cstdint>

#include "onsager/grid_field.hpp"
#include "onsager/spectral.hpp"

namespace onsager {

/// Random-phase spectral synthesis of a divergence-free field whose
/// coefficient magnitudes follow |k|^-(alpha + 3/2) on the shell band
/// k_min <= |m| <= k_max (integer modes).
struct SynthesisSpec {
  double target_alpha = 0.5;
  std::uint64_t seed = 1;
  int k_min = 1;
  /// 0 selects the largest dealiased band, floor((n_min - 1) / 3).
  int k_max = 0;

  /// Throws ValidationError for alpha outside (0,1) or an invalid band.
  void validate(Dims dims) const;
  int effective_k_max(Dims dims) const;
};

/// Coefficients of the synthesized field before the final inverse
/// transform; normalized to unit rms speed (mean |u|² = 1).
SpectralField synthesize_holder_spectrum(const SynthesisSpec& spec, Dims dims, Lengths lengths = kTorusLengths);
GridField synthesize_holder_field(const SynthesisSpec& spec, Dims dims, Lengths lengths = kTorusLengths);

/// Spectrally flat random field (every resolved mode, unit amplitude),
/// Leray-projected. Used as the rough reference for structure functions.
GridField white_noise_field(std::uint64_t seed, Dims dims, Lengths lengths = kTorusLengths);

}  // namespace onsager
