#pragma once

#include <complex>
#include <span>

#include "onsager/grid_field.hpp"

// Thin FFTW wrappers. Plans are created once per shape under a mutex and then
// executed with the new-array interface, which is safe from many threads.
namespace onsager::fft {

using Complex = std::complex<double>;

/// Number of complex coefficients of a real 3-D transform: n3 * n2 * (n1/2+1).
std::size_t half_size(Dims dims);

/// Unnormalized real-to-complex transform of an x-fastest array.
void forward3(Dims dims, std::span<const double> in, std::span<Complex> out);
/// Unnormalized complex-to-real inverse; `in` is left untouched.
void inverse3(Dims dims, std::span<const Complex> in, std::span<double> out);

/// Batched 2-D transforms over `planes` contiguous (n2 x n1) planes.
void forward2_planes(int n1, int n2, int planes, std::span<const double> in, std::span<Complex> out);
void inverse2_planes(int n1, int n2, int planes, std::span<const Complex> in, std::span<double> out);

}  // namespace onsager::fft
