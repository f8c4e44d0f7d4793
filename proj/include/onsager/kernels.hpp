#pragma once

#include <array>
#include <span>
#include <vector>

#include "onsager/grid_field.hpp"

// Hot loops with an OpenMP implementation and a plain serial reference.
// The parallel reductions use a fixed block decomposition, so their results
// do not depend on the thread count.
namespace onsager::kernels {

enum class Backend { kSerial, kParallel };

/// Storage order of symmetric tensors: xx, yy, zz, xy, xz, yz.
inline constexpr std::array<std::array<int, 2>, 6> kSymPairs{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};

using Vec3View = std::array<std::span<const double>, 3>;
using SymTensor = std::array<std::vector<double>, 6>;
using Gradient = std::array<std::vector<double>, 9>;

Vec3View view(const GridField& f);

/// max_x |u(x + s) - u(x)| for an integer lattice shift s, periodic in every
/// axis with a nonzero shift component.
double sup_increment(const Vec3View& u, Dims dims, std::array<int, 3> shift, Backend backend = Backend::kParallel);

/// sup_increment for each shift; the parallel backend distributes shifts.
std::vector<double> sup_increments(const Vec3View& u, Dims dims, const std::vector<std::array<int, 3>>& shifts,
                                   Backend backend = Backend::kParallel);

/// Σ_n w(n) Σ_ij T_ij(n) G_ij(n), with G[3i+j] = ∂_j u_i and an optional
/// weight per x3-plane (empty = unit weights).
double contract(const SymTensor& t, const Gradient& g, Dims dims, std::span<const double> plane_weights = {},
                Backend backend = Backend::kParallel);

/// Σ_n w(n) Σ_ij a_i a_j G_ij(n): the contraction of a rank-one tensor.
double contract_outer(const Vec3View& a, const Gradient& g, Dims dims, std::span<const double> plane_weights = {},
                      Backend backend = Backend::kParallel);

/// out += w · δ⊗δ at every node.
void accumulate_outer(double w, const Vec3View& delta, SymTensor& out, Backend backend = Backend::kParallel);

/// Threads used by the parallel backend (1 when built without OpenMP).
int max_threads();
void set_threads(int n);

}  // namespace onsager::kernels
