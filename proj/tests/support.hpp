#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "onsager/grid_field.hpp"
#include "onsager/spectral.hpp"

// Independent oracles shared by the unit tests and the acceptance runner.
namespace testsupport {

using onsager::Dims;
using onsager::GridField;
using onsager::SpectralField;

inline GridField random_field(std::uint64_t seed, Dims dims) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GridField::Components c;
  for (auto& a : c) {
    a.resize(dims.total());
    for (double& x : a) x = u(rng);
  }
  return GridField(dims, std::move(c));
}

/// Divergence-free, zero-mean field with random coefficients on |m_d| <= k_max.
inline GridField random_solenoidal(std::uint64_t seed, Dims dims, int k_max) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  onsager::ModeGrid grid(dims);
  SpectralField::Components c;
  for (auto& a : c) a.assign(grid.size(), {});
  grid.for_each([&](std::size_t idx, int i, int j, int l, const std::array<double, 3>&, bool nyq) {
    const int mj = onsager::ModeGrid::signed_mode(j, dims.n2);
    const int ml = onsager::ModeGrid::signed_mode(l, dims.n3);
    if (nyq || i > k_max || std::abs(mj) > k_max || std::abs(ml) > k_max) return;
    for (auto& a : c) a[idx] = {g(rng), g(rng)};
  });
  // Hermitian symmetry on the i = 0 plane comes from the round trip.
  const SpectralField raw(dims, onsager::kTorusLengths, std::move(c));
  const GridField real = onsager::inverse_transform(raw);
  return onsager::inverse_transform(onsager::leray_project(onsager::forward_transform(real)));
}

inline double max_abs_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a.component(c)[n] - b.component(c)[n]));
  }
  return m;
}

/// Direct trigonometric sum u(x) = Σ_k û(k) e^{ik·x} on the unit torus lengths.
inline std::array<double, 3> trig_eval(const SpectralField& F, const std::array<double, 3>& x) {
  const Dims d = F.dims();
  const int nh = F.half_n1();
  std::vector<std::complex<double>> ex(static_cast<std::size_t>(nh)), ey(static_cast<std::size_t>(d.n2)),
      ez(static_cast<std::size_t>(d.n3));
  for (int i = 0; i < nh; ++i) ex[static_cast<std::size_t>(i)] = std::polar(1.0, i * x[0]);
  for (int j = 0; j < d.n2; ++j) ey[static_cast<std::size_t>(j)] = std::polar(1.0, onsager::ModeGrid::signed_mode(j, d.n2) * x[1]);
  for (int l = 0; l < d.n3; ++l) ez[static_cast<std::size_t>(l)] = std::polar(1.0, onsager::ModeGrid::signed_mode(l, d.n3) * x[2]);
  std::array<double, 3> out{};
  for (int l = 0; l < d.n3; ++l) {
    for (int j = 0; j < d.n2; ++j) {
      for (int i = 0; i < nh; ++i) {
        const std::size_t idx = F.index(i, j, l);
        const double w = (i == 0 || (d.n1 % 2 == 0 && i == d.n1 / 2)) ? 1.0 : 2.0;
        const auto phase = ex[static_cast<std::size_t>(i)] * ey[static_cast<std::size_t>(j)] * ez[static_cast<std::size_t>(l)];
        for (int c = 0; c < 3; ++c) {
          const auto a = F.component(c)[idx];
          if (a != std::complex<double>{}) out[static_cast<std::size_t>(c)] += w * (a * phase).real();
        }
      }
    }
  }
  return out;
}

/// Trigonometric sum restricted to the nonzero coefficients, for repeated
/// point evaluation.
class TrigSum {
 public:
  /// Coefficients below `threshold` (absolute) are treated as round-off.
  explicit TrigSum(const SpectralField& F, double threshold = 1e-14) {
    const Dims d = F.dims();
    for (int l = 0; l < d.n3; ++l) {
      for (int j = 0; j < d.n2; ++j) {
        for (int i = 0; i < F.half_n1(); ++i) {
          const std::size_t idx = F.index(i, j, l);
          Mode m{{static_cast<double>(i), static_cast<double>(onsager::ModeGrid::signed_mode(j, d.n2)),
                  static_cast<double>(onsager::ModeGrid::signed_mode(l, d.n3))},
                 {}};
          bool any = false;
          for (int c = 0; c < 3; ++c) {
            m.a[static_cast<std::size_t>(c)] = F.component(c)[idx];
            any = any || std::abs(F.component(c)[idx]) > threshold;
          }
          const double w = (i == 0 || (d.n1 % 2 == 0 && i == d.n1 / 2)) ? 1.0 : 2.0;
          for (auto& a : m.a) a *= w;
          if (any) modes_.push_back(m);
        }
      }
    }
  }

  std::array<double, 3> operator()(const std::array<double, 3>& x) const {
    std::array<double, 3> out{};
    for (const Mode& m : modes_) {
      const auto phase = std::polar(1.0, m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2]);
      for (std::size_t c = 0; c < 3; ++c) out[c] += (m.a[c] * phase).real();
    }
    return out;
  }

  std::size_t modes() const { return modes_.size(); }

 private:
  struct Mode {
    std::array<double, 3> k;
    std::array<std::complex<double>, 3> a;
  };
  std::vector<Mode> modes_;
};

/// Array roll: out(x) = u(x - s·h), periodic.
inline GridField roll(const GridField& u, std::array<int, 3> s) {
  const Dims d = u.dims();
  GridField::Components c;
  for (int comp = 0; comp < 3; ++comp) {
    auto& a = c[static_cast<std::size_t>(comp)];
    a.resize(d.total());
    for (int k = 0; k < d.n3; ++k) {
      for (int j = 0; j < d.n2; ++j) {
        for (int i = 0; i < d.n1; ++i) {
          const int si = ((i - s[0]) % d.n1 + d.n1) % d.n1;
          const int sj = ((j - s[1]) % d.n2 + d.n2) % d.n2;
          const int sk = ((k - s[2]) % d.n3 + d.n3) % d.n3;
          a[u.index(i, j, k)] = u.at(comp, si, sj, sk);
        }
      }
    }
  }
  return GridField(d, std::move(c), u.geometry(), u.lengths());
}

/// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F&& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double bump(double r) { return r < 1.0 ? std::exp(-1.0 / (1.0 - r * r)) : 0.0; }

/// 3-D radial mollifier transform ρ̂(ξ) = ∫ 4πr² ρ(r) sin(ξr)/(ξr) dr by Simpson.
inline double bump_transform_simpson(double xi, int panels = 20000) {
  const double mass = simpson([](double r) { return 4.0 * M_PI * r * r * bump(r); }, 0.0, 1.0, panels);
  const double f = simpson(
      [xi](double r) {
        const double s = xi * r < 1e-8 ? 1.0 : std::sin(xi * r) / (xi * r);
        return 4.0 * M_PI * r * r * bump(r) * s;
      },
      0.0, 1.0, panels);
  return f / mass;
}

}  // namespace testsupport
