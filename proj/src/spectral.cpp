#include "onsager/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "onsager/error.hpp"
#include "onsager/fft.hpp"

namespace onsager {

SpectralField::SpectralField(Dims dims, Lengths lengths, Components coefficients, bool divergence_free)
    : dims_(dims), lengths_(lengths), coefficients_(std::move(coefficients)), divergence_free_(divergence_free) {
  const std::size_t expected = fft::half_size(dims_);
  for (const auto& c : coefficients_) {
    if (c.size() != expected) throw ValidationError("SpectralField: coefficient array has the wrong size");
  }
}

SpectralField SpectralField::zeros(Dims dims, Lengths lengths) {
  Components c;
  for (auto& a : c) a.assign(fft::half_size(dims), Complex{});
  return SpectralField(dims, lengths, std::move(c), true);
}

SpectralField forward_transform(const GridField& f) {
  if (f.geometry() != Geometry::kPeriodic3) {
    throw ValidationError("forward_transform: periodic3 geometry required (channel fields transform per plane)");
  }
  const Dims d = f.dims();
  const double scale = 1.0 / static_cast<double>(d.total());
  SpectralField::Components out;
  for (int c = 0; c < 3; ++c) {
    auto& a = out[static_cast<std::size_t>(c)];
    a.resize(fft::half_size(d));
    fft::forward3(d, f.component(c), a);
    for (auto& z : a) z *= scale;
  }
  return SpectralField(d, f.lengths(), std::move(out));
}

GridField inverse_transform(const SpectralField& F) {
  const Dims d = F.dims();
  GridField::Components out;
  for (int c = 0; c < 3; ++c) {
    auto& a = out[static_cast<std::size_t>(c)];
    a.resize(d.total());
    fft::inverse3(d, F.component(c), a);
  }
  return GridField(d, std::move(out), Geometry::kPeriodic3, F.lengths());
}

SpectralField leray_project(const SpectralField& F) {
  ModeGrid grid(F.dims(), F.lengths());
  SpectralField::Components out = F.coefficients();
  grid.for_each([&](std::size_t idx, int, int, int, const std::array<double, 3>& k, bool) {
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 == 0.0) {
      for (auto& c : out) c[idx] = Complex{};
      return;
    }
    const Complex kdotu = k[0] * out[0][idx] + k[1] * out[1][idx] + k[2] * out[2][idx];
    for (std::size_t c = 0; c < 3; ++c) out[c][idx] -= k[c] * kdotu / k2;
  });
  return SpectralField(F.dims(), F.lengths(), std::move(out), true);
}

double max_divergence(const SpectralField& F) {
  ModeGrid grid(F.dims(), F.lengths());
  double m = 0.0;
  const auto& u = F.coefficients();
  grid.for_each([&](std::size_t idx, int, int, int, const std::array<double, 3>& k, bool) {
    const Complex kdotu = k[0] * u[0][idx] + k[1] * u[1][idx] + k[2] * u[2][idx];
    m = std::max(m, std::abs(kdotu));
  });
  return m;
}

double coefficient_norm(const SpectralField& F) {
  ModeGrid grid(F.dims(), F.lengths());
  double s = 0.0;
  const auto& u = F.coefficients();
  grid.for_each([&](std::size_t idx, int i, int, int, const std::array<double, 3>&, bool) {
    const double w = grid.parseval_weight(i);
    for (const auto& c : u) s += w * std::norm(c[idx]);
  });
  return std::sqrt(s);
}

double spectral_energy(const SpectralField& F) {
  const double vol = F.lengths()[0] * F.lengths()[1] * F.lengths()[2];
  const double n = coefficient_norm(F);
  return 0.5 * vol * n * n;
}

double spectral_grad_norm_sq(const SpectralField& F) {
  ModeGrid grid(F.dims(), F.lengths());
  double s = 0.0;
  const auto& u = F.coefficients();
  grid.for_each([&](std::size_t idx, int i, int, int, const std::array<double, 3>& k, bool nyq) {
    if (nyq) return;
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    const double w = grid.parseval_weight(i);
    for (const auto& c : u) s += w * k2 * std::norm(c[idx]);
  });
  return s * F.lengths()[0] * F.lengths()[1] * F.lengths()[2];
}

std::vector<Complex> spectral_derivative(const SpectralField& F, int c, int axis) {
  ModeGrid grid(F.dims(), F.lengths());
  const auto& u = F.component(c);
  std::vector<Complex> out(u.size());
  const Complex I{0.0, 1.0};
  grid.for_each([&](std::size_t idx, int, int, int, const std::array<double, 3>& k, bool nyq) {
    out[idx] = nyq ? Complex{} : I * k[static_cast<std::size_t>(axis)] * u[idx];
  });
  return out;
}

std::array<std::vector<double>, 9> gradient_grid(const SpectralField& F) {
  std::array<std::vector<double>, 9> g;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      auto& a = g[static_cast<std::size_t>(3 * i + j)];
      a.resize(F.dims().total());
      const auto d = spectral_derivative(F, i, j);
      fft::inverse3(F.dims(), d, a);
    }
  }
  return g;
}

namespace {

double largest_coefficient(const SpectralField& F) {
  double m = 0.0;
  for (const auto& c : F.coefficients()) {
    for (const auto& z : c) m = std::max(m, std::abs(z));
  }
  return m;
}

}  // namespace

int max_active_mode(const SpectralField& F, double threshold) {
  const double cut = threshold * largest_coefficient(F);
  ModeGrid grid(F.dims(), F.lengths());
  int m = 0;
  const auto& u = F.coefficients();
  grid.for_each([&](std::size_t idx, int i, int j, int l, const std::array<double, 3>&, bool) {
    if (std::abs(u[0][idx]) <= cut && std::abs(u[1][idx]) <= cut && std::abs(u[2][idx]) <= cut) return;
    const int mj = std::abs(ModeGrid::signed_mode(j, F.dims().n2));
    const int ml = std::abs(ModeGrid::signed_mode(l, F.dims().n3));
    m = std::max({m, i, mj, ml});
  });
  return m;
}

double max_active_wavenumber(const SpectralField& F, double threshold) {
  const double cut = threshold * largest_coefficient(F);
  ModeGrid grid(F.dims(), F.lengths());
  double m = 0.0;
  const auto& u = F.coefficients();
  grid.for_each([&](std::size_t idx, int, int, int, const std::array<double, 3>& k, bool) {
    if (std::abs(u[0][idx]) <= cut && std::abs(u[1][idx]) <= cut && std::abs(u[2][idx]) <= cut) return;
    m = std::max(m, std::sqrt(k[0] * k[0] + k[1] * k[1] + k[2] * k[2]));
  });
  return m;
}

namespace {

bool outside_two_thirds(int i, int j, int l, Dims d) {
  const int mi = i;
  const int mj = std::abs(ModeGrid::signed_mode(j, d.n2));
  const int ml = std::abs(ModeGrid::signed_mode(l, d.n3));
  return 3 * mi >= d.n1 || 3 * mj >= d.n2 || 3 * ml >= d.n3;
}

}  // namespace

bool is_dealiased(const SpectralField& F, double threshold) {
  const double cut = threshold * largest_coefficient(F);
  ModeGrid grid(F.dims(), F.lengths());
  bool ok = true;
  const auto& u = F.coefficients();
  grid.for_each([&](std::size_t idx, int i, int j, int l, const std::array<double, 3>&, bool) {
    if (!ok || !outside_two_thirds(i, j, l, F.dims())) return;
    if (std::abs(u[0][idx]) > cut || std::abs(u[1][idx]) > cut || std::abs(u[2][idx]) > cut) ok = false;
  });
  return ok;
}

SpectralField truncate_two_thirds(const SpectralField& F) {
  ModeGrid grid(F.dims(), F.lengths());
  SpectralField::Components out = F.coefficients();
  grid.for_each([&](std::size_t idx, int i, int j, int l, const std::array<double, 3>&, bool) {
    if (outside_two_thirds(i, j, l, F.dims())) {
      for (auto& c : out) c[idx] = Complex{};
    }
  });
  return SpectralField(F.dims(), F.lengths(), std::move(out), F.divergence_free());
}

SpectralField pad_spectrum(const SpectralField& F, Dims target) {
  const Dims d = F.dims();
  if (target.n1 < d.n1 || target.n2 < d.n2 || target.n3 < d.n3) {
    throw ValidationError("pad_spectrum: target lattice must not be coarser");
  }
  SpectralField out_field = SpectralField::zeros(target, F.lengths());
  SpectralField::Components out = out_field.coefficients();
  ModeGrid src(d, F.lengths());
  ModeGrid dst(target, F.lengths());
  const auto& u = F.coefficients();
  src.for_each([&](std::size_t idx, int i, int j, int l, const std::array<double, 3>&, bool nyq) {
    if (nyq) return;
    const int mj = ModeGrid::signed_mode(j, d.n2);
    const int ml = ModeGrid::signed_mode(l, d.n3);
    const int tj = mj >= 0 ? mj : mj + target.n2;
    const int tl = ml >= 0 ? ml : ml + target.n3;
    const std::size_t t = static_cast<std::size_t>(i) +
                          static_cast<std::size_t>(dst.half_n1()) *
                              (static_cast<std::size_t>(tj) + static_cast<std::size_t>(target.n2) * tl);
    for (std::size_t c = 0; c < 3; ++c) out[c][t] = u[c][idx];
  });
  return SpectralField(target, F.lengths(), std::move(out), F.divergence_free());
}

SpectralField translate(const SpectralField& F, const std::array<double, 3>& y) {
  ModeGrid grid(F.dims(), F.lengths());
  SpectralField::Components out = F.coefficients();
  grid.for_each([&](std::size_t idx, int, int, int, const std::array<double, 3>& k, bool) {
    const double phase = -(k[0] * y[0] + k[1] * y[1] + k[2] * y[2]);
    const Complex m{std::cos(phase), std::sin(phase)};
    for (auto& c : out) c[idx] *= m;
  });
  return SpectralField(F.dims(), F.lengths(), std::move(out), F.divergence_free());
}

}  // namespace onsager
