#include "onsager/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "onsager/channel.hpp"
#include "onsager/error.hpp"
#include "onsager/spectral.hpp"

namespace onsager {

GridField::GridField(Dims dims, Components components, Geometry geometry, Lengths lengths)
    : dims_(dims), lengths_(lengths), geometry_(geometry), components_(std::move(components)) {
  if (dims_.n1 < 2 || dims_.n2 < 2 || dims_.n3 < 2) throw ValidationError("GridField: every dimension must be >= 2");
  if (geometry_ == Geometry::kChannel && dims_.n3 < 5) {
    throw ValidationError("GridField: channel geometry needs at least 5 vertical nodes");
  }
  for (double L : lengths_) {
    if (!(L > 0.0) || !std::isfinite(L)) throw ValidationError("GridField: lengths must be positive and finite");
  }
  for (int c = 0; c < 3; ++c) {
    const auto& a = components_[static_cast<std::size_t>(c)];
    if (a.size() != dims_.total()) {
      throw ValidationError("GridField: component " + std::to_string(c) + " has " + std::to_string(a.size()) +
                            " samples, expected " + std::to_string(dims_.total()));
    }
    for (double v : a) {
      if (!std::isfinite(v)) throw ValidationError("GridField: non-finite sample");
    }
  }
  if (geometry_ == Geometry::kChannel) {
    const std::size_t plane = static_cast<std::size_t>(dims_.n1) * static_cast<std::size_t>(dims_.n2);
    const std::size_t top = plane * static_cast<std::size_t>(dims_.n3 - 1);
    for (const auto& a : components_) {
      for (std::size_t p = 0; p < plane; ++p) {
        if (a[p] != 0.0 || a[top + p] != 0.0) throw ValidationError("GridField: channel wall values must be exactly zero");
      }
    }
  }
}

GridField GridField::zeros(Dims dims, Geometry geometry, Lengths lengths) {
  Components c;
  for (auto& a : c) a.assign(dims.total(), 0.0);
  return GridField(dims, std::move(c), geometry, lengths);
}

GridField GridField::sample(Dims dims, const std::function<std::array<double, 3>(double, double, double)>& f,
                            Geometry geometry, Lengths lengths) {
  GridField probe = zeros(dims, geometry, lengths);
  Components c;
  for (auto& a : c) a.assign(dims.total(), 0.0);
  for (int k = 0; k < dims.n3; ++k) {
    const bool wall = geometry == Geometry::kChannel && (k == 0 || k == dims.n3 - 1);
    const double z = probe.coordinate(2, k);
    for (int j = 0; j < dims.n2; ++j) {
      const double y = probe.coordinate(1, j);
      for (int i = 0; i < dims.n1; ++i) {
        if (wall) continue;
        const auto v = f(probe.coordinate(0, i), y, z);
        const std::size_t idx = probe.index(i, j, k);
        for (int q = 0; q < 3; ++q) c[static_cast<std::size_t>(q)][idx] = v[static_cast<std::size_t>(q)];
      }
    }
  }
  return GridField(dims, std::move(c), geometry, lengths);
}

double GridField::spacing(int axis) const {
  const double L = lengths_[static_cast<std::size_t>(axis)];
  if (axis == 2 && geometry_ == Geometry::kChannel) return L / (dims_.n3 - 1);
  return L / dims_[axis];
}

double GridField::coordinate(int axis, int index) const { return spacing(axis) * index; }

double GridField::cell_volume() const { return spacing(0) * spacing(1) * spacing(2); }

GridField GridField::axpby(double a, const GridField& other, double b) const {
  if (!same_layout(other)) throw ValidationError("GridField::axpby: layout mismatch");
  Components out;
  for (std::size_t c = 0; c < 3; ++c) {
    out[c].resize(size());
    const auto& x = components_[c];
    const auto& y = other.components_[c];
    for (std::size_t n = 0; n < size(); ++n) out[c][n] = a * x[n] + b * y[n];
  }
  return GridField(dims_, std::move(out), geometry_, lengths_);
}

GridField GridField::shifted_by_constant(const std::array<double, 3>& u) const {
  if (geometry_ != Geometry::kPeriodic3) throw ValidationError("shifted_by_constant: periodic geometry only");
  Components out = components_;
  for (std::size_t c = 0; c < 3; ++c) {
    for (double& v : out[c]) v += u[c];
  }
  return GridField(dims_, std::move(out), geometry_, lengths_);
}

std::array<double, 3> GridField::mean() const {
  std::array<double, 3> m{};
  for (std::size_t c = 0; c < 3; ++c) {
    double s = 0.0;
    for (double v : components_[c]) s += v;
    m[c] = s / static_cast<double>(size());
  }
  return m;
}

double GridField::max_abs() const {
  double m = 0.0;
  for (const auto& a : components_) {
    for (double v : a) m = std::max(m, std::abs(v));
  }
  return m;
}

double GridField::max_norm() const {
  double m = 0.0;
  for (std::size_t n = 0; n < size(); ++n) {
    const double s = components_[0][n] * components_[0][n] + components_[1][n] * components_[1][n] +
                     components_[2][n] * components_[2][n];
    m = std::max(m, s);
  }
  return std::sqrt(m);
}

bool GridField::same_layout(const GridField& other) const {
  return dims_ == other.dims_ && geometry_ == other.geometry_ && lengths_ == other.lengths_;
}

double energy(const GridField& f) {
  double s = 0.0;
  for (const auto& a : f.components()) {
    for (double v : a) s += v * v;
  }
  return 0.5 * s * f.cell_volume();
}

double l2_norm(const GridField& f) { return std::sqrt(2.0 * energy(f)); }

double grad_norm_sq(const GridField& f) {
  if (f.geometry() == Geometry::kChannel) {
    const auto g = channel_gradient(f);
    const auto w = channel_plane_weights(f);
    const std::size_t plane = static_cast<std::size_t>(f.dims().n1) * static_cast<std::size_t>(f.dims().n2);
    double s = 0.0;
    for (const auto& a : g) {
      for (std::size_t n = 0; n < a.size(); ++n) s += w[n / plane] * a[n] * a[n];
    }
    return s * f.cell_volume();
  }
  return spectral_grad_norm_sq(forward_transform(f));
}

}  // namespace onsager
