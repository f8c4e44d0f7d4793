#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace onsager {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

enum class Geometry : std::uint32_t {
  kPeriodic3 = 0,
  /// Periodic in (x1, x2); x3 sampled on N3 uniform nodes including both
  /// walls x3 = 0 and x3 = L3, where every component is exactly zero.
  kChannel = 1,
};

struct Dims {
  int n1 = 0;
  int n2 = 0;
  int n3 = 0;

  std::size_t total() const {
    return static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2) *
           static_cast<std::size_t>(n3);
  }
  int operator[](int axis) const { return axis == 0 ? n1 : (axis == 1 ? n2 : n3); }
  bool operator==(const Dims&) const = default;
};

using Lengths = std::array<double, 3>;
inline constexpr Lengths kTorusLengths{kTwoPi, kTwoPi, kTwoPi};

/// Sampled vector field on a uniform lattice, x-fastest storage
/// (index = i + n1 * (j + n2 * k)). Immutable once constructed.
class GridField {
 public:
  using Components = std::array<std::vector<double>, 3>;

  GridField() = default;

  /// Validates sizes, finiteness, and the channel wall condition.
  GridField(Dims dims, Components components, Geometry geometry = Geometry::kPeriodic3,
            Lengths lengths = kTorusLengths);

  static GridField zeros(Dims dims, Geometry geometry = Geometry::kPeriodic3,
                         Lengths lengths = kTorusLengths);

  /// Samples f at the lattice nodes. For channel geometry the wall planes are
  /// forced to zero regardless of f.
  static GridField sample(Dims dims, const std::function<std::array<double, 3>(double, double, double)>& f,
                          Geometry geometry = Geometry::kPeriodic3,
                          Lengths lengths = kTorusLengths);

  const Dims& dims() const { return dims_; }
  const Lengths& lengths() const { return lengths_; }
  Geometry geometry() const { return geometry_; }
  std::size_t size() const { return dims_.total(); }

  /// Node spacing along an axis. Channel x3 spacing is L3 / (n3 - 1).
  double spacing(int axis) const;
  /// Coordinate of node `index` along `axis`.
  double coordinate(int axis, int index) const;
  /// Volume weight of one node for the uniform quadrature.
  double cell_volume() const;

  std::span<const double> component(int c) const { return components_[static_cast<std::size_t>(c)]; }
  const Components& components() const { return components_; }

  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims_.n1) *
               (static_cast<std::size_t>(j) + static_cast<std::size_t>(dims_.n2) * static_cast<std::size_t>(k));
  }
  double at(int c, int i, int j, int k) const { return components_[static_cast<std::size_t>(c)][index(i, j, k)]; }

  /// Pointwise a*this + b*other (same dims/geometry).
  GridField axpby(double a, const GridField& other, double b) const;
  GridField scaled(double a) const { return axpby(a, *this, 0.0); }
  /// Adds a constant vector to every node (periodic geometry only).
  GridField shifted_by_constant(const std::array<double, 3>& u) const;

  std::array<double, 3> mean() const;
  double max_abs() const;
  /// Max over nodes of the Euclidean norm of the vector value.
  double max_norm() const;

  bool same_layout(const GridField& other) const;

 private:
  Dims dims_{};
  Lengths lengths_ = kTorusLengths;
  Geometry geometry_ = Geometry::kPeriodic3;
  Components components_{};
};

/// ½‖f‖² with the uniform quadrature.
double energy(const GridField& f);
/// ‖∇f‖²: spectral differentiation on the torus, fourth-order differences in
/// x3 (spectral in x1, x2) for channel fields.
double grad_norm_sq(const GridField& f);
/// L² norm ‖f‖.
double l2_norm(const GridField& f);

}  // namespace onsager
