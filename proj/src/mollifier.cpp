#include "onsager/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "onsager/error.hpp"
#include "onsager/quadrature.hpp"

namespace onsager {

double bump_profile(double r) {
  if (r >= 1.0 || r <= -1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - r * r));
}

namespace {

double sphere_area(int dim) { return dim == 3 ? 4.0 * std::numbers::pi : 2.0 * std::numbers::pi; }

// Radial kernel of the d-dimensional Fourier transform of a radial function.
double radial_kernel(int dim, double x) {
  if (dim == 3) return x == 0.0 ? 1.0 : std::sin(x) / x;
  return std::cyl_bessel_j(0.0, x);
}

struct RadialQuadrature {
  GaussRule rule;
  std::vector<double> base;  // c·bump(r)·r^{d-1}·|S^{d-1}|·w
};

double normalization_constant(int dim, const GaussRule& rule) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    s += rule.weights[i] * bump_profile(r) * std::pow(r, dim - 1);
  }
  return 1.0 / (sphere_area(dim) * s);
}

std::shared_ptr<const KernelShape> build_shape(int dim, double xi_max, int table_size) {
  auto shape = std::make_shared<KernelShape>();
  shape->dim = dim;
  shape->xi_max = xi_max;
  const GaussRule rule = gauss_legendre(256, 0.0, 1.0);
  const double c = normalization_constant(dim, rule);
  shape->normalization = c;
  std::vector<double> base(rule.nodes.size());
  double mass = 0.0, grad = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    const double b = bump_profile(r);
    const double rp = std::pow(r, dim - 1);
    base[i] = rule.weights[i] * sphere_area(dim) * c * b * rp;
    mass += base[i];
    const double dr = c * b * 2.0 * r / ((1.0 - r * r) * (1.0 - r * r));
    grad += rule.weights[i] * sphere_area(dim) * dr * rp;
  }
  shape->mass = mass;
  shape->grad_l1 = grad;
  if (std::abs(mass - 1.0) > 1e-10) throw IdentityError("mollifier: ∫ρ differs from one beyond 1e-10");

  shape->transform.resize(static_cast<std::size_t>(table_size));
  for (int t = 0; t < table_size; ++t) {
    const double xi = xi_max * t / (table_size - 1);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += base[i] * radial_kernel(dim, xi * rule.nodes[i]);
    shape->transform[static_cast<std::size_t>(t)] = std::clamp(s, -1.0, 1.0);
  }
  if (std::abs(shape->transform[0] - 1.0) > 1e-10) throw IdentityError("mollifier: ρ̂(0) differs from one");
  shape->transform[0] = 1.0;
  return shape;
}

std::shared_ptr<const KernelShape> cached_shape(int dim, double xi_max, int table_size) {
  static std::mutex mutex;
  static std::map<std::tuple<int, double, int>, std::shared_ptr<const KernelShape>> cache;
  std::lock_guard lock(mutex);
  const auto key = std::make_tuple(dim, xi_max, table_size);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  auto shape = build_shape(dim, xi_max, table_size);
  cache.emplace(key, shape);
  return shape;
}

}  // namespace

double bump_transform_direct(int dim, double xi, int nodes) {
  static std::mutex mutex;
  static std::map<int, GaussRule> rules;
  GaussRule rule;
  {
    std::lock_guard lock(mutex);
    auto it = rules.find(nodes);
    if (it == rules.end()) it = rules.emplace(nodes, gauss_legendre(nodes, 0.0, 1.0)).first;
    rule = it->second;
  }
  const double c = normalization_constant(dim, rule);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double r = rule.nodes[i];
    s += rule.weights[i] * sphere_area(dim) * c * bump_profile(r) * std::pow(r, dim - 1) * radial_kernel(dim, xi * r);
  }
  return s;
}

MollifierKernel::MollifierKernel(int dim, double epsilon, double xi_max, int table_size) : epsilon_(epsilon) {
  if (dim != 2 && dim != 3) throw ValidationError("MollifierKernel: dim must be 2 or 3");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ValidationError("MollifierKernel: epsilon must lie in (0,1], got " + std::to_string(epsilon));
  }
  if (!(xi_max > 0.0)) throw ValidationError("MollifierKernel: table range must be positive");
  if (table_size < 4) throw ValidationError("MollifierKernel: table needs at least four nodes");
  shape_ = cached_shape(dim, xi_max, table_size);
}

MollifierKernel::MollifierKernel(std::shared_ptr<const KernelShape> shape, double epsilon)
    : shape_(std::move(shape)), epsilon_(epsilon) {}

MollifierKernel MollifierKernel::with_epsilon(double epsilon) const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw ValidationError("MollifierKernel: epsilon must lie in (0,1], got " + std::to_string(epsilon));
  }
  return MollifierKernel(shape_, epsilon);
}

double MollifierKernel::table_range(const std::vector<std::pair<int, double>>& axes) {
  double kmax = 0.0;
  for (const auto& [n, L] : axes) kmax = std::max(kmax, std::numbers::pi * n / L);
  return std::numbers::pi * kmax;
}

double MollifierKernel::transform(double xi) const {
  if (xi == 0.0) return 1.0;
  const auto& table = shape_->transform;
  const int n = static_cast<int>(table.size());
  const double h = shape_->xi_max / (n - 1);
  const double s = xi / h;
  if (s > n - 1 + 1e-9) {
    throw ValidationError("MollifierKernel: argument " + std::to_string(xi) + " outside the tabulated range");
  }
  // Four-point Lagrange stencil, shifted inward at the table ends.
  int i0 = static_cast<int>(std::floor(s)) - 1;
  i0 = std::clamp(i0, 0, n - 4);
  const double t = s - i0;
  const double f0 = table[static_cast<std::size_t>(i0)];
  const double f1 = table[static_cast<std::size_t>(i0 + 1)];
  const double f2 = table[static_cast<std::size_t>(i0 + 2)];
  const double f3 = table[static_cast<std::size_t>(i0 + 3)];
  const double l0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
  const double l1 = t * (t - 2.0) * (t - 3.0) / 2.0;
  const double l2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
  const double l3 = t * (t - 1.0) * (t - 2.0) / 6.0;
  return std::clamp(l0 * f0 + l1 * f1 + l2 * f2 + l3 * f3, -1.0, 1.0);
}

double MollifierKernel::density(double r) const {
  return shape_->normalization * bump_profile(r / epsilon_) / std::pow(epsilon_, shape_->dim);
}

}  // namespace onsager
