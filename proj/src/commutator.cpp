#include "onsager/commutator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "onsager/error.hpp"
#include "onsager/fft.hpp"
#include "onsager/mollify.hpp"

namespace onsager {

TensorField TensorField::zeros(Dims dims, Lengths lengths) {
  TensorField t{dims, lengths, {}};
  for (auto& c : t.comps) c.assign(dims.total(), 0.0);
  return t;
}

const std::vector<double>& TensorField::at(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (std::size_t p = 0; p < kernels::kSymPairs.size(); ++p) {
    if (kernels::kSymPairs[p][0] == i && kernels::kSymPairs[p][1] == j) return comps[p];
  }
  throw ValidationError("TensorField: index out of range");
}

double TensorField::max_abs() const {
  double m = 0.0;
  for (const auto& c : comps) {
    for (double x : c) m = std::max(m, std::abs(x));
  }
  return m;
}

GridField increment(const GridField& u, const std::array<double, 3>& y) {
  if (u.geometry() != Geometry::kPeriodic3) throw ValidationError("increment expects a periodic field");
  if (y[0] == 0.0 && y[1] == 0.0 && y[2] == 0.0) return GridField::zeros(u.dims(), u.geometry(), u.lengths());
  const GridField shifted = inverse_transform(translate(forward_transform(u), y));
  return shifted.axpby(1.0, u, -1.0);
}

namespace {

// Lattice on which all flux integrands are exact, with the spectrum, grid
// values, and a kernel whose table covers it.
struct Workspace {
  SpectralField F;
  GridField v;
  MollifierKernel kernel;
  std::vector<double> multiplier;  // ρ̂(ε|k|) / N on the half spectrum
};

int even_at_least(int n) { return n % 2 == 0 ? n : n + 1; }

MollifierKernel covering_kernel(const MollifierKernel& kernel, Dims d, const Lengths& L) {
  double k2 = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double k = std::numbers::pi * d[a] / L[static_cast<std::size_t>(a)];
    k2 += k * k;
  }
  if (kernel.xi_max() >= kernel.epsilon() * std::sqrt(k2)) return kernel;
  return MollifierKernel(3, kernel.epsilon(), kernel_for(d, L, kernel.epsilon()).xi_max(), kernel.table_size());
}

Workspace prepare(const GridField& v, const MollifierKernel& kernel, bool pad) {
  if (v.geometry() != Geometry::kPeriodic3) throw ValidationError("flux terms expect a periodic field");
  SpectralField F = forward_transform(v);
  GridField grid = v;
  if (pad && !is_dealiased(F)) {
    const int m = max_active_mode(F);
    const Dims d = v.dims();
    const Dims target{std::max(d.n1, even_at_least(3 * m + 1)), std::max(d.n2, even_at_least(3 * m + 1)),
                      std::max(d.n3, even_at_least(3 * m + 1))};
    F = pad_spectrum(F, target);
    grid = inverse_transform(F);
  }
  MollifierKernel k = covering_kernel(kernel, F.dims(), F.lengths());
  std::vector<double> mult(F.size());
  const double inv_n = 1.0 / static_cast<double>(F.dims().total());
  ModeGrid(F.dims(), F.lengths()).for_each([&](std::size_t idx, int, int, int, const std::array<double, 3>& kv, bool) {
    mult[idx] = k.multiplier(std::sqrt(kv[0] * kv[0] + kv[1] * kv[1] + kv[2] * kv[2])) * inv_n;
  });
  return {std::move(F), std::move(grid), std::move(k), std::move(mult)};
}

void mollify_in_place(std::vector<double>& a, const Workspace& w) {
  std::vector<Complex> spec(w.multiplier.size());
  fft::forward3(w.F.dims(), a, spec);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= w.multiplier[i];
  fft::inverse3(w.F.dims(), spec, a);
}

kernels::SymTensor outer(const kernels::Vec3View& a, const kernels::Vec3View& b) {
  kernels::SymTensor t;
  const std::size_t n = a[0].size();
  for (std::size_t p = 0; p < 6; ++p) {
    const auto i = static_cast<std::size_t>(kernels::kSymPairs[p][0]);
    const auto j = static_cast<std::size_t>(kernels::kSymPairs[p][1]);
    t[p].resize(n);
    for (std::size_t x = 0; x < n; ++x) t[p][x] = 0.5 * (a[i][x] * b[j][x] + b[i][x] * a[j][x]);
  }
  return t;
}

kernels::SymTensor mollified_product(const Workspace& w) {
  const kernels::Vec3View v = kernels::view(w.v);
  kernels::SymTensor t = outer(v, v);
  for (auto& c : t) mollify_in_place(c, w);
  return t;
}

// r = (vv)_ε - v⊗v_ε - v_ε⊗v + v⊗v
kernels::SymTensor spectral_remainder(const Workspace& w, const kernels::SymTensor& vv_eps, const GridField& ve) {
  const kernels::Vec3View v = kernels::view(w.v);
  const kernels::Vec3View e = kernels::view(ve);
  kernels::SymTensor r = vv_eps;
  for (std::size_t p = 0; p < 6; ++p) {
    const auto i = static_cast<std::size_t>(kernels::kSymPairs[p][0]);
    const auto j = static_cast<std::size_t>(kernels::kSymPairs[p][1]);
    for (std::size_t x = 0; x < r[p].size(); ++x) {
      r[p][x] += v[i][x] * v[j][x] - v[i][x] * e[j][x] - e[i][x] * v[j][x];
    }
  }
  return r;
}

// Per-axis phase tables so that e^{-ik·y} is a product of three lookups.
struct PhaseTables {
  std::array<std::vector<Complex>, 3> axis;
};

PhaseTables phases(const SpectralField& F, const std::array<double, 3>& y) {
  PhaseTables t;
  const Dims d = F.dims();
  const ModeGrid grid(d, F.lengths());
  const int counts[3] = {F.half_n1(), d.n2, d.n3};
  for (int a = 0; a < 3; ++a) {
    auto& tab = t.axis[static_cast<std::size_t>(a)];
    tab.resize(static_cast<std::size_t>(counts[a]));
    for (int i = 0; i < counts[a]; ++i) {
      const int m = a == 0 ? i : ModeGrid::signed_mode(i, d[a]);
      const double ph = -grid.wavenumber(a, m) * y[static_cast<std::size_t>(a)];
      tab[static_cast<std::size_t>(i)] = {std::cos(ph), std::sin(ph)};
    }
  }
  return t;
}

// δ_y u on the lattice of F, written into `delta` (3 arrays).
void shifted_difference(const SpectralField& F, const GridField& u, const std::array<double, 3>& y,
                        std::array<std::vector<double>, 3>& delta, std::vector<Complex>& scratch) {
  const Dims d = F.dims();
  const PhaseTables t = phases(F, y);
  const int nh = F.half_n1();
  scratch.resize(F.size());
  for (int c = 0; c < 3; ++c) {
    const auto src = F.component(c);
    std::size_t idx = 0;
    for (int l = 0; l < d.n3; ++l) {
      for (int j = 0; j < d.n2; ++j) {
        const Complex pjl = t.axis[1][static_cast<std::size_t>(j)] * t.axis[2][static_cast<std::size_t>(l)];
        for (int i = 0; i < nh; ++i, ++idx) scratch[idx] = src[idx] * (pjl * t.axis[0][static_cast<std::size_t>(i)]);
      }
    }
    auto& out = delta[static_cast<std::size_t>(c)];
    out.resize(d.total());
    fft::inverse3(d, scratch, out);
    const auto base = u.component(c);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] -= base[x];
  }
}

std::vector<std::array<double, 3>> fibonacci_directions(int n) {
  std::vector<std::array<double, 3>> dirs;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double r = std::sqrt(1.0 - z * z);
    dirs.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
  }
  return dirs;
}

}  // namespace

TensorField remainder(const GridField& u, const MollifierKernel& kernel, QuadratureOrder order) {
  const BallRule rule = mollifier_ball_rule(3, kernel.epsilon(), order);
  const Workspace w = prepare(u, kernel, false);
  TensorField out = TensorField::zeros(u.dims(), u.lengths());
  std::array<std::vector<double>, 3> delta;
  std::vector<Complex> scratch;
  for (const BallNode& node : rule.nodes) {
    shifted_difference(w.F, w.v, node.y, delta, scratch);
    kernels::accumulate_outer(node.weight, {delta[0], delta[1], delta[2]}, out.comps);
  }
  return out;
}

TensorField remainder_spectral(const GridField& u, const MollifierKernel& kernel) {
  const Workspace w = prepare(u, kernel, false);
  const GridField ve = inverse_transform(mollify(w.F, w.kernel));
  return {u.dims(), u.lengths(), spectral_remainder(w, mollified_product(w), ve)};
}

QuadratureOrder auto_ball_order(const MollifierKernel& kernel, double q_max, double tolerance) {
  const auto dirs = fibonacci_directions(32);
  constexpr int kMagnitudes = 8;
  std::vector<double> reference(kMagnitudes + 1);
  // Direct transform values: the interpolated table is only good to ~1e-11.
  for (int m = 0; m <= kMagnitudes; ++m) {
    reference[static_cast<std::size_t>(m)] = bump_transform_direct(3, kernel.epsilon() * q_max * m / kMagnitudes);
  }
  QuadratureOrder best{5, 5, 10};
  double best_err = std::numeric_limits<double>::infinity();
  int best_n = 5;
  for (int n = 5; n <= 48; ++n) {
    const QuadratureOrder order{n, n, 2 * n};
    const BallRule rule = mollifier_ball_rule(3, kernel.epsilon(), order);
    double err = 0.0;
    for (int m = 1; m <= kMagnitudes && err <= tolerance; ++m) {
      const double q = q_max * m / kMagnitudes;
      for (const auto& dir : dirs) {
        Complex s{};
        for (const BallNode& node : rule.nodes) {
          const double ph = -q * (dir[0] * node.y[0] + dir[1] * node.y[1] + dir[2] * node.y[2]);
          s += node.weight * Complex{std::cos(ph), std::sin(ph)};
        }
        err = std::max(err, std::abs(s - reference[static_cast<std::size_t>(m)]));
      }
    }
    if (err <= tolerance) return order;
    if (err < best_err) {
      best = order;
      best_err = err;
      best_n = n;
    } else if (best_err < 1e3 * tolerance && n - best_n >= 4) {
      break;  // converged to the accuracy floor of the rule itself
    }
  }
  return best;
}

double FluxTerms::max_term() const {
  return std::max({std::abs(pi_total), std::abs(pi_smooth), std::abs(pi_remainder), std::abs(pi_rough)});
}

FluxTerms flux_terms(const GridField& v, const MollifierKernel& kernel, const FluxOptions& options) {
  const Workspace w = prepare(v, kernel, true);
  const SpectralField Fe = mollify(w.F, w.kernel);
  const GridField ve = inverse_transform(Fe);
  const kernels::Gradient G = gradient_grid(Fe);
  const Dims d = w.F.dims();
  const double cv = w.v.cell_volume();

  FluxTerms t;
  t.epsilon = kernel.epsilon();
  t.work_dims = d;
  const kernels::SymTensor vv_eps = mollified_product(w);
  t.pi_total = kernels::contract(vv_eps, G, d) * cv;
  t.pi_smooth = kernels::contract_outer(kernels::view(ve), G, d) * cv;
  const GridField rough = w.v.axpby(1.0, ve, -1.0);
  t.pi_rough = kernels::contract_outer(kernels::view(rough), G, d) * cv;

  if (options.route == RemainderRoute::kSpectral) {
    t.route = "spectral";
    t.pi_remainder = kernels::contract(spectral_remainder(w, vv_eps, ve), G, d) * cv;
  } else {
    t.route = "quadrature";
    const QuadratureOrder order =
        options.order ? *options.order
                      : auto_ball_order(w.kernel, 2.0 * max_active_wavenumber(w.F), options.rule_tolerance);
    const BallRule rule = mollifier_ball_rule(3, kernel.epsilon(), order);
    t.quadrature_nodes = static_cast<int>(rule.nodes.size());
    std::vector<double> per_node(rule.nodes.size());
    const long count = static_cast<long>(rule.nodes.size());
#pragma omp parallel
    {
      std::array<std::vector<double>, 3> delta;
      std::vector<Complex> scratch;
#pragma omp for schedule(dynamic, 8)
      for (long n = 0; n < count; ++n) {
        const BallNode& node = rule.nodes[static_cast<std::size_t>(n)];
        shifted_difference(w.F, w.v, node.y, delta, scratch);
        per_node[static_cast<std::size_t>(n)] =
            node.weight * kernels::contract_outer({delta[0], delta[1], delta[2]}, G, d, {}, kernels::Backend::kSerial);
      }
    }
    double s = 0.0;
    for (double x : per_node) s += x;
    t.pi_remainder = s * cv;
  }

  const double volume = w.v.lengths()[0] * w.v.lengths()[1] * w.v.lengths()[2];
  t.scale = 2.0 * energy(w.v) * std::sqrt(spectral_grad_norm_sq(Fe)) / std::sqrt(volume);
  t.residual = t.pi_total - (t.pi_smooth + t.pi_remainder - t.pi_rough);
  const double reference = std::max(t.max_term(), 1e-6 * t.scale);
  if (std::abs(t.residual) > options.identity_tolerance * reference) {
    std::ostringstream msg;
    msg << "decomposition identity failed at eps=" << t.epsilon << ": residual " << t.residual << " vs "
        << options.identity_tolerance * reference << " (" << t.route << " remainder)";
    throw IdentityError(msg.str());
  }
  return t;
}

ViscousSplitBound viscous_split_bound(const GridField& v, const MollifierKernel& kernel, double alpha,
                                      double seminorm) {
  const Workspace w = prepare(v, kernel, true);
  const SpectralField Fe = mollify(w.F, w.kernel);
  const GridField ve = inverse_transform(Fe);
  const kernels::Gradient G = gradient_grid(Fe);
  const GridField rough = w.v.axpby(1.0, ve, -1.0);

  ViscousSplitBound b;
  b.term = std::abs(kernels::contract_outer(kernels::view(rough), G, w.F.dims()) * w.v.cell_volume());
  const double grad = std::sqrt(spectral_grad_norm_sq(Fe));
  b.bound = seminorm * std::pow(2.0 * l2_norm(w.v), 1.0 + alpha) * std::pow(grad, 1.0 - alpha);
  b.intermediate = seminorm * std::pow(l2_norm(rough), 1.0 + alpha) * std::pow(grad, 1.0 - alpha);
  b.bound_with_constant = std::pow(kernel.grad_constant(), alpha) * b.bound;
  b.violated = b.term > b.bound * (1.0 + b.slack);
  return b;
}

}  // namespace onsager
