#include "onsager/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "onsager/error.hpp"
#include "onsager/fft.hpp"
#include "onsager/fit.hpp"
#include "onsager/quadrature.hpp"

namespace onsager {
namespace {

using Array = std::vector<double>;

std::size_t plane_size(Dims d) { return static_cast<std::size_t>(d.n1) * static_cast<std::size_t>(d.n2); }
std::size_t half_plane_size(Dims d) {
  return static_cast<std::size_t>(d.n1 / 2 + 1) * static_cast<std::size_t>(d.n2);
}

// Calls f(index_in_plane, kx, ky, nyquist) for each r2c coefficient of one plane.
template <class F>
void for_each_horizontal_mode(Dims d, const Lengths& L, F&& f) {
  const int nh = d.n1 / 2 + 1;
  std::size_t idx = 0;
  for (int j = 0; j < d.n2; ++j) {
    const int mj = ModeGrid::signed_mode(j, d.n2);
    const double ky = kTwoPi / L[1] * mj;
    const bool nyq_j = ModeGrid::is_nyquist(j, d.n2);
    for (int i = 0; i < nh; ++i, ++idx) {
      f(idx, kTwoPi / L[0] * i, ky, nyq_j || ModeGrid::is_nyquist(i, d.n1));
    }
  }
}

std::vector<Complex> planes_forward(std::span<const double> a, Dims d, int planes) {
  std::vector<Complex> spec(half_plane_size(d) * static_cast<std::size_t>(planes));
  fft::forward2_planes(d.n1, d.n2, planes, a, spec);
  return spec;
}

Array planes_inverse(const std::vector<Complex>& spec, Dims d, int planes) {
  Array out(plane_size(d) * static_cast<std::size_t>(planes));
  fft::inverse2_planes(d.n1, d.n2, planes, spec, out);
  return out;
}

// Applies m(kx, ky) (complex) to every plane of `a`, including the 1/(n1 n2)
// normalization.
template <class M>
Array horizontal_multiplier(std::span<const double> a, Dims d, const Lengths& L, int planes, M&& m) {
  std::vector<Complex> spec = planes_forward(a, d, planes);
  const std::size_t hp = half_plane_size(d);
  std::vector<Complex> factor(hp);
  const double inv = 1.0 / static_cast<double>(plane_size(d));
  for_each_horizontal_mode(d, L, [&](std::size_t idx, double kx, double ky, bool nyq) {
    factor[idx] = m(kx, ky, nyq) * inv;
  });
  for (int p = 0; p < planes; ++p) {
    Complex* s = spec.data() + hp * static_cast<std::size_t>(p);
    for (std::size_t i = 0; i < hp; ++i) s[i] *= factor[i];
  }
  return planes_inverse(spec, d, planes);
}

Array horizontal_derivative(std::span<const double> a, Dims d, const Lengths& L, int planes, int axis) {
  return horizontal_multiplier(a, d, L, planes, [axis](double kx, double ky, bool nyq) {
    return nyq ? Complex{} : Complex{0.0, axis == 0 ? kx : ky};
  });
}

Array vertical_derivative(std::span<const double> a, Dims d, double h) {
  const std::size_t plane = plane_size(d);
  const int n = d.n3;
  Array out(a.size());
  const double s = 1.0 / (12.0 * h);
  for (std::size_t p = 0; p < plane; ++p) {
    auto f = [&](int k) { return a[p + plane * static_cast<std::size_t>(k)]; };
    auto set = [&](int k, double v) { out[p + plane * static_cast<std::size_t>(k)] = v * s; };
    set(0, -25.0 * f(0) + 48.0 * f(1) - 36.0 * f(2) + 16.0 * f(3) - 3.0 * f(4));
    set(1, -3.0 * f(0) - 10.0 * f(1) + 18.0 * f(2) - 6.0 * f(3) + f(4));
    for (int k = 2; k <= n - 3; ++k) set(k, f(k - 2) - 8.0 * f(k - 1) + 8.0 * f(k + 1) - f(k + 2));
    set(n - 2, 3.0 * f(n - 1) + 10.0 * f(n - 2) - 18.0 * f(n - 3) + 6.0 * f(n - 4) - f(n - 5));
    set(n - 1, 25.0 * f(n - 1) - 48.0 * f(n - 2) + 36.0 * f(n - 3) - 16.0 * f(n - 4) + 3.0 * f(n - 5));
  }
  return out;
}

void require_channel(const GridField& f, const char* what) {
  if (f.geometry() != Geometry::kChannel) throw ValidationError(std::string(what) + " expects a channel field");
}

double wall_max(const GridField& f) {
  const std::size_t plane = plane_size(f.dims());
  const std::size_t top = plane * static_cast<std::size_t>(f.dims().n3 - 1);
  double m = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto a = f.component(c);
    for (std::size_t p = 0; p < plane; ++p) m = std::max({m, std::abs(a[p]), std::abs(a[top + p])});
  }
  return m;
}

MollifierKernel covering_kernel_2d(const MollifierKernel& kernel, const GridField& v) {
  const double kx = std::numbers::pi * v.dims().n1 / v.lengths()[0];
  const double ky = std::numbers::pi * v.dims().n2 / v.lengths()[1];
  if (kernel.xi_max() >= kernel.epsilon() * std::hypot(kx, ky)) return kernel;
  return MollifierKernel(2, kernel.epsilon(), horizontal_kernel_for(v, kernel.epsilon()).xi_max(), kernel.table_size());
}

Array mollify_planes(std::span<const double> a, const GridField& v, const MollifierKernel& kernel) {
  return horizontal_multiplier(a, v.dims(), v.lengths(), v.dims().n3, [&](double kx, double ky, bool) {
    return Complex{kernel.multiplier(std::hypot(kx, ky)), 0.0};
  });
}

// δ̃_y u = u(x_h - y_h, x3) - u on every plane.
Array shifted_difference(const std::vector<Complex>& spec, std::span<const double> base, Dims d, const Lengths& L,
                         const std::array<double, 3>& y) {
  const std::size_t hp = half_plane_size(d);
  std::vector<Complex> factor(hp);
  const double inv = 1.0 / static_cast<double>(plane_size(d));
  for_each_horizontal_mode(d, L, [&](std::size_t idx, double kx, double ky, bool) {
    const double ph = -(kx * y[0] + ky * y[1]);
    factor[idx] = Complex{std::cos(ph), std::sin(ph)} * inv;
  });
  std::vector<Complex> shifted(spec.size());
  for (std::size_t p = 0; p < static_cast<std::size_t>(d.n3); ++p) {
    for (std::size_t i = 0; i < hp; ++i) shifted[p * hp + i] = spec[p * hp + i] * factor[i];
  }
  Array out = planes_inverse(shifted, d, d.n3);
  for (std::size_t x = 0; x < out.size(); ++x) out[x] -= base[x];
  return out;
}

QuadratureOrder auto_disk_order(const MollifierKernel& kernel, double q_max, double tolerance) {
  constexpr int kMagnitudes = 8;
  constexpr int kDirections = 24;
  QuadratureOrder order;
  for (int n = 5; n <= 64; ++n) {
    order = {n, 3, 2 * n};
    const BallRule rule = mollifier_ball_rule(2, kernel.epsilon(), order);
    double err = 0.0;
    for (int m = 1; m <= kMagnitudes && err <= tolerance; ++m) {
      const double q = q_max * m / kMagnitudes;
      const double ref = kernel.multiplier(q);
      for (int a = 0; a < kDirections; ++a) {
        const double th = std::numbers::pi * (a + 0.5) / kDirections;
        Complex s{};
        for (const BallNode& node : rule.nodes) {
          const double ph = -q * (std::cos(th) * node.y[0] + std::sin(th) * node.y[1]);
          s += node.weight * Complex{std::cos(ph), std::sin(ph)};
        }
        err = std::max(err, std::abs(s - ref));
      }
    }
    if (err <= tolerance) return order;
  }
  return order;
}

}  // namespace

std::array<std::vector<double>, 9> channel_gradient(const GridField& f) {
  require_channel(f, "channel_gradient");
  const Dims d = f.dims();
  std::array<Array, 9> g;
  for (int i = 0; i < 3; ++i) {
    const auto comp = f.component(i);
    g[static_cast<std::size_t>(3 * i + 0)] = horizontal_derivative(comp, d, f.lengths(), d.n3, 0);
    g[static_cast<std::size_t>(3 * i + 1)] = horizontal_derivative(comp, d, f.lengths(), d.n3, 1);
    g[static_cast<std::size_t>(3 * i + 2)] = vertical_derivative(comp, d, f.spacing(2));
  }
  return g;
}

std::vector<double> channel_plane_weights(const GridField& f) {
  std::vector<double> w(static_cast<std::size_t>(f.dims().n3), 1.0);
  w.front() = 0.5;
  w.back() = 0.5;
  return w;
}

double channel_divergence(const GridField& f) {
  const auto g = channel_gradient(f);
  double m = 0.0;
  for (std::size_t n = 0; n < g[0].size(); ++n) m = std::max(m, std::abs(g[0][n] + g[4][n] + g[8][n]));
  return m;
}

double channel_envelope(double z, double L3) {
  const double half = L3 / 2.0;
  const double q = z * (L3 - z);
  return q * q / (half * half * half * half);
}

double channel_envelope_derivative(double z, double L3) {
  const double half = L3 / 2.0;
  return 2.0 * z * (L3 - z) * (L3 - 2.0 * z) / (half * half * half * half);
}

GridField channel_curl(const std::array<std::vector<double>, 3>& A, Dims dims, Lengths lengths) {
  const Dims plane_dims{dims.n1, dims.n2, 1};
  const std::size_t plane = plane_size(dims);
  for (const auto& a : A) {
    if (a.size() != plane) throw ValidationError("channel_curl: potential must hold one plane per component");
  }
  std::array<Array, 3> dx, dy;
  for (std::size_t c = 0; c < 3; ++c) {
    dx[c] = horizontal_derivative(A[c], plane_dims, lengths, 1, 0);
    dy[c] = horizontal_derivative(A[c], plane_dims, lengths, 1, 1);
  }
  GridField::Components v;
  for (auto& c : v) c.assign(dims.total(), 0.0);
  const GridField probe = GridField::zeros(dims, Geometry::kChannel, lengths);
  for (int k = 1; k < dims.n3 - 1; ++k) {
    const double z = probe.coordinate(2, k);
    const double e = channel_envelope(z, lengths[2]);
    const double de = channel_envelope_derivative(z, lengths[2]);
    const std::size_t off = plane * static_cast<std::size_t>(k);
    for (std::size_t p = 0; p < plane; ++p) {
      v[0][off + p] = e * dy[2][p] - de * A[1][p];
      v[1][off + p] = -e * dx[2][p] + de * A[0][p];
      v[2][off + p] = e * (dx[1][p] - dy[0][p]);
    }
  }
  return GridField(dims, std::move(v), Geometry::kChannel, lengths);
}

GridField synthesize_channel_field(const SynthesisSpec& spec, Dims dims, Lengths lengths) {
  if (!(spec.target_alpha > 0.0 && spec.target_alpha < 1.0)) {
    throw ValidationError("channel synthesis: target_alpha must lie in (0,1)");
  }
  const int nmin = std::min(dims.n1, dims.n2);
  const int kmax = spec.k_max > 0 ? spec.k_max : (nmin - 1) / 3;
  if (spec.k_min < 1 || kmax < spec.k_min || kmax > nmin / 2) {
    throw ValidationError("channel synthesis: need 1 <= k_min <= k_max <= horizontal Nyquist");
  }
  if (dims.n3 < 5) throw ValidationError("channel synthesis: need at least 5 vertical nodes");

  const Dims plane_dims{dims.n1, dims.n2, 1};
  const int nh = dims.n1 / 2 + 1;
  std::array<std::vector<Complex>, 3> coeff;
  for (auto& c : coeff) c.assign(half_plane_size(plane_dims), Complex{});
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> phase(0.0, kTwoPi);
  const double exponent = spec.target_alpha + 2.0;
  for (int j = 0; j < dims.n2; ++j) {
    const int mj = ModeGrid::signed_mode(j, dims.n2);
    for (int i = 0; i < nh; ++i) {
      if (ModeGrid::is_nyquist(i, dims.n1) || ModeGrid::is_nyquist(j, dims.n2)) continue;
      if (i == 0 && mj <= 0) continue;
      const std::array<double, 3> theta{phase(rng), phase(rng), phase(rng)};
      const double m = std::hypot(static_cast<double>(i), static_cast<double>(mj));
      if (m < spec.k_min || m > kmax) continue;
      const double amp = std::pow(m, -exponent);
      const std::size_t idx = static_cast<std::size_t>(i) + static_cast<std::size_t>(nh) * static_cast<std::size_t>(j);
      for (std::size_t c = 0; c < 3; ++c) {
        coeff[c][idx] = std::polar(amp, theta[c]);
        if (i == 0) {
          const std::size_t partner = static_cast<std::size_t>(nh) * static_cast<std::size_t>((dims.n2 - j) % dims.n2);
          coeff[c][partner] = std::conj(coeff[c][idx]);
        }
      }
    }
  }
  std::array<Array, 3> A;
  for (std::size_t c = 0; c < 3; ++c) A[c] = planes_inverse(coeff[c], plane_dims, 1);
  const GridField raw = channel_curl(A, dims, lengths);
  double s = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (double x : raw.component(c)) s += x * x;
  }
  s /= static_cast<double>(dims.total());
  return s > 0.0 ? raw.scaled(1.0 / std::sqrt(s)) : raw;
}

MollifierKernel horizontal_kernel_for(const GridField& v, double epsilon) {
  return MollifierKernel(2, epsilon,
                         MollifierKernel::table_range({{v.dims().n1, v.lengths()[0]}, {v.dims().n2, v.lengths()[1]}}));
}

GridField horizontal_mollify(const GridField& v, const MollifierKernel& kernel2d) {
  require_channel(v, "horizontal_mollify");
  if (kernel2d.dim() != 2) throw ValidationError("horizontal_mollify needs a two-dimensional kernel");
  const double quarter = std::min(v.lengths()[0], v.lengths()[1]) / 4.0;
  if (!(kernel2d.epsilon() < quarter)) {
    throw ValidationError("horizontal_mollify: epsilon must stay below a quarter of the horizontal period");
  }
  const MollifierKernel kernel = covering_kernel_2d(kernel2d, v);
  GridField::Components out;
  for (int c = 0; c < 3; ++c) out[static_cast<std::size_t>(c)] = mollify_planes(v.component(c), v, kernel);
  // The wall planes are transforms of exact zeros, hence exact zeros.
  const std::size_t plane = plane_size(v.dims());
  const std::size_t top = plane * static_cast<std::size_t>(v.dims().n3 - 1);
  for (const auto& a : out) {
    for (std::size_t p = 0; p < plane; ++p) {
      if (a[p] != 0.0 || a[top + p] != 0.0) throw IdentityError("horizontal mollification moved a wall value");
    }
  }
  GridField result(v.dims(), std::move(out), Geometry::kChannel, v.lengths());
  const double before = channel_divergence(v);
  const double after = channel_divergence(result);
  if (after > before + 1e-10) {
    std::ostringstream msg;
    msg << "horizontal mollification raised the discrete divergence from " << before << " to " << after;
    throw IdentityError(msg.str());
  }
  return result;
}

HolderEstimate horizontal_seminorm(const GridField& v, const Modulus& omega, double max_radius) {
  require_channel(v, "horizontal_seminorm");
  return seminorm_from_profile(increment_profile(v, max_radius, true), 0.0, omega);
}

double horizontal_zeta2(const GridField& v, int plane) {
  require_channel(v, "horizontal_zeta2");
  const Dims d = v.dims();
  if (plane < 0 || plane >= d.n3) throw ValidationError("horizontal_zeta2: plane out of range");
  const Dims pd{d.n1, d.n2, 1};
  const std::size_t ps = plane_size(d);
  const double inv = 1.0 / static_cast<double>(ps);
  std::vector<double> kmag, power;
  std::vector<std::vector<Complex>> spec;
  for (int c = 0; c < 3; ++c) {
    spec.push_back(planes_forward(v.component(c).subspan(ps * static_cast<std::size_t>(plane), ps), pd, 1));
  }
  for_each_horizontal_mode(pd, v.lengths(), [&](std::size_t idx, double kx, double ky, bool) {
    double p = 0.0;
    for (const auto& s : spec) p += std::norm(s[idx] * inv);
    const double w = (kx == 0.0 || (d.n1 % 2 == 0 && idx % static_cast<std::size_t>(d.n1 / 2 + 1) ==
                                                         static_cast<std::size_t>(d.n1 / 2)))
                         ? 1.0
                         : 2.0;
    if (p > 0.0) {
      kmag.push_back(std::hypot(kx, ky));
      power.push_back(w * p);
    }
  });
  const double quarter = std::min(v.lengths()[0], v.lengths()[1]) / 4.0;
  const double h = std::max(v.spacing(0), v.spacing(1));
  std::vector<double> lx, ly;
  for (int j = 0;; ++j) {
    const double r = quarter * std::ldexp(1.0, -j);
    if (r < h * (1.0 - 1e-12)) break;
    double s = 0.0;
    for (std::size_t m = 0; m < kmag.size(); ++m) s += 2.0 * power[m] * (1.0 - std::cyl_bessel_j(0.0, kmag[m] * r));
    if (s > 0.0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(s));
    }
  }
  if (lx.size() < 4) throw ValidationError("horizontal_zeta2: fewer than four radii in the band");
  return fit::least_squares_slope(lx, ly);
}

HorizontalLemmaCheck check_horizontal_lemma(const GridField& v, const MollifierKernel& kernel2d, const Modulus& omega,
                                            std::optional<double> seminorm) {
  const GridField ve = horizontal_mollify(v, kernel2d);
  HorizontalLemmaCheck c;
  c.epsilon = kernel2d.epsilon();
  c.wall_max = wall_max(ve);
  c.divergence_before = channel_divergence(v);
  c.divergence_after = channel_divergence(ve);
  double sup = 0.0;
  for (std::size_t n = 0; n < v.size(); ++n) {
    double s = 0.0;
    for (int k = 0; k < 3; ++k) {
      const double diff = v.component(k)[n] - ve.component(k)[n];
      s += diff * diff;
    }
    sup = std::max(sup, s);
  }
  c.sup_diff = std::sqrt(sup);
  c.seminorm = seminorm ? *seminorm : horizontal_seminorm(v, omega).seminorm;
  c.omega_eps = omega(c.epsilon);
  c.ratio = c.seminorm > 0.0 ? c.sup_diff / (c.seminorm * c.omega_eps) : 0.0;
  return c;
}

ChannelFluxReport channel_flux_bound(const GridField& v, const Modulus& omega, const std::vector<double>& eps_list,
                                     const FluxOptions& options) {
  require_channel(v, "channel_flux_bound");
  if (eps_list.empty()) throw ValidationError("eps_list is empty");
  const Dims d = v.dims();
  const std::vector<double> w = channel_plane_weights(v);
  const double cv = v.cell_volume();
  const double volume = v.lengths()[0] * v.lengths()[1] * v.lengths()[2];

  ChannelFluxReport report;
  report.modulus = omega.name();
  report.seminorm = horizontal_seminorm(v, omega).seminorm;
  report.rough_ratio_bound = 2.0 * report.seminorm;
  report.norm = l2_norm(v);
  report.grad_norm = std::sqrt(grad_norm_sq(v));

  const kernels::Vec3View vv = kernels::view(v);
  kernels::SymTensor product;
  for (std::size_t p = 0; p < 6; ++p) {
    const auto i = static_cast<std::size_t>(kernels::kSymPairs[p][0]);
    const auto j = static_cast<std::size_t>(kernels::kSymPairs[p][1]);
    product[p].resize(d.total());
    for (std::size_t x = 0; x < d.total(); ++x) product[p][x] = vv[i][x] * vv[j][x];
  }

  // Largest horizontal wavenumber present, for sizing the disk rule.
  double q_active = 0.0;
  std::vector<std::vector<Complex>> spectra;
  if (options.route == RemainderRoute::kQuadrature) {
    double biggest = 0.0;
    for (int c = 0; c < 3; ++c) {
      spectra.push_back(planes_forward(v.component(c), d, d.n3));
      for (const Complex& z : spectra.back()) biggest = std::max(biggest, std::abs(z));
    }
    const std::size_t hp = half_plane_size(d);
    for_each_horizontal_mode(d, v.lengths(), [&](std::size_t idx, double kx, double ky, bool) {
      for (const auto& s : spectra) {
        for (std::size_t p = 0; p < static_cast<std::size_t>(d.n3); ++p) {
          if (std::abs(s[p * hp + idx]) > 1e-14 * biggest) q_active = std::max(q_active, std::hypot(kx, ky));
        }
      }
    });
  }

  std::vector<double> eps = eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<>());
  for (double e : eps) {
    const MollifierKernel kernel = covering_kernel_2d(horizontal_kernel_for(v, e), v);
    const GridField ve = horizontal_mollify(v, kernel);
    const kernels::Gradient G = channel_gradient(ve);
    const kernels::Vec3View ev = kernels::view(ve);

    ChannelFluxRow row;
    row.eps = e;
    kernels::SymTensor product_eps;
    for (std::size_t p = 0; p < 6; ++p) product_eps[p] = mollify_planes(product[p], v, kernel);
    row.pi_total = kernels::contract(product_eps, G, d, w) * cv;

    double sh = 0.0, sv = 0.0;
    const std::size_t plane = plane_size(d);
    for (std::size_t x = 0; x < d.total(); ++x) {
      const double wx = w[x / plane];
      for (std::size_t i = 0; i < 3; ++i) {
        sh += wx * ev[i][x] * (ev[0][x] * G[3 * i][x] + ev[1][x] * G[3 * i + 1][x]);
        sv += wx * ev[i][x] * ev[2][x] * G[3 * i + 2][x];
      }
    }
    row.pi_smooth_horizontal = sh * cv;
    row.pi_smooth_vertical = sv * cv;
    row.pi_smooth = row.pi_smooth_horizontal + row.pi_smooth_vertical;

    const GridField rough = v.axpby(1.0, ve, -1.0);
    row.pi_rough = kernels::contract_outer(kernels::view(rough), G, d, w) * cv;
    {
      const kernels::Vec3View rv = kernels::view(rough);
      double a = 0.0;
      for (std::size_t x = 0; x < d.total(); ++x) {
        double g2 = 0.0;
        for (const auto& g : G) g2 += g[x] * g[x];
        a += w[x / plane] * (rv[0][x] * rv[0][x] + rv[1][x] * rv[1][x] + rv[2][x] * rv[2][x]) * std::sqrt(g2);
      }
      row.rough_abs = a * cv;
    }

    if (options.route == RemainderRoute::kSpectral) {
      kernels::SymTensor r = product_eps;
      for (std::size_t p = 0; p < 6; ++p) {
        const auto i = static_cast<std::size_t>(kernels::kSymPairs[p][0]);
        const auto j = static_cast<std::size_t>(kernels::kSymPairs[p][1]);
        for (std::size_t x = 0; x < d.total(); ++x) {
          r[p][x] += product[p][x] - vv[i][x] * ev[j][x] - ev[i][x] * vv[j][x];
        }
      }
      row.pi_remainder = kernels::contract(r, G, d, w) * cv;
    } else {
      const QuadratureOrder order =
          options.order ? *options.order : auto_disk_order(kernel, 2.0 * q_active, options.rule_tolerance);
      const BallRule rule = mollifier_ball_rule(2, e, order);
      row.quadrature_nodes = static_cast<int>(rule.nodes.size());
      std::vector<double> per_node(rule.nodes.size());
      const long count = static_cast<long>(rule.nodes.size());
#pragma omp parallel for schedule(dynamic, 4)
      for (long n = 0; n < count; ++n) {
        const BallNode& node = rule.nodes[static_cast<std::size_t>(n)];
        std::array<Array, 3> delta;
        for (std::size_t c = 0; c < 3; ++c) {
          delta[c] = shifted_difference(spectra[c], v.component(static_cast<int>(c)), d, v.lengths(), node.y);
        }
        per_node[static_cast<std::size_t>(n)] =
            node.weight * kernels::contract_outer({delta[0], delta[1], delta[2]}, G, d, w, kernels::Backend::kSerial);
      }
      double s = 0.0;
      for (double x : per_node) s += x;
      row.pi_remainder = s * cv;
    }

    row.residual = row.pi_total - (row.pi_smooth + row.pi_remainder - row.pi_rough);
    double grad_e = 0.0;
    for (std::size_t x = 0; x < d.total(); ++x) {
      double g2 = 0.0;
      for (const auto& g : G) g2 += g[x] * g[x];
      grad_e += w[x / plane] * g2;
    }
    const double natural = report.norm * report.norm * std::sqrt(grad_e * cv) / std::sqrt(volume);
    const double magnitude = std::max({std::abs(row.pi_total), std::abs(row.pi_smooth), std::abs(row.pi_remainder),
                                       std::abs(row.pi_rough)});
    const double reference = std::max(magnitude, 1e-6 * natural);
    if (std::abs(row.residual) > options.identity_tolerance * reference) {
      std::ostringstream msg;
      msg << "horizontal decomposition identity failed at eps=" << e << ": residual " << row.residual;
      throw IdentityError(msg.str());
    }
    row.omega_eps = omega(e);
    const double denom = row.omega_eps * report.norm * report.grad_norm;
    row.rough_ratio = denom > 0.0 ? std::abs(row.pi_rough) / denom : 0.0;
    row.rough_abs_ratio = denom > 0.0 ? row.rough_abs / denom : 0.0;
    row.remainder_ratio = denom > 0.0 ? std::abs(row.pi_remainder) / denom : 0.0;
    row.smooth_relative = natural > 0.0 ? std::abs(row.pi_smooth) / natural : 0.0;
    report.max_rough_ratio = std::max(report.max_rough_ratio, row.rough_ratio);
    report.max_remainder_ratio = std::max(report.max_remainder_ratio, row.remainder_ratio);
    report.max_rough_abs_ratio = std::max(report.max_rough_abs_ratio, row.rough_abs_ratio);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace onsager
