#include "onsager/solver.hpp"

#include <cmath>
#include <sstream>

#include "onsager/error.hpp"
#include "onsager/fft.hpp"

namespace onsager {

void SolverConfig::validate() const {
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw ValidationError("solver: nu must be >= 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("solver: dt must be > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) throw ValidationError("solver: t_end must be >= 0");
  if (snapshot_stride < 1) throw ValidationError("solver: snapshot_stride must be >= 1");
  if (!(cfl_limit > 0.0)) throw ValidationError("solver: cfl_limit must be > 0");
  if (dims.n1 < 4 || dims.n2 < 4 || dims.n3 < 4) throw ValidationError("solver: dims must be >= 4");
  const double n = t_end / dt;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
    throw ValidationError("solver: t_end must be an integer multiple of dt");
  }
}

long SolverConfig::steps() const { return std::lround(t_end / dt); }

namespace {

struct Stepper {
  const SolverConfig& config;
  std::vector<double> full;  // e^{-ν|k|²dt}
  std::vector<double> half;  // e^{-ν|k|²dt/2}
  double h_min;

  explicit Stepper(const SolverConfig& c, const Dims& d, const Lengths& L) : config(c) {
    ModeGrid grid(d, L);
    full.resize(grid.size());
    half.resize(grid.size());
    grid.for_each([&](std::size_t idx, int, int, int, const std::array<double, 3>& k, bool) {
      const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
      full[idx] = std::exp(-c.nu * k2 * c.dt);
      half[idx] = std::exp(-0.5 * c.nu * k2 * c.dt);
    });
    h_min = std::min({L[0] / d.n1, L[1] / d.n2, L[2] / d.n3});
  }

  static SpectralField::Components combine(const SpectralField& a, const std::vector<double>* fa, double ca,
                                           const SpectralField* b, const std::vector<double>* fb, double cb) {
    SpectralField::Components out;
    for (int c = 0; c < 3; ++c) {
      const auto x = a.component(c);
      auto& o = out[static_cast<std::size_t>(c)];
      o.resize(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        Complex v = ca * x[i];
        if (fa) v *= (*fa)[i];
        if (b) {
          Complex w = cb * b->component(c)[i];
          if (fb) w *= (*fb)[i];
          v += w;
        }
        o[i] = v;
      }
    }
    return out;
  }

  SpectralField make(const SpectralField& like, SpectralField::Components c) const {
    return SpectralField(like.dims(), like.lengths(), std::move(c), true);
  }

  SpectralField advance(const SpectralField& v, long index) const {
    const double dt = config.dt;
    const double speed = inverse_transform(v).max_norm();
    const double cfl = dt * speed / h_min;
    if (cfl > config.cfl_limit) throw CflError(index, cfl);

    const SpectralField a = nonlinear_term(v, config.dealias);
    // b = N(E_h (v + dt/2 a))
    const SpectralField vb = make(v, combine(v, &half, 1.0, &a, &half, 0.5 * dt));
    const SpectralField b = nonlinear_term(vb, config.dealias);
    // c = N(E_h v + dt/2 b)
    const SpectralField vc = make(v, combine(v, &half, 1.0, &b, nullptr, 0.5 * dt));
    const SpectralField c = nonlinear_term(vc, config.dealias);
    // d = N(E v + dt E_h c)
    const SpectralField vd = make(v, combine(v, &full, 1.0, &c, &half, dt));
    const SpectralField d = nonlinear_term(vd, config.dealias);

    SpectralField::Components out;
    for (int comp = 0; comp < 3; ++comp) {
      auto& o = out[static_cast<std::size_t>(comp)];
      const auto vv = v.component(comp);
      const auto aa = a.component(comp), bb = b.component(comp), cc = c.component(comp), dd = d.component(comp);
      o.resize(vv.size());
      for (std::size_t i = 0; i < vv.size(); ++i) {
        o[i] = full[i] * vv[i] + dt / 6.0 * (full[i] * aa[i] + 2.0 * half[i] * (bb[i] + cc[i]) + dd[i]);
      }
    }
    SpectralField next(v.dims(), v.lengths(), std::move(out), true);
    return config.dealias ? truncate_two_thirds(next) : next;
  }
};

}  // namespace

SpectralField nonlinear_term(const SpectralField& v, bool dealias) {
  const Dims d = v.dims();
  const GridField g = inverse_transform(v);
  const double inv_n = 1.0 / static_cast<double>(d.total());
  std::array<std::vector<Complex>, 6> prod;
  std::vector<double> buf(d.total());
  for (std::size_t p = 0; p < 6; ++p) {
    const int i = p < 3 ? static_cast<int>(p) : (p == 5 ? 1 : 0);
    const int j = p < 3 ? static_cast<int>(p) : (p == 3 ? 1 : 2);
    const auto a = g.component(i), b = g.component(j);
    for (std::size_t x = 0; x < buf.size(); ++x) buf[x] = a[x] * b[x];
    prod[p].resize(fft::half_size(d));
    fft::forward3(d, buf, prod[p]);
    for (auto& z : prod[p]) z *= inv_n;
  }
  // Symmetric-pair slot of (i, j): xx yy zz xy xz yz.
  constexpr int slot[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
  SpectralField::Components out;
  for (auto& c : out) c.assign(fft::half_size(d), Complex{});
  const Complex I{0.0, 1.0};
  ModeGrid(d, v.lengths()).for_each([&](std::size_t idx, int, int, int, const std::array<double, 3>& k, bool nyq) {
    if (nyq) return;
    for (int i = 0; i < 3; ++i) {
      Complex s{};
      for (int j = 0; j < 3; ++j) s += k[static_cast<std::size_t>(j)] * prod[static_cast<std::size_t>(slot[i][j])][idx];
      out[static_cast<std::size_t>(i)][idx] = -I * s;
    }
  });
  SpectralField n = leray_project(SpectralField(d, v.lengths(), std::move(out)));
  return dealias ? truncate_two_thirds(n) : n;
}

SpectralField step(const SpectralField& v, const SolverConfig& config, long step_index) {
  SolverConfig c = config;
  c.dims = v.dims();
  const Stepper stepper(c, v.dims(), v.lengths());
  return stepper.advance(v, step_index);
}

Trajectory run(const GridField& v0, const SolverConfig& config) {
  config.validate();
  if (v0.geometry() != Geometry::kPeriodic3) throw ValidationError("solver: periodic initial data required");
  if (!(v0.dims() == config.dims)) throw ValidationError("solver: initial data dims differ from the config");
  Trajectory traj;
  traj.config = config;

  const SpectralField raw = forward_transform(v0);
  SpectralField v = leray_project(raw);
  const double removed = std::sqrt(std::max(0.0, 2.0 * (spectral_energy(raw) - spectral_energy(v)) /
                                                     (v0.lengths()[0] * v0.lengths()[1] * v0.lengths()[2])));
  if (removed > 1e-12 * std::max(1.0, coefficient_norm(raw))) {
    std::ostringstream msg;
    msg << "initial data projected onto zero-mean divergence-free fields (removed rms " << removed << ")";
    traj.notes.push_back(msg.str());
  }
  if (config.dealias && !is_dealiased(v)) {
    traj.notes.push_back("initial data truncated to the two-thirds band");
    v = truncate_two_thirds(v);
  }

  const Stepper stepper(config, v.dims(), v.lengths());
  const long steps = config.steps();
  auto record = [&](double t) { traj.log.push_back({t, spectral_energy(v), spectral_grad_norm_sq(v)}); };
  record(0.0);
  traj.snapshots.push_back({0.0, inverse_transform(v)});
  for (long n = 1; n <= steps; ++n) {
    v = stepper.advance(v, n);
    const double t = static_cast<double>(n) * config.dt;
    record(t);
    if (n % config.snapshot_stride == 0) traj.snapshots.push_back({t, inverse_transform(v)});
  }
  return traj;
}

GridField taylor_green(Dims dims) {
  return GridField::sample(dims, [](double x, double y, double z) {
    return std::array<double, 3>{std::sin(x) * std::cos(y) * std::cos(z), -std::cos(x) * std::sin(y) * std::cos(z), 0.0};
  });
}

GridField shear_mode(Dims dims) {
  return GridField::sample(dims, [](double, double y, double) { return std::array<double, 3>{std::sin(y), 0.0, 0.0}; });
}

}  // namespace onsager
