#include <doctest.h>

#include <cmath>

#include "onsager/error.hpp"
#include "onsager/solver.hpp"
#include "support.hpp"

using namespace onsager;

namespace {

SolverConfig config(double nu, double dt, double t_end, Dims d) {
  SolverConfig c;
  c.nu = nu;
  c.dt = dt;
  c.t_end = t_end;
  c.dims = d;
  return c;
}

const double kVol = std::pow(kTwoPi, 3);

}  // namespace

TEST_CASE("zero data stays zero") {
  const Dims d{8, 8, 8};
  const Trajectory t = run(GridField::zeros(d), config(0.1, 0.1, 1.0, d));
  CHECK(t.snapshots.back().field.max_abs() == 0.0);
  for (const StepRecord& r : t.log) CHECK(r.energy == 0.0);
  CHECK(t.notes.empty());
}

TEST_CASE("single shear mode decays at the exact viscous rate") {
  const Dims d{16, 16, 16};
  const double nu = 0.3;
  const Trajectory t = run(shear_mode(d), config(nu, 1e-3, 1.0, d));
  const GridField exact = shear_mode(d).scaled(std::exp(-nu));
  CHECK(testsupport::max_abs_diff(t.snapshots.back().field, exact) <= 1e-8);
  for (const StepRecord& r : t.log) {
    CHECK(r.energy == doctest::Approx(kVol / 4 * std::exp(-2 * nu * r.t)).epsilon(1e-10));
    CHECK(r.grad_norm_sq == doctest::Approx(kVol / 2 * std::exp(-2 * nu * r.t)).epsilon(1e-10));
  }
}

TEST_CASE("time stepping is fourth order") {
  const Dims d{16, 16, 16};
  const GridField v0 = taylor_green(d);
  std::vector<GridField> end;
  for (double dt : {0.1, 0.05, 0.025}) end.push_back(run(v0, config(0.05, dt, 1.0, d)).snapshots.back().field);
  const double coarse = testsupport::max_abs_diff(end[0], end[1]);
  const double fine = testsupport::max_abs_diff(end[1], end[2]);
  CHECK(coarse / fine == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("viscous energy is non-increasing") {
  const Dims d{16, 16, 16};
  const Trajectory t = run(taylor_green(d), config(0.1, 0.01, 1.0, d));
  for (std::size_t n = 1; n < t.log.size(); ++n) CHECK(t.log[n].energy <= t.log[n - 1].energy);
  CHECK(t.log.back().energy < t.log.front().energy);
}

TEST_CASE("inviscid truncated dynamics conserve energy") {
  const Dims d{16, 16, 16};
  const Trajectory t = run(taylor_green(d), config(0.0, 0.01, 1.0, d));
  const double e0 = t.log.front().energy;
  for (const StepRecord& r : t.log) CHECK(std::abs(r.energy - e0) <= 1e-7 * e0);
  // the flow does develop: energy moves to higher modes
  CHECK(t.log.back().grad_norm_sq > 1.05 * t.log.front().grad_norm_sq);
}

TEST_CASE("snapshots, mean and divergence") {
  const Dims d{16, 16, 16};
  SolverConfig c = config(0.05, 0.02, 1.0, d);
  c.snapshot_stride = 10;
  const GridField v0 = testsupport::random_solenoidal(3, d, 4);
  const Trajectory t = run(v0.scaled(1.0 / v0.max_norm()), c);
  REQUIRE(t.snapshots.size() == 6);
  CHECK(t.log.size() == 51);
  for (std::size_t n = 0; n < t.snapshots.size(); ++n) {
    CHECK(t.snapshots[n].t == doctest::Approx(0.2 * static_cast<double>(n)).epsilon(1e-14));
    const GridField& f = t.snapshots[n].field;
    for (double m : f.mean()) CHECK(std::abs(m) <= 1e-14);
    const SpectralField F = forward_transform(f);
    CHECK(max_divergence(F) <= 1e-12 * coefficient_norm(F));
  }
}

TEST_CASE("non-solenoidal initial data are projected with a note") {
  const Dims d{8, 8, 8};
  const GridField raw = taylor_green(d).shifted_by_constant({0.5, 0.0, 0.0});
  const Trajectory t = run(raw, config(0.1, 0.1, 0.2, d));
  REQUIRE(t.notes.size() == 1);
  CHECK(t.notes[0].find("projected") != std::string::npos);
  CHECK(std::abs(t.snapshots[0].field.mean()[0]) <= 1e-15);
  CHECK(testsupport::max_abs_diff(t.snapshots[0].field, taylor_green(d)) <= 1e-14);
}

TEST_CASE("CFL violations report the step") {
  const Dims d{16, 16, 16};
  const GridField fast = taylor_green(d).scaled(10.0);
  try {
    run(fast, config(0.0, 0.1, 1.0, d));
    FAIL("expected CflError");
  } catch (const CflError& e) {
    CHECK(e.step() == 1);
    CHECK(e.cfl() > 0.5);
  }
  try {
    step(forward_transform(fast), config(0.0, 0.1, 1.0, d), 7);
    FAIL("expected CflError");
  } catch (const CflError& e) {
    CHECK(e.step() == 7);
  }
}

TEST_CASE("solver configuration validation") {
  const Dims d{8, 8, 8};
  CHECK_THROWS_AS(config(-1.0, 0.1, 1.0, d).validate(), ValidationError);
  CHECK_THROWS_AS(config(0.1, 0.0, 1.0, d).validate(), ValidationError);
  CHECK_THROWS_AS(config(0.1, 0.3, 1.0, d).validate(), ValidationError);
  CHECK_THROWS_AS(config(0.1, 0.1, 1.0, {2, 8, 8}).validate(), ValidationError);
  CHECK(config(0.1, 0.1, 1.0, d).steps() == 10);
  CHECK_THROWS_AS(run(GridField::zeros({8, 8, 8}), config(0.1, 0.1, 1.0, {16, 16, 16})), ValidationError);
  CHECK_THROWS_AS(run(GridField::zeros({8, 8, 9}, Geometry::kChannel), config(0.1, 0.1, 1.0, {8, 8, 9})),
                  ValidationError);
}
