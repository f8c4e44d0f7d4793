#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>

#include "onsager/error.hpp"
#include "onsager/field_io.hpp"
#include "onsager/holder.hpp"
#include "onsager/spectral.hpp"
#include "onsager/synthesis.hpp"
#include "support.hpp"

using namespace onsager;

namespace {

GridField sin_x2(Dims d) {
  return GridField::sample(d, [](double, double y, double) { return std::array<double, 3>{std::sin(y), 0.0, 0.0}; });
}

double coefficient_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (int c = 0; c < 3; ++c) {
    for (std::size_t n = 0; n < a.size(); ++n) m = std::max(m, std::abs(a.component(c)[n] - b.component(c)[n]));
  }
  return m;
}

}  // namespace

TEST_CASE("transform round trip of the zero field") {
  const GridField z = GridField::zeros({8, 8, 8});
  const SpectralField F = forward_transform(z);
  CHECK(coefficient_norm(F) == 0.0);
  CHECK(testsupport::max_abs_diff(inverse_transform(F), z) == 0.0);
}

TEST_CASE("sin x2 has exactly one conjugate pair of coefficients") {
  const Dims d{32, 32, 32};
  const GridField f = sin_x2(d);
  const SpectralField F = forward_transform(f);
  int nonzero = 0;
  ModeGrid(d).for_each([&](std::size_t idx, int i, int j, int l, const std::array<double, 3>&, bool) {
    for (int c = 0; c < 3; ++c) {
      if (std::abs(F.component(c)[idx]) > 1e-13) {
        ++nonzero;
        CHECK(c == 0);
        CHECK(i == 0);
        CHECK(l == 0);
        CHECK(std::abs(ModeGrid::signed_mode(j, d.n2)) == 1);
        // sin y = (e^{iy} - e^{-iy}) / 2i
        const double expected = ModeGrid::signed_mode(j, d.n2) == 1 ? -0.5 : 0.5;
        CHECK(F.component(c)[idx].imag() == doctest::Approx(expected).epsilon(1e-14));
      }
    }
  });
  CHECK(nonzero == 2);
  CHECK(testsupport::max_abs_diff(inverse_transform(F), f) <= 1e-12);
}

TEST_CASE("random fields round trip, including odd and non-power-of-two sizes") {
  for (Dims d : {Dims{16, 16, 16}, Dims{12, 10, 9}, Dims{7, 5, 6}}) {
    const GridField f = testsupport::random_field(11, d);
    const GridField g = inverse_transform(forward_transform(f));
    CHECK(testsupport::max_abs_diff(f, g) <= 1e-12 * f.max_abs());
  }
}

TEST_CASE("transform rejects channel fields") {
  const GridField c = GridField::zeros({8, 8, 9}, Geometry::kChannel);
  CHECK_THROWS_AS(forward_transform(c), ValidationError);
}

TEST_CASE("Leray projection") {
  const Dims d{16, 16, 16};
  SUBCASE("gradients are annihilated") {
    // u = ∇φ with φ = sin x1 cos 2x2 + cos 3x3
    const GridField grad = GridField::sample(d, [](double x, double y, double z) {
      return std::array<double, 3>{std::cos(x) * std::cos(2 * y), -2 * std::sin(x) * std::sin(2 * y), -3 * std::sin(3 * z)};
    });
    const SpectralField P = leray_project(forward_transform(grad));
    CHECK(coefficient_norm(P) <= 1e-13 * coefficient_norm(forward_transform(grad)));
    CHECK(P.divergence_free());
  }
  SUBCASE("sin x2 is unchanged") {
    const SpectralField F = forward_transform(sin_x2(d));
    CHECK(coefficient_diff(leray_project(F), F) <= 1e-15);
  }
  SUBCASE("idempotent and non-expansive on random fields") {
    for (std::uint64_t seed : {1, 2, 3}) {
      const SpectralField F = forward_transform(testsupport::random_field(seed, d));
      const SpectralField P = leray_project(F);
      const SpectralField PP = leray_project(P);
      CHECK(coefficient_diff(PP, P) <= 1e-12 * coefficient_norm(F));
      CHECK(spectral_energy(P) <= spectral_energy(F));
      CHECK(max_divergence(P) <= 1e-12 * coefficient_norm(P));
      CHECK(std::abs(P.component(0)[0]) == 0.0);
    }
  }
}

TEST_CASE("energy and gradient norm of sin x2") {
  const double vol = std::pow(kTwoPi, 3);
  const GridField f = sin_x2({16, 16, 16});
  CHECK(energy(f) == doctest::Approx(vol / 4).epsilon(1e-13));
  CHECK(grad_norm_sq(f) == doctest::Approx(vol / 2).epsilon(1e-13));
  CHECK(energy(GridField::zeros({8, 8, 8})) == 0.0);
  CHECK(grad_norm_sq(GridField::zeros({8, 8, 8})) == 0.0);
}

TEST_CASE("Parseval: grid and coefficient energies agree") {
  for (std::uint64_t seed : {4, 5}) {
    const GridField f = testsupport::random_field(seed, {16, 12, 10});
    const SpectralField F = forward_transform(f);
    CHECK(spectral_energy(F) == doctest::Approx(energy(f)).epsilon(1e-10));
  }
}

TEST_CASE("synthesized fields are solenoidal with zero mean") {
  for (double alpha : {0.2, 0.5, 0.8}) {
    SynthesisSpec s;
    s.target_alpha = alpha;
    s.seed = 3;
    const GridField v = synthesize_holder_field(s, {32, 32, 32});
    const SpectralField F = forward_transform(v);
    CHECK(max_divergence(F) <= 1e-12 * coefficient_norm(F));
    for (double m : v.mean()) CHECK(std::abs(m) <= 1e-13);
    // unit rms speed
    CHECK(2.0 * energy(v) / std::pow(kTwoPi, 3) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("synthesis validation") {
  SynthesisSpec s;
  s.k_min = 5;
  s.k_max = 3;
  CHECK_THROWS_AS(synthesize_holder_field(s, {16, 16, 16}), ValidationError);
  s.k_min = 1;
  s.k_max = 40;
  CHECK_THROWS_AS(synthesize_holder_field(s, {16, 16, 16}), ValidationError);
  s.k_max = 0;
  s.target_alpha = 1.0;
  CHECK_THROWS_AS(synthesize_holder_field(s, {16, 16, 16}), ValidationError);
}

TEST_CASE("single-shell synthesis is smooth") {
  SynthesisSpec s;
  s.k_min = 1;
  s.k_max = 1;
  const GridField v = synthesize_holder_field(s, {32, 32, 32});
  const HolderEstimate h = estimate_seminorm(v, 1.0);
  CHECK(std::isfinite(h.seminorm));
  CHECK(h.seminorm > 0.0);
  CHECK_FALSE(h.diverging);
}

TEST_CASE("synthesized exponent at 64^3 and seed reproducibility") {
  SynthesisSpec s;
  s.target_alpha = 0.5;
  s.seed = 1;
  const GridField a = synthesize_holder_field(s, {64, 64, 64});
  const GridField a2 = synthesize_holder_field(s, {64, 64, 64});
  s.seed = 2;
  const GridField b = synthesize_holder_field(s, {64, 64, 64});
  CHECK(testsupport::max_abs_diff(a, a2) == 0.0);
  CHECK(testsupport::max_abs_diff(a, b) > 0.1);
  const double za = estimate_zeta2(a) / 2.0;
  const double zb = estimate_zeta2(b) / 2.0;
  CHECK(za >= 0.40);
  CHECK(za <= 0.60);
  CHECK(std::abs(za - zb) <= 0.05);
}

TEST_CASE("OFX1 round trip and header layout") {
  const GridField f = testsupport::random_field(9, {6, 5, 4});
  const std::vector<unsigned char> bytes = encode_ofx1(f);
  REQUIRE(bytes.size() == kOfxHeaderBytes + 3 * 8 * f.size());
  CHECK(std::memcmp(bytes.data(), "OFX1", 4) == 0);
  std::uint32_t version = 0, geometry = 7, dims[3];
  double lengths[3];
  std::memcpy(&version, bytes.data() + 4, 4);
  std::memcpy(&geometry, bytes.data() + 16, 4);
  std::memcpy(dims, bytes.data() + 20, 12);
  std::memcpy(lengths, bytes.data() + 32, 24);
  CHECK(version == 1);
  CHECK(geometry == 0);
  CHECK(dims[0] == 6);
  CHECK(dims[1] == 5);
  CHECK(dims[2] == 4);
  CHECK(lengths[2] == kTwoPi);
  for (int b = 8; b < 16; ++b) CHECK(bytes[static_cast<std::size_t>(b)] == 0);
  double first = 0.0;
  std::memcpy(&first, bytes.data() + kOfxHeaderBytes, 8);
  CHECK(first == f.at(0, 0, 0, 0));

  const GridField g = decode_ofx1(bytes);
  CHECK(g.dims() == f.dims());
  CHECK(testsupport::max_abs_diff(f, g) == 0.0);
  CHECK(encode_ofx1(g) == bytes);

  const auto path = std::filesystem::temp_directory_path() / "onsager_test_roundtrip.ofx1";
  write_ofx1(path, f);
  CHECK(encode_ofx1(read_ofx1(path)) == bytes);
  std::filesystem::remove(path);
}

TEST_CASE("OFX1 rejects malformed input") {
  std::vector<unsigned char> bytes = encode_ofx1(testsupport::random_field(1, {4, 4, 4}));
  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_ofx1(bad), ValidationError);
  bad = bytes;
  bad.resize(bad.size() - 8);
  CHECK_THROWS_AS(decode_ofx1(bad), ValidationError);
  bad = bytes;
  bad[4] = 2;
  CHECK_THROWS_AS(decode_ofx1(bad), ValidationError);
  bad = bytes;
  bad[16] = 5;
  CHECK_THROWS_AS(decode_ofx1(bad), ValidationError);
  CHECK_THROWS_AS(decode_ofx1({}), ValidationError);
}

TEST_CASE("channel fields keep exact zero walls") {
  const Dims d{8, 8, 9};
  const GridField c = GridField::sample(
      d, [](double, double, double) { return std::array<double, 3>{1.0, 2.0, 3.0}; }, Geometry::kChannel);
  for (int j = 0; j < d.n2; ++j) {
    for (int i = 0; i < d.n1; ++i) {
      for (int comp = 0; comp < 3; ++comp) {
        CHECK(c.at(comp, i, j, 0) == 0.0);
        CHECK(c.at(comp, i, j, d.n3 - 1) == 0.0);
      }
    }
  }
  GridField::Components raw = c.components();
  raw[1][0] = 1e-300;
  CHECK_THROWS_AS(GridField(d, raw, Geometry::kChannel), ValidationError);
  CHECK(c.spacing(2) == doctest::Approx(kTwoPi / 8));
}

TEST_CASE("GridField validation") {
  CHECK_THROWS_AS(GridField::zeros({1, 4, 4}), ValidationError);
  GridField::Components c;
  for (auto& a : c) a.assign(64, 0.0);
  c[2][5] = NAN;
  CHECK_THROWS_AS(GridField({4, 4, 4}, c), ValidationError);
  c[2][5] = 0.0;
  c[0].pop_back();
  CHECK_THROWS_AS(GridField({4, 4, 4}, c), ValidationError);
}
