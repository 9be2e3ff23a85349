#include <catch2/catch_amalgamated.hpp>
#include <limits>

#include "modhf/grid.hpp"
#include "modhf/fields.hpp"
#include "test_helpers.hpp"

using namespace modhf;
using testutil::max_abs_diff;
using testutil::random_field;
using testutil::rel_l2_diff;

TEST_CASE("grid invariants are enforced", "[grid]") {
  CHECK_THROWS_AS(GridSpec(1, 6, 8.0), ConfigError);
  CHECK_THROWS_AS(GridSpec(1, 7, 8.0), ConfigError);
  CHECK_THROWS_AS(GridSpec(0, 16, 8.0), ConfigError);
  CHECK_THROWS_AS(GridSpec(1, 16, -2.0), ConfigError);

  GridSpec g(1, 256, 8.0);
  CHECK(g.dx() * g.samples_per_dim() == Catch::Approx(2.0 * g.half_width()).epsilon(0));
  CHECK(g.signed_freq(g.freq_slot(-128)) == -128);
  CHECK(g.signed_freq(g.freq_slot(127)) == 127);
  CHECK(g.xi_at(3) == Catch::Approx(3.0 / 16.0));
}

TEST_CASE("self-dual Gaussian is its own transform", "[grid]") {
  GridSpec g(1, 256, 8.0);
  Field f = gaussian_packet(g, 1.0);  // exp(-pi x^2)
  Field fhat = forward_fourier(f);
  // Compare against exp(-pi xi^2) on the frequency lattice.
  double worst = 0.0;
  for (std::size_t m = 0; m < fhat.size(); ++m) {
    const auto xi = g.xi_of(m);
    worst = std::max(worst, std::abs(fhat[m] - cplx(std::exp(-M_PI * xi[0] * xi[0]), 0.0)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("impulse transforms to the constant field", "[grid]") {
  GridSpec g(1, 128, 4.0);
  Field f(g);
  f[g.samples_per_dim() / 2] = cplx(1.0 / g.dx(), 0.0);  // delta at x = 0
  Field fhat = forward_fourier(f);
  for (std::size_t m = 0; m < fhat.size(); ++m)
    CHECK(std::abs(fhat[m] - cplx(1.0, 0.0)) <= 1e-12);
}

TEST_CASE("plane wave spikes at its frequency, against direct quadrature", "[grid]") {
  GridSpec g(1, 256, 8.0);
  const int k0 = 5;  // xi = 5/16
  Field f = plane_wave(g, {k0, 0, 0});
  Field fhat = forward_fourier(f);

  // Independent oracle: direct quadrature of the defining integral at five
  // frequency lattice samples.
  for (int j : {k0, k0 + 1, k0 - 1, k0 + 2, -k0}) {
    cplx direct = 0.0;
    for (int m = 0; m < g.samples_per_dim(); ++m) {
      const double x = g.x_at(m);
      direct += std::polar(1.0, 2.0 * M_PI * g.xi_at(k0) * x) *
                std::polar(1.0, -2.0 * M_PI * g.xi_at(j) * x);
    }
    direct *= g.dx();
    CHECK(std::abs(fhat[g.freq_slot(j)] - direct) <= 1e-8);
  }
  // The spike itself: integral of 1 over [-L, L).
  CHECK(std::abs(fhat[g.freq_slot(k0)] - cplx(2.0 * g.half_width(), 0.0)) <= 1e-8);
}

TEST_CASE("round trip is the identity", "[grid]") {
  for (int d : {1, 2}) {
    GridSpec g(d, d == 1 ? 512 : 64, 8.0);
    Field f = random_field(g, 42);
    Field back = inverse_fourier(forward_fourier(f));
    CHECK(rel_l2_diff(back, f) <= 1e-12);
  }
}

TEST_CASE("Parseval identity on random fields", "[grid]") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    GridSpec g(1, 512, 8.0);
    Field f = random_field(g, seed);
    const double a = lp_norm(f, 2.0);
    const double b = lp_norm_spectral(forward_fourier(f), 2.0);
    CHECK(std::abs(a - b) / a <= 1e-10);
  }
  GridSpec g2(2, 64, 4.0);
  Field f2 = random_field(g2, 7);
  CHECK(std::abs(lp_norm(f2, 2.0) - lp_norm_spectral(forward_fourier(f2), 2.0)) /
            lp_norm(f2, 2.0) <=
        1e-10);
}

TEST_CASE("Lp norms: constants, Gaussians, sup, homogeneity", "[grid]") {
  GridSpec g(1, 64, 1.0);
  Field ones = Field::sample(g, [](const std::array<double, 3>&) { return cplx(1.0, 0.0); });
  CHECK(lp_norm(ones, 1.0) == Catch::Approx(2.0).margin(1e-12));  // box measure of [-1,1)

  GridSpec g8(1, 512, 8.0);
  Field gauss = gaussian_packet(g8, 1.0);
  // ||exp(-pi x^2)||_{L^2} = (int exp(-2 pi x^2))^{1/2} = 2^{-1/4}
  CHECK(std::abs(lp_norm(gauss, 2.0) - std::pow(2.0, -0.25)) <= 1e-8);

  Field f = random_field(g8, 11);
  double maxabs = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) maxabs = std::max(maxabs, std::abs(f[i]));
  CHECK(lp_norm(f, INFINITY) == maxabs);

  const cplx c(0.3, -1.7);
  const double inf = std::numeric_limits<double>::infinity();
  for (double p : {1.0, 1.5, 2.0, 3.0, inf}) {
    Field cf = f;
    cf *= c;
    CHECK(lp_norm(cf, p) == Catch::Approx(std::abs(c) * lp_norm(f, p)).epsilon(1e-13));
  }

  CHECK_THROWS_AS(lp_norm(f, 0.5), std::domain_error);
}

TEST_CASE("grid mismatch raises a configuration error", "[grid]") {
  GridSpec a(1, 64, 4.0), b(1, 64, 8.0);
  Field fa(a), fb(b);
  CHECK_THROWS_AS(fa += fb, ConfigError);
  CHECK_THROWS_AS(hadamard(fa, fb), ConfigError);
}

TEST_CASE("fields stay finite through the transform", "[grid]") {
  GridSpec g(1, 128, 8.0);
  Field f = random_field(g, 5);
  CHECK(f.all_finite());
  CHECK(forward_fourier(f).all_finite());
}

TEST_CASE("natural-order spectrum matches signed enumeration", "[grid]") {
  GridSpec g(1, 64, 4.0);  // self-dual: n = 4 L^2
  Field f = random_field(g, 9, 2.0);
  Field fhat = forward_fourier(f);
  Field nat = spectrum_in_natural_order(fhat);
  const int n = g.samples_per_dim();
  for (int m = 0; m < n; ++m) {
    const int j = m - n / 2;
    CHECK(nat[m] == fhat[g.freq_slot(j)]);
  }
}
