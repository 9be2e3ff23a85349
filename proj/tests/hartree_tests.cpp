#include <catch2/catch_amalgamated.hpp>
#include <map>

#include "modhf/fields.hpp"
#include "modhf/hartree.hpp"
#include "test_helpers.hpp"

using namespace modhf;
using testutil::random_field;
using testutil::rel_l2_diff;

TEST_CASE("potential parameters are validated", "[hartree]") {
  GridSpec g(1, 128, 8.0);
  CHECK_THROWS_AS(HartreePotential(g, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(HartreePotential(g, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(HartreePotential(g, -0.2, 1.0), std::domain_error);
  CHECK_NOTHROW(HartreePotential(g, 0.5, -2.0));
}

TEST_CASE("multiplier is real, sign-definite, and radially symmetric", "[hartree]") {
  GridSpec g(2, 64, 4.0);
  HartreePotential pot(g, 0.75, 1.0, ZeroMode::cell_average);
  const auto& mult = pot.multiplier();

  std::map<long long, double> by_radius;
  const int n = g.samples_per_dim();
  for (int j0 = -n / 2; j0 < n / 2; ++j0)
    for (int j1 = -n / 2; j1 < n / 2; ++j1) {
      const double v = mult[g.flatten({g.freq_slot(j0), g.freq_slot(j1), 0})];
      CHECK(v >= 0.0);
      const long long r2 = 1ll * j0 * j0 + 1ll * j1 * j1;
      auto it = by_radius.find(r2);
      if (it == by_radius.end())
        by_radius[r2] = v;
      else
        CHECK(v == Catch::Approx(it->second).epsilon(1e-13));
    }

  HartreePotential neg(g, 0.75, -1.0, ZeroMode::mean_zero);
  CHECK(neg.multiplier()[g.flatten({g.freq_slot(3), g.freq_slot(1), 0})] < 0.0);
  CHECK(neg.multiplier()[0] == 0.0);  // mean-zero policy empties the zero cell
}

TEST_CASE("riesz constant at self-dual exponents", "[hartree]") {
  // In d = 1 the kernel |x|^{-1/2} is its own transform: C(1, 1/2) = 1.
  CHECK(HartreePotential::riesz_constant(1, 0.5) == Catch::Approx(1.0).margin(1e-14));
  // d = 2, gamma = 1: C = pi^0 Gamma(1/2)/Gamma(1/2) = 1.
  CHECK(HartreePotential::riesz_constant(2, 1.0) == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("convolution matches the singular quadrature oracle (d = 1)", "[hartree]") {
  GridSpec g(1, 2048, 16.0);
  const double gamma = 0.5, kappa = 1.0;
  HartreePotential pot(g, gamma, kappa, ZeroMode::cell_average);
  Field f = gaussian_packet(g, 1.0);
  Field conv = pot.convolve(f);

  auto gauss = [](double y) { return std::exp(-M_PI * y * y); };
  // Probe at exact lattice points (dx = 1/64 here).
  const int offsets[7] = {0, 24, -24, 52, -52, 90, -128};
  for (int off : offsets) {
    const int m = g.samples_per_dim() / 2 + off;
    const double x = g.x_at(m);
    const double oracle = testutil::riesz_oracle_1d(gauss, x, gamma, kappa);
    const double got = conv[m].real();
    CHECK(std::abs(got - oracle) <= 2e-3 * std::abs(oracle));
    CHECK(std::abs(conv[m].imag()) <= 1e-12);
  }
}

TEST_CASE("convolution matches the polar quadrature oracle (d = 2)", "[hartree]") {
  GridSpec g(2, 256, 8.0);
  const double gamma = 1.0, kappa = 1.0;
  HartreePotential pot(g, gamma, kappa, ZeroMode::cell_average);
  Field f = gaussian_packet(g, 1.0);
  Field conv = pot.convolve(f);

  auto gauss = [](double y0, double y1) { return std::exp(-M_PI * (y0 * y0 + y1 * y1)); };
  const double probes[3][2] = {{0.0, 0.0}, {0.5, -0.25}, {1.0, 0.75}};
  for (const auto& p : probes) {
    const double oracle = testutil::riesz_oracle_2d(gauss, p[0], p[1], gamma, kappa);
    const int m0 = static_cast<int>(std::lround((p[0] + g.half_width()) / g.dx()));
    const int m1 = static_cast<int>(std::lround((p[1] + g.half_width()) / g.dx()));
    const double got = conv[g.flatten({m0, m1, 0})].real();
    CHECK(std::abs(got - oracle) <= 1e-2 * std::abs(oracle));
  }
}

TEST_CASE("convolution is linear and annihilates zero", "[hartree]") {
  GridSpec g(1, 256, 8.0);
  HartreePotential pot(g, 0.5, 1.3);
  Field zero(g);
  CHECK(lp_norm(pot.convolve(zero), 2.0) == 0.0);

  Field f = random_field(g, 61), h = random_field(g, 62);
  const cplx a(0.7, -0.2), b(-1.1, 0.4);
  Field combo = f;
  combo *= a;
  Field bh = h;
  bh *= b;
  combo += bh;
  Field lhs = pot.convolve(combo);
  Field rhs = pot.convolve(f);
  rhs *= a;
  Field rhs2 = pot.convolve(h);
  rhs2 *= b;
  rhs += rhs2;
  lhs -= rhs;
  CHECK(lp_norm(lhs, 2.0) <= 1e-12);
}

TEST_CASE("hartree factor: reality, symmetry, additivity", "[hartree]") {
  GridSpec g(1, 256, 8.0);
  HartreePotential pot(g, 0.5, 0.8);

  // Real even state gives a real even potential.
  std::vector<Field> one{gaussian_packet(g, 1.0)};
  Field h1 = hartree_factor(one, pot);
  const int n = g.samples_per_dim();
  double imag = 0.0, asym = 0.0;
  for (int m = 1; m < n; ++m) {
    imag = std::max(imag, std::abs(h1[m].imag()));
    asym = std::max(asym, std::abs(h1[m] - h1[n - m]));
  }
  CHECK(imag <= 1e-10);
  CHECK(asym <= 1e-10);

  std::vector<Field> zero2{Field(g), Field(g)};
  CHECK(lp_norm(hartree_factor(zero2, pot), 2.0) == 0.0);

  // Two components equal the sum of the one-component factors.
  std::vector<Field> two{random_field(g, 71), random_field(g, 72)};
  Field sum = hartree_factor(std::span<const Field>(two.data(), 1), pot);
  sum += hartree_factor(std::span<const Field>(two.data() + 1, 1), pot);
  CHECK(rel_l2_diff(hartree_factor(two, pot), sum) <= 1e-12);

  CHECK_THROWS_AS(hartree_factor(std::span<const Field>{}, pot), std::domain_error);
}

TEST_CASE("exchange term equals the Hartree product for one particle", "[hartree]") {
  GridSpec g(1, 256, 8.0);
  HartreePotential pot(g, 0.5, 1.0);
  std::vector<Field> one{random_field(g, 81)};
  Field fock = fock_term(0, one, pot);
  Field hpsi = hadamard(hartree_factor(one, pot), one[0]);
  CHECK(rel_l2_diff(fock, hpsi) <= 1e-13);

  CHECK_THROWS_AS(fock_term(1, one, pot), std::domain_error);
  CHECK_THROWS_AS(fock_term(-1, one, pot), std::domain_error);

  std::vector<Field> zeros{Field(g), Field(g)};
  CHECK(lp_norm(fock_term(0, zeros, pot), 2.0) == 0.0);
}

TEST_CASE("exchange quadratic form is real, against a toy direct sum", "[hartree]") {
  GridSpec g(1, 8, 2.0);
  HartreePotential pot(g, 0.5, 1.0);
  std::vector<Field> states{random_field(g, 91, 0.9), random_field(g, 92, 0.9),
                            random_field(g, 93, 0.9)};

  // Periodic kernel samples realized by the multiplier.
  Field khat(g);
  for (std::size_t m = 0; m < khat.size(); ++m) khat[m] = pot.multiplier()[m];
  Field ker = inverse_fourier(khat);
  const int n = g.samples_per_dim();

  cplx via_op = 0.0, direct = 0.0;
  for (std::size_t k = 0; k < states.size(); ++k) {
    Field fk = fock_term(static_cast<int>(k), states, pot);
    for (int m = 0; m < n; ++m) via_op += fk[m] * std::conj(states[k][m]) * g.dx();
  }
  for (std::size_t k = 0; k < states.size(); ++k)
    for (std::size_t l = 0; l < states.size(); ++l)
      for (int m = 0; m < n; ++m)
        for (int mp = 0; mp < n; ++mp) {
          const cplx kv = ker[((m - mp) % n + n) % n];
          direct += kv * std::conj(states[l][mp]) * states[k][mp] * states[l][m] *
                    std::conj(states[k][m]) * g.dx() * g.dx();
        }

  CHECK(std::abs(via_op - direct) <= 1e-12 * std::abs(direct));
  CHECK(std::abs(via_op.imag()) <= 1e-9 * std::abs(via_op));
}

TEST_CASE("trilinear map: linearity pattern and gauge covariance", "[hartree]") {
  GridSpec g(1, 256, 8.0);
  HartreePotential pot(g, 0.5, 1.0);
  Field f = random_field(g, 95), h = random_field(g, 96), w = random_field(g, 97);

  Field zero(g);
  CHECK(lp_norm(hartree_trilinear(zero, f, h, pot), 2.0) == 0.0);

  // Conjugate linearity in the middle slot.
  const cplx c(0.4, 1.3);
  Field cf = f;
  cf *= c;
  Field a = hartree_trilinear(w, cf, h, pot);
  Field b = hartree_trilinear(w, f, h, pot);
  b *= std::conj(c);
  CHECK(rel_l2_diff(a, b) <= 1e-12);

  // Common phase: the cubic map is equivariant.
  const cplx phase = std::polar(1.0, 0.9);
  Field pf = f;
  pf *= phase;
  Field lhs = hartree_trilinear(pf, pf, pf, pot);
  Field rhs = hartree_trilinear(f, f, f, pot);
  rhs *= phase;
  CHECK(rel_l2_diff(lhs, rhs) <= 1e-12);

  // The Hartree factor ignores a global phase on any component.
  std::vector<Field> st{f, h};
  std::vector<Field> st_phase{pf, h};
  CHECK(rel_l2_diff(hartree_factor(st_phase, pot), hartree_factor(st, pot)) <= 1e-12);
}

TEST_CASE("multi-component difference identities", "[hartree]") {
  GridSpec g(1, 256, 8.0);
  HartreePotential pot(g, 0.5, 1.0);
  std::vector<Field> u{random_field(g, 301), random_field(g, 302), random_field(g, 303)};
  std::vector<Field> v{random_field(g, 304), random_field(g, 305), random_field(g, 306)};
  const int j = 1;

  // sum_i (K*|u_i|^2) u_j - (K*|v_i|^2) v_j
  //   = sum_i (K*|u_i|^2)(u_j - v_j) + (K*(|u_i|^2 - |v_i|^2)) v_j
  Field lhs(g), rhs(g);
  for (int i = 0; i < 3; ++i) {
    lhs += hadamard(pot.convolve(hadamard(u[i], conj(u[i]))), u[j]);
    lhs -= hadamard(pot.convolve(hadamard(v[i], conj(v[i]))), v[j]);
    Field du = u[j];
    du -= v[j];
    rhs += hadamard(pot.convolve(hadamard(u[i], conj(u[i]))), du);
    Field dens = hadamard(u[i], conj(u[i]));
    dens -= hadamard(v[i], conj(v[i]));
    rhs += hadamard(pot.convolve(dens), v[j]);
  }
  Field res = lhs;
  res -= rhs;
  CHECK(lp_norm(res, 2.0) <= 1e-10);

  // Exchange-side identity:
  // sum_i (K*(conj(u_i) u_j)) u_i - (K*(conj(v_i) v_j)) v_i
  //   = sum_i (K*(conj(u_i) u_j))(u_i - v_i) + (K*(conj(u_i) u_j - conj(v_i) v_j)) v_i
  Field lhs2(g), rhs2(g);
  for (int i = 0; i < 3; ++i) {
    lhs2 += hadamard(pot.convolve(hadamard(conj(u[i]), u[j])), u[i]);
    lhs2 -= hadamard(pot.convolve(hadamard(conj(v[i]), v[j])), v[i]);
    Field dui = u[i];
    dui -= v[i];
    rhs2 += hadamard(pot.convolve(hadamard(conj(u[i]), u[j])), dui);
    Field pair = hadamard(conj(u[i]), u[j]);
    pair -= hadamard(conj(v[i]), v[j]);
    rhs2 += hadamard(pot.convolve(pair), v[i]);
  }
  Field res2 = lhs2;
  res2 -= rhs2;
  CHECK(lp_norm(res2, 2.0) <= 1e-10);
}

TEST_CASE("kernel split into low L1 and high Lq parts", "[hartree]") {
  GridSpec g(1, 1024, 16.0);
  HartreePotential pot(g, 0.5, 1.0, ZeroMode::cell_average);
  const auto split = kernel_split(pot, 4.0);
  CHECK(split.l1_low > 0.0);
  CHECK(split.lq_high > 0.0);
  CHECK(std::isfinite(split.l1_low));
  CHECK(std::isfinite(split.lq_high));
  // q must exceed d/(d - gamma) = 2 for the high part to be finite.
  CHECK_THROWS_AS(kernel_split(pot, 2.0), std::domain_error);
  CHECK_NOTHROW(kernel_split(pot, std::numeric_limits<double>::infinity()));
}
