#include <catch2/catch_amalgamated.hpp>

#include "modhf/fields.hpp"
#include "modhf/hermite.hpp"
#include "modhf/modspace.hpp"
#include "modhf/symbols.hpp"
#include "test_helpers.hpp"

using namespace modhf;
using testutil::rel_l2_diff;

namespace {
GridSpec hermite_grid() { return GridSpec(1, 512, 12.0); }

// Smooth, decaying, generic test function with fast Hermite decay. Widths
// sit near sqrt(2 pi), the packet width whose quadratic exponent matches the
// oscillator ground state; strongly squeezed packets would need far deeper
// truncations.
Field schwartz_like(const GridSpec& g) {
  Field f = gaussian_packet(g, 2.2, {0.7, 0, 0}, {0.15, 0, 0});
  f += gaussian_packet(g, 2.8, {-1.2, 0, 0}, {0, 0, 0}, 0.5);
  return f;
}
}  // namespace

TEST_CASE("lattice Gram matrix is orthonormal", "[hermite]") {
  GridSpec g = hermite_grid();
  HermiteBasis basis(g, 40);
  const double cell = g.dx();
  double worst = 0.0;
  for (int i = 0; i <= basis.max_degree(); ++i)
    for (int j = i; j <= basis.max_degree(); ++j) {
      double acc = 0.0;
      for (int m = 0; m < g.samples_per_dim(); ++m)
        acc += basis.h1d(i)[m] * basis.h1d(j)[m];
      acc *= cell;
      worst = std::max(worst, std::abs(acc - (i == j ? 1.0 : 0.0)));
    }
  CHECK(worst <= 1e-8);
}

TEST_CASE("oscillator eigenrelation holds spectrally", "[hermite]") {
  GridSpec g = hermite_grid();
  HermiteBasis basis(g, 40);
  Propagator lap(g, DispersionSymbol::laplacian());  // multiplier (2 pi xi)^2

  for (std::size_t i : {std::size_t(0), std::size_t(7), std::size_t(38)}) {
    const int k = basis.total_degree(i);
    if (k > basis.max_degree() - 2) continue;
    Field phi = basis.basis_function(i);
    // H phi = -phi'' + x^2 phi via the spectral Laplacian.
    Field spectrum = forward_fourier(phi);
    for (std::size_t m = 0; m < spectrum.size(); ++m)
      spectrum[m] *= lap.symbol_samples()[m];
    Field hphi = inverse_fourier(spectrum);
    for (std::size_t m = 0; m < hphi.size(); ++m) {
      const auto x = g.x_of(m);
      hphi[m] += x[0] * x[0] * phi[m];
    }
    Field expect = phi;
    expect *= cplx(basis.eigenvalue(k), 0.0);
    CHECK(rel_l2_diff(hphi, expect) <= 1e-6);
  }
}

TEST_CASE("ground state analyzes to the first unit vector", "[hermite]") {
  GridSpec g = hermite_grid();
  HermiteBasis basis(g, 32);
  // pi^{-1/4} exp(-x^2/2) is the degree-zero basis function.
  Field h0 = Field::sample(g, [](const std::array<double, 3>& x) {
    return cplx(std::pow(M_PI, -0.25) * std::exp(-0.5 * x[0] * x[0]), 0.0);
  });
  const auto coeffs = basis.analyze(h0);
  CHECK(std::abs(coeffs.c[0] - cplx(1.0, 0.0)) <= 1e-8);
  for (std::size_t i = 1; i < coeffs.c.size(); ++i) CHECK(std::abs(coeffs.c[i]) <= 1e-8);
  CHECK(coeffs.residual_l2 <= 1e-8);
}

TEST_CASE("analysis-synthesis round trip is self-consistent", "[hermite]") {
  GridSpec g = hermite_grid();
  HermiteBasis basis(g, 40);
  Field f = schwartz_like(g);
  const auto c1 = basis.analyze(f);
  CHECK(c1.residual_l2 <= 1e-6);
  // Analyzing the reconstruction returns the same coefficients (projection
  // idempotence at the coefficient level).
  const auto c2 = basis.analyze(basis.synthesize(c1));
  double worst = 0.0;
  for (std::size_t i = 0; i < c1.c.size(); ++i)
    worst = std::max(worst, std::abs(c1.c[i] - c2.c[i]));
  CHECK(worst <= 1e-10);
  CHECK(c2.residual_l2 <= 1e-10);
}

TEST_CASE("level projections are idempotent and mutually orthogonal", "[hermite]") {
  GridSpec g = hermite_grid();
  HermiteBasis basis(g, 32);
  Field f = schwartz_like(g);
  const Field p2 = basis.project_level(f, 2);
  const Field p5 = basis.project_level(f, 5);

  CHECK(rel_l2_diff(basis.project_level(p2, 2), p2) <= 1e-8);
  CHECK(lp_norm(basis.project_level(p5, 2), 2.0) <= 1e-8 * lp_norm(f, 2.0));
}

TEST_CASE("propagator is unitary and pi-periodic up to parity", "[hermite]") {
  GridSpec g = hermite_grid();
  HermiteBasis basis(g, 40);
  Field f = schwartz_like(g);
  const double mass = lp_norm(f, 2.0);

  for (double t : {0.3, 1.0, 2.7}) {
    const double m = lp_norm(basis.harmonic_propagate(f, t), 2.0);
    CHECK(std::abs(m - mass) <= 1e-8 * mass);
  }

  Field period = basis.harmonic_propagate(f, M_PI);
  Field expect = f;
  expect *= std::polar(1.0, -M_PI * g.dim());
  CHECK(rel_l2_diff(period, expect) <= 1e-7);

  // t + pi equals the parity phase times the t-flow.
  Field lhs = basis.harmonic_propagate(f, 0.4 + M_PI);
  Field rhs = basis.harmonic_propagate(f, 0.4);
  rhs *= std::polar(1.0, -M_PI * g.dim());
  CHECK(rel_l2_diff(lhs, rhs) <= 1e-7);
}

TEST_CASE("quarter period matches a doubled-truncation eigen-sum", "[hermite]") {
  GridSpec g = hermite_grid();
  HermiteBasis basis(g, 28);
  HermiteBasis refined(g, 56);
  Field f = schwartz_like(g);
  Field a = basis.harmonic_propagate(f, M_PI / 2.0);
  Field b = refined.harmonic_propagate(f, M_PI / 2.0);
  CHECK(rel_l2_diff(a, b) <= 1e-7);
}

TEST_CASE("energy diagonalizes over the level coefficients", "[hermite]") {
  GridSpec g = hermite_grid();
  HermiteBasis basis(g, 40);
  Field f = schwartz_like(g);
  const auto coeffs = basis.analyze(f);

  // <H f, f> via the spectral Laplacian plus the potential.
  Propagator lap(g, DispersionSymbol::laplacian());
  Field spectrum = forward_fourier(f);
  for (std::size_t m = 0; m < spectrum.size(); ++m)
    spectrum[m] *= lap.symbol_samples()[m];
  Field hf = inverse_fourier(spectrum);
  for (std::size_t m = 0; m < hf.size(); ++m) {
    const auto x = g.x_of(m);
    hf[m] += x[0] * x[0] * f[m];
  }
  cplx quad = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) quad += hf[m] * std::conj(f[m]);
  quad *= g.dx();

  double diag = 0.0;
  for (std::size_t i = 0; i < coeffs.c.size(); ++i)
    diag += basis.eigenvalue(basis.total_degree(i)) * std::norm(coeffs.c[i]);

  CHECK(std::abs(quad.real() - diag) <= 1e-6 * diag);
  CHECK(std::abs(quad.imag()) <= 1e-9 * diag);
}

TEST_CASE("truncation failures are reported and propagation refuses them", "[hermite]") {
  GridSpec g = hermite_grid();
  HermiteBasis coarse(g, 8);
  Field narrow = gaussian_packet(g, 0.7);  // squeezed: needs far more than 8 levels
  const auto coeffs = coarse.analyze(narrow);
  CHECK(coeffs.residual_l2 > 1e-6);
  CHECK_THROWS_AS(coarse.harmonic_propagate(narrow, 0.5), TruncationError);
  CHECK_NOTHROW(coarse.harmonic_propagate(narrow, 0.5, 1.0));  // caller accepts the loss
}

TEST_CASE("modulation norm is preserved by the oscillator flow (spot check)",
          "[hermite]") {
  GridSpec g = hermite_grid();
  HermiteBasis basis(g, 40);
  ModulationNormEngine engine(g, GaussWindow(GaussWindow::Kind::oscillator_ground));
  Field f = normalized_l2(gaussian_packet(g, 2.2, {0.5, 0, 0}));
  const NormParams p11{1, 1, 0};
  const double base = engine.norm(f, p11, NormMethod::stft);
  const double moved = engine.norm(basis.harmonic_propagate(f, 1.0), p11, NormMethod::stft);
  CHECK(moved / base >= 0.98);
  CHECK(moved / base <= 1.02);
}

TEST_CASE("two-dimensional basis: Gram product structure and propagation", "[hermite]") {
  GridSpec g(2, 128, 10.0);
  HermiteBasis basis(g, 20);
  CHECK(basis.coeff_count() == 21u * 22u / 2u);

  Field f = gaussian_packet(g, 2.2, {0.4, -0.3, 0}, {0.1, 0.1, 0}, 1.0);
  const auto coeffs = basis.analyze(f);
  CHECK(coeffs.residual_l2 <= 1e-6);

  Field period = basis.harmonic_propagate(f, M_PI);
  Field expect = f;
  expect *= std::polar(1.0, -M_PI * g.dim());
  CHECK(rel_l2_diff(period, expect) <= 1e-6);

  // Eigenrelation for a mixed-degree tensor function.
  std::size_t target = 0;
  for (std::size_t i = 0; i < basis.coeff_count(); ++i)
    if (basis.multi_degree(i)[0] == 2 && basis.multi_degree(i)[1] == 3) target = i;
  Field phi = basis.basis_function(target);
  const auto c = basis.analyze(phi);
  double offdiag = 0.0;
  for (std::size_t i = 0; i < c.c.size(); ++i)
    if (i != target) offdiag = std::max(offdiag, std::abs(c.c[i]));
  CHECK(std::abs(c.c[target] - cplx(1.0, 0.0)) <= 1e-8);
  CHECK(offdiag <= 1e-8);
}
