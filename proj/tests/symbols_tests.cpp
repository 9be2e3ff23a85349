#include <catch2/catch_amalgamated.hpp>

#include "modhf/fields.hpp"
#include "modhf/symbols.hpp"
#include "test_helpers.hpp"

using namespace modhf;
using testutil::max_abs_diff;
using testutil::random_field;
using testutil::rel_l2_diff;

TEST_CASE("propagation at t = 0 is the identity", "[symbols]") {
  GridSpec g(1, 256, 8.0);
  Field f = random_field(g, 14);
  CHECK(rel_l2_diff(propagate(f, DispersionSymbol::fractional(1.3), 0.0), f) <= 1e-13);
}

TEST_CASE("free Gaussian flow matches the closed form", "[symbols]") {
  // i d/dt psi = |D|^2 psi with psi0 = exp(-a x^2) evolves to
  // (1 + 4 i a t)^{-1/2} exp(-a x^2 / (1 + 4 i a t)). The box is wide enough
  // that the spread packet still clears the boundary below 1e-12.
  GridSpec g(1, 1024, 24.0);
  const double a = M_PI;
  Field f0 = Field::sample(g, [&](const std::array<double, 3>& x) {
    return cplx(std::exp(-a * x[0] * x[0]), 0.0);
  });
  const double t = 0.5;
  Field evolved = propagate(f0, DispersionSymbol::laplacian(), t);

  const cplx denom(1.0, 4.0 * a * t);
  Field exact = Field::sample(g, [&](const std::array<double, 3>& x) {
    return std::exp(-a * x[0] * x[0] / denom) / std::sqrt(denom);
  });
  CHECK(max_abs_diff(evolved, exact) <= 1e-8);
}

TEST_CASE("group law and time reversal", "[symbols]") {
  GridSpec g(1, 256, 8.0);
  Field f = random_field(g, 15);
  for (const auto& sym :
       {DispersionSymbol::fractional(0.8), DispersionSymbol::laplacian(),
        DispersionSymbol::polynomial({{{2, 0, 0}, 1.0}, {{1, 0, 0}, -0.3}})}) {
    Propagator prop(g, sym);
    Field two_hops = prop.apply(prop.apply(f, 0.35), 0.8);
    CHECK(rel_l2_diff(two_hops, prop.apply(f, 1.15)) <= 1e-10);
    CHECK(rel_l2_diff(prop.apply(prop.apply(f, 0.7), -0.7), f) <= 1e-12);
  }
}

TEST_CASE("exact unitarity on the lattice", "[symbols]") {
  GridSpec g(1, 256, 8.0);
  Field f = random_field(g, 16);
  const double mass = lp_norm(f, 2.0);
  for (double t : {0.1, 1.0, 7.3}) {
    const double evolved = lp_norm(propagate(f, DispersionSymbol::fractional(1.5), t), 2.0);
    CHECK(std::abs(evolved - mass) <= 1e-12 * mass);
  }
}

TEST_CASE("laplacian coincides with the quadratic fractional symbol", "[symbols]") {
  GridSpec g(1, 128, 4.0);
  Propagator a(g, DispersionSymbol::laplacian());
  Propagator b(g, DispersionSymbol::fractional(2.0));
  for (std::size_t m = 0; m < g.size(); ++m)
    CHECK(a.symbol_samples()[m] == b.symbol_samples()[m]);
}

TEST_CASE("polynomial symbols are real on the lattice", "[symbols]") {
  GridSpec g(2, 32, 4.0);
  const auto sym = DispersionSymbol::polynomial({{{2, 0, 0}, 1.0}, {{0, 2, 0}, -1.0}});
  CHECK(sym.order() == 2);
  Propagator prop(g, sym);
  const auto z = g.xi_of(g.flatten({3, 7, 0}));
  CHECK(prop.symbol_samples()[g.flatten({3, 7, 0})] ==
        Catch::Approx(z[0] * z[0] - z[1] * z[1]).margin(1e-15));
}

TEST_CASE("band operators commute with the propagator", "[symbols]") {
  GridSpec g(1, 1024, 16.0);
  FrequencyDecomposition dec(g);
  Field f = random_field(g, 17, 5.0);
  Propagator prop(g, DispersionSymbol::laplacian());
  for (int k : {0, 3, -5}) {
    Field a = band_project({k, 0, 0}, prop.apply(f, 0.4), dec);
    Field b = prop.apply(band_project({k, 0, 0}, f, dec), 0.4);
    a -= b;
    CHECK(lp_norm(a, 2.0) <= 1e-10);
  }
}

TEST_CASE("growth probe: p = 2 slope vanishes, preconditions enforced", "[symbols]") {
  GridSpec g(1, 512, 16.0);
  ModulationNormEngine engine(g);
  std::vector<Field> family{normalized_l2(gaussian_packet(g, 1.0)),
                            normalized_l2(chirp(g, 1.0, 1.0))};
  const std::vector<double> ts{0.25, 0.5, 1.0};

  const auto res = multiplier_growth_probe(DispersionSymbol::laplacian(), {2, 2, 0}, ts,
                                           family, engine);
  CHECK(std::abs(res.slope) <= 0.05);
  for (const auto& [t, r] : res.ratios) CHECK(r == Catch::Approx(1.0).margin(1e-9));

  CHECK_THROWS_AS(multiplier_growth_probe(DispersionSymbol::laplacian(), {2, 2, 0}, ts,
                                          {}, engine),
                  std::domain_error);
}

TEST_CASE("symbol constructors validate their domains", "[symbols]") {
  CHECK_THROWS_AS(DispersionSymbol::fractional(0.0), std::domain_error);
  CHECK_THROWS_AS(DispersionSymbol::fractional(-1.0), std::domain_error);
  CHECK_THROWS_AS(DispersionSymbol::polynomial({}), std::domain_error);
  CHECK_THROWS_AS(DispersionSymbol::polynomial({{{0, 0, 0}, 1.0}}), std::domain_error);
}
