#pragma once

// Dispersion symbols Phi(xi) and their unimodular propagators, applied as
// frequency-lattice multipliers.
//
// Sign and scale conventions, fixed for the whole library:
//   * propagate(f, sym, t) = F^{-1}[ exp(-i t Phi(xi)) F f ], the free flow
//     of  i d/dt psi = Phi(D) psi.
//   * fractional symbols are measured in angular units, Phi(xi) = (2 pi |xi|)^alpha,
//     so alpha = 2 solves i d/dt psi = -Laplace(psi) in physical coordinates
//     and the Gaussian variance flows as 1 + 4 i a t.
//   * polynomial symbols act on the plain frequency coordinate, Phi(xi) = P(xi).

#include <array>
#include <cmath>
#include <vector>

#include "modhf/errors.hpp"
#include "modhf/grid.hpp"
#include "modhf/modspace.hpp"

namespace modhf {

struct PolyTerm {
  std::array<int, 3> exponents{0, 0, 0};
  double coeff = 0.0;
};

class DispersionSymbol {
 public:
  enum class Kind { fractional, polynomial };

  static DispersionSymbol fractional(double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("fractional symbol needs alpha > 0");
    DispersionSymbol s;
    s.kind_ = Kind::fractional;
    s.alpha_ = alpha;
    s.m1_ = alpha;
    s.m2_ = alpha;
    s.lambda_ = 1.0;
    return s;
  }

  static DispersionSymbol laplacian() { return fractional(2.0); }

  static DispersionSymbol polynomial(std::vector<PolyTerm> terms) {
    if (terms.empty()) throw std::domain_error("polynomial symbol needs at least one term");
    DispersionSymbol s;
    s.kind_ = Kind::polynomial;
    s.terms_ = std::move(terms);
    int order = 0;
    for (const auto& t : s.terms_) {
      int deg = 0;
      for (int e : t.exponents) {
        if (e < 0) throw std::domain_error("polynomial symbol needs nonnegative exponents");
        deg += e;
      }
      order = std::max(order, deg);
    }
    if (order < 1) throw std::domain_error("polynomial symbol needs order >= 1");
    s.order_ = order;
    s.m1_ = order;
    s.m2_ = 1.0;
    s.lambda_ = 1.0;
    return s;
  }

  Kind kind() const { return kind_; }
  bool is_fractional() const { return kind_ == Kind::fractional; }
  double alpha() const { return alpha_; }
  int order() const { return order_; }
  double growth_m1() const { return m1_; }
  double growth_m2() const { return m2_; }
  double homogeneity() const { return lambda_; }

  double operator()(const std::array<double, 3>& xi, int dim) const {
    if (kind_ == Kind::fractional) {
      double r2 = 0.0;
      for (int i = 0; i < dim; ++i) r2 += xi[i] * xi[i];
      const double r = 2.0 * M_PI * std::sqrt(r2);
      return r == 0.0 ? 0.0 : std::pow(r, alpha_);
    }
    double acc = 0.0;
    for (const auto& t : terms_) {
      double v = t.coeff;
      for (int i = 0; i < dim; ++i)
        for (int e = 0; e < t.exponents[i]; ++e) v *= xi[i];
      acc += v;
    }
    return acc;
  }

 private:
  DispersionSymbol() = default;
  Kind kind_ = Kind::fractional;
  double alpha_ = 2.0;
  int order_ = 0;
  std::vector<PolyTerm> terms_;
  double m1_ = 2.0, m2_ = 2.0, lambda_ = 1.0;
};

// Caches the symbol samples for one grid; each apply() costs one phase table
// and a transform round trip. The multiplier has modulus one, so the flow is
// exactly unitary on the lattice and U(-t) inverts U(t) to round-off.
class Propagator {
 public:
  Propagator(const GridSpec& grid, const DispersionSymbol& sym)
      : grid_(grid), phi_(grid.size()) {
    for (std::size_t m = 0; m < phi_.size(); ++m) {
      const double v = sym(grid.xi_of(m), grid.dim());
      if (!std::isfinite(v)) throw ConfigError("symbol is not finite on the frequency lattice");
      phi_[m] = v;
    }
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<double>& symbol_samples() const { return phi_; }

  std::vector<cplx> phase_table(double t) const {
    std::vector<cplx> table(phi_.size());
    for (std::size_t m = 0; m < phi_.size(); ++m)
      table[m] = std::polar(1.0, -t * phi_[m]);
    return table;
  }

  Field apply_table(const Field& f, const std::vector<cplx>& table) const {
    if (!(f.grid() == grid_)) throw ConfigError("propagator built for another grid");
    Field spectrum = forward_fourier(f);
    for (std::size_t m = 0; m < spectrum.size(); ++m) spectrum[m] *= table[m];
    return inverse_fourier(spectrum);
  }

  Field apply(const Field& f, double t) const { return apply_table(f, phase_table(t)); }

 private:
  GridSpec grid_;
  std::vector<double> phi_;
};

inline Field propagate(const Field& f, const DispersionSymbol& sym, double t) {
  return Propagator(f.grid(), sym).apply(f, t);
}

struct GrowthProbeResult {
  double slope = 0.0;                            // fitted d log r / d log(1+t)
  std::vector<std::pair<double, double>> ratios; // (t, max ratio over family)
};

// Measures r(t) = max over the family of ||U(t) f|| / ||f|| in M^{p,q}_s and
// fits log r against log(1+t) by least squares.
inline GrowthProbeResult multiplier_growth_probe(
    const DispersionSymbol& sym, const NormParams& params,
    const std::vector<double>& t_list, const std::vector<Field>& family,
    const ModulationNormEngine& engine, NormMethod method = NormMethod::bands) {
  params.validate();
  if (family.empty()) throw std::domain_error("growth probe needs a nonempty family");
  if (t_list.size() < 2) throw std::domain_error("growth probe needs at least two times");

  Propagator prop(engine.grid(), sym);
  std::vector<double> base;
  base.reserve(family.size());
  for (const auto& f : family) base.push_back(engine.norm(f, params, method));

  GrowthProbeResult result;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (double t : t_list) {
    double r = 0.0;
    for (std::size_t i = 0; i < family.size(); ++i) {
      const double evolved = engine.norm(prop.apply(family[i], t), params, method);
      r = std::max(r, evolved / base[i]);
    }
    result.ratios.emplace_back(t, r);
    const double x = std::log1p(std::abs(t));
    const double y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double npts = static_cast<double>(t_list.size());
  result.slope = (npts * sxy - sx * sy) / (npts * sxx - sx * sx);
  return result;
}

}  // namespace modhf
