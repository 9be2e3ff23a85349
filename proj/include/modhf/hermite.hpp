#pragma once

// Hermite basis on the grid, spectral projections onto oscillator levels,
// and the harmonic propagator, diagonal in this basis with eigenphases
// exp(-i t (2k + d)).
//
// The 1-D functions are generated by the normalized three-term recurrence
//   h_{k+1}(x) = x sqrt(2/(k+1)) h_k(x) - sqrt(k/(k+1)) h_{k-1}(x),
// which stays bounded where the Rodrigues formula overflows near k ~ 30.
// Coefficients use the same Riemann quadrature as every other inner product
// in the library, so basis residuals and field norms share one substrate.

#include <array>
#include <cmath>
#include <vector>

#include "modhf/errors.hpp"
#include "modhf/grid.hpp"

namespace modhf {

struct HermiteCoefficients {
  std::vector<cplx> c;     // flattened over multi-degrees, see HermiteBasis
  double residual_l2 = 0.0;
  int max_degree = 0;
};

class HermiteBasis {
 public:
  // max_total_degree < 0 picks the largest truncation whose classically
  // allowed region sqrt(2K + d) still clears the boundary by a safety
  // margin, keeping the lattice Gram matrix orthonormal to ~1e-10.
  explicit HermiteBasis(const GridSpec& grid, int max_total_degree = -1)
      : grid_(grid) {
    if (grid.dim() > 2)
      throw ConfigError("HermiteBasis: supported for dimensions 1 and 2");
    K_ = max_total_degree >= 0 ? max_total_degree : default_degree(grid);
    if (K_ < 2) throw ConfigError("HermiteBasis: truncation degree too small");

    const int n = grid.samples_per_dim();
    h1d_.assign(K_ + 1, std::vector<double>(n, 0.0));
    for (int m = 0; m < n; ++m) {
      const double x = grid.x_at(m);
      h1d_[0][m] = std::pow(M_PI, -0.25) * std::exp(-0.5 * x * x);
      if (K_ >= 1) h1d_[1][m] = std::sqrt(2.0) * x * h1d_[0][m];
      for (int k = 1; k < K_; ++k)
        h1d_[k + 1][m] = x * std::sqrt(2.0 / (k + 1)) * h1d_[k][m] -
                         std::sqrt(double(k) / (k + 1)) * h1d_[k - 1][m];
    }

    if (grid.dim() == 1) {
      for (int k = 0; k <= K_; ++k) degrees_.push_back({k, 0, 0});
    } else {
      for (int a = 0; a <= K_; ++a)
        for (int b = 0; b + a <= K_; ++b) degrees_.push_back({a, b, 0});
    }
  }

  static int default_degree(const GridSpec& grid) {
    const double usable = grid.half_width() - 3.5;
    const int k = static_cast<int>(std::floor((usable * usable - grid.dim()) / 2.0));
    return std::max(2, k);
  }

  const GridSpec& grid() const { return grid_; }
  int max_degree() const { return K_; }
  std::size_t coeff_count() const { return degrees_.size(); }
  const std::array<int, 3>& multi_degree(std::size_t i) const { return degrees_[i]; }
  int total_degree(std::size_t i) const { return degrees_[i][0] + degrees_[i][1]; }
  double eigenvalue(int total_degree) const { return 2.0 * total_degree + grid_.dim(); }
  const std::vector<double>& h1d(int k) const { return h1d_[k]; }

  // Basis function Phi_alpha sampled on the grid.
  Field basis_function(std::size_t i) const {
    const auto& a = degrees_[i];
    Field f(grid_);
    if (grid_.dim() == 1) {
      for (std::size_t m = 0; m < f.size(); ++m) f[m] = h1d_[a[0]][m];
    } else {
      const int n = grid_.samples_per_dim();
      for (int i0 = 0; i0 < n; ++i0)
        for (int i1 = 0; i1 < n; ++i1)
          f[static_cast<std::size_t>(i0) * n + i1] = h1d_[a[0]][i0] * h1d_[a[1]][i1];
    }
    return f;
  }

  // Coefficients <f, Phi_alpha> by quadrature, with the truncation residual
  // ||f - reconstruction||_{L^2} reported for the caller to act on.
  HermiteCoefficients analyze(const Field& f) const {
    if (!(f.grid() == grid_)) throw ConfigError("basis built for another grid");
    HermiteCoefficients out;
    out.max_degree = K_;
    out.c.assign(degrees_.size(), cplx(0.0, 0.0));

    const int n = grid_.samples_per_dim();
    const double cell = std::pow(grid_.dx(), grid_.dim());
    if (grid_.dim() == 1) {
      for (std::size_t i = 0; i < degrees_.size(); ++i) {
        const auto& h = h1d_[degrees_[i][0]];
        cplx acc = 0.0;
        for (int m = 0; m < n; ++m) acc += f[m] * h[m];
        out.c[i] = acc * cell;
      }
    } else {
      // Separable contraction: first over x for every 1-D degree, then over y.
      std::vector<std::vector<cplx>> partial(K_ + 1, std::vector<cplx>(n, cplx(0, 0)));
      for (int a = 0; a <= K_; ++a)
        for (int i1 = 0; i1 < n; ++i1) {
          cplx acc = 0.0;
          for (int i0 = 0; i0 < n; ++i0)
            acc += f[static_cast<std::size_t>(i0) * n + i1] * h1d_[a][i0];
          partial[a][i1] = acc;
        }
      for (std::size_t i = 0; i < degrees_.size(); ++i) {
        const auto& d = degrees_[i];
        cplx acc = 0.0;
        for (int i1 = 0; i1 < n; ++i1) acc += partial[d[0]][i1] * h1d_[d[1]][i1];
        out.c[i] = acc * cell;
      }
    }

    const Field recon = synthesize(out);
    Field diff = f;
    diff -= recon;
    out.residual_l2 = lp_norm(diff, 2.0);
    return out;
  }

  Field synthesize(const HermiteCoefficients& coeffs) const {
    if (coeffs.c.size() != degrees_.size())
      throw ConfigError("coefficient list does not match basis");
    Field f(grid_);
    const int n = grid_.samples_per_dim();
    if (grid_.dim() == 1) {
      for (std::size_t i = 0; i < degrees_.size(); ++i) {
        const auto& h = h1d_[degrees_[i][0]];
        const cplx c = coeffs.c[i];
        if (c == cplx(0.0, 0.0)) continue;
        for (int m = 0; m < n; ++m) f[m] += c * h[m];
      }
    } else {
      // Accumulate per 1-D x-degree, then expand along y.
      std::vector<std::vector<cplx>> partial(K_ + 1, std::vector<cplx>(n, cplx(0, 0)));
      for (std::size_t i = 0; i < degrees_.size(); ++i) {
        const auto& d = degrees_[i];
        const cplx c = coeffs.c[i];
        for (int i1 = 0; i1 < n; ++i1) partial[d[0]][i1] += c * h1d_[d[1]][i1];
      }
      for (int a = 0; a <= K_; ++a)
        for (int i0 = 0; i0 < n; ++i0) {
          const double h = h1d_[a][i0];
          if (h == 0.0) continue;
          for (int i1 = 0; i1 < n; ++i1)
            f[static_cast<std::size_t>(i0) * n + i1] += h * partial[a][i1];
        }
    }
    return f;
  }

  // Projection onto the oscillator level of total degree k.
  Field project_level(const Field& f, int level) const {
    auto coeffs = analyze(f);
    for (std::size_t i = 0; i < coeffs.c.size(); ++i)
      if (total_degree(i) != level) coeffs.c[i] = 0.0;
    return synthesize(coeffs);
  }

  // sum_k m(2k + d) P_k f for a caller-supplied spectral multiplier.
  template <class Fn>
  Field apply_spectral_multiplier(const Field& f, Fn&& m, double resid_tol) const {
    auto coeffs = analyze(f);
    if (coeffs.residual_l2 > resid_tol)
      throw TruncationError("hermite truncation residual " +
                            std::to_string(coeffs.residual_l2) +
                            " exceeds tolerance");
    for (std::size_t i = 0; i < coeffs.c.size(); ++i)
      coeffs.c[i] *= m(total_degree(i));
    return synthesize(coeffs);
  }

  // Free flow of i d/dt psi = (-Laplace + |x|^2) psi: eigenphase exp(-i t (2k+d)).
  Field harmonic_propagate(const Field& f, double t, double resid_tol = 1e-6) const {
    return apply_spectral_multiplier(
        f, [&](int k) { return std::polar(1.0, -t * eigenvalue(k)); }, resid_tol);
  }

 private:
  GridSpec grid_;
  int K_ = 0;
  std::vector<std::vector<double>> h1d_;
  std::vector<std::array<int, 3>> degrees_;
};

}  // namespace modhf
