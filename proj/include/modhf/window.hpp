#pragma once

// Gaussian analysis windows, unit L^2 on the grid they are sampled on.
//
// Two widths are exposed because two different exactness properties are in
// play: exp(-pi|t|^2) is invariant under the library's Fourier transform,
// while exp(-|t|^2/2) is the harmonic-oscillator ground state, so the
// spectrogram of the oscillator flow rotates rigidly when analyzed with it.

#include <cmath>

#include "modhf/grid.hpp"

namespace modhf {

class GaussWindow {
 public:
  enum class Kind { transform_self_dual, oscillator_ground };

  explicit GaussWindow(Kind kind = Kind::transform_self_dual) : kind_(kind) {}

  Kind kind() const { return kind_; }

  // Quadratic-exponent coefficient a in g(t) ~ exp(-a |t|^2).
  double width_a() const {
    return kind_ == Kind::transform_self_dual ? M_PI : 0.5;
  }

  Field sample_normalized(const GridSpec& grid) const {
    const double a = width_a();
    Field g = Field::sample(grid, [&](const std::array<double, 3>& x) {
      double r2 = 0.0;
      for (int i = 0; i < grid.dim(); ++i) r2 += x[i] * x[i];
      return cplx(std::exp(-a * r2), 0.0);
    });
    const double nrm = lp_norm(g, 2.0);
    g *= cplx(1.0 / nrm, 0.0);
    return g;
  }

 private:
  Kind kind_;
};

}  // namespace modhf
