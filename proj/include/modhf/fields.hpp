#pragma once

// Ready-made fields: Gaussian wave packets, chirps, smooth bumps, and
// seeded band-limited noise. Shared by initial-data construction, the
// verification families, and the tests.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "modhf/grid.hpp"
#include "modhf/modspace.hpp"

namespace modhf {

// amplitude * exp(-pi |(x-c)/w|^2) * exp(2 pi i k0.(x-c))
inline Field gaussian_packet(const GridSpec& grid, double width,
                             const std::array<double, 3>& center = {0, 0, 0},
                             const std::array<double, 3>& momentum = {0, 0, 0},
                             double amplitude = 1.0) {
  if (!(width > 0.0)) throw std::domain_error("gaussian_packet: width must be positive");
  return Field::sample(grid, [&](const std::array<double, 3>& x) {
    double r2 = 0.0, phase = 0.0;
    for (int i = 0; i < grid.dim(); ++i) {
      const double u = (x[i] - center[i]) / width;
      r2 += u * u;
      phase += momentum[i] * (x[i] - center[i]);
    }
    return amplitude * std::exp(-M_PI * r2) * std::polar(1.0, 2.0 * M_PI * phase);
  });
}

// Gaussian envelope with quadratic phase exp(i pi rate |x|^2).
inline Field chirp(const GridSpec& grid, double width, double rate) {
  return Field::sample(grid, [&](const std::array<double, 3>& x) {
    double r2 = 0.0;
    for (int i = 0; i < grid.dim(); ++i) r2 += x[i] * x[i];
    return std::exp(-M_PI * r2 / (width * width)) * std::polar(1.0, M_PI * rate * r2);
  });
}

// Compactly supported smooth bump (radius `support`), modulated to frequency k0.
inline Field modulated_bump(const GridSpec& grid, double support,
                            const std::array<double, 3>& k0) {
  return Field::sample(grid, [&](const std::array<double, 3>& x) {
    double prof = 1.0, phase = 0.0;
    for (int i = 0; i < grid.dim(); ++i) {
      prof *= detail::bump_profile(std::abs(x[i]) / support);
      phase += k0[i] * x[i];
    }
    return prof * std::polar(1.0, 2.0 * M_PI * phase);
  });
}

inline Field plane_wave(const GridSpec& grid, const std::array<int, 3>& k0,
                        double amplitude = 1.0) {
  return Field::sample(grid, [&](const std::array<double, 3>& x) {
    double phase = 0.0;
    for (int i = 0; i < grid.dim(); ++i) phase += grid.xi_at(k0[i]) * x[i];
    return amplitude * std::polar(1.0, 2.0 * M_PI * phase);
  });
}

// Random spectrum supported in |xi|_inf <= band with a smooth roll-off,
// fully determined by the seed: coefficients come from the raw mt19937_64
// stream, so the field is identical across platforms.
inline Field random_bandlimited(const GridSpec& grid, double band, std::uint64_t seed,
                                double amplitude = 1.0) {
  std::mt19937_64 rng(seed);
  auto canonical = [&rng]() {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
  };
  Field spectrum(grid);
  for (std::size_t m = 0; m < spectrum.size(); ++m) {
    const auto xi = grid.xi_of(m);
    double linf = 0.0, r2 = 0.0;
    for (int i = 0; i < grid.dim(); ++i) {
      linf = std::max(linf, std::abs(xi[i]));
      r2 += xi[i] * xi[i];
    }
    // Draw for every slot so the stream position does not depend on `band`.
    const double re = 2.0 * canonical() - 1.0;
    const double im = 2.0 * canonical() - 1.0;
    if (linf <= band)
      spectrum[m] = amplitude * std::exp(-r2 / (band * band)) * cplx(re, im);
  }
  return inverse_fourier(spectrum);
}

inline Field normalized_l2(Field f) {
  const double n = lp_norm(f, 2.0);
  if (n == 0.0) throw std::domain_error("cannot normalize the zero field");
  f *= cplx(1.0 / n, 0.0);
  return f;
}

}  // namespace modhf
