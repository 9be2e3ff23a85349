#pragma once

// Modulation-space machinery: short-time Fourier transform, the smooth
// partition of unity on unit frequency cubes, the band decomposition
// operators it induces, and the M^{p,q}_s norm computed by both of its
// equivalent definitions.
//
//   stft route:  ( int ( int |V_g f(x,w)|^p dx )^{q/p} <w>^{sq} dw )^{1/q}
//   band route:  ( sum_k (1+|k|)^{sq} || band_k f ||_{L^p}^q )^{1/q}
//
// Integrals become lattice sums weighted dx^d (over x) and dxi^d (over w);
// an essential supremum becomes a lattice max. The two routes agree up to a
// fixed constant which the verify module records and regresses against.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "modhf/errors.hpp"
#include "modhf/grid.hpp"
#include "modhf/parallel.hpp"
#include "modhf/window.hpp"

namespace modhf {

struct NormParams {
  double p = 2.0;
  double q = 2.0;
  double s = 0.0;

  void validate() const {
    if (!(p >= 1.0) || !(q >= 1.0))
      throw std::domain_error("NormParams: p and q must lie in [1, inf]");
    if (!(s >= 0.0) || std::isinf(s))
      throw std::domain_error("NormParams: weight exponent s must be finite and >= 0");
  }
};

enum class NormMethod { stft, bands };

namespace detail {

// Smooth transition profile: 1 on [0,1/2], 0 on [1,inf), C^inf in between,
// built from the classic exp(-1/t) blend.
inline double bump_profile(double r) {
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  auto s = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  const double up = s(1.0 - r);
  const double down = s(r - 0.5);
  return up / (up + down);
}

struct MixedNormAccumulator {
  // Accumulates A(w) = ||V(.,w)||_{L^p(dx)} across x-rows, then closes with
  // the weighted l^q over w.
  MixedNormAccumulator(std::size_t bins, double p) : p_(p), acc_(bins, 0.0) {}

  void add(std::size_t bin, double magnitude) {
    if (is_infinite_exponent(p_)) {
      acc_[bin] = std::max(acc_[bin], magnitude);
    } else if (p_ == 2.0) {
      acc_[bin] += magnitude * magnitude;
    } else if (p_ == 1.0) {
      acc_[bin] += magnitude;
    } else {
      acc_[bin] += std::pow(magnitude, p_);
    }
  }

  void merge(const MixedNormAccumulator& other) {
    for (std::size_t i = 0; i < acc_.size(); ++i) {
      if (is_infinite_exponent(p_))
        acc_[i] = std::max(acc_[i], other.acc_[i]);
      else
        acc_[i] += other.acc_[i];
    }
  }

  double inner_value(std::size_t bin, double x_cell) const {
    if (is_infinite_exponent(p_)) return acc_[bin];
    return std::pow(acc_[bin] * x_cell, 1.0 / p_);
  }

  double p_;
  std::vector<double> acc_;
};

inline double close_weighted_lq(const std::vector<double>& a,
                                const std::vector<double>& weight_s,
                                double q, double s, double w_cell) {
  if (is_infinite_exponent(q)) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      m = std::max(m, a[i] * (s == 0.0 ? 1.0 : weight_s[i]));
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double term = s == 0.0 ? a[i] : a[i] * weight_s[i];
    acc += q == 1.0 ? term : (q == 2.0 ? term * term : std::pow(term, q));
  }
  return std::pow(acc * w_cell, 1.0 / q);
}

}  // namespace detail

// V_g f(x, w) = <f, M_w T_x g> by lattice quadrature; x is a spatial lattice
// multi-index, w a signed frequency multi-index. Direct O(n^d) evaluation --
// the norm routines below use one FFT per translation instead.
inline cplx stft_point(const Field& f, const Field& window,
                       const std::array<int, 3>& x_index,
                       const std::array<int, 3>& w_signed) {
  f.require_same_grid(window);
  const auto& g = f.grid();
  const int n = g.samples_per_dim();
  cplx acc = 0.0;
  for (std::size_t m = 0; m < f.size(); ++m) {
    const auto idx = g.unflatten(m);
    std::array<int, 3> shifted{0, 0, 0};
    double phase = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
      shifted[i] = ((idx[i] - x_index[i]) % n + n) % n;
      phase += g.xi_at(w_signed[i]) * g.x_at(idx[i]);
    }
    const cplx mod = std::polar(1.0, -2.0 * M_PI * phase);
    acc += f[m] * std::conj(window[g.flatten(shifted)]) * mod;
  }
  return acc * std::pow(g.dx(), g.dim());
}

// sigma_k partition of unity on the frequency lattice. The construction is a
// translated bump divided by the sum of all translates; because the bump is a
// per-coordinate product, every sigma_k factorizes over dimensions and only
// 1-D tables are stored.
class FrequencyDecomposition {
 public:
  explicit FrequencyDecomposition(const GridSpec& grid, int radius = -1)
      : grid_(grid) {
    const int max_radius = static_cast<int>(std::floor(grid.xi_max())) - 1;
    if (max_radius < 1)
      throw ConfigError("FrequencyDecomposition: grid too small to hold one unit cube");
    radius_ = radius < 0 ? max_radius : radius;
    if (radius_ < 1 || radius_ > max_radius)
      throw ConfigError("FrequencyDecomposition: requested lattice radius does not fit the grid");

    const int n = grid.samples_per_dim();
    tables_.assign(2 * radius_ + 1, std::vector<double>(n, 0.0));
    for (int slot = 0; slot < n; ++slot) {
      const double xi = grid.xi_at(grid.signed_freq(slot));
      // Only translates within distance 1 contribute to the denominator.
      double den = 0.0;
      const int lo = static_cast<int>(std::ceil(xi - 1.0));
      const int hi = static_cast<int>(std::floor(xi + 1.0));
      for (int l = lo; l <= hi; ++l) den += detail::bump_profile(std::abs(xi - l));
      for (int k = -radius_; k <= radius_; ++k) {
        const double num = detail::bump_profile(std::abs(xi - k));
        if (num > 0.0) tables_[k + radius_][slot] = num / den;
      }
    }
  }

  const GridSpec& grid() const { return grid_; }
  int radius() const { return radius_; }

  double sigma1d(int k, int slot) const { return tables_[k + radius_][slot]; }

  // sigma_k at a lattice point, as the product of 1-D factors.
  double sigma(const std::array<int, 3>& k, std::size_t flat) const {
    const auto idx = grid_.unflatten(flat);
    double v = 1.0;
    for (int i = 0; i < grid_.dim(); ++i) v *= sigma1d(k[i], idx[i]);
    return v;
  }

  // All integer lattice points with |k|_inf <= radius, in lexicographic order.
  std::vector<std::array<int, 3>> bands() const {
    std::vector<std::array<int, 3>> out;
    std::array<int, 3> k{0, 0, 0};
    enumerate(0, k, out);
    return out;
  }

  void require_in_range(const std::array<int, 3>& k) const {
    for (int i = 0; i < grid_.dim(); ++i)
      if (std::abs(k[i]) > radius_)
        throw std::domain_error("frequency band index outside retained radius");
  }

 private:
  void enumerate(int dimi, std::array<int, 3>& k,
                 std::vector<std::array<int, 3>>& out) const {
    if (dimi == grid_.dim()) {
      out.push_back(k);
      return;
    }
    for (int v = -radius_; v <= radius_; ++v) {
      k[dimi] = v;
      enumerate(dimi + 1, k, out);
    }
  }

  GridSpec grid_;
  int radius_;
  std::vector<std::vector<double>> tables_;
};

namespace detail {

inline void multiply_sigma(const FrequencyDecomposition& dec,
                           const std::array<int, 3>& k, const Field& spectrum,
                           Field& out) {
  const auto& g = spectrum.grid();
  const int n = g.samples_per_dim();
  if (g.dim() == 1) {
    for (int s0 = 0; s0 < n; ++s0) out[s0] = spectrum[s0] * dec.sigma1d(k[0], s0);
    return;
  }
  for (std::size_t m = 0; m < spectrum.size(); ++m) {
    const auto idx = g.unflatten(m);
    double v = 1.0;
    for (int i = 0; i < g.dim(); ++i) v *= dec.sigma1d(k[i], idx[i]);
    out[m] = spectrum[m] * v;
  }
}

}  // namespace detail

// Band component of f at lattice point k: inverse transform of sigma_k * fhat.
inline Field band_project(const std::array<int, 3>& k, const Field& f,
                          const FrequencyDecomposition& dec) {
  if (!(f.grid() == dec.grid())) throw ConfigError("decomposition built for another grid");
  dec.require_in_range(k);
  const Field spectrum = forward_fourier(f);
  Field piece(f.grid());
  detail::multiply_sigma(dec, k, spectrum, piece);
  return inverse_fourier(piece);
}

inline double modulation_norm_stft(const Field& f, const NormParams& params,
                                   const Field& window) {
  params.validate();
  f.require_same_grid(window);
  const auto& g = f.grid();
  const std::size_t count = g.size();
  const int n = g.samples_per_dim();
  const double x_cell = std::pow(g.dx(), g.dim());

  std::vector<detail::MixedNormAccumulator> partial(
      std::min<std::size_t>(64, count), detail::MixedNormAccumulator(count, params.p));

  parallel_chunks(count, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& acc = partial[chunk];
    Field windowed(g);
    Field row(g);
    for (std::size_t xm = begin; xm < end; ++xm) {
      const auto xidx = g.unflatten(xm);
      // f(t) * conj(g(t - x)): cyclic shift of the sampled window.
      for (std::size_t m = 0; m < count; ++m) {
        const auto idx = g.unflatten(m);
        std::array<int, 3> shifted{0, 0, 0};
        for (int i = 0; i < g.dim(); ++i)
          shifted[i] = ((idx[i] - xidx[i]) % n + n) % n;
        windowed[m] = f[m] * std::conj(window[g.flatten(shifted)]);
      }
      detail::fft_execute(g, windowed.data(), row.data(), FFTW_FORWARD);
      // Row now holds V(x, .)/dx^d up to the lattice-offset sign, which has
      // modulus one and is irrelevant here.
      for (std::size_t w = 0; w < count; ++w) acc.add(w, std::abs(row[w]) * x_cell);
    }
  }, static_cast<int>(partial.size()));

  for (std::size_t c = 1; c < partial.size(); ++c) partial[0].merge(partial[c]);

  std::vector<double> inner(count), weight(count, 1.0);
  for (std::size_t w = 0; w < count; ++w) {
    inner[w] = partial[0].inner_value(w, x_cell);
    if (params.s != 0.0) {
      const auto xi = g.xi_of(w);
      double r2 = 0.0;
      for (int i = 0; i < g.dim(); ++i) r2 += xi[i] * xi[i];
      weight[w] = std::pow(1.0 + r2, params.s / 2.0);
    }
  }
  return detail::close_weighted_lq(inner, weight, params.q, params.s,
                                   std::pow(g.dxi(), g.dim()));
}

inline double modulation_norm_bands(const Field& f, const NormParams& params,
                                    const FrequencyDecomposition& dec) {
  params.validate();
  if (!(f.grid() == dec.grid())) throw ConfigError("decomposition built for another grid");
  const auto& g = f.grid();
  const Field spectrum = forward_fourier(f);
  const auto bands = dec.bands();

  std::vector<double> band_norms(bands.size(), 0.0);
  parallel_chunks(bands.size(), [&](std::size_t, std::size_t begin, std::size_t end) {
    Field piece(g);
    for (std::size_t bi = begin; bi < end; ++bi) {
      detail::multiply_sigma(dec, bands[bi], spectrum, piece);
      band_norms[bi] = lp_norm(inverse_fourier(piece), params.p);
    }
  });

  std::vector<double> weight(bands.size(), 1.0);
  if (params.s != 0.0) {
    for (std::size_t bi = 0; bi < bands.size(); ++bi) {
      double r2 = 0.0;
      for (int i = 0; i < g.dim(); ++i) r2 += double(bands[bi][i]) * bands[bi][i];
      weight[bi] = std::pow(1.0 + std::sqrt(r2), params.s);
    }
  }
  // l^q over the band lattice carries unit counting measure.
  return detail::close_weighted_lq(band_norms, weight, params.q, params.s, 1.0);
}

struct EmbeddingReport {
  double src_norm = 0.0;
  double dst_norm = 0.0;
  double ratio = 0.0;
};

// Caches the sampled window and the partition for one grid so norm-heavy
// callers (solver diagnostics, verification suites) reuse them.
class ModulationNormEngine {
 public:
  explicit ModulationNormEngine(const GridSpec& grid,
                                GaussWindow window = GaussWindow{},
                                int radius = -1)
      : grid_(grid),
        window_(window.sample_normalized(grid)),
        dec_(grid, radius) {}

  const GridSpec& grid() const { return grid_; }
  const Field& window() const { return window_; }
  const FrequencyDecomposition& decomposition() const { return dec_; }

  double norm(const Field& f, const NormParams& params,
              NormMethod method = NormMethod::bands) const {
    return method == NormMethod::stft ? modulation_norm_stft(f, params, window_)
                                      : modulation_norm_bands(f, params, dec_);
  }

  // Ratio ||f||_dst / ||f||_src for an ordered embedding pair.
  EmbeddingReport embedding_check(const Field& f, const NormParams& src,
                                  const NormParams& dst,
                                  NormMethod method = NormMethod::stft) const {
    src.validate();
    dst.validate();
    if (src.p > dst.p || src.q > dst.q || dst.s > src.s)
      throw std::domain_error(
          "embedding_check: need src.p <= dst.p, src.q <= dst.q, dst.s <= src.s");
    EmbeddingReport rep;
    rep.src_norm = norm(f, src, method);
    rep.dst_norm = norm(f, dst, method);
    rep.ratio = rep.dst_norm / rep.src_norm;
    return rep;
  }

 private:
  GridSpec grid_;
  Field window_;
  FrequencyDecomposition dec_;
};

}  // namespace modhf
