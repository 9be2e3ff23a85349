#pragma once

// Truncated periodic grids approximating R^d, discrete Fourier transforms,
// and quadrature-weighted L^p norms.
//
// Conventions, fixed once for the whole library:
//   * spatial lattice   x_m  = -L + m*dx,   m = 0..n-1 per dimension
//   * frequency lattice xi_j = j*dxi,       j = -n/2..n/2-1,  dxi = 1/(2L)
//   * forward transform F f(xi) = dx^d * sum_m f(x_m) exp(-2*pi*i x_m.xi)
// which makes exp(-pi|x|^2) its own transform and Parseval weight-free.
// Spectral fields are stored in FFT slot order (non-negative j first);
// freq_slot / signed_freq abstract the layout away.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <mutex>
#include <tuple>
#include <vector>

#include <fftw3.h>

#include "modhf/errors.hpp"

namespace modhf {

using cplx = std::complex<double>;

class GridSpec {
 public:
  GridSpec(int dim, int samples_per_dim, double half_width)
      : d_(dim), n_(samples_per_dim), half_width_(half_width) {
    if (d_ < 1 || d_ > 3) throw ConfigError("GridSpec: dimension must be 1, 2 or 3");
    if (n_ < 8 || (n_ & (n_ - 1)) != 0)
      throw ConfigError("GridSpec: samples per dimension must be a power of two >= 8");
    if (!(half_width_ > 0.0)) throw ConfigError("GridSpec: half width must be positive");
  }

  int dim() const { return d_; }
  int samples_per_dim() const { return n_; }
  double half_width() const { return half_width_; }
  double dx() const { return 2.0 * half_width_ / n_; }
  double dxi() const { return 1.0 / (2.0 * half_width_); }
  double xi_max() const { return (n_ / 2) * dxi(); }

  std::size_t size() const {
    std::size_t s = 1;
    for (int i = 0; i < d_; ++i) s *= static_cast<std::size_t>(n_);
    return s;
  }

  double x_at(int m) const { return -half_width_ + m * dx(); }
  double xi_at(int j_signed) const { return j_signed * dxi(); }

  // Signed frequency index j in [-n/2, n/2) <-> FFT slot in [0, n).
  int freq_slot(int j_signed) const { return (j_signed % n_ + n_) % n_; }
  int signed_freq(int slot) const { return slot < n_ / 2 ? slot : slot - n_; }

  // Row-major flattening, first dimension slowest (FFTW layout).
  std::size_t flatten(const std::array<int, 3>& idx) const {
    std::size_t flat = 0;
    for (int i = 0; i < d_; ++i) flat = flat * n_ + static_cast<std::size_t>(idx[i]);
    return flat;
  }
  std::array<int, 3> unflatten(std::size_t flat) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int i = d_ - 1; i >= 0; --i) {
      idx[i] = static_cast<int>(flat % n_);
      flat /= n_;
    }
    return idx;
  }

  std::array<double, 3> x_of(std::size_t flat) const {
    const auto idx = unflatten(flat);
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (int i = 0; i < d_; ++i) x[i] = x_at(idx[i]);
    return x;
  }
  std::array<double, 3> xi_of(std::size_t flat) const {
    const auto idx = unflatten(flat);
    std::array<double, 3> xi{0.0, 0.0, 0.0};
    for (int i = 0; i < d_; ++i) xi[i] = xi_at(signed_freq(idx[i]));
    return xi;
  }

  bool operator==(const GridSpec&) const = default;

 private:
  int d_;
  int n_;
  double half_width_;
};

class Field {
 public:
  explicit Field(const GridSpec& grid) : grid_(grid), v_(grid.size()) {}

  template <class Fn>
  static Field sample(const GridSpec& grid, Fn&& fn) {
    Field f(grid);
    for (std::size_t m = 0; m < f.size(); ++m) f.v_[m] = fn(grid.x_of(m));
    return f;
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }
  cplx& operator[](std::size_t i) { return v_[i]; }
  const cplx& operator[](std::size_t i) const { return v_[i]; }
  cplx* data() { return v_.data(); }
  const cplx* data() const { return v_.data(); }
  std::vector<cplx>& values() { return v_; }
  const std::vector<cplx>& values() const { return v_; }

  bool all_finite() const {
    for (const auto& z : v_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  Field& operator+=(const Field& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  Field& operator-=(const Field& o) {
    require_same_grid(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  Field& operator*=(cplx c) {
    for (auto& z : v_) z *= c;
    return *this;
  }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(cplx c, Field f) { return f *= c; }
  friend Field operator*(Field f, cplx c) { return f *= c; }

  void require_same_grid(const Field& o) const {
    if (!(grid_ == o.grid_)) throw ConfigError("fields live on different grids");
  }

 private:
  GridSpec grid_;
  std::vector<cplx> v_;
};

inline Field hadamard(const Field& a, const Field& b) {
  a.require_same_grid(b);
  Field out(a.grid());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

inline Field conj(const Field& f) {
  Field out(f.grid());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = std::conj(f[i]);
  return out;
}

namespace detail {

// Plan cache keyed by (rank, n, sign). Plans are created FFTW_UNALIGNED with
// FFTW_ESTIMATE so they are deterministic and reusable on any buffers via the
// new-array execute interface. Plan creation is the only non-reentrant FFTW
// entry point, hence the mutex.
inline void fft_execute(const GridSpec& g, const cplx* in, cplx* out, int sign) {
  static std::map<std::tuple<int, int, int>, fftw_plan> cache;
  static std::mutex mtx;

  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(mtx);
    const auto key = std::make_tuple(g.dim(), g.samples_per_dim(), sign);
    auto it = cache.find(key);
    if (it == cache.end()) {
      std::vector<cplx> a(g.size()), b(g.size());
      std::array<int, 3> dims{};
      for (int i = 0; i < g.dim(); ++i) dims[i] = g.samples_per_dim();
      plan = fftw_plan_dft(g.dim(), dims.data(),
                           reinterpret_cast<fftw_complex*>(a.data()),
                           reinterpret_cast<fftw_complex*>(b.data()), sign,
                           FFTW_ESTIMATE | FFTW_UNALIGNED);
      if (!plan) throw ConfigError("FFTW plan creation failed");
      cache.emplace(key, plan);
    } else {
      plan = it->second;
    }
  }
  fftw_execute_dft(plan,
                   reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

// Multiplies out[slot] by scale * (-1)^(sum of slot indices). The sign soaks
// up the -L lattice offset: exp(-2 pi i (-L) j dxi) = (-1)^j, and j has the
// parity of its slot because n is even.
inline void apply_parity_scale(Field& f, double scale) {
  const auto& g = f.grid();
  const int n = g.samples_per_dim();
  if (g.dim() == 1) {
    for (int i = 0; i < n; ++i) f[i] *= (i & 1) ? -scale : scale;
    return;
  }
  for (std::size_t m = 0; m < f.size(); ++m) {
    const auto idx = g.unflatten(m);
    int parity = 0;
    for (int i = 0; i < g.dim(); ++i) parity += idx[i];
    f[m] *= (parity & 1) ? -scale : scale;
  }
}

}  // namespace detail

// F f(xi_j) = dx^d sum_m f(x_m) exp(-2 pi i x_m.xi_j), slot-ordered output.
inline Field forward_fourier(const Field& f) {
  const auto& g = f.grid();
  Field out(g);
  detail::fft_execute(g, f.data(), out.data(), FFTW_FORWARD);
  detail::apply_parity_scale(out, std::pow(g.dx(), g.dim()));
  return out;
}

inline Field inverse_fourier(const Field& fhat) {
  const auto& g = fhat.grid();
  Field tmp = fhat;
  detail::apply_parity_scale(tmp, 1.0);
  Field out(g);
  detail::fft_execute(g, tmp.data(), out.data(), FFTW_BACKWARD);
  const double scale = std::pow(g.dxi(), g.dim());
  for (auto& z : out.values()) z *= scale;
  return out;
}

inline bool is_infinite_exponent(double p) { return std::isinf(p); }

namespace detail {

inline double weighted_lp(const std::vector<cplx>& v, double p, double cell) {
  if (!(p >= 1.0)) throw std::domain_error("L^p norm requires p >= 1");
  if (is_infinite_exponent(p)) {
    double m = 0.0;
    for (const auto& z : v) m = std::max(m, std::abs(z));
    return m;
  }
  double acc = 0.0;
  if (p == 2.0) {
    for (const auto& z : v) acc += std::norm(z);
  } else if (p == 1.0) {
    for (const auto& z : v) acc += std::abs(z);
  } else {
    for (const auto& z : v) acc += std::pow(std::abs(z), p);
  }
  return std::pow(acc * cell, 1.0 / p);
}

}  // namespace detail

// Riemann-sum L^p norm over the spatial lattice; lattice max for p = inf.
inline double lp_norm(const Field& f, double p) {
  return detail::weighted_lp(f.values(), p, std::pow(f.grid().dx(), f.grid().dim()));
}

// Same, for slot-ordered spectra: the cell measure is dxi^d.
inline double lp_norm_spectral(const Field& fhat, double p) {
  return detail::weighted_lp(fhat.values(), p,
                             std::pow(fhat.grid().dxi(), fhat.grid().dim()));
}

// Reorders a slot-ordered spectrum into ascending-frequency order so it can
// be read as a function sampled on the natural lattice. On a self-dual grid
// (n = 4 L^2, so dx = dxi) the result lives on the spatial lattice of the
// same GridSpec.
inline Field spectrum_in_natural_order(const Field& fhat) {
  const auto& g = fhat.grid();
  Field out(g);
  const int n = g.samples_per_dim();
  for (std::size_t m = 0; m < out.size(); ++m) {
    auto idx = g.unflatten(m);
    std::array<int, 3> slot_idx{0, 0, 0};
    for (int i = 0; i < g.dim(); ++i) slot_idx[i] = g.freq_slot(idx[i] - n / 2);
    out[m] = fhat[g.flatten(slot_idx)];
  }
  return out;
}

}  // namespace modhf
