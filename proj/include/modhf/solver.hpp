#pragma once

// Time integration of the N-coupled Hartree(-Fock) systems
//
//   i d/dt psi_k = Phi(D) psi_k + H psi_k - 1_fock F_k(psi),
//   H   = sum_l kappa |x|^{-gamma} * |psi_l|^2,
//   F_k = sum_l psi_l ( kappa |x|^{-gamma} * (conj(psi_l) psi_k) ),
//
// by two independent schemes:
//   * picard -- per-step fixed-point iteration on the Duhamel form
//         psi_k(dt) = U(dt) psi_k(0) - i int_0^dt U(dt-s) (H psi_k)(s) ds
//                                    + i int_0^dt U(dt-s) F_k(s) ds,
//     with the s-integral collocated at 4 Gauss-Legendre nodes (the Gauss
//     Runge-Kutta scheme, which preserves the quadratic masses to the
//     iteration tolerance);
//   * strang -- symmetric splitting: half nonlinear flow, full linear flow,
//     half nonlinear flow, second order in dt.
//
// With kappa > 0 the Hartree potential enters with a positive sign
// (repulsive / defocusing); the two nonlinear terms carry opposite signs, so
// for N = 1 the exchange term cancels the Hartree term exactly and the full
// flow reduces to the free propagator.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modhf/errors.hpp"
#include "modhf/grid.hpp"
#include "modhf/hartree.hpp"
#include "modhf/hermite.hpp"
#include "modhf/modspace.hpp"
#include "modhf/symbols.hpp"

namespace modhf {

enum class DispersionKind { fractional, polynomial, harmonic };
enum class Scheme { picard, strang };

struct ProblemSpec {
  GridSpec grid{1, 256, 8.0};
  int particles = 1;
  double gamma = 0.5;
  double kappa = 0.0;
  bool fock_enabled = true;  // Hartree-Fock when true, reduced HF when false
  DispersionKind dispersion = DispersionKind::fractional;
  std::optional<DispersionSymbol> symbol = DispersionSymbol::laplacian();
  int hermite_degree = -1;  // harmonic case; -1 picks the grid default
  std::vector<Field> initial;
  double horizon = 1.0;
  bool radial_hint = false;

  // Numerics (defaulted; everything above is physics and must be explicit
  // in config files).
  double picard_tol = 1e-10;
  int picard_max_iter = 50;
  double dt_floor = 1e-6;
  double blowup_factor = 1e6;
  double hermite_resid_tol = 1e-6;

  double effective_alpha() const {
    if (dispersion == DispersionKind::harmonic) return 2.0;
    if (dispersion == DispersionKind::polynomial) return symbol->order();
    return symbol->alpha();
  }

  // Strichartz pair (q, r) = (4 alpha / gamma, 4 d / (2d - gamma)); it
  // satisfies the admissibility relation alpha/q = d (1/2 - 1/r).
  double strichartz_q() const { return 4.0 * effective_alpha() / gamma; }
  double strichartz_r() const { return 4.0 * grid.dim() / (2.0 * grid.dim() - gamma); }

  NormParams monitor_norm() const {
    return NormParams{2.0, 2.0 * grid.dim() / (grid.dim() + gamma), 0.0};
  }

  void validate() const {
    const int d = grid.dim();
    if (particles < 1) throw ConfigError("ProblemSpec: need at least one particle");
    if (!(gamma > 0.0 && gamma < d)) throw ConfigError("ProblemSpec: gamma must lie in (0, d)");
    if (initial.size() != static_cast<std::size_t>(particles))
      throw ConfigError("ProblemSpec: initial data must provide one field per particle");
    for (const auto& f : initial) {
      if (!(f.grid() == grid)) throw ConfigError("ProblemSpec: initial field on a different grid");
      if (!f.all_finite()) throw ConfigError("ProblemSpec: initial data not finite");
    }
    if (!(horizon > 0.0)) throw ConfigError("ProblemSpec: horizon must be positive");
    if (dispersion == DispersionKind::harmonic) {
      if (d > 2) throw ConfigError("ProblemSpec: harmonic dispersion supported for d <= 2");
    } else {
      if (!symbol.has_value()) throw ConfigError("ProblemSpec: dispersion symbol missing");
      if (dispersion == DispersionKind::fractional) {
        const double a = symbol->alpha();
        // The radial fractional regime alpha in (2d/(2d-1), 2) is only
        // covered for radial data in d >= 2.
        const double lo = 2.0 * d / (2.0 * d - 1.0);
        if (a < 2.0 && a > lo && !(radial_hint && d >= 2))
          throw ConfigError(
              "ProblemSpec: fractional alpha in (2d/(2d-1), 2) requires radial_hint and d >= 2");
      }
    }
  }
};

// Free flow U(t): a Fourier multiplier for symbol dispersion, the Hermite
// eigen-sum for the harmonic oscillator. Phase tables for repeated offsets
// are cached per exact t value.
class FlowOperator {
 public:
  FlowOperator(const ProblemSpec& spec) : grid_(spec.grid) {
    if (spec.dispersion == DispersionKind::harmonic) {
      basis_ = std::make_shared<HermiteBasis>(spec.grid, spec.hermite_degree);
      resid_tol_ = spec.hermite_resid_tol;
    } else {
      prop_ = std::make_shared<Propagator>(spec.grid, *spec.symbol);
    }
  }

  Field apply(const Field& f, double t) const {
    if (prop_) {
      auto it = tables_.find(t);
      if (it == tables_.end())
        it = tables_.emplace(t, prop_->phase_table(t)).first;
      return prop_->apply_table(f, it->second);
    }
    return basis_->harmonic_propagate(f, t, resid_tol_);
  }

  const HermiteBasis* hermite() const { return basis_.get(); }

 private:
  GridSpec grid_;
  std::shared_ptr<Propagator> prop_;
  std::shared_ptr<HermiteBasis> basis_;
  double resid_tol_ = 1e-6;
  mutable std::map<double, std::vector<cplx>> tables_;
};

// N_k = H psi_k - 1_fock F_k, the nonlinearity of i d/dt psi = Phi(D) psi + N.
inline std::vector<Field> nonlinearity(std::span<const Field> states,
                                       const HartreePotential& pot, bool fock) {
  const Field potential = hartree_factor(states, pot);
  std::vector<Field> out;
  out.reserve(states.size());
  for (std::size_t k = 0; k < states.size(); ++k) {
    Field nk = hadamard(potential, states[k]);
    if (fock) nk -= fock_term(static_cast<int>(k), states, pot);
    out.push_back(std::move(nk));
  }
  return out;
}

namespace detail {

struct GaussCollocation {
  std::array<double, 4> c;                  // nodes on (0, 1)
  std::array<double, 4> b;                  // end weights
  std::array<std::array<double, 4>, 4> a;   // a[i][j] = int_0^{c_i} l_j
};

inline const GaussCollocation& gauss4() {
  static const GaussCollocation tab = [] {
    GaussCollocation t;
    const double r1 = 0.3399810435848562648026658;
    const double r2 = 0.8611363115940525752239465;
    t.c = {0.5 * (1.0 - r2), 0.5 * (1.0 - r1), 0.5 * (1.0 + r1), 0.5 * (1.0 + r2)};
    // Lagrange basis coefficients over the nodes, integrated exactly.
    for (int j = 0; j < 4; ++j) {
      std::array<double, 4> poly{1.0, 0.0, 0.0, 0.0};  // ascending powers
      double denom = 1.0;
      int deg = 0;
      for (int m = 0; m < 4; ++m) {
        if (m == j) continue;
        denom *= t.c[j] - t.c[m];
        for (int p = deg + 1; p >= 1; --p) poly[p] = poly[p - 1] - t.c[m] * poly[p];
        poly[0] *= -t.c[m];
        ++deg;
      }
      auto integral_to = [&](double u) {
        double acc = 0.0, up = u;
        for (int p = 0; p <= 3; ++p) {
          acc += poly[p] * up / (p + 1);
          up *= u;
        }
        return acc / denom;
      };
      t.b[j] = integral_to(1.0);
      for (int i = 0; i < 4; ++i) t.a[i][j] = integral_to(t.c[i]);
    }
    return t;
  }();
  return tab;
}

inline double max_l2_distance(const std::vector<Field>& a, const std::vector<Field>& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    Field diff = a[k];
    diff -= b[k];
    worst = std::max(worst, lp_norm(diff, 2.0));
  }
  return worst;
}

}  // namespace detail

struct StepResult {
  std::vector<Field> states;
  int iterations = 0;
};

// One Duhamel-Picard step of size dt from t0. The four collocation states are
// iterated to a fixed point; divergence past max_iter raises StepDiverged so
// the caller can halve dt.
class PicardStepper {
 public:
  PicardStepper(const ProblemSpec& spec)
      : spec_(spec),
        flow_(spec),
        pot_(spec.grid, spec.gamma, spec.kappa, ZeroMode::mean_zero) {}

  const FlowOperator& flow() const { return flow_; }
  const HartreePotential& potential() const { return pot_; }

  StepResult step(const std::vector<Field>& states, double /*t0*/, double dt,
                  double tol, int max_iter) const {
    if (dt == 0.0) throw std::domain_error("picard step needs dt != 0");
    if (!(tol > 0.0)) throw std::domain_error("picard step needs tol > 0");
    const auto& tab = detail::gauss4();
    const int N = static_cast<int>(states.size());

    // Free flow of the initial data to each node and to the endpoint.
    std::array<std::vector<Field>, 4> free_node;
    for (int i = 0; i < 4; ++i) {
      free_node[i].reserve(N);
      for (const auto& psi : states) free_node[i].push_back(flow_.apply(psi, tab.c[i] * dt));
    }

    std::array<std::vector<Field>, 4> node = free_node;
    std::vector<Field> rotated_nl[4];  // U(-c_j dt) N(Y_j), reused per iterate

    int iterations = 0;
    const bool trivial = spec_.kappa == 0.0;
    for (int it = 0; it < max_iter; ++it) {
      ++iterations;
      for (int j = 0; j < 4; ++j) {
        auto nl = nonlinearity(node[j], pot_, spec_.fock_enabled);
        rotated_nl[j].clear();
        rotated_nl[j].reserve(N);
        for (auto& g : nl) rotated_nl[j].push_back(flow_.apply(g, -tab.c[j] * dt));
      }
      double delta = 0.0;
      for (int i = 0; i < 4; ++i) {
        std::vector<Field> next;
        next.reserve(N);
        for (int k = 0; k < N; ++k) {
          Field acc(spec_.grid);
          for (int j = 0; j < 4; ++j) {
            const double w = tab.a[i][j] * dt;
            const auto& src = rotated_nl[j][k];
            for (std::size_t m = 0; m < acc.size(); ++m)
              acc[m] += w * src[m];
          }
          // Y_i = U(c_i dt) [psi0 - i * sum_j a_ij dt * U(-c_j dt) N_j]
          Field inner = states[k];
          for (std::size_t m = 0; m < inner.size(); ++m)
            inner[m] -= cplx(0.0, 1.0) * acc[m];
          next.push_back(flow_.apply(inner, tab.c[i] * dt));
        }
        delta = std::max(delta, detail::max_l2_distance(next, node[i]));
        node[i] = std::move(next);
      }
      if (delta < tol || trivial) {
        StepResult out;
        out.iterations = iterations;
        out.states.reserve(N);
        for (int k = 0; k < N; ++k) {
          Field acc(spec_.grid);
          for (int j = 0; j < 4; ++j) {
            const double w = tab.b[j] * dt;
            const auto& src = rotated_nl[j][k];
            for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += w * src[m];
          }
          Field inner = states[k];
          for (std::size_t m = 0; m < inner.size(); ++m)
            inner[m] -= cplx(0.0, 1.0) * acc[m];
          out.states.push_back(flow_.apply(inner, dt));
        }
        return out;
      }
    }
    throw StepDiverged("picard iteration did not contract within " +
                       std::to_string(max_iter) + " iterations");
  }

  // Strang composition: half nonlinear, full linear, half nonlinear. The
  // reduced system admits an exact nonlinear half flow (the density is
  // invariant under a real potential phase); with the exchange term the
  // half flow freezes the kernels at its start and integrates the resulting
  // linear system with one RK4 step, which is far below the splitting error
  // at the dt this library runs at.
  std::vector<Field> strang_step(const std::vector<Field>& states, double /*t0*/,
                                 double dt) const {
    std::vector<Field> cur = half_nonlinear(states, 0.5 * dt);
    for (auto& f : cur) f = flow_.apply(f, dt);
    return half_nonlinear(cur, 0.5 * dt);
  }

 private:
  std::vector<Field> half_nonlinear(const std::vector<Field>& states, double tau) const {
    if (spec_.kappa == 0.0) return states;
    const Field vh = hartree_factor(states, pot_);
    if (!spec_.fock_enabled) {
      // i d/dt psi = V psi with V real: exact phase rotation.
      std::vector<Field> out = states;
      for (auto& f : out)
        for (std::size_t m = 0; m < f.size(); ++m)
          f[m] *= std::polar(1.0, -tau * vh[m].real());
      return out;
    }
    // Frozen-coefficient exchange flow: i d/dt v_k = V v_k - A v_k with
    // A v_k = sum_l chi_l (K * (conj(chi_l) v_k)). V and A are self-adjoint,
    // so the exact frozen flow is unitary.
    const std::vector<Field>& chi = states;
    Field vre(spec_.grid);
    for (std::size_t m = 0; m < vre.size(); ++m) vre[m] = vh[m].real();
    auto rhs = [&](const std::vector<Field>& v) {
      std::vector<Field> out;
      out.reserve(v.size());
      for (std::size_t k = 0; k < v.size(); ++k) {
        Field r = hadamard(vre, v[k]);
        for (std::size_t l = 0; l < chi.size(); ++l) {
          Field pair = hadamard(conj(chi[l]), v[k]);
          r -= hadamard(chi[l], pot_.convolve(pair));
        }
        r *= cplx(0.0, -1.0);
        out.push_back(std::move(r));
      }
      return out;
    };
    auto axpy = [](const std::vector<Field>& y, double a, const std::vector<Field>& k) {
      std::vector<Field> out = y;
      for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t m = 0; m < out[i].size(); ++m) out[i][m] += a * k[i][m];
      return out;
    };
    const auto k1 = rhs(states);
    const auto k2 = rhs(axpy(states, 0.5 * tau, k1));
    const auto k3 = rhs(axpy(states, 0.5 * tau, k2));
    const auto k4 = rhs(axpy(states, tau, k3));
    std::vector<Field> out = states;
    for (std::size_t i = 0; i < out.size(); ++i)
      for (std::size_t m = 0; m < out[i].size(); ++m)
        out[i][m] += tau / 6.0 *
                     (k1[i][m] + 2.0 * k2[i][m] + 2.0 * k3[i][m] + k4[i][m]);
    return out;
  }

  ProblemSpec spec_;
  FlowOperator flow_;
  HartreePotential pot_;
};

// Spec-shaped free functions over a one-shot stepper.
inline StepResult picard_step(const std::vector<Field>& states, const ProblemSpec& spec,
                              double t0, double dt, double tol, int max_iter) {
  return PicardStepper(spec).step(states, t0, dt, tol, max_iter);
}

inline std::vector<Field> split_step(const std::vector<Field>& states,
                                     const ProblemSpec& spec, double t0, double dt) {
  return PicardStepper(spec).strang_step(states, t0, dt);
}

struct DiagnosticsRow {
  double t = 0.0;
  int k = 0;
  double mass = 0.0;
  double m_norm_22 = 0.0;
  double m_norm_2q = 0.0;
  double strichartz_acc = 0.0;
  int picard_iters = 0;
};

struct Trajectory {
  std::vector<double> times;                 // snapshot times, strictly increasing
  std::vector<std::vector<Field>> states;    // strided snapshots
  std::vector<DiagnosticsRow> diagnostics;   // one row per snapshot and component
  std::vector<int> picard_iterations;        // per accepted step
  double strichartz_q = 0.0;
  double strichartz_r = 0.0;
};

// Runs to the horizon or raises BlowUpSuspected. Picard steps that fail to
// contract halve dt down to spec.dt_floor; the monitored norm is checked at
// every snapshot against blowup_factor times its initial value.
inline Trajectory integrate(const ProblemSpec& spec, double dt, int snapshot_stride,
                            Scheme scheme = Scheme::picard) {
  spec.validate();
  if (!(dt > 0.0)) throw ConfigError("integrate: dt must be positive");
  if (snapshot_stride < 1) throw ConfigError("integrate: snapshot stride must be >= 1");

  PicardStepper stepper(spec);
  ModulationNormEngine engine(spec.grid);
  const NormParams p22{2.0, 2.0, 0.0};
  const NormParams p2q = spec.monitor_norm();
  const double sq = spec.strichartz_q();
  const double sr = spec.strichartz_r();

  Trajectory traj;
  traj.strichartz_q = sq;
  traj.strichartz_r = sr;

  std::vector<Field> states = spec.initial;
  std::vector<double> strichartz_pow(states.size(), 0.0);
  double monitored_initial = 0.0;

  auto snapshot = [&](double t, int iters) {
    traj.times.push_back(t);
    traj.states.push_back(states);
    double monitored = 0.0;
    for (std::size_t k = 0; k < states.size(); ++k) {
      DiagnosticsRow row;
      row.t = t;
      row.k = static_cast<int>(k);
      row.mass = lp_norm(states[k], 2.0);
      row.m_norm_22 = engine.norm(states[k], p22, NormMethod::bands);
      row.m_norm_2q = engine.norm(states[k], p2q, NormMethod::bands);
      row.strichartz_acc = std::pow(strichartz_pow[k], 1.0 / sq);
      row.picard_iters = iters;
      traj.diagnostics.push_back(row);
      monitored += row.m_norm_2q;
    }
    if (traj.times.size() == 1) {
      monitored_initial = monitored;
    } else if (monitored > spec.blowup_factor * monitored_initial) {
      throw BlowUpSuspected("monitored modulation norm exceeded " +
                            std::to_string(spec.blowup_factor) + " x initial");
    }
  };

  snapshot(0.0, 0);

  double t = 0.0;
  double dt_cur = dt;
  long step_index = 0;
  const double t_end = spec.horizon;
  while (t < t_end * (1.0 - 1e-12)) {
    const double dt_eff = std::min(dt_cur, t_end - t);
    int iters = 0;
    try {
      if (scheme == Scheme::picard) {
        auto res = stepper.step(states, t, dt_eff, spec.picard_tol, spec.picard_max_iter);
        states = std::move(res.states);
        iters = res.iterations;
      } else {
        states = stepper.strang_step(states, t, dt_eff);
      }
    } catch (const StepDiverged&) {
      dt_cur *= 0.5;
      if (dt_cur < spec.dt_floor)
        throw BlowUpSuspected("dt halving exhausted at the configured floor");
      continue;
    }
    t += dt_eff;
    ++step_index;
    traj.picard_iterations.push_back(iters);
    for (std::size_t k = 0; k < states.size(); ++k)
      strichartz_pow[k] += dt_eff * std::pow(lp_norm(states[k], sr), sq);
    if (step_index % snapshot_stride == 0 || t >= t_end * (1.0 - 1e-12))
      snapshot(t, iters);
  }
  return traj;
}

// Fits the integral inequality h(t)^b <= C (1 + int_0^t h^b) over a recorded
// norm history and checks the implied exponential envelope.
struct GronwallFit {
  double constant = 0.0;
  double beta_prime = 0.0;
  bool within_envelope = false;
};

inline GronwallFit gronwall_envelope(const std::vector<double>& times,
                                     const std::vector<double>& h, double beta_prime) {
  if (times.size() != h.size() || times.size() < 2)
    throw std::domain_error("gronwall_envelope: need matching time and norm histories");
  GronwallFit fit;
  fit.beta_prime = beta_prime;
  double integral = 0.0;
  double c = 0.0;
  std::vector<double> integrals(times.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double hb = std::pow(h[i], beta_prime);
    if (i > 0)
      integral += 0.5 * (hb + std::pow(h[i - 1], beta_prime)) * (times[i] - times[i - 1]);
    integrals[i] = integral;
    c = std::max(c, hb / (1.0 + integral));
  }
  fit.constant = c;
  fit.within_envelope = true;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double envelope = c * std::exp(c * times[i]) * (1.0 + 1e-9);
    if (std::pow(h[i], beta_prime) > envelope) fit.within_envelope = false;
  }
  return fit;
}

}  // namespace modhf
