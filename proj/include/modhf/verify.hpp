#pragma once

// Estimate-verification harness. Each inequality of the library's analysis
// toolkit is turned into a deterministic regression case: the two sides are
// evaluated over a frozen reference family, the worst ratio is recorded once
// (mode record), and later runs assert it has not grown by more than 10%
// (mode assert). Bounds with a principled numeric value (unimodular growth
// exponents, isometry defect, exact identities) are absolute instead and
// never recorded.
//
// Everything here is deterministic for a fixed bounds file: the family is
// seeded, case order is fixed, and reductions are sequential, so a report is
// byte-identical across runs on one platform.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "modhf/errors.hpp"
#include "modhf/fields.hpp"
#include "modhf/grid.hpp"
#include "modhf/hartree.hpp"
#include "modhf/hermite.hpp"
#include "modhf/io.hpp"
#include "modhf/modspace.hpp"
#include "modhf/symbols.hpp"

namespace modhf {

enum class VerifyMode { record, assert_bounds };

struct VerifyRow {
  std::string case_id;
  double lhs = 0.0;    // worst-case left-hand side
  double rhs = 0.0;    // matching right-hand side
  double ratio = 0.0;  // worst lhs/rhs (or the probed metric itself)
  double bound = 0.0;  // stored bound (estimated) or fixed threshold (absolute)
  bool pass = true;
};

struct VerifyReport {
  std::string suite;
  std::vector<VerifyRow> rows;
  bool all_pass = true;
};

class BoundsStore {
 public:
  BoundsStore() = default;

  static BoundsStore load(const std::string& path) {
    BoundsStore store;
    store.path_ = path;
    std::ifstream is(path);
    if (!is) return store;  // fresh store; record mode will populate it
    nlohmann::json j;
    is >> j;
    for (auto it = j.begin(); it != j.end(); ++it)
      store.values_[it.key()] = it.value().get<double>();
    return store;
  }

  void save() const {
    if (path_.empty()) throw ConfigError("bounds store has no backing path");
    save_as(path_);
  }

  void save_as(const std::string& path) const {
    nlohmann::ordered_json j;
    for (const auto& [k, v] : values_) {
      std::ostringstream ss;
      ss << std::setprecision(17) << v;
      j[k] = nlohmann::json::parse(ss.str());
    }
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open " + path + " for writing");
    os << j.dump(2) << '\n';
  }

  std::optional<double> get(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
  }
  void set(const std::string& key, double v) { values_[key] = v; }
  bool empty() const { return values_.empty(); }

 private:
  std::string path_;
  std::map<std::string, double> values_;
};

struct NamedField {
  std::string id;
  Field field;
};

namespace detail {

inline Field hermite_sample(const GridSpec& grid, int degree,
                            const std::array<double, 3>& center = {0, 0, 0}) {
  return Field::sample(grid, [&](const std::array<double, 3>& x) {
    double v = 1.0;
    for (int i = 0; i < grid.dim(); ++i) {
      const double u = x[i] - center[i];
      double h0 = std::pow(M_PI, -0.25) * std::exp(-0.5 * u * u);
      double h1 = std::sqrt(2.0) * u * h0;
      const int k = i == 0 ? degree : 0;
      double hk = k == 0 ? h0 : h1;
      for (int m = 1; m < k; ++m) {
        const double h2 = u * std::sqrt(2.0 / (m + 1)) * h1 - std::sqrt(double(m) / (m + 1)) * h0;
        h0 = h1;
        h1 = h2;
        hk = h2;
      }
      v *= hk;
    }
    return cplx(v, 0.0);
  });
}

}  // namespace detail

// The frozen 20-function reference family (d = 1): Gaussians at three widths,
// three chirps, three modulated bumps, three Hermite functions, four seeded
// band-limited fields, four translated/dilated/modulated combinations.
// All members are L^2-normalized.
inline std::vector<NamedField> reference_family(const GridSpec& grid) {
  std::vector<NamedField> fam;
  auto add = [&](std::string id, Field f) {
    fam.push_back({std::move(id), normalized_l2(std::move(f))});
  };
  add("gauss_w0.6", gaussian_packet(grid, 0.6));
  add("gauss_w1.0", gaussian_packet(grid, 1.0));
  add("gauss_w1.8", gaussian_packet(grid, 1.8));
  add("chirp_r0.5", chirp(grid, 1.2, 0.5));
  add("chirp_r1", chirp(grid, 1.2, 1.0));
  add("chirp_r2", chirp(grid, 1.2, 2.0));
  add("bump_k1", modulated_bump(grid, 4.0, {1, 0, 0}));
  add("bump_k3", modulated_bump(grid, 4.0, {3, 0, 0}));
  add("bump_k6", modulated_bump(grid, 4.0, {6, 0, 0}));
  add("hermite_0", detail::hermite_sample(grid, 0));
  add("hermite_3", detail::hermite_sample(grid, 3));
  add("hermite_8", detail::hermite_sample(grid, 8));
  add("randband_1", random_bandlimited(grid, 4.0, 101));
  add("randband_2", random_bandlimited(grid, 4.0, 102));
  add("randband_3", random_bandlimited(grid, 4.0, 103));
  add("randband_4", random_bandlimited(grid, 4.0, 104));
  add("gauss_shift2", gaussian_packet(grid, 1.0, {2, 0, 0}));
  add("gauss_w0.5_k2", gaussian_packet(grid, 0.5, {0, 0, 0}, {2, 0, 0}));
  add("hermite_2_shift-3", detail::hermite_sample(grid, 2, {-3, 0, 0}));
  add("gauss_w2.5_shift4_k2", gaussian_packet(grid, 2.5, {4, 0, 0}, {2, 0, 0}));
  return fam;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {
      "algebra",     "multiplier",   "trilinear", "riesz_smoothing",
      "intersection", "difference",  "isometry",  "kernel",
      "embedding",   "equivalence"};
  return names;
}

namespace detail {

struct SuiteContext {
  VerifyMode mode;
  BoundsStore* store;
  VerifyReport report;

  void estimated_row(const std::string& case_id, double lhs, double rhs) {
    VerifyRow row;
    row.case_id = case_id;
    row.lhs = lhs;
    row.rhs = rhs;
    row.ratio = lhs / rhs;
    const std::string key = report.suite + "." + case_id;
    if (mode == VerifyMode::record) {
      store->set(key, row.ratio);
      row.bound = row.ratio;
      row.pass = true;
    } else {
      const auto stored = store->get(key);
      if (!stored)
        throw ConfigError("missing recorded bound for " + key +
                          "; run the suite in record mode first");
      row.bound = *stored;
      row.pass = row.ratio <= row.bound * 1.10;
    }
    push(row);
  }

  void absolute_row(const std::string& case_id, double metric, double bound,
                    double lhs = 0.0, double rhs = 0.0) {
    VerifyRow row;
    row.case_id = case_id;
    row.lhs = lhs == 0.0 ? metric : lhs;
    row.rhs = rhs == 0.0 ? 1.0 : rhs;
    row.ratio = metric;
    row.bound = bound;
    row.pass = metric <= bound;
    push(row);
  }

  void push(const VerifyRow& row) {
    report.rows.push_back(row);
    report.all_pass = report.all_pass && row.pass;
  }
};

// Worst ratio of lhs_fn over the index set, tracked with its two sides.
template <class Pairs, class LhsFn, class RhsFn>
inline void max_ratio_row(SuiteContext& ctx, const std::string& case_id,
                          const Pairs& indices, LhsFn&& lhs_fn, RhsFn&& rhs_fn) {
  double worst = -1.0, wl = 0.0, wr = 1.0;
  for (const auto& ix : indices) {
    const double l = lhs_fn(ix);
    const double r = rhs_fn(ix);
    if (r <= 0.0) continue;
    if (l / r > worst) {
      worst = l / r;
      wl = l;
      wr = r;
    }
  }
  ctx.estimated_row(case_id, wl, wr);
}

inline std::vector<std::array<int, 3>> family_triples(int n) {
  std::vector<std::array<int, 3>> out;
  for (int i = 0; i < n; ++i) out.push_back({i, (i + 3) % n, (i + 11) % n});
  for (int i = 0; i < n; i += 5) out.push_back({i, i, i});
  return out;
}

inline std::vector<std::array<int, 2>> family_pairs(int n, int offset) {
  std::vector<std::array<int, 2>> out;
  for (int i = 0; i < n; ++i) out.push_back({i, (i + offset) % n});
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Suite implementations
// ---------------------------------------------------------------------------

namespace detail {

inline GridSpec verify_grid_1d() { return GridSpec(1, 1024, 16.0); }

inline void suite_algebra(SuiteContext& ctx) {
  const GridSpec grid = verify_grid_1d();
  const auto fam = reference_family(grid);
  ModulationNormEngine engine(grid);
  const int n = static_cast<int>(fam.size());
  const auto pairs = family_pairs(n, 7);

  struct Case {
    const char* id;
    NormParams f, g, prod;
  };
  // Hoelder-matched index triples: 1/p1 + 1/p2 = 1/p0, 1/q1 + 1/q2 = 1 + 1/q0.
  const Case cases[] = {
      {"m21xm21_to_m11", {2, 1, 0}, {2, 1, 0}, {1, 1, 0}},
      {"m22xm22_to_m1inf", {2, 2, 0}, {2, 2, 0}, {1, INFINITY, 0}},
      {"m21s1xm21s1_to_m11s1", {2, 1, 1}, {2, 1, 1}, {1, 1, 1}},
  };
  for (const auto& c : cases) {
    max_ratio_row(ctx, c.id, pairs,
                  [&](const std::array<int, 2>& ix) {
                    return engine.norm(hadamard(fam[ix[0]].field, fam[ix[1]].field),
                                       c.prod, NormMethod::bands);
                  },
                  [&](const std::array<int, 2>& ix) {
                    return engine.norm(fam[ix[0]].field, c.f, NormMethod::bands) *
                           engine.norm(fam[ix[1]].field, c.g, NormMethod::bands);
                  });
  }
  // Pointwise FL^1-module bound: ||fg||_{M^{p,q}} <= C ||Ff||_{L^1} ||g||_{M^{p,q}}.
  const NormParams pq{2, 4.0 / 3.0, 0};
  max_ratio_row(ctx, "fl1_module", pairs,
                [&](const std::array<int, 2>& ix) {
                  return engine.norm(hadamard(fam[ix[0]].field, fam[ix[1]].field), pq,
                                     NormMethod::bands);
                },
                [&](const std::array<int, 2>& ix) {
                  const double fl1 =
                      lp_norm_spectral(forward_fourier(fam[ix[0]].field), 1.0);
                  return fl1 * engine.norm(fam[ix[1]].field, pq, NormMethod::bands);
                });
}

inline void suite_multiplier(SuiteContext& ctx) {
  // Larger box so evolved packets do not wrap before t = 2.
  const GridSpec grid(1, 2048, 32.0);
  ModulationNormEngine engine(grid);
  std::vector<Field> family;
  family.push_back(normalized_l2(gaussian_packet(grid, 1.0)));
  family.push_back(normalized_l2(chirp(grid, 1.2, 1.0)));
  family.push_back(normalized_l2(modulated_bump(grid, 4.0, {2, 0, 0})));
  family.push_back(normalized_l2(hermite_sample(grid, 3)));
  const std::vector<double> ts{0.25, 0.5, 1.0, 2.0};

  const auto frac2 = DispersionSymbol::laplacian();
  const auto frac12 = DispersionSymbol::fractional(1.2);
  const auto poly2 = DispersionSymbol::polynomial({{{2, 0, 0}, 1.0}, {{1, 0, 0}, 0.5}});

  // (1 + |t|)^{d |1/p - 1/2|} exponents: 1/2 for p = 1 in d = 1, 0 for p = 2;
  // asserted with +0.1 slack against the fitted slope.
  auto probe = [&](const DispersionSymbol& sym, const NormParams& p) {
    return multiplier_growth_probe(sym, p, ts, family, engine);
  };
  ctx.absolute_row("frac2_p1_slope", probe(frac2, {1, 1, 0}).slope, 0.6);
  ctx.absolute_row("frac2_p2_slope", std::abs(probe(frac2, {2, 2, 0}).slope), 0.05);
  ctx.absolute_row("frac1.2_p1_slope", probe(frac12, {1, 1, 0}).slope, 0.6);
  ctx.absolute_row("poly2_p1_slope", probe(poly2, {1, 1, 0}).slope, 0.6);
}

inline void suite_trilinear(SuiteContext& ctx) {
  const GridSpec grid = verify_grid_1d();
  const auto fam = reference_family(grid);
  ModulationNormEngine engine(grid);
  const auto triples = family_triples(static_cast<int>(fam.size()));

  struct Case {
    const char* id;
    double gamma;
    NormParams pq;
  };
  const Case cases[] = {
      {"g0.25_q1.6", 0.25, {2, 1.6, 0}},
      {"g0.5_q4/3", 0.5, {2, 4.0 / 3.0, 0}},
      {"g0.5_q1", 0.5, {2, 1, 0}},
  };
  for (const auto& c : cases) {
    HartreePotential pot(grid, c.gamma, 1.0, ZeroMode::cell_average);
    std::vector<double> norms(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i)
      norms[i] = engine.norm(fam[i].field, c.pq, NormMethod::bands);
    max_ratio_row(ctx, c.id, triples,
                  [&](const std::array<int, 3>& ix) {
                    return engine.norm(
                        hartree_trilinear(fam[ix[0]].field, fam[ix[1]].field,
                                          fam[ix[2]].field, pot),
                        c.pq, NormMethod::bands);
                  },
                  [&](const std::array<int, 3>& ix) {
                    return norms[ix[0]] * norms[ix[1]] * norms[ix[2]];
                  });
  }
}

inline void suite_riesz_smoothing(SuiteContext& ctx) {
  const GridSpec grid = verify_grid_1d();
  const auto fam = reference_family(grid);
  ModulationNormEngine engine(grid);
  HartreePotential pot(grid, 0.5, 1.0, ZeroMode::cell_average);

  struct Case {
    const char* id;
    double p1, p2, s;
  };
  // 1/p1 + gamma/d - 1 = 1/p2 with gamma = 1/2, d = 1.
  const Case cases[] = {
      {"p4/3_to_p4_s0", 4.0 / 3.0, 4.0, 0.0},
      {"p4/3_to_p4_s1", 4.0 / 3.0, 4.0, 1.0},
      {"p3/2_to_p6_s0", 1.5, 6.0, 0.0},
      {"p3/2_to_p6_s1", 1.5, 6.0, 1.0},
  };
  std::vector<int> ixs(fam.size());
  for (std::size_t i = 0; i < ixs.size(); ++i) ixs[i] = static_cast<int>(i);
  for (const auto& c : cases) {
    const NormParams src{c.p1, 2.0, c.s};
    const NormParams dst{c.p2, 2.0, c.s};
    max_ratio_row(ctx, c.id, ixs,
                  [&](int i) {
                    return engine.norm(pot.convolve(fam[i].field), dst, NormMethod::bands);
                  },
                  [&](int i) { return engine.norm(fam[i].field, src, NormMethod::bands); });
  }
}

// Solves 1/(p + eps) = 1/p + gamma/d - 1 and demands eps > 0.
inline double epsilon_for(double p, double gamma, int d) {
  const double inv = 1.0 / p + gamma / d - 1.0;
  if (!(inv > 0.0) || !(inv < 1.0 / p))
    throw ConfigError("unsatisfiable exponent relation: no eps > 0 for these (p, gamma, d)");
  return 1.0 / inv - p;
}

inline void suite_intersection(SuiteContext& ctx) {
  const GridSpec grid = verify_grid_1d();
  const auto fam = reference_family(grid);
  ModulationNormEngine engine(grid);
  const double p = 1.5, gamma = 0.5;
  epsilon_for(p, gamma, 1);  // throws on an unsatisfiable exponent relation

  HartreePotential pot(grid, gamma, 1.0, ZeroMode::cell_average);
  const NormParams mp1{p, 1, 0};
  auto xnorm = [&](const Field& f) {
    return engine.norm(f, mp1, NormMethod::bands) + lp_norm(f, 2.0);
  };
  std::vector<double> xn(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) xn[i] = xnorm(fam[i].field);
  max_ratio_row(ctx, "p1.5_g0.5", family_triples(static_cast<int>(fam.size())),
                [&](const std::array<int, 3>& ix) {
                  return xnorm(hartree_trilinear(fam[ix[0]].field, fam[ix[1]].field,
                                                 fam[ix[2]].field, pot));
                },
                [&](const std::array<int, 3>& ix) {
                  return xn[ix[0]] * xn[ix[1]] * xn[ix[2]];
                });
}

inline void suite_difference(SuiteContext& ctx) {
  const GridSpec grid = verify_grid_1d();
  const auto fam = reference_family(grid);
  ModulationNormEngine engine(grid);
  HartreePotential pot(grid, 0.5, 1.0, ZeroMode::cell_average);
  const auto pairs = family_pairs(static_cast<int>(fam.size()), 5);

  auto cubic = [&](const Field& f) {
    return hartree_trilinear(f, f, f, pot);  // (K * |f|^2) f
  };

  // Difference bounded by (||f||^2 + ||f|| ||g|| + ||g||^2) ||f - g||.
  const NormParams pq{2, 4.0 / 3.0, 0};
  std::vector<double> nrm(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i)
    nrm[i] = engine.norm(fam[i].field, pq, NormMethod::bands);
  max_ratio_row(ctx, "m2q_difference", pairs,
                [&](const std::array<int, 2>& ix) {
                  Field diff = cubic(fam[ix[0]].field);
                  diff -= cubic(fam[ix[1]].field);
                  return engine.norm(diff, pq, NormMethod::bands);
                },
                [&](const std::array<int, 2>& ix) {
                  Field fg = fam[ix[0]].field;
                  fg -= fam[ix[1]].field;
                  const double a = nrm[ix[0]], b = nrm[ix[1]];
                  return (a * a + a * b + b * b) * engine.norm(fg, pq, NormMethod::bands);
                });

  const NormParams mp1{1.5, 1, 0};
  auto xnorm = [&](const Field& f) {
    return engine.norm(f, mp1, NormMethod::bands) + lp_norm(f, 2.0);
  };
  std::vector<double> xn(fam.size());
  for (std::size_t i = 0; i < fam.size(); ++i) xn[i] = xnorm(fam[i].field);
  max_ratio_row(ctx, "intersection_difference", pairs,
                [&](const std::array<int, 2>& ix) {
                  Field diff = cubic(fam[ix[0]].field);
                  diff -= cubic(fam[ix[1]].field);
                  return xnorm(diff);
                },
                [&](const std::array<int, 2>& ix) {
                  Field fg = fam[ix[0]].field;
                  fg -= fam[ix[1]].field;
                  const double a = xn[ix[0]], b = xn[ix[1]];
                  return (a * a + a * b + b * b) * xnorm(fg);
                });

  // The splitting identity behind both rows, checked exactly:
  // (K*|f|^2) f - (K*|g|^2) g = (K*|f|^2)(f-g) + (K*(|f|^2 - |g|^2)) g.
  double worst = 0.0;
  for (int i = 0; i < 5; ++i) {
    const Field& f = fam[i].field;
    const Field& g = fam[(i + 9) % fam.size()].field;
    Field lhs = cubic(f);
    lhs -= cubic(g);
    Field fmg = f;
    fmg -= g;
    Field density_diff = hadamard(f, conj(f));
    density_diff -= hadamard(g, conj(g));
    Field rhs = hadamard(pot.convolve(hadamard(f, conj(f))), fmg);
    rhs += hadamard(pot.convolve(density_diff), g);
    Field res = lhs;
    res -= rhs;
    worst = std::max(worst, lp_norm(res, 2.0));
  }
  ctx.absolute_row("identity_residual", worst, 1e-10);
}

inline void suite_isometry(SuiteContext& ctx) {
  const GridSpec grid(1, 512, 12.0);
  const HermiteBasis basis(grid, 40);
  ModulationNormEngine engine(grid, GaussWindow(GaussWindow::Kind::oscillator_ground));

  // Widths near sqrt(2 pi) keep the Hermite truncation residual well below
  // the propagator's tolerance.
  std::vector<Field> fns;
  fns.push_back(normalized_l2(hermite_sample(grid, 0)));
  fns.push_back(normalized_l2(hermite_sample(grid, 3)));
  fns.push_back(normalized_l2(gaussian_packet(grid, 2.0)));
  fns.push_back(normalized_l2(gaussian_packet(grid, 3.2)));
  fns.push_back(normalized_l2(gaussian_packet(grid, 2.5, {1.0, 0, 0})));
  fns.push_back(normalized_l2(gaussian_packet(grid, 2.5, {0, 0, 0}, {0.2, 0, 0})));

  for (double p : {1.0, 2.0}) {
    const NormParams pp{p, p, 0};
    std::vector<double> base(fns.size());
    for (std::size_t i = 0; i < fns.size(); ++i)
      base[i] = modulation_norm_stft(fns[i], pp, engine.window());
    for (double t : {0.3, 1.0, 2.7}) {
      double defect = 0.0;
      for (std::size_t i = 0; i < fns.size(); ++i) {
        const double evolved =
            modulation_norm_stft(basis.harmonic_propagate(fns[i], t), pp, engine.window());
        defect = std::max(defect, std::abs(evolved / base[i] - 1.0));
      }
      std::ostringstream id;
      id << "p" << p << "_t" << t << "_defect";
      ctx.absolute_row(id.str(), defect, 0.02);
    }
  }

  // pi-periodicity up to the global parity phase exp(-i pi d).
  double residual = 0.0;
  const cplx phase = std::polar(1.0, -M_PI * grid.dim());
  for (const auto& f : fns) {
    Field diff = basis.harmonic_propagate(f, M_PI);
    Field expect = f;
    expect *= phase;
    diff -= expect;
    residual = std::max(residual, lp_norm(diff, 2.0));
  }
  ctx.absolute_row("periodicity_residual", residual, 1e-6);
}

inline void suite_kernel(SuiteContext& ctx) {
  // 2-D frequency variable z = (xi, eta), quadratic phase P(z) = xi^2 - eta^2.
  // The L^1 norm of the band-restricted kernel is translation/modulation
  // invariant, so the probe at the origin band covers every lattice band.
  const GridSpec grid(2, 512, 32.0);
  const FrequencyDecomposition dec(grid, 3);
  const std::vector<double> ts{0.1, 0.2, 0.5, 1.0, 2.0, 3.16, 5.0, 7.0, 10.0};

  std::vector<double> norms;
  for (double t : ts) {
    Field spec(grid);
    for (std::size_t m = 0; m < spec.size(); ++m) {
      const auto idx = grid.unflatten(m);
      const double s0 = dec.sigma1d(0, idx[0]);
      const double s1 = dec.sigma1d(0, idx[1]);
      if (s0 == 0.0 || s1 == 0.0) continue;
      const auto z = grid.xi_of(m);
      spec[m] = s0 * s1 * std::polar(1.0, t * (z[0] * z[0] - z[1] * z[1]));
    }
    norms.push_back(lp_norm(inverse_fourier(spec), 1.0));
  }

  double cfit = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    cfit = std::max(cfit, norms[i] / std::max(ts[i], 1.0));
  // One estimated row carrying the worst ratio against max{t, 1}.
  std::size_t wi = 0;
  for (std::size_t i = 0; i < ts.size(); ++i)
    if (norms[i] / std::max(ts[i], 1.0) >= cfit - 1e-15) wi = i;
  ctx.estimated_row("growth_fit", norms[wi], std::max(ts[wi], 1.0));

  // Late-time log-log slope against the max{t^d, 1} shape, d = 1 per factor.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < 1.0) continue;
    const double x = std::log(ts[i]);
    const double y = std::log(norms[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++cnt;
  }
  const double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  ctx.absolute_row("late_slope", slope, 1.15);
}

inline void suite_embedding(SuiteContext& ctx) {
  const GridSpec grid = verify_grid_1d();
  const auto fam = reference_family(grid);
  ModulationNormEngine engine(grid);
  std::vector<int> ixs(fam.size());
  for (std::size_t i = 0; i < ixs.size(); ++i) ixs[i] = static_cast<int>(i);

  struct Case {
    const char* id;
    NormParams src, dst;
  };
  const Case cases[] = {
      {"m11_to_m22", {1, 1, 0}, {2, 2, 0}},
      {"m11s1_to_m22", {1, 1, 1}, {2, 2, 0}},
      {"m2q43_to_m22", {2, 4.0 / 3.0, 0}, {2, 2, 0}},
  };
  for (const auto& c : cases) {
    max_ratio_row(ctx, c.id, ixs,
                  [&](int i) {
                    return engine.embedding_check(fam[i].field, c.src, c.dst,
                                                  NormMethod::bands).dst_norm;
                  },
                  [&](int i) { return engine.norm(fam[i].field, c.src, NormMethod::bands); });
  }

  // M^{p,q1} -> L^p -> M^{p,q2} for q1 <= min(p,p'), q2 >= max(p,p'), p = 2.
  max_ratio_row(ctx, "m21_to_l2", ixs,
                [&](int i) { return lp_norm(fam[i].field, 2.0); },
                [&](int i) { return engine.norm(fam[i].field, {2, 1, 0}, NormMethod::bands); });
  max_ratio_row(ctx, "l2_to_m2inf", ixs,
                [&](int i) {
                  return engine.norm(fam[i].field, {2, INFINITY, 0}, NormMethod::bands);
                },
                [&](int i) { return lp_norm(fam[i].field, 2.0); });

  // Fourier invariance of M^{p,p}: two-sided ratio with the self-dual window
  // on the self-dual lattice (n = 4 L^2), where the swap x <-> w is exact.
  for (double p : {1.0, 2.0}) {
    const NormParams pp{p, p, 0};
    double worst = 0.0, wl = 1.0, wr = 1.0;
    for (int i : ixs) {
      const Field hat = spectrum_in_natural_order(forward_fourier(fam[i].field));
      const double a = modulation_norm_stft(hat, pp, engine.window());
      const double b = modulation_norm_stft(fam[i].field, pp, engine.window());
      const double two_sided = std::max(a / b, b / a);
      if (two_sided > worst) {
        worst = two_sided;
        wl = std::max(a, b);
        wr = std::min(a, b);
      }
    }
    std::ostringstream id;
    id << "fourier_invariance_p" << p;
    ctx.estimated_row(id.str(), wl, wr);
  }
}

inline void suite_equivalence(SuiteContext& ctx) {
  const GridSpec grid = verify_grid_1d();
  const auto fam = reference_family(grid);
  ModulationNormEngine engine(grid);

  struct Case {
    const char* id;
    NormParams pq;
  };
  const Case cases[] = {
      {"p2q2", {2, 2, 0}},
      {"p1q1", {1, 1, 0}},
      {"p2q4/3", {2, 4.0 / 3.0, 0}},
  };
  for (const auto& c : cases) {
    double worst = 0.0, wl = 1.0, wr = 1.0;
    for (const auto& nf : fam) {
      const double bands = engine.norm(nf.field, c.pq, NormMethod::bands);
      const double stft = engine.norm(nf.field, c.pq, NormMethod::stft);
      const double two_sided = std::max(bands / stft, stft / bands);
      if (two_sided > worst) {
        worst = two_sided;
        wl = std::max(bands, stft);
        wr = std::min(bands, stft);
      }
    }
    ctx.estimated_row(c.id, wl, wr);
  }
}

}  // namespace detail

inline VerifyReport run_suite(const std::string& suite_id, VerifyMode mode,
                              BoundsStore& store) {
  detail::SuiteContext ctx{mode, &store, {}, };
  ctx.report.suite = suite_id;
  if (suite_id == "algebra") {
    detail::suite_algebra(ctx);
  } else if (suite_id == "multiplier") {
    detail::suite_multiplier(ctx);
  } else if (suite_id == "trilinear") {
    detail::suite_trilinear(ctx);
  } else if (suite_id == "riesz_smoothing") {
    detail::suite_riesz_smoothing(ctx);
  } else if (suite_id == "intersection") {
    detail::suite_intersection(ctx);
  } else if (suite_id == "difference") {
    detail::suite_difference(ctx);
  } else if (suite_id == "isometry") {
    detail::suite_isometry(ctx);
  } else if (suite_id == "kernel") {
    detail::suite_kernel(ctx);
  } else if (suite_id == "embedding") {
    detail::suite_embedding(ctx);
  } else if (suite_id == "equivalence") {
    detail::suite_equivalence(ctx);
  } else {
    throw ConfigError("unknown verification suite: " + suite_id);
  }
  return ctx.report;
}

inline void write_report_csv(std::ostream& os, const VerifyReport& report) {
  os << "suite,case_id,lhs,rhs,ratio,bound,pass\n";
  for (const auto& row : report.rows) {
    os << report.suite << ',' << row.case_id << ',' << detail::format_value(row.lhs)
       << ',' << detail::format_value(row.rhs) << ',' << detail::format_value(row.ratio)
       << ',' << detail::format_value(row.bound) << ',' << (row.pass ? 1 : 0) << '\n';
  }
}

}  // namespace modhf
