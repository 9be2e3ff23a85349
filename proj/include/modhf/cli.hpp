#pragma once

// Batch front door: config parsing and the simulate / norm / verify commands.
// Exit codes: 0 success, 1 failed verification assertion, 2 configuration or
// domain error, 3 suspected blow-up.
//
// Config files are flat JSON. Physical parameters have no defaults and must
// all be present; numerics default as documented in the README. Example:
//
// {
//   "dimension": 1, "samples": 256, "half_width": 8.0,
//   "particles": 2, "gamma": 0.5, "kappa": 0.1, "fock": true,
//   "dispersion": "fractional", "alpha": 2.0,
//   "horizon": 2.0,
//   "initial": [
//     {"type": "gaussian", "width": 1.0, "center": [-0.75], "momentum": [0.25],
//      "amplitude": 1.189207115002721},
//     {"type": "gaussian", "width": 1.2, "center": [0.75], "momentum": [-0.25],
//      "amplitude": 1.085287327927648}
//   ],
//   "numerics": {"dt": 1e-3, "snapshot_stride": 100, "scheme": "picard"}
// }

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "modhf/errors.hpp"
#include "modhf/fields.hpp"
#include "modhf/io.hpp"
#include "modhf/solver.hpp"
#include "modhf/verify.hpp"

namespace modhf::cli {

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const std::string& key) {
  if (!j.contains(key))
    throw ConfigError("config: missing required key '" + key + "'");
  return j.at(key);
}

inline std::array<double, 3> vec3(const json& j, int d, const std::string& key) {
  std::array<double, 3> out{0, 0, 0};
  if (!j.contains(key)) return out;
  const auto& arr = j.at(key);
  if (!arr.is_array() || static_cast<int>(arr.size()) != d)
    throw ConfigError("config: '" + key + "' must be an array of length d");
  for (int i = 0; i < d; ++i) out[i] = arr[i].get<double>();
  return out;
}

inline Field initial_field(const json& j, const GridSpec& grid, std::uint64_t seed,
                           std::size_t index) {
  const std::string type = require(j, "type").get<std::string>();
  if (type == "gaussian") {
    return gaussian_packet(grid, require(j, "width").get<double>(),
                           vec3(j, grid.dim(), "center"), vec3(j, grid.dim(), "momentum"),
                           require(j, "amplitude").get<double>());
  }
  if (type == "random_bandlimited") {
    return random_bandlimited(grid, require(j, "band").get<double>(),
                              seed + index, require(j, "amplitude").get<double>());
  }
  if (type == "hermite") {
    HermiteBasis basis(grid);
    std::size_t flat = require(j, "degree").get<int>();
    if (flat >= basis.coeff_count()) throw ConfigError("config: hermite degree too large");
    return basis.basis_function(flat);
  }
  throw ConfigError("config: unknown initial data type '" + type + "'");
}

struct RunConfig {
  ProblemSpec spec;
  double dt = 1e-3;
  int snapshot_stride = 100;
  Scheme scheme = Scheme::picard;
};

inline RunConfig parse_config(const std::string& path, std::uint64_t seed) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path);
  json j;
  try {
    is >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  RunConfig rc;
  const int d = require(j, "dimension").get<int>();
  rc.spec.grid = GridSpec(d, require(j, "samples").get<int>(),
                          require(j, "half_width").get<double>());
  rc.spec.particles = require(j, "particles").get<int>();
  rc.spec.gamma = require(j, "gamma").get<double>();
  rc.spec.kappa = require(j, "kappa").get<double>();
  rc.spec.fock_enabled = require(j, "fock").get<bool>();
  rc.spec.horizon = require(j, "horizon").get<double>();
  rc.spec.radial_hint = j.value("radial_hint", false);

  const std::string disp = require(j, "dispersion").get<std::string>();
  if (disp == "fractional") {
    rc.spec.dispersion = DispersionKind::fractional;
    rc.spec.symbol = DispersionSymbol::fractional(require(j, "alpha").get<double>());
  } else if (disp == "polynomial") {
    rc.spec.dispersion = DispersionKind::polynomial;
    std::vector<PolyTerm> terms;
    for (const auto& t : require(j, "poly_terms")) {
      PolyTerm pt;
      const auto& exps = require(t, "exponents");
      if (static_cast<int>(exps.size()) != d)
        throw ConfigError("config: polynomial exponents must have length d");
      for (int i = 0; i < d; ++i) pt.exponents[i] = exps[i].get<int>();
      pt.coeff = require(t, "coeff").get<double>();
      terms.push_back(pt);
    }
    rc.spec.symbol = DispersionSymbol::polynomial(terms);
  } else if (disp == "harmonic") {
    rc.spec.dispersion = DispersionKind::harmonic;
    rc.spec.symbol.reset();
    rc.spec.hermite_degree = j.value("hermite_degree", -1);
  } else {
    throw ConfigError("config: dispersion must be fractional, polynomial or harmonic");
  }

  const auto& init = require(j, "initial");
  if (!init.is_array() || static_cast<int>(init.size()) != rc.spec.particles)
    throw ConfigError("config: 'initial' must list one entry per particle");
  for (std::size_t k = 0; k < init.size(); ++k)
    rc.spec.initial.push_back(initial_field(init[k], rc.spec.grid, seed, k));

  if (j.contains("numerics")) {
    const auto& num = j.at("numerics");
    rc.dt = num.value("dt", rc.dt);
    rc.snapshot_stride = num.value("snapshot_stride", rc.snapshot_stride);
    rc.spec.picard_tol = num.value("picard_tol", rc.spec.picard_tol);
    rc.spec.picard_max_iter = num.value("picard_max_iter", rc.spec.picard_max_iter);
    rc.spec.dt_floor = num.value("dt_floor", rc.spec.dt_floor);
    rc.spec.blowup_factor = num.value("blowup_factor", rc.spec.blowup_factor);
    rc.spec.hermite_resid_tol = num.value("hermite_resid_tol", rc.spec.hermite_resid_tol);
    const std::string scheme = num.value("scheme", std::string("picard"));
    if (scheme == "picard") {
      rc.scheme = Scheme::picard;
    } else if (scheme == "strang") {
      rc.scheme = Scheme::strang;
    } else {
      throw ConfigError("config: scheme must be picard or strang");
    }
  }
  return rc;
}

}  // namespace detail

inline int run_simulate(const std::string& config_path, const std::string& out_dir,
                        std::uint64_t seed, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  try {
    const auto rc = detail::parse_config(config_path, seed);
    rc.spec.validate();
    const Trajectory traj = integrate(rc.spec, rc.dt, rc.snapshot_stride, rc.scheme);

    std::filesystem::create_directories(out_dir);
    write_snapshots(out_dir + "/snapshots.bin", rc.spec.grid, traj);
    write_diagnostics_csv(out_dir + "/diagnostics.csv", traj);

    // One-line summary: final masses and the worst norm growth seen.
    double growth = 0.0;
    std::vector<double> initial_norm(rc.spec.particles, 0.0), final_mass(rc.spec.particles);
    for (const auto& row : traj.diagnostics) {
      if (row.t == traj.times.front()) initial_norm[row.k] = row.m_norm_2q;
      if (row.t == traj.times.back()) final_mass[row.k] = row.mass;
      if (initial_norm[row.k] > 0.0)
        growth = std::max(growth, row.m_norm_2q / initial_norm[row.k]);
    }
    out << "simulate: completed t=" << traj.times.back() << " masses=[";
    for (std::size_t k = 0; k < final_mass.size(); ++k)
      out << (k ? "," : "") << modhf::detail::format_value(final_mass[k]);
    out << "] max_norm_growth=" << modhf::detail::format_value(growth) << "\n";
    return 0;
  } catch (const BlowUpSuspected& e) {
    err << "simulate: blow-up suspected: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    err << "simulate: config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "simulate: config error: " << e.what() << "\n";
    return 2;
  }
}

inline int run_norm(const std::string& field_path, double p, double q, double s,
                    const std::string& method, std::ostream& out = std::cout,
                    std::ostream& err = std::cerr) {
  try {
    const Field f = read_field(field_path);
    NormParams params{p, q, s};
    params.validate();
    NormMethod m;
    if (method == "stft") {
      m = NormMethod::stft;
    } else if (method == "decomp") {
      m = NormMethod::bands;
    } else {
      throw ConfigError("norm: method must be stft or decomp");
    }
    ModulationNormEngine engine(f.grid());
    const double value = engine.norm(f, params, m);
    write_norm_csv_row(out, std::filesystem::path(field_path).stem().string(), params,
                       m, value);
    return 0;
  } catch (const ConfigError& e) {
    err << "norm: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "norm: " << e.what() << "\n";
    return 2;
  }
}

inline int run_verify(const std::string& suite_id, const std::string& mode_str,
                      const std::string& bounds_path, const std::string& out_dir,
                      std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  try {
    VerifyMode mode;
    if (mode_str == "record") {
      mode = VerifyMode::record;
    } else if (mode_str == "assert") {
      mode = VerifyMode::assert_bounds;
    } else {
      throw ConfigError("verify: mode must be record or assert");
    }
    BoundsStore store = BoundsStore::load(bounds_path);
    const VerifyReport report = run_suite(suite_id, mode, store);
    if (mode == VerifyMode::record) store.save_as(bounds_path);

    std::ostringstream csv;
    write_report_csv(csv, report);
    out << csv.str();
    if (!out_dir.empty()) {
      std::filesystem::create_directories(out_dir);
      std::ofstream os(out_dir + "/verify_" + suite_id + ".csv");
      os << csv.str();
    }
    return report.all_pass ? 0 : 1;
  } catch (const ConfigError& e) {
    err << "verify: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    err << "verify: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace modhf::cli
