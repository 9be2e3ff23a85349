#pragma once

// File formats.
//
// Field file ("MHFF", version 1), little-endian:
//   bytes 0..3   magic "MHFF"
//   u32          version
//   u32          dimension d
//   u32          samples per dimension n
//   f64          half width L
//   n^d * 2 f64  samples, row-major (first dimension slowest),
//                interleaved (re, im)
//
// Snapshot file ("MHFS", version 1), little-endian:
//   bytes 0..3   magic "MHFS"
//   u32          version
//   u32          d, u32 n, f64 L
//   u32          component count N
//   u32          snapshot count S
//   S times:     f64 t, then N fields' raw samples as above
//
// Diagnostics CSV columns:
//   t,k,mass,m_norm_22,m_norm_2q,strichartz_acc,picard_iters
//
// Norm report CSV columns (one row per evaluation):
//   function_id,p,q,s,method,value

#include <bit>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "modhf/errors.hpp"
#include "modhf/grid.hpp"
#include "modhf/modspace.hpp"
#include "modhf/solver.hpp"

namespace modhf {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts are unsupported");

namespace detail {

inline void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
inline std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
inline double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}

inline void put_samples(std::ostream& os, const Field& f) {
  os.write(reinterpret_cast<const char*>(f.data()),
           static_cast<std::streamsize>(f.size() * sizeof(cplx)));
}
inline void get_samples(std::istream& is, Field& f) {
  is.read(reinterpret_cast<char*>(f.data()),
          static_cast<std::streamsize>(f.size() * sizeof(cplx)));
}

inline std::string format_exponent(double p) {
  if (is_infinite_exponent(p)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

inline std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

}  // namespace detail

inline void write_field(const std::string& path, const Field& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  os.write("MHFF", 4);
  detail::put_u32(os, 1);
  detail::put_u32(os, static_cast<std::uint32_t>(f.grid().dim()));
  detail::put_u32(os, static_cast<std::uint32_t>(f.grid().samples_per_dim()));
  detail::put_f64(os, f.grid().half_width());
  detail::put_samples(os, f);
  if (!os) throw ConfigError("short write to " + path);
}

inline Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path);
  char magic[4] = {};
  is.read(magic, 4);
  if (std::string(magic, 4) != "MHFF") throw ConfigError(path + ": not a field file");
  const auto version = detail::get_u32(is);
  if (version != 1) throw ConfigError(path + ": unsupported field file version");
  const int d = static_cast<int>(detail::get_u32(is));
  const int n = static_cast<int>(detail::get_u32(is));
  const double L = detail::get_f64(is);
  GridSpec grid(d, n, L);
  Field f(grid);
  detail::get_samples(is, f);
  if (!is) throw ConfigError(path + ": truncated field file");
  return f;
}

inline void write_snapshots(const std::string& path, const GridSpec& grid,
                            const Trajectory& traj) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  os.write("MHFS", 4);
  detail::put_u32(os, 1);
  detail::put_u32(os, static_cast<std::uint32_t>(grid.dim()));
  detail::put_u32(os, static_cast<std::uint32_t>(grid.samples_per_dim()));
  detail::put_f64(os, grid.half_width());
  const std::uint32_t ncomp =
      traj.states.empty() ? 0u : static_cast<std::uint32_t>(traj.states[0].size());
  detail::put_u32(os, ncomp);
  detail::put_u32(os, static_cast<std::uint32_t>(traj.states.size()));
  for (std::size_t s = 0; s < traj.states.size(); ++s) {
    detail::put_f64(os, traj.times[s]);
    for (const auto& f : traj.states[s]) detail::put_samples(os, f);
  }
  if (!os) throw ConfigError("short write to " + path);
}

struct SnapshotFile {
  GridSpec grid{1, 8, 1.0};
  std::vector<double> times;
  std::vector<std::vector<Field>> states;
};

inline SnapshotFile read_snapshots(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot open " + path);
  char magic[4] = {};
  is.read(magic, 4);
  if (std::string(magic, 4) != "MHFS") throw ConfigError(path + ": not a snapshot file");
  if (detail::get_u32(is) != 1) throw ConfigError(path + ": unsupported snapshot version");
  const int d = static_cast<int>(detail::get_u32(is));
  const int n = static_cast<int>(detail::get_u32(is));
  const double L = detail::get_f64(is);
  SnapshotFile out;
  out.grid = GridSpec(d, n, L);
  const auto ncomp = detail::get_u32(is);
  const auto nsnap = detail::get_u32(is);
  for (std::uint32_t s = 0; s < nsnap; ++s) {
    out.times.push_back(detail::get_f64(is));
    std::vector<Field> snap;
    for (std::uint32_t k = 0; k < ncomp; ++k) {
      Field f(out.grid);
      detail::get_samples(is, f);
      snap.push_back(std::move(f));
    }
    out.states.push_back(std::move(snap));
  }
  if (!is) throw ConfigError(path + ": truncated snapshot file");
  return out;
}

inline void write_diagnostics_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot open " + path + " for writing");
  os << "t,k,mass,m_norm_22,m_norm_2q,strichartz_acc,picard_iters\n";
  for (const auto& row : traj.diagnostics) {
    os << detail::format_value(row.t) << ',' << row.k << ','
       << detail::format_value(row.mass) << ','
       << detail::format_value(row.m_norm_22) << ','
       << detail::format_value(row.m_norm_2q) << ','
       << detail::format_value(row.strichartz_acc) << ',' << row.picard_iters
       << '\n';
  }
}

inline void write_norm_csv_row(std::ostream& os, const std::string& function_id,
                               const NormParams& params, NormMethod method,
                               double value) {
  os << function_id << ',' << detail::format_exponent(params.p) << ','
     << detail::format_exponent(params.q) << ',' << detail::format_exponent(params.s)
     << ',' << (method == NormMethod::stft ? "stft" : "decomp") << ','
     << detail::format_value(value) << '\n';
}

}  // namespace modhf
