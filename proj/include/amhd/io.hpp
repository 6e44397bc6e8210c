#ifndef AMHD_IO_HPP
#define AMHD_IO_HPP

// File formats: binary field snapshots and the diagnostics CSV time series.

#include "amhd/record.hpp"
#include "amhd/state.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace amhd {

inline constexpr std::uint16_t snapshot_version = 1;

/// Physical-space fields of one state; `w` is b (MHD) or v (tropical model).
struct Snapshot {
  Grid<double> grid;
  double t = 0;
  Model model = Model::mhd;
  VectorField<double> u;
  VectorField<double> w;
};

/// Layout: "AMHD", u16 version, u32 Nx, u32 Ny, f64 Ly, f64 t, u8 model, then
/// u1, u2, w1, w2 as f64 samples indexed ix * Ny + iy. All little-endian.
void write_snapshot(std::ostream& out, const SimState<double>& state);
void write_snapshot(const std::string& path, const SimState<double>& state);
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::string& path);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

std::vector<std::string> csv_header(const std::vector<double>& sobolev_s);
/// Writes the header and one row per record; F is the running functional.
void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& trajectory,
                           const std::vector<double>& sobolev_s);
void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& trajectory,
                           const std::vector<double>& sobolev_s);

/// A numeric CSV table with a header row.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::optional<std::size_t> column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::string& path);

}  // namespace amhd

#endif  // AMHD_IO_HPP
