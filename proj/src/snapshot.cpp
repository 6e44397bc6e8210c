#include "amhd/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace amhd {

namespace {

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), bytes.size())) throw std::runtime_error("snapshot: unexpected end of data");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

void put_field(std::ostream& out, const SpectralField<double>& f) {
  const RealArray<double> s = from_spectral(f);
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) put<double>(out, s(i, j));
  }
}

SpectralField<double> get_field(std::istream& in, const Grid<double>& grid) {
  RealArray<double> s(grid.nx(), grid.ny());
  for (int i = 0; i < grid.nx(); ++i) {
    for (int j = 0; j < grid.ny(); ++j) s(i, j) = get<double>(in);
  }
  return to_spectral(grid, s);
}

}  // namespace

void write_snapshot(std::ostream& out, const SimState<double>& state) {
  const auto& grid = state.grid();
  out.write("AMHD", 4);
  put<std::uint16_t>(out, snapshot_version);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.nx()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.ny()));
  put<double>(out, grid.ly());
  put<double>(out, state.t);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(state.params.model));
  put_field(out, state.u.x_comp);
  put_field(out, state.u.y_comp);
  put_field(out, state.w.x_comp);
  put_field(out, state.w.y_comp);
  if (!out) throw std::runtime_error("snapshot: write failed");
}

void write_snapshot(const std::string& path, const SimState<double>& state) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_snapshot(out, state);
}

Snapshot read_snapshot(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "AMHD", 4) != 0) throw std::runtime_error("snapshot: bad magic");
  const auto version = get<std::uint16_t>(in);
  if (version != snapshot_version) {
    throw std::runtime_error("snapshot: unsupported version " + std::to_string(version));
  }
  const auto nx = get<std::uint32_t>(in);
  const auto ny = get<std::uint32_t>(in);
  const auto ly = get<double>(in);
  const auto t = get<double>(in);
  const auto tag = get<std::uint8_t>(in);
  if (tag > 1) throw std::runtime_error("snapshot: unknown model tag " + std::to_string(tag));
  Grid<double> grid(static_cast<int>(nx), static_cast<int>(ny), ly);
  auto u1 = get_field(in, grid);
  auto u2 = get_field(in, grid);
  auto w1 = get_field(in, grid);
  auto w2 = get_field(in, grid);
  return {grid, t, static_cast<Model>(tag), VectorField<double>(std::move(u1), std::move(u2)),
          VectorField<double>(std::move(w1), std::move(w2))};
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_snapshot(in);
}

}  // namespace amhd
