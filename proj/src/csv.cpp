#include "amhd/diagnostics.hpp"
#include "amhd/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace amhd {

std::string format_double(double v) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, end);
}

std::vector<std::string> csv_header(const std::vector<double>& sobolev_s) {
  std::vector<std::string> h{"t", "E", "E2", "D1", "D12", "E_tilde", "intD1", "intD12", "F"};
  for (double s : sobolev_s) h.push_back("Hs:" + format_double(s));
  return h;
}

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticsRecord>& trajectory,
                           const std::vector<double>& sobolev_s) {
  const auto header = csv_header(sobolev_s);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  const auto ledger = f_functional(trajectory);
  for (std::size_t n = 0; n < trajectory.size(); ++n) {
    const auto& r = trajectory[n];
    out << format_double(r.t) << ',' << format_double(r.energy) << ',' << format_double(r.energy_dy) << ','
        << format_double(r.dissipation) << ',' << format_double(r.mixed_dissipation) << ','
        << format_double(r.energy_tilde) << ',' << format_double(r.int_dissipation) << ','
        << format_double(r.int_mixed_dissipation) << ',' << format_double(ledger[n].f);
    for (const auto& [s, value] : r.sobolev) out << ',' << format_double(value);
    out << '\n';
  }
}

void write_diagnostics_csv(const std::string& path, const std::vector<DiagnosticsRecord>& trajectory,
                           const std::vector<double>& sobolev_s) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_diagnostics_csv(out, trajectory, sobolev_s);
}

std::optional<std::size_t> CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto idx = column_index(name);
  if (!idx) throw std::out_of_range("no column named '" + name + "'");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row.at(*idx));
  return out;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t line_no) {
  double v = 0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  while (first < last && *first == ' ') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": not a number: '" + cell + "'");
  }
  return v;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split_line(line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_line(line);
    if (cells.size() != table.header.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": expected " +
                               std::to_string(table.header.size()) + " cells, found " + std::to_string(cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (const auto& c : cells) row.push_back(parse_cell(c, line_no));
    table.rows.push_back(std::move(row));
  }
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_csv(in);
}

}  // namespace amhd
