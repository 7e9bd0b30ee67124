#include "tadpole/datasets.hpp"

#include <cmath>
#include <fstream>

#include "csv_util.hpp"
#include "tadpole/errors.hpp"
#include "tadpole/trace_io.hpp"

namespace tadpole::io {

using detail::parse_double;
using detail::split;
using detail::trim;

std::optional<std::size_t> CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  return std::nullopt;
}

std::size_t CsvTable::require_column(const std::string& name) const {
  const auto c = column(name);
  if (!c) throw ParseError(source, 0, "missing column '" + name + "'");
  return *c;
}

double CsvTable::number(std::size_t row, std::size_t col) const {
  const auto v = parse_double(rows[row][col]);
  if (!v || !std::isfinite(*v)) {
    throw ParseError(source, lines[row], "bad number in column '" + header[col] + "'");
  }
  return *v;
}

CsvTable read_csv_table(std::istream& in, const std::string& source) {
  CsvTable t;
  t.source = source;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    const auto cols = split(s, ',');
    if (t.header.empty()) {
      for (const auto c : cols) t.header.emplace_back(c);
      continue;
    }
    if (cols.size() != t.header.size()) {
      throw ParseError(source, lineno, "expected " + std::to_string(t.header.size()) + " columns, got " +
                                           std::to_string(cols.size()));
    }
    t.rows.emplace_back(cols.begin(), cols.end());
    t.lines.push_back(lineno);
  }
  if (t.header.empty()) throw ParseError(source, 0, "empty file");
  return t;
}

CsvTable read_csv_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return read_csv_table(in, path.string());
}

lumped::CalibrationDataset calibration_from_table(const CsvTable& table) {
  const auto cl = table.require_column("label");
  const auto ca = table.require_column("area_um2");
  const auto cf = table.require_column("f_meas_mhz");
  lumped::CalibrationDataset d;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    d.rows.push_back({table.rows[i][cl], table.number(i, ca) * 1e-12, table.number(i, cf) * 1e6});
  }
  return d;
}

lumped::CalibrationDataset read_calibration_csv(const std::filesystem::path& path) {
  return calibration_from_table(read_csv_table(path));
}

std::vector<DesignRow> designs_from_table(const CsvTable& table) {
  const auto cl = table.require_column("label");
  const auto ca = table.require_column("area_um2");
  const auto cf = table.column("f_meas_mhz");
  std::vector<DesignRow> out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    DesignRow r{table.rows[i][cl], table.number(i, ca) * 1e-12, std::nullopt};
    if (cf && !table.rows[i][*cf].empty()) r.measured_frequency = table.number(i, *cf) * 1e6;
    out.push_back(std::move(r));
  }
  return out;
}

tls::TemperatureDataset temperature_from_table(const CsvTable& table) {
  const auto ct = table.require_column("temperature_k");
  const auto cf = table.require_column("f_r_hz");
  const auto cs = table.column("sigma_f_hz");
  tls::TemperatureDataset d;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    tls::TemperaturePoint p{table.number(i, ct), table.number(i, cf), std::nullopt};
    if (cs && !table.rows[i][*cs].empty()) p.sigma = table.number(i, *cs);
    d.points.push_back(p);
  }
  return d;
}

tls::TemperatureDataset read_temperature_csv(const std::filesystem::path& path) {
  const auto table = read_csv_table(path);
  auto d = temperature_from_table(table);
  try {
    d.validate();
  } catch (const DomainError& e) {
    throw ParseError(path.string(), 0, e.what());
  }
  return d;
}

void write_temperature_csv(const tls::TemperatureDataset& data, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  bool sig = !data.points.empty();
  for (const auto& p : data.points) sig = sig && p.sigma.has_value();
  out << (sig ? "temperature_k,f_r_hz,sigma_f_hz\n" : "temperature_k,f_r_hz\n");
  for (const auto& p : data.points) {
    out << format_double(p.temperature) << ',' << format_double(p.frequency);
    if (sig) out << ',' << format_double(*p.sigma);
    out << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace tadpole::io
