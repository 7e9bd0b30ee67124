#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tadpole/lumped.hpp"
#include "tadpole/tls.hpp"

namespace tadpole::io {

/// Header-addressed CSV. '#' lines are comments; extra columns are kept.
struct CsvTable {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> lines;  // source line of each row

  std::optional<std::size_t> column(const std::string& name) const;
  std::size_t require_column(const std::string& name) const;
  double number(std::size_t row, std::size_t col) const;  // ParseError on bad cell
};

CsvTable read_csv_table(std::istream& in, const std::string& source = "<stream>");
CsvTable read_csv_table(const std::filesystem::path& path);

/// Header `label,area_um2,f_meas_mhz`; converted to SI.
lumped::CalibrationDataset read_calibration_csv(const std::filesystem::path& path);
lumped::CalibrationDataset calibration_from_table(const CsvTable& table);

/// Rows of `label,area_um2[,f_meas_mhz]` for prediction reports.
struct DesignRow {
  std::string label;
  double area;  // m^2
  std::optional<double> measured_frequency;  // Hz
};
std::vector<DesignRow> designs_from_table(const CsvTable& table);

/// Header `temperature_k,f_r_hz[,sigma_f_hz]`.
tls::TemperatureDataset read_temperature_csv(const std::filesystem::path& path);
tls::TemperatureDataset temperature_from_table(const CsvTable& table);
void write_temperature_csv(const tls::TemperatureDataset& data, const std::filesystem::path& path);

}  // namespace tadpole::io
