#pragma once

#include "bnls/harness/config.hpp"

#include <string>
#include <vector>

namespace bnls {

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void add_row(std::vector<double> row);  // throws std::invalid_argument on width mismatch
  [[nodiscard]] std::size_t column_index(const std::string& name) const;  // throws std::out_of_range
  [[nodiscard]] std::vector<double> column(const std::string& name) const;
};

// 17 significant digits in scientific notation; nan and inf spelled out.
[[nodiscard]] std::string format_number(double v);
[[nodiscard]] std::string to_csv_text(const CsvTable& t);
void write_csv(const std::string& path, const CsvTable& t);
[[nodiscard]] CsvTable read_csv(const std::string& path);
[[nodiscard]] CsvTable parse_csv(const std::string& text);

// Fixed column names per engine. Continuum runs append probe_0, probe_1, ...
[[nodiscard]] std::vector<std::string> csv_schema(Engine engine, std::size_t probes = 0);
[[nodiscard]] std::vector<std::string> kernel_csv_schema();  // n, re, im
[[nodiscard]] std::vector<std::string> sweep_csv_schema();
[[nodiscard]] std::vector<std::string> window_csv_schema();  // t0, mass_avg, quartic_avg (nan if focusing)

} // namespace bnls
