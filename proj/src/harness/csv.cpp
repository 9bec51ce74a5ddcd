#include "bnls/harness/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bnls {

void CsvTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size()) throw std::invalid_argument("CsvTable: row width does not match the header");
  rows.push_back(std::move(row));
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw std::out_of_range("no column '" + name + "'");
}

std::vector<double> CsvTable::column(const std::string& name) const {
  const auto i = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[i]);
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

std::string to_csv_text(const CsvTable& t) {
  std::string out;
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_number(r[i]);
    out += "\n";
  }
  return out;
}

void write_csv(const std::string& path, const CsvTable& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << to_csv_text(t);
  if (!f) throw std::runtime_error("write failed for '" + path + "'");
}

CsvTable parse_csv(const std::string& text) {
  CsvTable t;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) t.columns.push_back(c);
  }
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string c;
    while (std::getline(ss, c, ',')) {
      try {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
        if (ec != std::errc() || ptr != c.data() + c.size()) throw std::invalid_argument(c);
        row.push_back(v);
      } catch (const std::exception&) {
        throw std::invalid_argument("csv line " + std::to_string(lineno) + ": bad number '" + c + "'");
      }
    }
    if (row.size() != t.columns.size())
      throw std::invalid_argument("csv line " + std::to_string(lineno) + ": wrong number of fields");
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_csv(ss.str());
}

std::vector<std::string> csv_schema(Engine engine, std::size_t probes) {
  switch (engine) {
  case Engine::lattice:
    return {"t", "sup_abs", "global_mass", "global_energy", "local_mass", "local_energy", "sup_dt"};
  case Engine::lattice_linear: return {"t", "sup_abs", "global_mass", "origin_abs"};
  case Engine::continuum: {
    std::vector<std::string> c{"t", "sup_abs", "mass", "energy"};
    for (std::size_t i = 0; i < probes; ++i) c.push_back("probe_" + std::to_string(i));
    return c;
  }
  case Engine::nlw: return {"t", "sup_abs", "energy"};
  case Engine::newton: return {"n", "eps_n", "sup_residual", "ratio"};
  }
  return {};
}

std::vector<std::string> kernel_csv_schema() { return {"n", "re", "im"}; }

std::vector<std::string> window_csv_schema() { return {"t0", "mass_avg", "quartic_avg"}; }

std::vector<std::string> sweep_csv_schema() {
  return {"case", "seed", "radius", "x0", "t_final", "final_sup_abs", "max_sup_abs"};
}

} // namespace bnls
