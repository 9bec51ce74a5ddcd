#include "bnls/harness/experiment.hpp"

#include "bnls/continuum.hpp"
#include "bnls/errors.hpp"
#include "bnls/harness/plot.hpp"
#include "bnls/lattice_dynamics.hpp"
#include "bnls/lattice_linear.hpp"
#include "bnls/newton.hpp"
#include "bnls/parallel.hpp"
#include "bnls/wave.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifndef BNLS_VERSION
#define BNLS_VERSION "unknown"
#endif

namespace bnls {
namespace {

namespace fs = std::filesystem;

Mollifier mollifier_for(const ExperimentConfig& c) {
  const auto& k = c.continuum;
  if (k.mollifier == "identity") return Mollifier::identity();
  if (k.mollifier == "cutoff") {
    const double cut = k.cutoff > 0.0 ? k.cutoff
                                      : static_cast<double>(k.grid_size) * 3.141592653589793 / (2.0 * k.box_length);
    return Mollifier::fourier_cutoff(cut);
  }
  return Mollifier::gaussian(k.sigma);
}

GridField grid_data(const ExperimentConfig& c, double box, std::size_t m, std::uint64_t seed_offset = 0) {
  ExperimentConfig d = c;
  d.seed += seed_offset;
  const long half = static_cast<long>(std::ceil(box / 2.0)) + 8;
  return make_initial_grid(make_data_spec(d, -half, half), box, m);
}

SeriesResult lattice_series(const ExperimentConfig& c) {
  LatticeModel model{c.lattice.sign, c.lattice.p, lattice_extent_for(c), c.lattice.dt, c.lattice.nonlinear};
  const long half = model.extent + 8;
  const auto psi0 = make_initial_lattice(make_data_spec(c, -half, half), model.extent);
  LatticeRunOptions opts;
  opts.t_final = c.t_final;
  opts.sample_times = sample_times(c);
  opts.weight = WeightProfile(c.lattice.x0, c.lattice.radius, c.t_final);
  opts.window_times = c.lattice.window_times;
  opts.window_center = c.lattice.x0;
  opts.observation_radius = std::abs(c.lattice.x0);
  for (double t0 : c.lattice.window_times)
    opts.observation_radius = std::max(opts.observation_radius, std::abs(c.lattice.x0) + static_cast<long>(t0));
  const auto res = run_lattice(psi0, model, opts);
  SeriesResult out{{csv_schema(Engine::lattice), {}}, res.warnings, {}};
  for (const auto& r : res.records)
    out.table.add_row({r.t, r.sup_abs, r.global_mass, r.global_energy, r.local_mass, r.local_energy, r.sup_dt});
  if (!res.windows.empty()) {
    CsvTable w{window_csv_schema(), {}};
    for (const auto& s : res.windows) w.add_row({s.t0, s.mass_avg, s.quartic_avg.value_or(std::nan(""))});
    out.extra.emplace_back("windows", std::move(w));
  }
  return out;
}

SeriesResult linear_series(const ExperimentConfig& c) {
  const int extent = lattice_extent_for(c);
  LatticeField psi0 = c.linear.adversarial
                          ? adversarial_data(c.t_final, extent, KernelKind::lattice)
                          : make_initial_lattice(make_data_spec(c, -(extent + 8), extent + 8), extent);
  SeriesResult out{{csv_schema(Engine::lattice_linear), {}}, {}, {}};
  std::vector<double> times{0.0};
  for (double t : sample_times(c)) times.push_back(t);
  for (double t : times) {
    const auto psi = t == 0.0 ? psi0 : linear_evolve(psi0, t);
    out.table.add_row({t, psi.sup_abs(), global_mass(psi), std::abs(psi.at(0))});
  }
  return out;
}

SeriesResult continuum_series(const ExperimentConfig& c) {
  const auto& k = c.continuum;
  ContinuumModel model{mollifier_for(c), k.box_length, k.grid_size, k.dt, k.sign, k.nonlinear};
  ContinuumRunOptions opts;
  opts.t_final = c.t_final;
  opts.sample_times = sample_times(c);
  for (double x0 : k.probes) opts.probes.push_back({x0, k.probe_radius});
  const auto res = run_continuum(grid_data(c, k.box_length, k.grid_size), model, opts);
  SeriesResult out{{csv_schema(Engine::continuum, k.probes.size()), {}}, res.warnings, {}};
  for (const auto& r : res.records) {
    std::vector<double> row{r.t, r.sup_abs, r.mass, r.energy};
    row.insert(row.end(), r.probes.begin(), r.probes.end());
    out.table.add_row(std::move(row));
  }
  return out;
}

SeriesResult nlw_series(const ExperimentConfig& c) {
  const auto& w = c.nlw;
  WaveModel model{w.box_length, w.grid_size, w.dt, w.p, w.nonlinear};
  GridField u1(w.box_length, w.grid_size);
  const bool random_comb = c.data.kind == DataKind::gaussian_comb && c.data.comb != "ones";
  if (random_comb) u1 = grid_data(c, w.box_length, w.grid_size, 1);
  const auto s0 = make_wave_state(grid_data(c, w.box_length, w.grid_size), u1);
  const auto rec = run_wave(s0, model, c.t_final, sample_times(c));
  SeriesResult out{{csv_schema(Engine::nlw), {}}, {}, {}};
  for (const auto& r : rec) out.table.add_row({r.t, r.sup_abs, r.energy});
  return out;
}

SeriesResult newton_series(const ExperimentConfig& c) {
  const auto& n = c.newton;
  NewtonOptions opt;
  opt.dt = n.dt;
  opt.max_iter = n.max_iter;
  opt.tol = n.tol;
  opt.schedule.r1 = n.r1;
  const auto res = newton_iterate(grid_data(c, n.box_length, n.grid_size), c.t_final, opt);
  SeriesResult out{{csv_schema(Engine::newton), {}}, {}, {}};
  for (const auto& r : res.report) out.table.add_row({double(r.n), r.eps, r.sup_residual, r.ratio});
  if (res.scale != 1.0) out.warnings.push_back("data rescaled by lambda = " + format_number(res.scale));
  if (!res.converged) out.warnings.push_back("residual tolerance not reached within newton.max_iter");
  return out;
}

nlohmann::json config_json(const ExperimentConfig& c) {
  nlohmann::json j = nlohmann::json::object();
  std::istringstream in(to_config_text(c));
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find(" = ");
    j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

void plot_series(const ExperimentConfig& c, const CsvTable& t, const std::string& stem) {
  const bool newton = c.engine == Engine::newton;
  const std::string x = newton ? "n" : "t";
  const std::string y = newton ? "eps_n" : "sup_abs";
  PlotSeries s{y, {t.column(x), t.column(y)}};
  PlotOptions o;
  o.title = to_string(c.engine) + " run";
  o.x_label = x;
  o.y_label = y;
  o.loglog = c.output.loglog || newton;
  write_svg(stem + ".svg", {s}, o);
  write_dat(stem + ".dat", {s});
}

} // namespace

const char* code_version() { return BNLS_VERSION; }

std::vector<double> sample_times(const ExperimentConfig& c) {
  std::vector<double> t;
  const int n = c.output.samples;
  for (int k = 1; k <= n; ++k) {
    if (c.output.log_spacing) t.push_back(c.t_final * std::pow(100.0, static_cast<double>(k) / n - 1.0));
    else t.push_back(c.t_final * k / n);
  }
  return t;
}

int lattice_extent_for(const ExperimentConfig& c) {
  if (c.lattice.extent > 0) return c.lattice.extent;
  double window = 0.0;
  for (double t0 : c.lattice.window_times) window = std::max(window, t0);
  const double support = static_cast<double>(std::abs(c.lattice.x0)) + window;
  return static_cast<int>(std::ceil(support + 2.0 * c.t_final + 64.0));
}

SeriesResult compute_series(const ExperimentConfig& c) {
  c.validate();
  switch (c.engine) {
  case Engine::lattice: return lattice_series(c);
  case Engine::lattice_linear: return linear_series(c);
  case Engine::continuum: return continuum_series(c);
  case Engine::nlw: return nlw_series(c);
  case Engine::newton: return newton_series(c);
  }
  throw ConfigError("config key 'engine': unsupported");
}

RunSummary run_experiment(const ExperimentConfig& c, const std::string& dir) {
  const auto start = std::chrono::steady_clock::now();
  RunSummary s;
  s.dir = dir.empty() ? c.output.dir : dir;
  fs::create_directories(s.dir);
  auto series = compute_series(c);
  s.table = std::move(series.table);
  s.warnings = std::move(series.warnings);
  const std::string stem = (fs::path(s.dir) / to_string(c.engine)).string();
  s.csv_path = stem + ".csv";
  write_csv(s.csv_path, s.table);
  for (const auto& [name, table] : series.extra) {
    s.extra_csv.push_back((fs::path(s.dir) / (name + ".csv")).string());
    write_csv(s.extra_csv.back(), table);
  }
  if (c.output.plot) plot_series(c, s.table, stem);
  s.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  nlohmann::json meta;
  meta["engine"] = to_string(c.engine);
  meta["code_version"] = code_version();
  meta["config"] = config_json(c);
  meta["csv"] = fs::path(s.csv_path).filename().string();
  meta["columns"] = s.table.columns;
  for (const auto& e : s.extra_csv) meta["extra_csv"].push_back(fs::path(e).filename().string());
  meta["wall_time_s"] = s.wall_seconds;
  meta["warnings"] = s.warnings;
  std::ofstream f(fs::path(s.dir) / "run.json");
  f << meta.dump(2) << "\n";
  return s;
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& c) {
  auto or_self = [](const std::vector<double>& v) { return v.empty() ? std::vector<double>{std::nan("")} : v; };
  std::vector<ExperimentConfig> out;
  const auto seeds = c.sweep.seeds.empty() ? std::vector<std::uint64_t>{c.seed} : c.sweep.seeds;
  for (double r : or_self(c.sweep.radii))
    for (double x0 : or_self(c.sweep.x0))
      for (double t0 : or_self(c.sweep.t0))
        for (auto seed : seeds) {
          ExperimentConfig k = c;
          k.sweep = {};
          k.seed = seed;
          if (!std::isnan(r)) {
            k.lattice.radius = r;
            k.continuum.probe_radius = r;
          }
          if (!std::isnan(x0)) {
            k.lattice.x0 = std::lround(x0);
            k.continuum.probes = {x0};
          }
          if (!std::isnan(t0)) k.t_final = t0;
          out.push_back(std::move(k));
        }
  return out;
}

SweepSummary run_sweep(const ExperimentConfig& c, const std::string& dir, unsigned workers) {
  const auto cases = expand_sweep(c);
  for (const auto& k : cases) k.validate();
  SweepSummary s;
  s.dir = dir.empty() ? c.output.dir : dir;
  fs::create_directories(s.dir);
  std::vector<RunSummary> runs(cases.size());
  parallel_for(cases.size(), workers, [&](std::size_t i) {
    char name[32];
    std::snprintf(name, sizeof name, "case_%03zu", i);
    runs[i] = run_experiment(cases[i], (fs::path(s.dir) / name).string());
  });
  s.table.columns = sweep_csv_schema();
  for (std::size_t i = 0; i < cases.size(); ++i) {
    const auto& k = cases[i];
    const auto& t = runs[i].table;
    const std::string col = k.engine == Engine::newton ? "sup_residual" : "sup_abs";
    const auto v = t.column(col);
    s.table.add_row({double(i), double(k.seed), k.engine == Engine::continuum ? k.continuum.probe_radius : k.lattice.radius,
                     k.engine == Engine::continuum ? (k.continuum.probes.empty() ? 0.0 : k.continuum.probes[0])
                                                   : double(k.lattice.x0),
                     k.t_final, v.back(), *std::max_element(v.begin(), v.end())});
    for (const auto& w : runs[i].warnings) s.warnings.push_back("case " + std::to_string(i) + ": " + w);
  }
  write_csv((fs::path(s.dir) / "sweep.csv").string(), s.table);
  return s;
}

CsvTable kernel_csv(const ExperimentConfig& c) {
  const int hw = c.linear.half_width > 0 ? c.linear.half_width : recommended_half_width(c.t_final, c.linear.kernel);
  const auto k = kernel_table(c.t_final, hw, c.linear.kernel);
  CsvTable t{kernel_csv_schema(), {}};
  for (long n = -hw; n <= hw; ++n) t.add_row({double(n), k(n).real(), k(n).imag()});
  return t;
}

} // namespace bnls
