#include "bnls/errors.hpp"
#include "bnls/harness/acceptance.hpp"
#include "bnls/harness/config.hpp"
#include "bnls/harness/csv.hpp"
#include "bnls/harness/experiment.hpp"
#include "bnls/harness/fit.hpp"
#include "bnls/harness/plot.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

namespace fs = std::filesystem;
using namespace bnls;

namespace {

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
};

void add_common(CLI::App* cmd, Common& c, bool need_config) {
  auto* opt = cmd->add_option("--config", c.config, "config file (key = value lines)");
  if (need_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory (overrides output.dir)");
  cmd->add_option("--seed", c.seed, "override the config seed");
  cmd->add_option("--workers", c.workers, "parallel workers")->check(CLI::PositiveNumber);
}

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (c.workers) cfg.workers = *c.workers;
  if (!c.out.empty()) cfg.output.dir = c.out;
  cfg.validate();
  return cfg;
}

void print_warnings(const std::vector<std::string>& w) {
  for (const auto& s : w) std::cerr << "warning: " << s << "\n";
}

int cmd_run(const Common& c) {
  const auto cfg = load(c);
  const auto s = run_experiment(cfg);
  print_warnings(s.warnings);
  std::cout << "wrote " << s.csv_path << " (" << s.table.rows.size() << " rows, " << s.wall_seconds << " s)\n";
  return exit_ok;
}

int cmd_sweep(const Common& c) {
  const auto cfg = load(c);
  const auto s = run_sweep(cfg, cfg.output.dir, cfg.workers);
  print_warnings(s.warnings);
  std::cout << "wrote " << (fs::path(s.dir) / "sweep.csv").string() << " (" << s.table.rows.size() << " cases)\n";
  return exit_ok;
}

int cmd_fit(const std::string& csv, const std::string& column, const std::string& time_column,
            std::optional<double> t_min, std::optional<double> t_max, const std::string& out) {
  const auto table = read_csv(csv);
  TimeSeries s{table.column(time_column), table.column(column)};
  if (s.t.empty()) throw ConfigError("--csv: no rows");
  const double lo = t_min.value_or(*std::min_element(s.t.begin(), s.t.end()));
  const double hi = t_max.value_or(*std::max_element(s.t.begin(), s.t.end()));
  const auto f = fit_growth(s, lo, hi);
  nlohmann::json j{{"csv", csv},           {"column", column},   {"slope", f.slope}, {"intercept", f.intercept},
                   {"t_lo", f.t_lo},       {"t_hi", f.t_hi},     {"residual_rms", f.residual_rms},
                   {"samples", f.samples}};
  std::cout << j.dump(2) << "\n";
  if (!out.empty()) {
    fs::create_directories(out);
    std::ofstream(fs::path(out) / "fit.json") << j.dump(2) << "\n";
    // the fitted line next to the data it came from
    TimeSeries line;
    for (double t : s.t)
      if (t >= lo && t <= hi) {
        line.t.push_back(t);
        line.v.push_back(std::exp(f.intercept) * std::pow(t, f.slope));
      }
    PlotOptions o;
    o.title = column + " growth fit";
    o.x_label = time_column;
    o.y_label = column;
    o.loglog = true;
    write_svg((fs::path(out) / "fit.svg").string(), {{column, s}, {"fit", line}}, o);
    write_dat((fs::path(out) / "fit.dat").string(), {{column, s}});
  }
  return exit_ok;
}

int cmd_accept(const std::string& level, const Common& c) {
  AcceptanceOptions opt;
  opt.level = acceptance_level_from_string(level);
  opt.workers = c.workers.value_or(std::max(1u, std::thread::hardware_concurrency()));
  if (c.seed) opt.seed = *c.seed;
  const auto results = acceptance_suite(opt, [](const CriterionResult& r) { std::cout << format_result_line(r) << std::endl; });
  int failed = 0;
  for (const auto& r : results) failed += !r.pass;
  std::cout << (failed ? "FAILED " : "PASSED ") << results.size() - failed << "/" << results.size() << " criteria\n";
  if (!c.out.empty()) {
    fs::create_directories(c.out);
    std::ofstream(fs::path(c.out) / "acceptance.json") << acceptance_report_json(results, opt.level) << "\n";
    CsvTable t{{"id", "pass", "seconds"}, {}};
    for (const auto& r : results) t.add_row({double(r.id), r.pass ? 1.0 : 0.0, r.seconds});
    write_csv((fs::path(c.out) / "acceptance.csv").string(), t);
  }
  return failed ? exit_acceptance : exit_ok;
}

int cmd_export_kernel(const Common& c, std::optional<double> t) {
  auto cfg = load(c);
  if (t) cfg.t_final = *t;
  if (!(cfg.t_final > 0.0)) throw ConfigError("--t: must be positive");
  const auto table = kernel_csv(cfg);
  fs::create_directories(cfg.output.dir);
  const auto stem = fs::path(cfg.output.dir) / "kernel";
  write_csv(stem.string() + ".csv", table);
  TimeSeries s{table.column("n"), {}};
  const auto re = table.column("re"), im = table.column("im");
  for (std::size_t i = 0; i < re.size(); ++i) s.v.push_back(std::hypot(re[i], im[i]));
  PlotOptions o;
  o.title = "kernel modulus at t = " + format_number(cfg.t_final);
  o.x_label = "n";
  o.y_label = "|K_n|";
  write_svg(stem.string() + ".svg", {{"|K_n|", s}}, o);
  write_dat(stem.string() + ".dat", {{"abs", s}});
  std::cout << "wrote " << stem.string() << ".csv (" << table.rows.size() << " rows)\n";
  return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bounded-data NLS experiments"};
  app.set_version_flag("--version", std::string(code_version()));
  app.require_subcommand(1);

  Common run_c, sweep_c, accept_c, kernel_c;
  auto* run = app.add_subcommand("run", "run one experiment from a config file");
  add_common(run, run_c, true);
  auto* sweep = app.add_subcommand("sweep", "run the cross product of the sweep.* lists");
  add_common(sweep, sweep_c, true);

  auto* fit = app.add_subcommand("fit", "least-squares log-log slope of a CSV column");
  std::string csv, column = "sup_abs", time_column = "t", fit_out;
  std::optional<double> t_min, t_max;
  fit->add_option("--csv", csv, "input CSV")->required()->check(CLI::ExistingFile);
  fit->add_option("--column", column, "value column");
  fit->add_option("--time-column", time_column, "time column");
  fit->add_option("--t-min", t_min, "window start");
  fit->add_option("--t-max", t_max, "window end");
  fit->add_option("--out", fit_out, "directory for fit.json and a plot");

  auto* accept = app.add_subcommand("accept", "run the acceptance suite");
  std::string level = "quick";
  accept->add_option("--level", level, "quick or full")->check(CLI::IsMember({"quick", "full"}));
  add_common(accept, accept_c, false);

  auto* kernel = app.add_subcommand("export-kernel", "write the propagator kernel at t_final as CSV");
  std::optional<double> kernel_t;
  add_common(kernel, kernel_c, false);
  kernel->add_option("--t", kernel_t, "time (overrides t_final)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_config;
  }

  try {
    if (*run) return cmd_run(run_c);
    if (*sweep) return cmd_sweep(sweep_c);
    if (*fit) return cmd_fit(csv, column, time_column, t_min, t_max, fit_out);
    if (*accept) return cmd_accept(level, accept_c);
    if (*kernel) return cmd_export_kernel(kernel_c, kernel_t);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::out_of_range& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return exit_numerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_ok;
}
