#include "bnls/harness/config.hpp"

#include "bnls/continuum.hpp"
#include "bnls/errors.hpp"
#include "bnls/lattice_dynamics.hpp"
#include "bnls/wave.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace bnls {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const std::string& what) {
  throw ConfigError("config key '" + key + "': " + what + " (got '" + value + "')");
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end || !std::isfinite(out)) bad(key, v, "expected a finite number");
  return out;
}

template <class Int>
Int to_int(const std::string& key, const std::string& v) {
  Int out{};
  const auto* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) bad(key, v, "expected an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "yes" || v == "1" || v == "on") return true;
  if (v == "false" || v == "no" || v == "0" || v == "off") return false;
  bad(key, v, "expected true or false");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(to_double(key, s));
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ", ";
    if constexpr (std::is_floating_point_v<T>) s += fmt(xs[i]);
    else s += std::to_string(xs[i]);
  }
  return s;
}

int to_sign(const std::string& key, const std::string& v) {
  const int s = to_int<int>(key, v);
  if (s != 1 && s != -1) bad(key, v, "expected 1 or -1");
  return s;
}

struct Entry {
  ConfigKey key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

#define BNLS_DOUBLE(name, field, help)                                                        \
  Entry{{name, help}, [](ExperimentConfig& c, const std::string& v) { c.field = to_double(name, v); }, \
        [](const ExperimentConfig& c) { return fmt(c.field); }}
#define BNLS_INT(name, type, field, help)                                                      \
  Entry{{name, help}, [](ExperimentConfig& c, const std::string& v) { c.field = to_int<type>(name, v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }}
#define BNLS_BOOL(name, field, help)                                                          \
  Entry{{name, help}, [](ExperimentConfig& c, const std::string& v) { c.field = to_bool(name, v); }, \
        [](const ExperimentConfig& c) { return std::string(c.field ? "true" : "false"); }}
#define BNLS_DLIST(name, field, help)                                                          \
  Entry{{name, help}, [](ExperimentConfig& c, const std::string& v) { c.field = to_doubles(name, v); }, \
        [](const ExperimentConfig& c) { return join(c.field); }}
#define BNLS_SIGN(name, field, help)                                                          \
  Entry{{name, help}, [](ExperimentConfig& c, const std::string& v) { c.field = to_sign(name, v); }, \
        [](const ExperimentConfig& c) { return std::to_string(c.field); }}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      Entry{{"engine", "lattice | lattice-linear | continuum | nlw | newton"},
            [](ExperimentConfig& c, const std::string& v) { c.engine = engine_from_string(v); },
            [](const ExperimentConfig& c) { return to_string(c.engine); }},
      BNLS_INT("seed", std::uint64_t, seed, "master seed for all random data"),
      BNLS_INT("workers", unsigned, workers, "parallel workers for sweeps and ensembles"),
      BNLS_DOUBLE("t_final", t_final, "time horizon T"),
      Entry{{"output.dir", "run directory"},
            [](ExperimentConfig& c, const std::string& v) {
              if (v.empty()) bad("output.dir", v, "must not be empty");
              c.output.dir = v;
            },
            [](const ExperimentConfig& c) { return c.output.dir; }},
      BNLS_INT("output.samples", int, output.samples, "number of recorded times after t = 0"),
      BNLS_BOOL("output.log_spacing", output.log_spacing, "geometric sample times from T/100 to T"),
      BNLS_BOOL("output.plot", output.plot, "write an SVG plot of sup_abs"),
      BNLS_BOOL("output.loglog", output.loglog, "log-log axes for the plot"),
      Entry{{"data.kind", "constant | random_phase | random_gaussian | gaussian_comb | periodic | delta"},
            [](ExperimentConfig& c, const std::string& v) {
              try {
                c.data.kind = data_kind_from_string(v);
              } catch (const std::invalid_argument&) {
                bad("data.kind", v, "unknown data kind");
              }
            },
            [](const ExperimentConfig& c) { return to_string(c.data.kind); }},
      BNLS_DOUBLE("data.amplitude", data.amplitude, "amplitude A (ignored for periodic data)"),
      Entry{{"data.comb", "comb coefficients: ones | random_phase | random_uniform"},
            [](ExperimentConfig& c, const std::string& v) {
              if (v != "ones" && v != "random_phase" && v != "random_uniform") bad("data.comb", v, "unknown comb kind");
              c.data.comb = v;
            },
            [](const ExperimentConfig& c) { return c.data.comb; }},
      BNLS_DLIST("data.amplitudes", data.amplitudes, "periodic data: sum_i a_i cos(w_i x)"),
      BNLS_DLIST("data.frequencies", data.frequencies, "periodic data frequencies w_i"),
      BNLS_SIGN("lattice.sign", lattice.sign, "+1 defocusing, -1 focusing"),
      BNLS_DOUBLE("lattice.p", lattice.p, "nonlinearity |psi|^p psi"),
      BNLS_INT("lattice.extent", int, lattice.extent, "sites -N..N; 0 sizes N from T and the window"),
      BNLS_DOUBLE("lattice.dt", lattice.dt, "split-step time step"),
      BNLS_BOOL("lattice.nonlinear", lattice.nonlinear, "false runs the free flow"),
      BNLS_DOUBLE("lattice.radius", lattice.radius, "weight scale R"),
      BNLS_INT("lattice.x0", long, lattice.x0, "weight and window centre"),
      BNLS_DLIST("lattice.window_times", lattice.window_times, "t0 values for windowed averages"),
      Entry{{"linear.kernel", "export-kernel kind: lattice | hopping"},
            [](ExperimentConfig& c, const std::string& v) {
              if (v == "lattice") c.linear.kernel = KernelKind::lattice;
              else if (v == "hopping") c.linear.kernel = KernelKind::hopping;
              else bad("linear.kernel", v, "expected lattice or hopping");
            },
            [](const ExperimentConfig& c) { return std::string(c.linear.kernel == KernelKind::lattice ? "lattice" : "hopping"); }},
      BNLS_INT("linear.half_width", int, linear.half_width, "export-kernel half width; 0 picks one"),
      BNLS_BOOL("linear.adversarial", linear.adversarial, "replace the data by phase-aligned data for t_final"),
      Entry{{"continuum.mollifier", "gaussian | cutoff | identity"},
            [](ExperimentConfig& c, const std::string& v) {
              if (v != "gaussian" && v != "cutoff" && v != "identity") bad("continuum.mollifier", v, "unknown mollifier");
              c.continuum.mollifier = v;
            },
            [](const ExperimentConfig& c) { return c.continuum.mollifier; }},
      BNLS_DOUBLE("continuum.sigma", continuum.sigma, "Gaussian mollifier width"),
      BNLS_DOUBLE("continuum.cutoff", continuum.cutoff, "Fourier cutoff K; 0 means M pi / (2 L)"),
      BNLS_DOUBLE("continuum.box_length", continuum.box_length, "box length L"),
      BNLS_INT("continuum.grid_size", std::size_t, continuum.grid_size, "grid points M (power of two)"),
      BNLS_DOUBLE("continuum.dt", continuum.dt, "Lawson RK4 time step"),
      BNLS_SIGN("continuum.sign", continuum.sign, "+1 defocusing, -1 focusing"),
      BNLS_BOOL("continuum.nonlinear", continuum.nonlinear, "false runs the free flow"),
      BNLS_DLIST("continuum.probes", continuum.probes, "local energy probe centres x0"),
      BNLS_DOUBLE("continuum.probe_radius", continuum.probe_radius, "probe scale R"),
      BNLS_DOUBLE("nlw.box_length", nlw.box_length, "box length L"),
      BNLS_INT("nlw.grid_size", std::size_t, nlw.grid_size, "grid points M (power of two)"),
      BNLS_DOUBLE("nlw.dt", nlw.dt, "Verlet time step, at most L/M"),
      BNLS_INT("nlw.p", int, nlw.p, "nonlinearity u^{2p+1}"),
      BNLS_BOOL("nlw.nonlinear", nlw.nonlinear, "false runs the free wave equation"),
      BNLS_DOUBLE("newton.box_length", newton.box_length, "box length L"),
      BNLS_INT("newton.grid_size", std::size_t, newton.grid_size, "grid points M (power of two)"),
      BNLS_DOUBLE("newton.dt", newton.dt, "time grid spacing"),
      BNLS_INT("newton.max_iter", int, newton.max_iter, "iteration cap"),
      BNLS_DOUBLE("newton.tol", newton.tol, "stop when sup |R_n| <= tol"),
      BNLS_DOUBLE("newton.r1", newton.r1, "initial analyticity radius"),
      BNLS_DLIST("sweep.radii", sweep.radii, "sweep over lattice.radius / continuum.probe_radius"),
      BNLS_DLIST("sweep.x0", sweep.x0, "sweep over lattice.x0 / continuum.probes"),
      BNLS_DLIST("sweep.t0", sweep.t0, "sweep over t_final"),
      Entry{{"sweep.seeds", "sweep over seed"},
            [](ExperimentConfig& c, const std::string& v) {
              c.sweep.seeds.clear();
              for (const auto& s : split_list(v)) c.sweep.seeds.push_back(to_int<std::uint64_t>("sweep.seeds", s));
            },
            [](const ExperimentConfig& c) { return join(c.sweep.seeds); }},
  };
  return table;
}

#undef BNLS_DOUBLE
#undef BNLS_INT
#undef BNLS_BOOL
#undef BNLS_DLIST
#undef BNLS_SIGN

const Entry& find_entry(const std::string& key) {
  for (const auto& e : entries())
    if (e.key.name == key) return e;
  throw ConfigError("unknown config key '" + key + "'");
}

void check(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("config key '" + key + "': " + what);
}

} // namespace

std::string to_string(Engine e) {
  switch (e) {
  case Engine::lattice: return "lattice";
  case Engine::lattice_linear: return "lattice-linear";
  case Engine::continuum: return "continuum";
  case Engine::nlw: return "nlw";
  case Engine::newton: return "newton";
  }
  return "?";
}

Engine engine_from_string(const std::string& name) {
  for (auto e : {Engine::lattice, Engine::lattice_linear, Engine::continuum, Engine::nlw, Engine::newton})
    if (to_string(e) == name) return e;
  throw ConfigError("config key 'engine': unknown engine '" + name +
                    "' (expected lattice, lattice-linear, continuum, nlw or newton)");
}

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> keys = [] {
    std::vector<ConfigKey> k;
    for (const auto& e : entries()) k.push_back(e.key);
    return k;
  }();
  return keys;
}

void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value) {
  find_entry(key).set(c, value);
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  std::map<std::string, int> seen;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (seen.count(key))
      throw ConfigError("config key '" + key + "' set twice (lines " + std::to_string(seen[key]) + " and " +
                        std::to_string(lineno) + ")");
    seen[key] = lineno;
    set_config_value(c, key, value);
  }
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string to_config_text(const ExperimentConfig& c) {
  std::string out;
  for (const auto& e : entries()) out += e.key.name + " = " + e.get(c) + "\n";
  return out;
}

void ExperimentConfig::validate() const {
  check(t_final > 0.0, "t_final", "must be positive");
  check(workers >= 1, "workers", "must be at least 1");
  check(output.samples >= 1, "output.samples", "must be at least 1");
  check(data.amplitude >= 0.0, "data.amplitude", "must be non-negative");
  check(data.amplitudes.size() == data.frequencies.size(), "data.frequencies", "needs one entry per amplitude");
  auto model_check = [](const std::string& key, auto&& fn) {
    try {
      fn();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("config key '" + key + "': " + e.what());
    }
  };
  switch (engine) {
  case Engine::lattice:
  case Engine::lattice_linear:
    check(lattice.dt > 0.0, "lattice.dt", "must be positive");
    check(lattice.p > 0.0, "lattice.p", "must be positive");
    check(lattice.extent >= 0, "lattice.extent", "must be >= 0");
    check(lattice.radius > 0.0, "lattice.radius", "must be positive");
    check(linear.half_width >= 0, "linear.half_width", "must be >= 0");
    for (double t0 : lattice.window_times)
      check(t0 >= 1.0 && t0 <= t_final, "lattice.window_times", "each t0 must lie in [1, t_final]");
    break;
  case Engine::continuum: {
    check(is_power_of_two(continuum.grid_size), "continuum.grid_size", "must be a power of two");
    check(continuum.box_length > 0.0, "continuum.box_length", "must be positive");
    check(continuum.dt > 0.0, "continuum.dt", "must be positive");
    check(continuum.sigma > 0.0, "continuum.sigma", "must be positive");
    check(continuum.cutoff >= 0.0, "continuum.cutoff", "must be >= 0");
    check(continuum.probe_radius >= 1.0, "continuum.probe_radius", "must be >= 1");
    const double margin = continuum.box_length / 8.0;
    for (double x0 : continuum.probes)
      check(std::abs(x0) + 2.0 * continuum.probe_radius <= 0.5 * continuum.box_length - margin, "continuum.probes",
            "probe window [x0 - 2R, x0 + 2R] must stay L/8 inside the box");
    check(data.kind != DataKind::delta, "data.kind", "delta data is lattice only");
    break;
  }
  case Engine::nlw:
    model_check("nlw.dt", [&] {
      WaveModel w{nlw.box_length, nlw.grid_size, nlw.dt, nlw.p, nlw.nonlinear};
      w.validate();
    });
    check(data.kind == DataKind::gaussian_comb || data.kind == DataKind::periodic || data.kind == DataKind::constant,
          "data.kind", "nlw needs real data: constant, periodic or gaussian_comb");
    break;
  case Engine::newton:
    check(is_power_of_two(newton.grid_size), "newton.grid_size", "must be a power of two");
    check(newton.box_length > 0.0, "newton.box_length", "must be positive");
    check(newton.dt > 0.0, "newton.dt", "must be positive");
    check(newton.max_iter >= 1, "newton.max_iter", "must be at least 1");
    check(newton.tol >= 0.0, "newton.tol", "must be >= 0");
    check(newton.r1 > 0.0, "newton.r1", "must be positive");
    check(std::abs(t_final / newton.dt - std::round(t_final / newton.dt)) < 1e-9 * std::max(1.0, t_final / newton.dt),
          "t_final", "must be a multiple of newton.dt");
    check(data.kind != DataKind::delta, "data.kind", "delta data is lattice only");
    break;
  }
  for (double r : sweep.radii) check(r > 0.0, "sweep.radii", "must be positive");
  for (double t : sweep.t0) check(t > 0.0, "sweep.t0", "must be positive");
}

InitialData make_data_spec(const ExperimentConfig& c, long comb_first, long comb_last) {
  const auto& d = c.data;
  switch (d.kind) {
  case DataKind::constant: return InitialData::constant(d.amplitude);
  case DataKind::delta: return InitialData::delta(d.amplitude);
  case DataKind::random_phase: return InitialData::random_phase(d.amplitude, c.seed);
  case DataKind::random_gaussian: return InitialData::random_gaussian(d.amplitude, c.seed);
  case DataKind::periodic: return InitialData::periodic(d.amplitudes, d.frequencies);
  case DataKind::gaussian_comb: {
    CombCoefficients a;
    if (d.comb == "ones") a = CombCoefficients::ones(comb_first, comb_last);
    else if (d.comb == "random_phase") a = CombCoefficients::random_phase(comb_first, comb_last, c.seed);
    else a = CombCoefficients::random_uniform(comb_first, comb_last, c.seed);
    return InitialData::gaussian_comb(std::move(a), d.amplitude);
  }
  }
  throw ConfigError("config key 'data.kind': unsupported");
}

} // namespace bnls
