#pragma once

#include "bnls/field_core.hpp"
#include "bnls/lattice_linear.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace bnls {

enum class Engine { lattice, lattice_linear, continuum, nlw, newton };

[[nodiscard]] std::string to_string(Engine e);
[[nodiscard]] Engine engine_from_string(const std::string& name);  // throws ConfigError

// Everything a run depends on. Text form: one "key = value" per line, dotted
// section names, '#' comments, lists comma separated. See config_schema().
struct ExperimentConfig {
  Engine engine = Engine::lattice;
  std::uint64_t seed = 1;
  unsigned workers = 1;
  double t_final = 10.0;

  struct Output {
    std::string dir = "out";
    int samples = 64;
    bool log_spacing = false;  // geometric sample times from t_final / 100
    bool plot = true;
    bool loglog = false;
  } output;

  struct Data {
    DataKind kind = DataKind::constant;
    double amplitude = 1.0;
    std::string comb = "ones";  // ones | random_phase | random_uniform
    std::vector<double> amplitudes{1.0};
    std::vector<double> frequencies{1.0};
  } data;

  struct Lattice {
    int sign = +1;
    double p = 2.0;
    int extent = 0;  // 0: sized from the wrap rule
    double dt = 0.01;
    bool nonlinear = true;
    double radius = 1.0;
    long x0 = 0;
    std::vector<double> window_times;
  } lattice;

  struct Linear {
    KernelKind kernel = KernelKind::lattice;
    int half_width = 0;  // 0: recommended_half_width
    bool adversarial = false;  // data replaced by adversarial_data(t_final)
  } linear;

  struct Continuum {
    std::string mollifier = "gaussian";  // gaussian | cutoff | identity
    double sigma = 1.0;
    double cutoff = 0.0;  // 0: M pi / (2 L)
    double box_length = 64.0;
    std::size_t grid_size = 256;
    double dt = 1e-3;
    int sign = +1;
    bool nonlinear = true;
    std::vector<double> probes;
    double probe_radius = 1.0;
  } continuum;

  struct Wave {
    double box_length = 64.0;
    std::size_t grid_size = 1024;
    double dt = 1.0 / 32.0;
    int p = 1;
    bool nonlinear = true;
  } nlw;

  struct Newton {
    double box_length = 6.283185307179586;
    std::size_t grid_size = 64;
    double dt = 1e-3;
    int max_iter = 8;
    double tol = 1e-10;
    double r1 = 1.0;
  } newton;

  struct Sweep {
    std::vector<double> radii;
    std::vector<double> x0;
    std::vector<double> t0;
    std::vector<std::uint64_t> seeds;
  } sweep;

  // Cross-field checks; throws ConfigError naming the offending key.
  void validate() const;
};

struct ConfigKey {
  std::string name;
  std::string help;
};
[[nodiscard]] const std::vector<ConfigKey>& config_schema();

[[nodiscard]] ExperimentConfig parse_config(const std::string& text);
[[nodiscard]] ExperimentConfig load_config(const std::string& path);
// Canonical text form; parse_config(to_config_text(c)) reproduces c.
[[nodiscard]] std::string to_config_text(const ExperimentConfig& c);
// Set one key from its text value, as parse_config would.
void set_config_value(ExperimentConfig& c, const std::string& key, const std::string& value);

[[nodiscard]] InitialData make_data_spec(const ExperimentConfig& c, long comb_first, long comb_last);

} // namespace bnls
