#pragma once

#include "bnls/field_core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bnls {

// i psi_t = -Lap psi + sign |psi|^p psi on the periodic lattice {-N, ..., N}.
struct LatticeModel {
  int sign = +1;  // +1 defocusing, -1 focusing
  double p = 2.0;
  int extent = 0;
  double dt = 0.01;
  bool nonlinear = true;  // false gives the free lattice Schroedinger flow

  void validate() const;
};

// Throws std::invalid_argument for focusing models; quartic diagnostics need sign = +1.
void require_defocusing(const LatticeModel& model);

[[nodiscard]] LatticeField forward_diff(const LatticeField& f);
[[nodiscard]] LatticeField lattice_laplacian(const LatticeField& f);

// Strang splitting: half nonlinear phase rotation, exact linear step in the DFT
// basis (symbol -4 sin^2(kappa/2)), half rotation. Holds its own work buffers,
// so one stepper per thread.
class SplitStepper {
public:
  explicit SplitStepper(const LatticeModel& model);

  [[nodiscard]] const LatticeModel& model() const { return model_; }
  void step(LatticeField& psi);
  // `steps` Strang steps with adjacent half rotations merged.
  void advance(LatticeField& psi, long steps);

private:
  void rotate(LatticeField& psi, double tau) const;
  void linear(LatticeField& psi);

  LatticeModel model_;
  std::vector<cplx> multiplier_;
  std::vector<cplx> work_;
};

[[nodiscard]] LatticeField step_splitstep(const LatticeField& psi, const LatticeModel& model);

[[nodiscard]] double global_mass(const LatticeField& psi);
// 1/2 sum |d psi|^2 + sign/(p+2) sum |psi|^{p+2}
[[nodiscard]] double global_energy(const LatticeField& psi, const LatticeModel& model);

// M(t) = sum_x |psi(x)|^2 e^{-F(t,x)}
[[nodiscard]] double local_mass(const LatticeField& psi, const WeightProfile& w, double t);
// E(t) = 1/2 sum |d psi(x)|^2 e^{-F(t,x)} + 1/(p+2) sum |psi(x)|^{p+2} e^{-F(t,x)}
[[nodiscard]] double local_energy(const LatticeField& psi, const WeightProfile& w, double t, double p = 2.0);

// (1/t0) sum_{|x - x0| <= t0} |psi(x)|^2, and the same with |psi|^4.
[[nodiscard]] double windowed_mass_avg(const LatticeField& psi, long x0, double t0);
[[nodiscard]] double windowed_quartic_avg(const LatticeField& psi, long x0, double t0);

// sup_x |Lap psi - sign |psi|^p psi|
[[nodiscard]] double sup_time_derivative(const LatticeField& psi, const LatticeModel& model);

struct LatticeRunRecord {
  double t;
  double sup_abs;
  double global_mass;
  double global_energy;
  double local_mass;
  double local_energy;
  double sup_dt;
};

struct WindowSample {
  double t0;
  double mass_avg;
  std::optional<double> quartic_avg;  // defocusing runs only
};

struct LatticeRunOptions {
  double t_final = 0.0;
  // Record times; each is rounded to the step grid. t = 0 and t_final are always recorded.
  std::vector<double> sample_times;
  // Weight for local mass/energy; defaults to (x0 = 0, R = 1, t0 = t_final).
  std::optional<WeightProfile> weight;
  // Windowed averages centred at window_center, taken when t reaches each t0.
  std::vector<double> window_times;
  long window_center = 0;
  // Radius of the region whose values matter; feeds the wrap-margin check.
  long observation_radius = 0;
};

struct LatticeRunResult {
  std::vector<LatticeRunRecord> records;
  std::vector<WindowSample> windows;
  std::vector<std::string> warnings;
  LatticeField final_state;
};

[[nodiscard]] LatticeRunResult run_lattice(LatticeField psi0, const LatticeModel& model, const LatticeRunOptions& opts);

} // namespace bnls
