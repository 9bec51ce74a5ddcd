#pragma once

#include "bnls/field_core.hpp"

#include <vector>

namespace bnls {

// u_tt - u_xx + u^{2p+1} = 0 on the periodic box, real data stored in the real
// part of complex grid samples.
struct WaveState {
  GridField u;
  GridField v;  // u_t
};

struct WaveModel {
  double box_length = 32.0;
  std::size_t grid_size = 256;
  double dt = 1.0 / 32.0;
  int p = 1;  // nonlinearity u^{2p+1}; p = 1 is the cubic equation
  bool nonlinear = true;

  void validate() const;  // includes the CFL condition dt <= h
};

// Kick-drift-kick Stoermer-Verlet. The drift is the exact spectral flow of the
// free wave equation, so the linear part carries no dispersion error.
class WaveStepper {
public:
  explicit WaveStepper(const WaveModel& model);

  [[nodiscard]] const WaveModel& model() const { return model_; }
  void step(WaveState& s);
  void advance(WaveState& s, long steps);

private:
  void kick(WaveState& s, double tau) const;
  void drift(WaveState& s);

  WaveModel model_;
  std::vector<double> cos_, sin_over_k_, k_sin_;
  std::vector<cplx> uh_, vh_;
};

[[nodiscard]] WaveState nlw_step_leapfrog(const WaveState& s, const WaveModel& model);

// 1/2 int u_x^2 + 1/2 int u_t^2 + 1/(2p+2) int u^{2p+2}
[[nodiscard]] double nlw_energy(const WaveState& s, int p = 1);

[[nodiscard]] WaveState make_wave_state(GridField u0, GridField u1);

// Runs the full data and the data cut off by chi((x - x0)/T), and returns
// sup_{t <= T} |u(t, x0) - v(t, x0)|. x0 must be a grid point.
[[nodiscard]] double nlw_cone_test(const GridField& u0, const GridField& u1, double x0, double t_final,
                                   const WaveModel& model);

struct WaveRecord {
  double t;
  double sup_abs;
  double energy;
};

[[nodiscard]] std::vector<WaveRecord> run_wave(const WaveState& s0, const WaveModel& model, double t_final,
                                               const std::vector<double>& sample_times);

} // namespace bnls
