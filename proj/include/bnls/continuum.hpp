#pragma once

#include "bnls/field_core.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bnls {

// i u_t + u_xx = sign N(u),  N(u) = phi * (|phi * u|^2 (phi * u)),
// on the periodic box [-L/2, L/2) with M points. Cubic products are dealiased
// with the 2/3 rule: only |k| <= (2/3) pi M / L enters or leaves the product.
struct ContinuumModel {
  Mollifier mollifier = Mollifier::gaussian(1.0);
  double box_length = 64.0;
  std::size_t grid_size = 256;
  double dt = 1e-3;
  int sign = +1;
  bool nonlinear = true;

  void validate() const;
  [[nodiscard]] double dealias_cutoff() const;
};

[[nodiscard]] double dealias_cutoff(std::size_t m, double box_length);

[[nodiscard]] GridField mollify(const GridField& u, const Mollifier& phi);
// phi * (|P phi * u|^2 P phi * u) projected with P, P the 2/3 dealiasing mask.
[[nodiscard]] GridField regularized_nonlinearity(const GridField& u, const Mollifier& phi);
// Multiply mode k by e^{-i k^2 t}.
[[nodiscard]] GridField linear_propagate(const GridField& u0, double t);

// Free evolution of a Gaussian comb on the real line:
// sum_j a_j e^{-(x-j)^2 / (4it+1)} / (4it+1)^{1/2}, principal square root.
[[nodiscard]] cplx comb_oracle(const CombCoefficients& a, double t, double x);

[[nodiscard]] double global_mass(const GridField& u);
// 1/2 int |u_x|^2 + sign/4 int |P phi * u|^4
[[nodiscard]] double global_energy(const GridField& u, const Mollifier& phi, int sign = +1);

// Lawson (integrating factor) RK4 on the Fourier coefficients. Keeps work
// buffers, so one stepper per thread.
class LawsonStepper {
public:
  explicit LawsonStepper(const ContinuumModel& model);

  [[nodiscard]] const ContinuumModel& model() const { return model_; }
  void step(GridField& u);
  void advance(GridField& u, long steps);

private:
  void rhs(const std::vector<cplx>& coeffs, std::vector<cplx>& out);
  void step_coeffs();

  ContinuumModel model_;
  std::vector<cplx> half_;      // e^{-i k^2 dt/2}
  std::vector<double> filter_;  // mollifier transfer times dealiasing mask
  std::vector<cplx> c_, a_, k1_, k2_, k3_, k4_, phys_;
};

[[nodiscard]] GridField step_lawson_rk4(const GridField& u, const ContinuumModel& model);

struct PicardResult {
  std::vector<double> times;
  std::vector<GridField> trajectory;
  int iterations = 0;
  double last_difference = 0.0;
};

// Fixed point of the Duhamel map on the node grid t_n = n T / nodes (nodes
// defaults to ceil(T / model.dt)), starting from the free evolution. The time
// integral is taken in the interaction picture with a fourth order cumulative
// Lagrange rule. Throws NumericalError when the iterates stop contracting.
[[nodiscard]] PicardResult picard_solve(const GridField& u0, double t_final, const ContinuumModel& model, double tol,
                                        int max_iter = 50, int nodes = 0);

struct LocalEnergyProbe {
  double x0 = 0.0;
  double r = 1.0;
};

// int chi((x - x0)/R)^2 [1/2 |u_x|^2 + 1/4 |P phi * u|^4 + 1/2 |u|^2] dx.
// Requires [x0 - 2R, x0 + 2R] to sit inside the box with margin >= L/8.
[[nodiscard]] double local_energy_probe(const GridField& u, const LocalEnergyProbe& probe, const Mollifier& phi);

struct ContinuumRecord {
  double t;
  double sup_abs;
  double mass;
  double energy;
  std::vector<double> probes;
};

struct ContinuumRunOptions {
  double t_final = 0.0;
  std::vector<double> sample_times;  // rounded to the step grid; 0 and t_final always included
  std::vector<LocalEnergyProbe> probes;
  bool keep_snapshots = false;
};

struct ContinuumRunResult {
  std::vector<ContinuumRecord> records;
  std::vector<GridField> snapshots;  // parallel to records when requested
  std::vector<std::string> warnings;
};

[[nodiscard]] ContinuumRunResult run_continuum(const GridField& u0, const ContinuumModel& model,
                                               const ContinuumRunOptions& opts);

struct BootstrapReport {
  double initial_max = 0.0;  // max over probes of E(x0, 0)
  double max_ratio = 0.0;    // sup over probes and times of E(x0, t) / initial_max
  double worst_time = 0.0;
  double worst_x0 = 0.0;
  bool flagged = false;      // max_ratio above the configured factor
  std::string note;
};

// Scans probe series (records[i].probes[j] belongs to probes[j]) over
// 0 <= t <= R^{1/8}.
[[nodiscard]] BootstrapReport bootstrap_monitor(const std::vector<ContinuumRecord>& records,
                                                const std::vector<LocalEnergyProbe>& probes, double r,
                                                double factor = 2.0);

} // namespace bnls
