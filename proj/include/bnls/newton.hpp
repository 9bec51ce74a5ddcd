#pragma once

#include "bnls/field_core.hpp"

#include <vector>

namespace bnls {

// Snapshots on the uniform grid t_j = j * dt, j = 0..frames-1.
struct Trajectory {
  double dt = 0.0;
  std::vector<GridField> frames;

  [[nodiscard]] std::size_t size() const { return frames.size(); }
  [[nodiscard]] double t_final() const { return dt * static_cast<double>(frames.size() - 1); }
  [[nodiscard]] double sup_abs() const;
  // linear interpolation in time, clamped to the grid
  [[nodiscard]] GridField at(double t) const;
};

struct AnalyticNormParams {
  double r = 1.0;
  int p = 0;
};

// sum_k |c_k| (sum_{q<=p} |k|^q) e^{|k| r}, an upper bound for
// sup_x sum_{n, q<=p} |f^{(n+q)}(x)| r^n / n! on trigonometric polynomials.
// Coefficients below 64 eps sum|c_k| count as roundoff and are skipped.
[[nodiscard]] double majorant_norm(const GridField& f, const AnalyticNormParams& params);
[[nodiscard]] double majorant_norm(const Trajectory& f, const AnalyticNormParams& params);

// r_1 = r1, r_{n+1} = r_n - delta_n with delta_n = c / n^2 and sum delta_n = fraction * r1.
struct NewtonSchedule {
  double r1 = 1.0;
  double fraction = 0.5;

  [[nodiscard]] double delta(int n) const;
  [[nodiscard]] double radius(int n) const;  // r_n
};

[[nodiscard]] Trajectory free_evolution(const GridField& psi0, double t_final, double dt);

// R_1 = |psi_1|^2 psi_1
[[nodiscard]] Trajectory residual_first(const Trajectory& psi1);
// R_n = 2|xi|^2 psi_prev + xi^2 conj(psi_prev) + |xi|^2 xi
[[nodiscard]] Trajectory residual(const Trajectory& psi_prev, const Trajectory& xi);

// i u_t = (-Delta + V) u + b for u = (xi, eta), with
// V = (2|psi|^2, psi^2; -conj(psi)^2, -2|psi|^2) and b = (R, -conj(R)).
// With -Delta acting as +Delta on the second row, eta stays conj(xi).
struct LinearizedSystem {
  Trajectory psi;
  Trajectory forcing;

  struct Potential {
    GridField v11, v12, v21, v22;
  };
  [[nodiscard]] Potential potential(std::size_t frame) const;
};

struct LinearizedSolution {
  Trajectory xi;
  double symmetry_defect = 0.0;  // sup |eta - conj(xi)|
};

// Lawson RK4 from zero data. dt must divide the snapshot spacing of sys.
[[nodiscard]] LinearizedSolution solve_linearized(const LinearizedSystem& sys, double t_final, double dt);

struct NewtonOptions {
  double dt = 1e-3;
  int max_iter = 8;
  double tol = 1e-10;
  NewtonSchedule schedule{};
  // Data with eps_1 above this are rescaled by psi -> lam psi(lam^2 t, lam x).
  double eps1_target = 0.5;
};

struct NewtonIterationReport {
  int n;
  double radius;
  double eps;           // majorant of xi_n at r_n; of psi_1 for n = 1
  double sup_residual;  // sup |R_n|, the residual of psi_n, in original units
  double ratio;         // eps_n / eps_{n-1}^2, NaN for n = 1
  double telescoping;   // sup |i psi_t + psi_xx - |psi|^2 psi + R_n|, central differences
  double symmetry_defect;
  double initial_defect;  // sup |xi_n(0)|
};

struct NewtonResult {
  Trajectory solution;
  std::vector<NewtonIterationReport> report;
  double scale = 1.0;
  bool converged = false;
};

[[nodiscard]] NewtonResult newton_iterate(const GridField& psi0, double t_final, const NewtonOptions& options);

// Largest T in [0, t_max] (to within rel_tol) for which the iteration converges, by bisection.
[[nodiscard]] double newton_working_time(const GridField& psi0, double t_max, const NewtonOptions& options,
                                         double rel_tol = 1e-2);

} // namespace bnls
