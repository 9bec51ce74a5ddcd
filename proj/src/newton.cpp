#include "bnls/newton.hpp"

#include "bnls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bnls {
namespace {

void check_same_grid(const Trajectory& a, const Trajectory& b, const char* who) {
  if (a.size() != b.size() || a.dt != b.dt) throw std::invalid_argument(std::string(who) + ": time grids differ");
  if (a.size() == 0) throw std::invalid_argument(std::string(who) + ": empty trajectory");
  if (a.frames[0].size() != b.frames[0].size() || a.frames[0].box_length() != b.frames[0].box_length())
    throw std::invalid_argument(std::string(who) + ": spatial grids differ");
}

long step_count(double t_final, double dt, const char* who) {
  if (!(dt > 0.0) || !(t_final >= 0.0)) throw std::invalid_argument(std::string(who) + ": need dt > 0 and T >= 0");
  const double s = t_final / dt;
  const long n = std::lround(s);
  if (std::abs(s - static_cast<double>(n)) > 1e-9 * std::max(1.0, s))
    throw std::invalid_argument(std::string(who) + ": T must be a multiple of dt");
  return n;
}

double l2_norm(const GridField& f) {
  double s = 0.0;
  for (const auto& z : f.values()) s += std::norm(z);
  return std::sqrt(s * f.spacing());
}

GridField scaled(const GridField& f, double a, double box) {
  GridField g(box, f.size());
  for (std::size_t j = 0; j < f.size(); ++j) g[j] = a * f[j];
  return g;
}

// d/dt of psi by central differences on interior frames; the defect of
// i psi_t + psi_xx - |psi|^2 psi + R.
double telescoping_defect(const Trajectory& psi, const Trajectory& r) {
  if (psi.size() < 3) return 0.0;
  const std::size_t m = psi.frames[0].size();
  const auto k = wavenumbers(m, psi.frames[0].box_length());
  auto& plan = fft_plan(m);
  std::vector<cplx> c(m);
  double worst = 0.0;
  for (std::size_t j = 1; j + 1 < psi.size(); ++j) {
    const auto& p = psi.frames[j];
    plan.forward(p.values().data(), c.data());
    for (std::size_t i = 0; i < m; ++i) c[i] *= -k[i] * k[i] / static_cast<double>(m);
    plan.backward(c.data(), c.data());
    for (std::size_t x = 0; x < m; ++x) {
      const cplx pt = (psi.frames[j + 1][x] - psi.frames[j - 1][x]) / (2.0 * psi.dt);
      const cplx d = cplx(0.0, 1.0) * pt + c[x] - std::norm(p[x]) * p[x] + r.frames[j][x];
      worst = std::max(worst, std::abs(d));
    }
  }
  return worst;
}

} // namespace

double Trajectory::sup_abs() const {
  double s = 0.0;
  for (const auto& f : frames) s = std::max(s, f.sup_abs());
  return s;
}

GridField Trajectory::at(double t) const {
  if (frames.empty()) throw std::invalid_argument("Trajectory::at: empty trajectory");
  if (frames.size() == 1) return frames[0];
  const double s = std::clamp(t / dt, 0.0, static_cast<double>(frames.size() - 1));
  const std::size_t j = std::min(static_cast<std::size_t>(s), frames.size() - 2);
  const double a = s - static_cast<double>(j);
  GridField g = frames[j];
  if (a == 0.0) return g;
  for (std::size_t x = 0; x < g.size(); ++x) g[x] = (1.0 - a) * frames[j][x] + a * frames[j + 1][x];
  return g;
}

double majorant_norm(const GridField& f, const AnalyticNormParams& params) {
  if (!(params.r >= 0.0)) throw std::invalid_argument("majorant_norm: r must be >= 0");
  if (params.p < 0) throw std::invalid_argument("majorant_norm: p must be >= 0");
  const std::size_t m = f.size();
  const auto k = wavenumbers(m, f.box_length());
  const double kmax = std::numbers::pi * static_cast<double>(m) / f.box_length();
  if (kmax * params.r > 700.0) {
    std::ostringstream os;
    os << "majorant_norm: r * k_max = " << kmax * params.r << " overflows; use a smaller radius";
    throw NumericalError(os.str());
  }
  std::vector<cplx> c(m);
  fft_plan(m).forward(f.values().data(), c.data());
  // Sampling and transform roundoff leaves every mode at ~1e-16 of the total,
  // which e^{|k| r} would amplify; coefficients below that floor are dropped.
  double l1 = 0.0;
  for (const auto& z : c) l1 += std::abs(z);
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * l1;
  double s = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (std::abs(c[i]) <= floor) continue;
    const double a = std::abs(k[i]);
    double w = 0.0, pw = 1.0;
    for (int q = 0; q <= params.p; ++q, pw *= a) w += pw;
    s += std::abs(c[i]) * w * std::exp(a * params.r);
  }
  return s / static_cast<double>(m);
}

double majorant_norm(const Trajectory& f, const AnalyticNormParams& params) {
  double s = 0.0;
  for (const auto& g : f.frames) s = std::max(s, majorant_norm(g, params));
  return s;
}

double NewtonSchedule::delta(int n) const {
  if (n < 1) throw std::invalid_argument("NewtonSchedule: n starts at 1");
  // sum 1/n^2 = pi^2 / 6
  return fraction * r1 * 6.0 / (std::numbers::pi * std::numbers::pi) / (static_cast<double>(n) * n);
}

double NewtonSchedule::radius(int n) const {
  if (n < 1) throw std::invalid_argument("NewtonSchedule: n starts at 1");
  double r = r1;
  for (int j = 1; j < n; ++j) r -= delta(j);
  return r;
}

Trajectory free_evolution(const GridField& psi0, double t_final, double dt) {
  const long steps = step_count(t_final, dt, "free_evolution");
  const std::size_t m = psi0.size();
  const auto k = wavenumbers(m, psi0.box_length());
  auto& plan = fft_plan(m);
  std::vector<cplx> c0(m), c(m);
  plan.forward(psi0.values().data(), c0.data());
  Trajectory out{dt, {}};
  out.frames.reserve(static_cast<std::size_t>(steps) + 1);
  out.frames.push_back(psi0);
  for (long j = 1; j <= steps; ++j) {
    const double t = dt * static_cast<double>(j);
    for (std::size_t i = 0; i < m; ++i) c[i] = c0[i] * std::polar(1.0 / static_cast<double>(m), -k[i] * k[i] * t);
    GridField g(psi0.box_length(), m);
    plan.backward(c.data(), g.values().data());
    out.frames.push_back(std::move(g));
  }
  return out;
}

Trajectory residual_first(const Trajectory& psi1) {
  Trajectory out{psi1.dt, psi1.frames};
  for (auto& f : out.frames)
    for (auto& z : f.values()) z *= std::norm(z);
  return out;
}

Trajectory residual(const Trajectory& psi_prev, const Trajectory& xi) {
  check_same_grid(psi_prev, xi, "residual");
  Trajectory out{xi.dt, xi.frames};
  for (std::size_t j = 0; j < xi.size(); ++j) {
    auto& o = out.frames[j];
    for (std::size_t x = 0; x < o.size(); ++x) {
      const cplx p = psi_prev.frames[j][x], e = xi.frames[j][x];
      const double e2 = std::norm(e);
      o[x] = 2.0 * e2 * p + e * e * std::conj(p) + e2 * e;
    }
  }
  return out;
}

LinearizedSystem::Potential LinearizedSystem::potential(std::size_t frame) const {
  const auto& p = psi.frames.at(frame);
  Potential v{p, p, p, p};
  for (std::size_t x = 0; x < p.size(); ++x) {
    const double a = std::norm(p[x]);
    v.v11[x] = 2.0 * a;
    v.v12[x] = p[x] * p[x];
    v.v21[x] = -std::conj(p[x] * p[x]);
    v.v22[x] = -2.0 * a;
  }
  return v;
}

LinearizedSolution solve_linearized(const LinearizedSystem& sys, double t_final, double dt) {
  check_same_grid(sys.psi, sys.forcing, "solve_linearized");
  const double snap = sys.psi.dt;
  const long intervals = step_count(t_final, snap, "solve_linearized");
  if (static_cast<std::size_t>(intervals) + 1 > sys.psi.size())
    throw std::invalid_argument("solve_linearized: T exceeds the sampled potential");
  const long sub = step_count(snap, dt, "solve_linearized (dt must divide the snapshot spacing)");
  if (sub < 1) throw std::invalid_argument("solve_linearized: dt larger than the snapshot spacing");

  const GridField& g0 = sys.psi.frames[0];
  const std::size_t m = g0.size();
  const double box = g0.box_length();
  const auto k = wavenumbers(m, box);
  auto& plan = fft_plan(m);
  const double inv_m = 1.0 / static_cast<double>(m);

  std::vector<cplx> e1(m), e2(m);
  for (std::size_t i = 0; i < m; ++i) {
    e1[i] = std::polar(1.0, -k[i] * k[i] * dt / 2.0);
    e2[i] = std::conj(e1[i]);
  }

  // right-hand side -i FFT(V u + b) for both components at time t
  std::vector<cplx> px(m), py(m), pp(m), pr(m);
  auto interp = [&](const Trajectory& tr, double t, std::vector<cplx>& out) {
    const double s = std::clamp(t / snap, 0.0, static_cast<double>(tr.size() - 1));
    const std::size_t j = std::min(static_cast<std::size_t>(s), tr.size() - 2);
    const double a = s - static_cast<double>(j);
    for (std::size_t x = 0; x < m; ++x) out[x] = (1.0 - a) * tr.frames[j][x] + a * tr.frames[j + 1][x];
  };
  auto rhs = [&](double t, const std::vector<cplx>& X, const std::vector<cplx>& Y, std::vector<cplx>& fx,
                 std::vector<cplx>& fy) {
    if (sys.psi.size() > 1) {
      interp(sys.psi, t, pp);
      interp(sys.forcing, t, pr);
    } else {
      pp = sys.psi.frames[0].values();
      pr = sys.forcing.frames[0].values();
    }
    plan.backward(X.data(), px.data());
    plan.backward(Y.data(), py.data());
    for (std::size_t x = 0; x < m; ++x) {
      const cplx xi = px[x] * inv_m, eta = py[x] * inv_m, p = pp[x];
      const double a = std::norm(p);
      px[x] = 2.0 * a * xi + p * p * eta + pr[x];
      py[x] = -std::conj(p * p) * xi - 2.0 * a * eta - std::conj(pr[x]);
    }
    plan.forward(px.data(), fx.data());
    plan.forward(py.data(), fy.data());
    for (std::size_t i = 0; i < m; ++i) {
      fx[i] *= cplx(0.0, -1.0);
      fy[i] *= cplx(0.0, -1.0);
    }
  };

  // growth bound: |u(t)| <= int_0^t |b| e^{10 t sup|V|}, with |b(s)| bounded by
  // the larger endpoint norm on each interval since b is interpolated linearly
  double sup_v = 0.0;
  for (std::size_t j = 0; j <= static_cast<std::size_t>(intervals); ++j) sup_v = std::max(sup_v, 3.0 * std::pow(sys.psi.frames[j].sup_abs(), 2));

  std::vector<cplx> X(m), Y(m), k1x(m), k1y(m), k2x(m), k2y(m), k3x(m), k3y(m), k4x(m), k4y(m), ax(m), ay(m);
  LinearizedSolution out;
  out.xi.dt = snap;
  out.xi.frames.reserve(static_cast<std::size_t>(intervals) + 1);
  out.xi.frames.emplace_back(box, m);
  double forcing_integral = 0.0;
  double prev_b = std::sqrt(2.0) * l2_norm(sys.forcing.frames[0]);
  for (long iv = 0; iv < intervals; ++iv) {
    for (long s = 0; s < sub; ++s) {
      const double t = static_cast<double>(iv) * snap + static_cast<double>(s) * dt;
      rhs(t, X, Y, k1x, k1y);
      for (std::size_t i = 0; i < m; ++i) {
        ax[i] = e1[i] * (X[i] + dt / 2 * k1x[i]);
        ay[i] = e2[i] * (Y[i] + dt / 2 * k1y[i]);
      }
      rhs(t + dt / 2, ax, ay, k2x, k2y);
      for (std::size_t i = 0; i < m; ++i) {
        ax[i] = e1[i] * X[i] + dt / 2 * k2x[i];
        ay[i] = e2[i] * Y[i] + dt / 2 * k2y[i];
      }
      rhs(t + dt / 2, ax, ay, k3x, k3y);
      for (std::size_t i = 0; i < m; ++i) {
        ax[i] = e1[i] * e1[i] * X[i] + dt * e1[i] * k3x[i];
        ay[i] = e2[i] * e2[i] * Y[i] + dt * e2[i] * k3y[i];
      }
      rhs(t + dt, ax, ay, k4x, k4y);
      for (std::size_t i = 0; i < m; ++i) {
        X[i] = e1[i] * e1[i] * X[i] + dt / 6 * (e1[i] * e1[i] * k1x[i] + 2.0 * e1[i] * (k2x[i] + k3x[i]) + k4x[i]);
        Y[i] = e2[i] * e2[i] * Y[i] + dt / 6 * (e2[i] * e2[i] * k1y[i] + 2.0 * e2[i] * (k2y[i] + k3y[i]) + k4y[i]);
      }
    }
    GridField xi(box, m), eta(box, m);
    plan.backward(X.data(), xi.values().data());
    plan.backward(Y.data(), eta.values().data());
    for (std::size_t x = 0; x < m; ++x) {
      xi[x] *= inv_m;
      eta[x] *= inv_m;
      out.symmetry_defect = std::max(out.symmetry_defect, std::abs(eta[x] - std::conj(xi[x])));
    }
    const double b_next = std::sqrt(2.0) * l2_norm(sys.forcing.frames[static_cast<std::size_t>(iv) + 1]);
    forcing_integral += snap * std::max(prev_b, b_next);
    prev_b = b_next;
    const double t_now = static_cast<double>(iv + 1) * snap;
    const double norm_u = std::sqrt(std::pow(l2_norm(xi), 2) + std::pow(l2_norm(eta), 2));
    if (!xi.all_finite() || norm_u > (1.0 + 1e-8) * forcing_integral * std::exp(10.0 * t_now * sup_v)) {
      std::ostringstream os;
      os << "solve_linearized: norm growth beyond the a priori bound at t = " << t_now;
      throw NumericalError(os.str());
    }
    out.xi.frames.push_back(std::move(xi));
  }
  return out;
}

namespace {

struct Rescaling {
  double lam = 1.0;
  GridField data;
};

Rescaling rescale_for(const GridField& psi0, double r1, double target) {
  auto eps_of = [&](double lam) { return majorant_norm(scaled(psi0, lam, psi0.box_length() / lam), {r1, 0}); };
  if (eps_of(1.0) <= target) return {1.0, psi0};
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (eps_of(mid) <= target ? lo : hi) = mid;
  }
  if (lo <= 0.0) throw NumericalError("newton_iterate: no rescaling reaches the smallness target");
  return {lo, scaled(psi0, lo, psi0.box_length() / lo)};
}

} // namespace

NewtonResult newton_iterate(const GridField& psi0, double t_final, const NewtonOptions& options) {
  if (options.max_iter < 1) throw std::invalid_argument("newton_iterate: max_iter must be >= 1");
  if (!(options.tol >= 0.0)) throw std::invalid_argument("newton_iterate: tol must be >= 0");
  if (!(options.schedule.r1 > 0.0) || !(options.schedule.fraction > 0.0 && options.schedule.fraction < 1.0))
    throw std::invalid_argument("newton_iterate: schedule needs r1 > 0 and 0 < fraction < 1");
  if (!psi0.all_finite()) throw std::invalid_argument("newton_iterate: data not finite");
  (void)step_count(t_final, options.dt, "newton_iterate");

  const auto rs = rescale_for(psi0, options.schedule.r1, options.eps1_target);
  const double lam = rs.lam, lam2 = lam * lam, lam3 = lam2 * lam;
  const double dt = options.dt / lam2;
  const double T = t_final / lam2;

  NewtonResult res;
  res.scale = lam;
  Trajectory psi = free_evolution(rs.data, T, dt);
  Trajectory r = residual_first(psi);
  double eps = majorant_norm(psi, {options.schedule.radius(1), 0});
  res.report.push_back({1, options.schedule.radius(1), eps, r.sup_abs() / lam3,
                        std::numeric_limits<double>::quiet_NaN(), telescoping_defect(psi, r) / lam3, 0.0, 0.0});
  res.converged = res.report.back().sup_residual <= options.tol;

  for (int n = 2; !res.converged && n <= options.max_iter; ++n) {
    const auto sol = solve_linearized({psi, r}, T, dt);
    const double rad = options.schedule.radius(n);
    const double e = majorant_norm(sol.xi, {rad, 0});
    Trajectory r_next = residual(psi, sol.xi);
    for (std::size_t j = 0; j < psi.size(); ++j)
      for (std::size_t x = 0; x < psi.frames[j].size(); ++x) psi.frames[j][x] += sol.xi.frames[j][x];
    r = std::move(r_next);
    const double ratio = eps > 0.0 ? e / (eps * eps) : std::numeric_limits<double>::quiet_NaN();
    res.report.push_back({n, rad, e, r.sup_abs() / lam3, ratio, telescoping_defect(psi, r) / lam3,
                          sol.symmetry_defect, sol.xi.frames[0].sup_abs()});
    const auto& rep = res.report;
    const std::size_t q = rep.size();
    if (q >= 3 && rep[q - 1].eps > rep[q - 2].eps && rep[q - 2].eps > rep[q - 3].eps) {
      std::ostringstream os;
      os << "newton_iterate: diverging (eps increased twice in a row, eps_" << n << " = " << e
         << "); try a smaller T or amplitude";
      throw NumericalError(os.str());
    }
    if (!std::isfinite(e)) throw NumericalError("newton_iterate: correction not finite; try a smaller T or amplitude");
    eps = e;
    res.converged = rep.back().sup_residual <= options.tol;
  }

  res.solution.dt = options.dt;
  res.solution.frames.reserve(psi.size());
  for (const auto& f : psi.frames) res.solution.frames.push_back(scaled(f, 1.0 / lam, psi0.box_length()));
  return res;
}

double newton_working_time(const GridField& psi0, double t_max, const NewtonOptions& options, double rel_tol) {
  auto works = [&](double T) {
    // align T to the step grid
    const double t = options.dt * std::max(1.0, std::round(T / options.dt));
    try {
      return newton_iterate(psi0, t, options).converged;
    } catch (const NumericalError&) {
      return false;
    }
  };
  if (works(t_max)) return t_max;
  double lo = 0.0, hi = t_max;
  while (hi - lo > rel_tol * hi && hi - lo > options.dt) {
    const double mid = 0.5 * (lo + hi);
    (works(mid) ? lo : hi) = mid;
  }
  return options.dt * std::floor(lo / options.dt);
}

} // namespace bnls
