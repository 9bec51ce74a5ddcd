#include "bnls/harness/acceptance.hpp"

#include "bnls/continuum.hpp"
#include "bnls/errors.hpp"
#include "bnls/harness/config.hpp"
#include "bnls/harness/experiment.hpp"
#include "bnls/harness/fit.hpp"
#include "bnls/lattice_dynamics.hpp"
#include "bnls/newton.hpp"
#include "bnls/parallel.hpp"
#include "bnls/rng.hpp"
#include "bnls/wave.hpp"

#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

namespace bnls {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

// Collects measured-vs-threshold checks for one criterion.
class Detail {
public:
  void le(const std::string& what, double v, double limit) { add(what + " " + g(v) + " <= " + g(limit), v <= limit); }
  void ge(const std::string& what, double v, double limit) { add(what + " " + g(v) + " >= " + g(limit), v >= limit); }
  void truth(const std::string& what, bool ok) { add(what + (ok ? " true" : " false"), ok); }
  void note(const std::string& s) { parts_.push_back(s); }
  [[nodiscard]] bool ok() const { return ok_; }
  [[nodiscard]] std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? "; " : "") + parts_[i];
    return s;
  }

private:
  void add(std::string s, bool ok) {
    if (!ok) s += " FAIL";
    parts_.push_back(std::move(s));
    ok_ = ok_ && ok;
  }
  std::vector<std::string> parts_;
  bool ok_ = true;
};

// Smallest N >= n_min with 2N + 1 free of prime factors above 7, so the
// lattice FFTs stay fast.
int smooth_extent(int n_min) {
  for (int n = n_min;; ++n) {
    int m = 2 * n + 1;
    for (int p : {3, 5, 7})
      while (m % p == 0) m /= p;
    if (m == 1) return n;
  }
}

std::vector<double> log_times(double lo, double hi, int count) {
  std::vector<double> t;
  for (int k = 0; k < count; ++k) t.push_back(lo * std::pow(hi / lo, static_cast<double>(k) / (count - 1)));
  return t;
}

double slope_of(const std::vector<double>& t, const std::vector<double>& v, double lo, double hi) {
  return fit_growth({t, v}, lo * (1 - 1e-9), hi * (1 + 1e-9)).slope;
}

double grid_sup_diff(const GridField& a, const GridField& b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a[j] - b[j]));
  return d;
}

struct Context {
  const AcceptanceOptions& opt;
  bool full() const { return opt.level == AcceptanceLevel::full; }

  // Shared lattice runs for the two growth criteria, keyed by (data, sign).
  struct LatticeGrowthRun {
    std::string label;
    int sign;
    double slope;
    double mass_ratio;
    std::optional<double> quartic_ratio;
  };
  std::optional<std::vector<LatticeGrowthRun>> growth;
};

constexpr double kWindowTimes[] = {10.0, 20.0, 50.0, 100.0};

Context::LatticeGrowthRun lattice_growth_run(const std::string& label, const InitialData& data, int sign, double p,
                                             bool windows) {
  const double T = 200.0;
  LatticeModel model{sign, p, smooth_extent(100 + 400 + 64), 0.01, true};
  LatticeRunOptions o;
  o.t_final = T;
  o.sample_times = log_times(10.0, T, 48);
  if (windows) o.window_times.assign(std::begin(kWindowTimes), std::end(kWindowTimes));
  o.observation_radius = 100;
  const auto res = run_lattice(make_initial_lattice(data, model.extent), model, o);
  std::vector<double> t, v;
  for (const auto& r : res.records) {
    t.push_back(r.t);
    v.push_back(r.sup_abs);
  }
  Context::LatticeGrowthRun out{label, sign, slope_of(t, v, 10.0, T), 0.0, std::nullopt};
  if (windows) {
    double lo = INFINITY, hi = 0.0, qlo = INFINITY, qhi = 0.0;
    for (const auto& w : res.windows) {
      lo = std::min(lo, w.mass_avg);
      hi = std::max(hi, w.mass_avg);
      if (w.quartic_avg) {
        qlo = std::min(qlo, *w.quartic_avg);
        qhi = std::max(qhi, *w.quartic_avg);
      }
    }
    out.mass_ratio = hi / lo;
    if (sign > 0) out.quartic_ratio = qhi / qlo;
  }
  return out;
}

const std::vector<Context::LatticeGrowthRun>& growth_runs(Context& ctx) {
  if (ctx.growth) return *ctx.growth;
  struct Case {
    std::string label;
    InitialData data;
    int sign;
  };
  std::vector<Case> cases;
  for (int sign : {+1, -1}) {
    const std::string s = sign > 0 ? "+" : "-";
    cases.push_back({"constant" + s, InitialData::constant(1.0), sign});
    cases.push_back({"random_phase" + s, InitialData::random_phase(1.0, ctx.opt.seed), sign});
    cases.push_back({"periodic" + s, InitialData::periodic({0.7, 0.5}, {0.9, 2.3}), sign});
  }
  std::vector<Context::LatticeGrowthRun> runs(cases.size());
  parallel_for(cases.size(), ctx.opt.workers, [&](std::size_t i) {
    runs[i] = lattice_growth_run(cases[i].label, cases[i].data, cases[i].sign, 2.0, true);
  });
  ctx.growth = std::move(runs);
  return *ctx.growth;
}

// 1. split-step mass conservation
void c01(Context& ctx, Detail& d) {
  LatticeModel m{+1, 2.0, 4096, 0.01, true};
  auto psi = make_initial_lattice(InitialData::random_phase(1.0, ctx.opt.seed), m.extent);
  const double m0 = global_mass(psi);
  const auto start = Clock::now();
  SplitStepper st(m);
  st.advance(psi, 10000);
  const double secs = seconds_since(start);
  d.le("mass drift", std::abs(global_mass(psi) - m0) / m0, 1e-12);
  d.le("runtime s", secs, 30.0);
}

// 2. free split-step against the Bessel kernel
void c02(Context&, Detail& d) {
  const double T = 50.0;
  const int hw = recommended_half_width(T);
  const auto start = Clock::now();
  LatticeModel m{+1, 2.0, smooth_extent(hw + 64), 0.05, false};
  auto psi = make_initial_lattice(InitialData::delta(1.0), m.extent);
  SplitStepper st(m);
  st.advance(psi, std::lround(T / m.dt));
  const auto k = kernel_table(T, hw);
  double err = 0.0;
  for (long x = -m.extent; x <= m.extent; ++x) err = std::max(err, std::abs(psi.at(x) - (std::abs(x) <= hw ? k(x) : 0.0)));
  const double secs = seconds_since(start);
  d.le("sup error", err, 1e-8);
  d.le("runtime s", secs, 10.0);
}

// 3. kernel recurrence against quadrature, and kernel unitarity
void c03(Context& ctx, Detail& d) {
  double err_h = 0.0, err_l = 0.0, unit = 0.0;
  for (double t : {10.0, 50.0, 200.0}) {
    for (auto kind : {KernelKind::hopping, KernelKind::lattice}) {
      auto table = kernel_table(t, recommended_half_width(t, kind), kind);
      if (ctx.opt.kernel_hook) ctx.opt.kernel_hook(table);
      unit = std::max(unit, std::abs(table.mass() - 1.0));
      const double x = kind == KernelKind::hopping ? t : 2.0 * t;
      const int reach = std::min(table.half_width, static_cast<int>(std::ceil(x)) + 40);
      const cplx phase = kind == KernelKind::hopping ? cplx(1.0) : std::polar(1.0, -2.0 * t);
      std::vector<double> errs(static_cast<std::size_t>(2 * reach + 1));
      parallel_for(errs.size(), ctx.opt.workers, [&](std::size_t i) {
        const int n = static_cast<int>(i) - reach;
        errs[i] = std::abs(table(n) - phase * kernel_integral(x, n));
      });
      double& e = kind == KernelKind::hopping ? err_h : err_l;
      e = std::max(e, *std::max_element(errs.begin(), errs.end()));
    }
  }
  d.le("hopping kernel vs quadrature", err_h, 1e-12);
  d.le("lattice kernel vs quadrature", err_l, 1e-12);
  d.le("|sum |K_n|^2 - 1|", unit, 1e-12);
}

// 4. weighted local mass growth
void c04(Context& ctx, Detail& d) {
  const int samples = 100;
  const double t0 = 50.0, R = 1.0;
  const double bound = std::pow(2.0, 3.0 / R) * (1.0 + 1e-6);
  std::vector<double> ratio(samples);
  parallel_for(samples, ctx.opt.workers, [&](std::size_t i) {
    Rng seeds = Rng::stream(ctx.opt.seed, i);
    LatticeModel m{+1, 2.0, smooth_extent(512), 0.01, true};
    LatticeRunOptions o;
    o.t_final = t0;
    o.weight = WeightProfile(0, R, t0);
    o.observation_radius = 0;
    const auto res = run_lattice(make_initial_lattice(InitialData::random_phase(1.0, seeds.next()), m.extent), m, o);
    ratio[i] = res.records.back().local_mass / res.records.front().local_mass;
  });
  d.le("max M(t0)/M(0) over 100 samples", *std::max_element(ratio.begin(), ratio.end()), bound);
}

// 5. sup-norm growth and windowed mass, both signs
void c05(Context& ctx, Detail& d) {
  const auto& runs = growth_runs(ctx);
  double slope = -INFINITY, mass = 0.0;
  std::string worst_s, worst_m;
  for (const auto& r : runs) {
    if (r.slope > slope) slope = r.slope, worst_s = r.label;
    if (r.mass_ratio > mass) mass = r.mass_ratio, worst_m = r.label;
  }
  d.le("max sup slope on [10,200] (" + worst_s + ")", slope, 0.55);
  d.le("max windowed mass spread (" + worst_m + ")", mass, 4.0);

  // Not gated: the |psi|^p psi slopes against 1/(p+2) + 0.05.
  std::vector<double> p_slope(3);
  const double ps[] = {1.0, 2.0, 4.0};
  parallel_for(3, ctx.opt.workers, [&](std::size_t i) {
    p_slope[i] = lattice_growth_run("p", InitialData::random_phase(1.0, ctx.opt.seed), +1, ps[i], false).slope;
  });
  std::string note = "info: p-slopes";
  for (int i = 0; i < 3; ++i) note += " p=" + g(ps[i]) + ":" + g(p_slope[i]) + "/" + g(1.0 / (ps[i] + 2) + 0.05);
  d.note(note);
}

// 6. defocusing quartic average and sup growth
void c06(Context& ctx, Detail& d) {
  double slope = -INFINITY, quartic = 0.0;
  for (const auto& r : growth_runs(ctx)) {
    if (r.sign < 0) continue;
    slope = std::max(slope, r.slope);
    quartic = std::max(quartic, *r.quartic_ratio);
  }
  d.le("max windowed quartic spread", quartic, 4.0);
  d.le("max defocusing sup slope", slope, 0.30);
}

// 7. adversarial lower bound, pairing, random ensemble
void c07(Context& ctx, Detail& d) {
  std::vector<double> times{25.0, 100.0, 400.0};
  if (ctx.full()) times.push_back(800.0);
  std::vector<double> ratio(times.size());
  std::vector<char> paired(times.size());
  parallel_for(times.size(), ctx.opt.workers, [&](std::size_t i) {
    const double t0 = times[i];
    LatticeModel m{+1, 2.0, smooth_extent(recommended_half_width(t0) + 64), 0.01, false};
    auto psi = adversarial_data(t0, m.extent);
    SplitStepper st(m);
    st.advance(psi, std::lround(t0 / m.dt));
    ratio[i] = std::abs(psi.at(0)) / std::sqrt(t0);
    paired[i] = pairing_check(t0);
  });
  for (std::size_t i = 0; i < times.size(); ++i) {
    d.ge("|psi(t0,0)|/sqrt(t0) at t0=" + g(times[i]), ratio[i], 0.3);
    d.truth("pairing_check(" + g(times[i]) + ")", paired[i] != 0);
  }
  const double e = random_ensemble_second_moment(100.0, 1.0, 200, ctx.opt.seed, ctx.opt.workers);
  d.le("|E|psi(100,0)|^2 - 1|", std::abs(e - 1.0), 4.0 / std::sqrt(200.0));
}

// 8. continuum free flow against the comb closed form
void c08(Context& ctx, Detail& d) {
  const double L = 512.0;
  const std::size_t M = 4096;
  const auto a = CombCoefficients::random_phase(-20, 20, ctx.opt.seed);
  const auto u0 = make_initial_grid(InitialData::gaussian_comb(a), L, M);
  double err = 0.0;
  for (double t : {0.5, 1.0, 2.0, 3.0, 4.0, 5.0}) {
    const auto u = linear_propagate(u0, t);
    for (std::size_t j = 0; j < M; ++j) err = std::max(err, std::abs(u[j] - comb_oracle(a, t, u.position(j))));
  }
  d.le("sup error for t <= 5", err, 1e-8);
}

ContinuumModel standard_continuum(double dt) {
  ContinuumModel m;
  m.mollifier = Mollifier::gaussian(1.0);
  m.box_length = 64.0;
  m.grid_size = 256;
  m.dt = dt;
  m.sign = +1;
  return m;
}

GridField standard_comb(std::uint64_t seed, double amplitude) {
  return make_initial_grid(InitialData::gaussian_comb(CombCoefficients::random_phase(-40, 40, seed), amplitude), 64.0, 256);
}

// 9. conservation and time-step convergence
void c09(Context& ctx, Detail& d) {
  const auto u0 = standard_comb(ctx.opt.seed, 1.0);
  ContinuumRunOptions o;
  o.t_final = 10.0;
  for (int k = 1; k <= 20; ++k) o.sample_times.push_back(0.5 * k);
  o.keep_snapshots = true;
  const auto res = run_continuum(u0, standard_continuum(1e-3), o);
  double dm = 0.0, de = 0.0;
  const auto& r0 = res.records.front();
  for (const auto& r : res.records) {
    dm = std::max(dm, std::abs(r.mass - r0.mass) / r0.mass);
    de = std::max(de, std::abs(r.energy - r0.energy) / std::abs(r0.energy));
  }
  d.le("mass drift", dm, 1e-8);
  d.le("energy drift", de, 1e-6);

  const GridField& ref = res.snapshots.back();
  auto terminal = [&](double dt) {
    GridField u = u0;
    LawsonStepper st(standard_continuum(dt));
    st.advance(u, std::lround(10.0 / dt));
    return grid_sup_diff(u, ref);
  };
  const double e1 = terminal(0.02), e2 = terminal(0.01);
  d.note("terminal error dt=0.02: " + g(e1) + ", dt=0.01: " + g(e2) + " (reference dt=1e-3)");
  d.ge("dt-halving improvement", e1 / e2, 12.0);
}

// 10. Picard fixed point against Lawson RK4
void c10(Context& ctx, Detail& d) {
  const auto u0 = standard_comb(ctx.opt.seed, 0.5);
  const double T = 0.1;
  const int nodes = 200;
  const auto model = standard_continuum(T / nodes);
  const auto pic = picard_solve(u0, T, model, 1e-8, 8, nodes);
  GridField u = u0;
  LawsonStepper st(model);
  double diff = 0.0;
  for (std::size_t n = 0; n < pic.trajectory.size(); ++n) {
    if (n > 0) st.step(u);
    diff = std::max(diff, grid_sup_diff(u, pic.trajectory[n]));
  }
  d.le("sup |Picard - RK4| on [0,0.1]", diff, 1e-6);
  d.le("iterations at tol 1e-8", pic.iterations, 8);
}

// 11. local energy bootstrap window
void c11(Context& ctx, Detail& d) {
  const double R = 256.0, L = 2048.0;
  const double T = std::pow(R, 1.0 / 8.0);
  ContinuumModel m = standard_continuum(1e-3);
  m.box_length = L;
  m.grid_size = 8192;
  const long half = static_cast<long>(L / 2) + 8;
  const auto u0 = make_initial_grid(InitialData::gaussian_comb(CombCoefficients::random_phase(-half, half, ctx.opt.seed), 1.0), L, m.grid_size);
  ContinuumRunOptions o;
  o.t_final = T;
  o.sample_times = log_times(0.1, T, 32);
  for (double x0 : {-256.0, 0.0, 256.0}) o.probes.push_back({x0, R});
  const auto res = run_continuum(u0, m, o);
  const auto rep = bootstrap_monitor(res.records, o.probes, R, 2.0);
  d.le("sup probe ratio E(x0,t)/E_max(0)", rep.max_ratio, 2.0);
  std::vector<double> t, v;
  for (const auto& r : res.records) {
    t.push_back(r.t);
    v.push_back(r.sup_abs);
  }
  d.le("sup-norm envelope exponent on [0.1,2]", slope_of(t, v, 0.1, T), 8.0 / 3.0);
}

WaveState random_wave(double L, std::size_t m, std::uint64_t seed) {
  const long half = static_cast<long>(L / 2) + 8;
  auto c0 = CombCoefficients::random_uniform(-half, half, seed);
  auto c1 = CombCoefficients::random_uniform(-half, half, seed ^ 0x5bd1e995u);
  return make_wave_state(make_initial_grid(InitialData::gaussian_comb(c0), L, m),
                         make_initial_grid(InitialData::gaussian_comb(c1), L, m));
}

// 12. cubic wave equation
void c12(Context& ctx, Detail& d) {
  double drift = 0.0, cone = 0.0;
  std::vector<double> slope1, slope2;
  const std::uint64_t seeds[] = {ctx.opt.seed, ctx.opt.seed + 1, ctx.opt.seed + 2};
  // tasks: 0 energy, 1 cone, 2..7 slopes (p, seed)
  std::vector<double> out(8);
  parallel_for(8, ctx.opt.workers, [&](std::size_t i) {
    if (i == 0) {
      const double L = 16.0;
      const std::size_t m = 4096;
      WaveModel w{L, m, L / m / 4.0, 1, true};
      std::vector<double> st;
      for (int k = 1; k <= 50; ++k) st.push_back(k);
      const auto rec = run_wave(random_wave(L, m, ctx.opt.seed), w, 50.0, st);
      double dr = 0.0;
      for (const auto& r : rec) dr = std::max(dr, std::abs(r.energy - rec[0].energy) / rec[0].energy);
      out[i] = dr;
    } else if (i == 1) {
      const double L = 128.0;
      const std::size_t m = 8192;
      const auto s = random_wave(L, m, ctx.opt.seed);
      out[i] = nlw_cone_test(s.u, s.v, 0.0, 20.0, WaveModel{L, m, L / m, 1, true});
    } else {
      const int p = i < 5 ? 1 : 2;
      const double L = 256.0;
      const std::size_t m = 2048;
      const auto rec = run_wave(random_wave(L, m, seeds[(i - 2) % 3]), WaveModel{L, m, 1.0 / 32.0, p, true}, 100.0,
                                log_times(10.0, 100.0, 32));
      std::vector<double> t, v;
      for (const auto& r : rec) {
        t.push_back(r.t);
        v.push_back(r.sup_abs);
      }
      out[i] = slope_of(t, v, 10.0, 100.0);
    }
  });
  drift = out[0];
  cone = out[1];
  d.le("energy drift on [0,50] at dt=h/4", drift, 1e-6);
  d.le("cone difference, T=20", cone, 1e-10);
  d.le("max sup slope p=1 on [10,100]", std::max({out[2], out[3], out[4]}), 0.38);
  d.le("max sup slope p=2", std::max({out[5], out[6], out[7]}), 1.0 / 4.0 + 0.05);
}

// 13. Newton iteration
void c13(Context& ctx, Detail& d) {
  const double L = 2.0 * std::numbers::pi;
  GridField psi0(L, 64);
  for (std::size_t j = 0; j < 64; ++j) psi0[j] = 0.1 * std::cos(psi0.position(j));
  NewtonOptions opt;
  opt.dt = 1e-3;
  opt.tol = 1e-10;
  opt.max_iter = 5;
  const auto res = newton_iterate(psi0, 0.3, opt);
  d.le("sup |R_n| after " + std::to_string(res.report.size()) + " iterations", res.report.back().sup_residual, 1e-10);
  double tele = 0.0, sym = 0.0, init = 0.0;
  for (const auto& r : res.report) {
    tele = std::max(tele, r.telescoping);
    sym = std::max(sym, r.symmetry_defect);
    init = std::max(init, r.initial_defect);
  }
  d.note("telescoping defect " + g(tele) + ", conjugation defect " + g(sym) + ", xi(0) " + g(init));

  // quadratic law from the untruncated sequence
  NewtonOptions more = opt;
  more.tol = 0.0;
  const auto seq = newton_iterate(psi0, 0.3, more);
  std::vector<double> x, y;
  for (std::size_t i = 0; i + 1 < seq.report.size(); ++i)
    if (seq.report[i].eps <= 1e-3 && seq.report[i + 1].eps > 0.0) {
      x.push_back(std::log(seq.report[i].eps));
      y.push_back(std::log(seq.report[i + 1].eps));
    }
  double slope = NAN;
  if (x.size() >= 2) {
    double mx = 0, my = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / x.size(), my += y[i] / x.size();
    for (std::size_t i = 0; i < x.size(); ++i) sxx += (x[i] - mx) * (x[i] - mx), sxy += (x[i] - mx) * (y[i] - my);
    slope = sxy / sxx;
  }
  d.ge("fitted log eps_{n+1} vs log eps_n slope (" + std::to_string(x.size()) + " pairs)", slope, 1.8);

  ContinuumModel cm;
  cm.mollifier = Mollifier::identity();
  cm.box_length = L;
  cm.grid_size = 64;
  cm.dt = 1e-4;
  LawsonStepper st(cm);
  GridField u = psi0;
  double diff = 0.0;
  for (std::size_t j = 0; j < res.solution.size(); ++j) {
    if (j > 0) st.advance(u, 10);
    diff = std::max(diff, grid_sup_diff(u, res.solution.frames[j]));
  }
  d.le("sup |Newton - fine integration|", diff, 1e-8);

  Rng rng(ctx.opt.seed);
  int violations = 0;
  for (int s = 0; s < 100; ++s) {
    const int band = 1 + static_cast<int>(rng.uniform() * 24);
    std::vector<cplx> amp(2 * band + 1);
    for (auto& a : amp) a = cplx(rng.normal(), rng.normal());
    GridField f(L, 64);
    for (std::size_t j = 0; j < 64; ++j)
      for (int k = -band; k <= band; ++k) f[j] += amp[k + band] * std::polar(1.0, k * f.position(j));
    const double r = 0.5 + rng.uniform(), delta = 0.01 + 0.49 * rng.uniform();
    const double base = majorant_norm(f, {r, 0});
    for (int p = 0; p <= 3; ++p) {
      const double cp = (p + 1) * (p == 0 ? 1.0 : std::pow(p / std::numbers::e, p));
      if (majorant_norm(f, {r - delta, p}) > cp * std::pow(delta, -p) * base * (1.0 + 1e-12)) ++violations;
    }
  }
  d.le("majorant derivative-loss violations in 100 fields", violations, 0);
}

std::map<std::string, std::string> csv_files(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file() && e.path().extension() == ".csv") {
      std::ifstream f(e.path(), std::ios::binary);
      std::stringstream ss;
      ss << f.rdbuf();
      out[fs::relative(e.path(), root).string()] = ss.str();
    }
  return out;
}

// 14. byte-identical output regardless of worker count
void c14(Context& ctx, Detail& d) {
  fs::path root = ctx.opt.scratch_dir.empty() ? fs::temp_directory_path() / ("bnls-accept-" + std::to_string(ctx.opt.seed))
                                              : fs::path(ctx.opt.scratch_dir);
  fs::remove_all(root / "determinism");
  ExperimentConfig lat;
  lat.engine = Engine::lattice;
  lat.data.kind = DataKind::random_phase;
  lat.t_final = 5.0;
  lat.lattice.extent = 200;
  lat.output.samples = 20;
  lat.output.plot = false;
  lat.sweep.seeds = {ctx.opt.seed, ctx.opt.seed + 1, ctx.opt.seed + 2};
  ExperimentConfig con;
  con.engine = Engine::continuum;
  con.data.kind = DataKind::gaussian_comb;
  con.data.comb = "random_phase";
  con.t_final = 0.5;
  con.continuum.probes = {0.0};
  con.output.samples = 10;
  con.output.plot = false;
  con.sweep.seeds = lat.sweep.seeds;
  const unsigned many = std::max(2u, ctx.opt.workers);
  for (const auto& [name, cfg] : {std::pair{"lattice", lat}, std::pair{"continuum", con}}) {
    (void)run_sweep(cfg, (root / "determinism" / "a" / name).string(), 1);
    (void)run_sweep(cfg, (root / "determinism" / "b" / name).string(), many);
  }
  const auto a = csv_files(root / "determinism" / "a"), b = csv_files(root / "determinism" / "b");
  d.truth("CSV sets identical (" + std::to_string(a.size()) + " files, workers 1 vs " + std::to_string(many) + ")",
          !a.empty() && a == b);
  const double e1 = random_ensemble_second_moment(25.0, 1.0, 100, ctx.opt.seed, 1);
  const double e2 = random_ensemble_second_moment(25.0, 1.0, 100, ctx.opt.seed, many);
  d.truth("ensemble estimate bitwise equal across worker counts", e1 == e2);
  fs::remove_all(root / "determinism");
  if (ctx.opt.scratch_dir.empty()) fs::remove_all(root);
}

using CriterionFn = void (*)(Context&, Detail&);
constexpr CriterionFn kCriteria[] = {c01, c02, c03, c04, c05, c06, c07, c08, c09, c10, c11, c12, c13, c14};

} // namespace

AcceptanceLevel acceptance_level_from_string(const std::string& s) {
  if (s == "quick") return AcceptanceLevel::quick;
  if (s == "full") return AcceptanceLevel::full;
  throw ConfigError("--level: expected quick or full, got '" + s + "'");
}

const std::vector<std::string>& criterion_names() {
  static const std::vector<std::string> names = {
      "lattice unitarity",        "linear equivalence",      "kernel oracle",          "local mass growth",
      "lattice sup growth",       "defocusing quartic",      "adversarial lower bound", "continuum linear oracle",
      "regularized conservation", "Picard oracle",           "bootstrap monitor",      "wave equation",
      "Newton iteration",         "determinism"};
  return names;
}

std::vector<CriterionResult> acceptance_suite(const AcceptanceOptions& options,
                                              const std::function<void(const CriterionResult&)>& on_result) {
  Context ctx{options, std::nullopt};
  std::vector<CriterionResult> out;
  for (int id = 1; id <= 14; ++id) {
    if (!options.only.empty() && std::find(options.only.begin(), options.only.end(), id) == options.only.end()) continue;
    CriterionResult r;
    r.id = id;
    r.name = criterion_names()[id - 1];
    const auto start = Clock::now();
    Detail d;
    try {
      kCriteria[id - 1](ctx, d);
      r.pass = d.ok();
      r.detail = d.str();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = (d.str().empty() ? "" : d.str() + "; ") + "aborted: " + e.what();
    }
    r.seconds = seconds_since(start);
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::string format_result_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "%s C%02d %-24s (%6.1f s) ", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds);
  return head + r.detail;
}

std::string acceptance_report_json(const std::vector<CriterionResult>& results, AcceptanceLevel level) {
  nlohmann::json j;
  j["level"] = level == AcceptanceLevel::quick ? "quick" : "full";
  j["code_version"] = code_version();
  bool all = true;
  for (const auto& r : results) {
    j["criteria"].push_back({{"id", r.id}, {"name", r.name}, {"pass", r.pass}, {"detail", r.detail}, {"seconds", r.seconds}});
    all = all && r.pass;
  }
  j["pass"] = all;
  return j.dump(2);
}

} // namespace bnls
