#include "bnls/continuum.hpp"

#include "bnls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bnls {
namespace {

constexpr double kPi = std::numbers::pi;
const double kCombCut2 = 18.0 * std::log(10.0);

std::vector<double> filter_for(std::size_t m, double box_length, const Mollifier& phi) {
  const auto k = wavenumbers(m, box_length);
  const double cut = dealias_cutoff(m, box_length);
  std::vector<double> f(m);
  for (std::size_t i = 0; i < m; ++i) f[i] = std::abs(k[i]) <= cut ? phi.transfer(k[i]) : 0.0;
  return f;
}

std::vector<cplx> forward(const GridField& u) {
  std::vector<cplx> c(u.size());
  fft_plan(u.size()).forward(u.values().data(), c.data());
  return c;
}

GridField backward(std::vector<cplx> c, double box_length) {
  const double inv = 1.0 / static_cast<double>(c.size());
  fft_plan(c.size()).backward(c.data(), c.data());
  for (auto& z : c) z *= inv;
  return GridField(box_length, std::move(c));
}

void check_finite(const std::vector<cplx>& v, double t) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      std::ostringstream os;
      os << "continuum run overflowed at t = " << t;
      throw NumericalError(os.str());
    }
}

// Physical samples of P phi * u from raw coefficients.
std::vector<cplx> filtered_samples(const std::vector<cplx>& coeffs, const std::vector<double>& filter) {
  const std::size_t m = coeffs.size();
  std::vector<cplx> v(m);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) v[i] = coeffs[i] * (filter[i] * inv);
  fft_plan(m).backward(v.data(), v.data());
  return v;
}

std::vector<cplx> derivative_samples(const std::vector<cplx>& coeffs, double box_length) {
  const std::size_t m = coeffs.size();
  const auto k = wavenumbers(m, box_length);
  std::vector<cplx> d(m);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) d[i] = cplx(0.0, k[i] * inv) * coeffs[i];
  if (m % 2 == 0) d[m / 2] = 0.0;  // Nyquist mode has no odd derivative on the grid
  fft_plan(m).backward(d.data(), d.data());
  return d;
}

std::vector<long> stop_steps(double t_final, double dt, const std::vector<double>& sample_times) {
  const long total = std::lround(t_final / dt);
  std::vector<long> steps{0, total};
  for (double t : sample_times)
    if (t >= 0.0 && t <= t_final + 1e-12) steps.push_back(std::lround(t / dt));
  std::sort(steps.begin(), steps.end());
  steps.erase(std::unique(steps.begin(), steps.end()), steps.end());
  return steps;
}

} // namespace

double dealias_cutoff(std::size_t m, double box_length) {
  return (2.0 / 3.0) * kPi * static_cast<double>(m) / box_length;
}

void ContinuumModel::validate() const {
  if (!(box_length > 0.0) || !std::isfinite(box_length)) throw std::invalid_argument("continuum model: box_length must be positive");
  if (!is_power_of_two(grid_size) || grid_size < 8) throw std::invalid_argument("continuum model: grid_size must be a power of two >= 8");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("continuum model: dt must be positive");
  if (sign != 1 && sign != -1) throw std::invalid_argument("continuum model: sign must be +1 or -1");
}

double ContinuumModel::dealias_cutoff() const { return bnls::dealias_cutoff(grid_size, box_length); }

GridField mollify(const GridField& u, const Mollifier& phi) {
  auto c = forward(u);
  const auto k = wavenumbers(u.size(), u.box_length());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= phi.transfer(k[i]);
  return backward(std::move(c), u.box_length());
}

GridField regularized_nonlinearity(const GridField& u, const Mollifier& phi) {
  const std::size_t m = u.size();
  const auto filter = filter_for(m, u.box_length(), phi);
  auto v = filtered_samples(forward(u), filter);
  for (auto& z : v) z *= std::norm(z);
  fft_plan(m).forward(v.data(), v.data());
  for (std::size_t i = 0; i < m; ++i) v[i] *= filter[i];
  return backward(std::move(v), u.box_length());
}

GridField linear_propagate(const GridField& u0, double t) {
  auto c = forward(u0);
  const auto k = wavenumbers(u0.size(), u0.box_length());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= std::polar(1.0, -k[i] * k[i] * t);
  return backward(std::move(c), u0.box_length());
}

cplx comb_oracle(const CombCoefficients& a, double t, double x) {
  if (a.values.empty()) return {};
  const cplx d = cplx(1.0, 4.0 * t);
  const cplx inv = 1.0 / d;
  const cplx pre = 1.0 / std::sqrt(d);
  // |e^{-s^2/d}| = e^{-s^2/(1+16t^2)}
  const double reach = std::sqrt(kCombCut2 * (1.0 + 16.0 * t * t));
  const long lo = std::max(a.first, static_cast<long>(std::ceil(x - reach)));
  const long hi = std::min(a.last(), static_cast<long>(std::floor(x + reach)));
  cplx sum{};
  for (long j = lo; j <= hi; ++j) {
    const double s = x - static_cast<double>(j);
    sum += a(j) * std::exp(-s * s * inv);
  }
  return pre * sum;
}

double global_mass(const GridField& u) {
  double s = 0.0;
  for (const auto& z : u.values()) s += std::norm(z);
  return s * u.spacing();
}

double global_energy(const GridField& u, const Mollifier& phi, int sign) {
  const std::size_t m = u.size();
  const auto c = forward(u);
  const auto k = wavenumbers(m, u.box_length());
  // Parseval for the gradient term
  double grad = 0.0;
  for (std::size_t i = 0; i < m; ++i) grad += k[i] * k[i] * std::norm(c[i]);
  grad *= u.box_length() / (static_cast<double>(m) * static_cast<double>(m));
  const auto v = filtered_samples(c, filter_for(m, u.box_length(), phi));
  double quart = 0.0;
  for (const auto& z : v) quart += std::norm(z) * std::norm(z);
  quart *= u.spacing();
  return 0.5 * grad + 0.25 * static_cast<double>(sign) * quart;
}

LawsonStepper::LawsonStepper(const ContinuumModel& model) : model_(model) {
  model_.validate();
  const std::size_t m = model_.grid_size;
  const auto k = wavenumbers(m, model_.box_length);
  half_.resize(m);
  for (std::size_t i = 0; i < m; ++i) half_[i] = std::polar(1.0, -0.5 * k[i] * k[i] * model_.dt);
  filter_ = filter_for(m, model_.box_length, model_.mollifier);
  for (auto* v : {&c_, &a_, &k1_, &k2_, &k3_, &k4_, &phys_}) v->resize(m);
}

// out = -i sign FFT(N(u)) for raw coefficients `coeffs`
void LawsonStepper::rhs(const std::vector<cplx>& coeffs, std::vector<cplx>& out) {
  const std::size_t m = coeffs.size();
  if (!model_.nonlinear) {
    std::fill(out.begin(), out.end(), cplx{});
    return;
  }
  auto& plan = fft_plan(m);
  const double inv = 1.0 / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) phys_[i] = coeffs[i] * (filter_[i] * inv);
  plan.backward(phys_.data(), phys_.data());
  for (auto& z : phys_) z *= std::norm(z);
  plan.forward(phys_.data(), out.data());
  const cplx factor(0.0, -static_cast<double>(model_.sign));
  for (std::size_t i = 0; i < m; ++i) out[i] *= factor * filter_[i];
}

void LawsonStepper::step_coeffs() {
  const std::size_t m = c_.size();
  const double dt = model_.dt;
  rhs(c_, k1_);
  for (std::size_t i = 0; i < m; ++i) a_[i] = half_[i] * (c_[i] + 0.5 * dt * k1_[i]);
  rhs(a_, k2_);
  for (std::size_t i = 0; i < m; ++i) a_[i] = half_[i] * c_[i] + 0.5 * dt * k2_[i];
  rhs(a_, k3_);
  for (std::size_t i = 0; i < m; ++i) a_[i] = half_[i] * (half_[i] * c_[i] + dt * k3_[i]);
  rhs(a_, k4_);
  for (std::size_t i = 0; i < m; ++i) {
    const cplx e = half_[i];
    c_[i] = e * e * c_[i] + (dt / 6.0) * (e * e * k1_[i] + 2.0 * e * (k2_[i] + k3_[i]) + k4_[i]);
  }
}

void LawsonStepper::step(GridField& u) { advance(u, 1); }

void LawsonStepper::advance(GridField& u, long steps) {
  if (u.size() != model_.grid_size || u.box_length() != model_.box_length)
    throw std::invalid_argument("LawsonStepper: grid does not match model");
  if (steps <= 0) return;
  auto& plan = fft_plan(c_.size());
  plan.forward(u.values().data(), c_.data());
  for (long s = 0; s < steps; ++s) step_coeffs();
  check_finite(c_, static_cast<double>(steps) * model_.dt);
  const double inv = 1.0 / static_cast<double>(c_.size());
  plan.backward(c_.data(), u.values().data());
  for (auto& z : u.values()) z *= inv;
}

GridField step_lawson_rk4(const GridField& u, const ContinuumModel& model) {
  LawsonStepper st(model);
  GridField out = u;
  st.step(out);
  return out;
}

PicardResult picard_solve(const GridField& u0, double t_final, const ContinuumModel& model, double tol, int max_iter,
                          int nodes) {
  model.validate();
  if (u0.size() != model.grid_size || u0.box_length() != model.box_length)
    throw std::invalid_argument("picard_solve: grid does not match model");
  if (!(t_final > 0.0)) throw std::invalid_argument("picard_solve: T must be positive");
  if (!(tol > 0.0)) throw std::invalid_argument("picard_solve: tol must be positive");
  const int nt = nodes > 0 ? nodes : static_cast<int>(std::ceil(t_final / model.dt - 1e-9));
  if (nt < 3) throw std::invalid_argument("picard_solve: need at least 3 time intervals");
  const double h = t_final / nt;
  const std::size_t m = model.grid_size;
  const auto k = wavenumbers(m, model.box_length);
  const auto filter = filter_for(m, model.box_length, model.mollifier);
  auto& plan = fft_plan(m);
  const double inv = 1.0 / static_cast<double>(m);

  std::vector<double> times(static_cast<std::size_t>(nt) + 1);
  for (int n = 0; n <= nt; ++n) times[static_cast<std::size_t>(n)] = n * h;
  auto prop = [&](double t) {
    std::vector<cplx> p(m);
    for (std::size_t i = 0; i < m; ++i) p[i] = std::polar(1.0, -k[i] * k[i] * t);
    return p;
  };
  std::vector<std::vector<cplx>> phase(times.size());
  for (std::size_t n = 0; n < times.size(); ++n) phase[n] = prop(times[n]);

  std::vector<cplx> c0(m);
  plan.forward(u0.values().data(), c0.data());
  std::vector<std::vector<cplx>> traj(times.size(), std::vector<cplx>(m));
  for (std::size_t n = 0; n < times.size(); ++n)
    for (std::size_t i = 0; i < m; ++i) traj[n][i] = phase[n][i] * c0[i];

  PicardResult result;
  result.times = times;
  std::vector<std::vector<cplx>> g(times.size(), std::vector<cplx>(m));
  std::vector<cplx> work(m), acc(m), diff(m);
  double prev = INFINITY, prev2 = INFINITY;
  for (int iter = 1; iter <= max_iter; ++iter) {
    // integrand e^{+i k^2 t} N^(u(t)) in the interaction picture
    for (std::size_t n = 0; n < times.size(); ++n) {
      if (!model.nonlinear) {
        std::fill(g[n].begin(), g[n].end(), cplx{});
        continue;
      }
      for (std::size_t i = 0; i < m; ++i) work[i] = traj[n][i] * (filter[i] * inv);
      plan.backward(work.data(), work.data());
      for (auto& z : work) z *= std::norm(z);
      plan.forward(work.data(), work.data());
      for (std::size_t i = 0; i < m; ++i) g[n][i] = std::conj(phase[n][i]) * filter[i] * work[i];
    }
    std::fill(acc.begin(), acc.end(), cplx{});
    const cplx factor(0.0, -static_cast<double>(model.sign));
    double sup = 0.0;
    for (int n = 0; n <= nt; ++n) {
      if (n > 0) {
        const int j = n - 1;  // interval [t_j, t_{j+1}]
        int base;
        double w[4];
        if (j == 0) {
          base = 0;
          w[0] = 9; w[1] = 19; w[2] = -5; w[3] = 1;
        } else if (j == nt - 1) {
          base = nt - 3;
          w[0] = 1; w[1] = -5; w[2] = 19; w[3] = 9;
        } else {
          base = j - 1;
          w[0] = -1; w[1] = 13; w[2] = 13; w[3] = -1;
        }
        for (int q = 0; q < 4; ++q) {
          const auto& gq = g[static_cast<std::size_t>(base + q)];
          const double wq = w[q] * h / 24.0;
          for (std::size_t i = 0; i < m; ++i) acc[i] += wq * gq[i];
        }
      }
      auto& un = traj[static_cast<std::size_t>(n)];
      for (std::size_t i = 0; i < m; ++i) {
        const cplx next = phase[static_cast<std::size_t>(n)][i] * (c0[i] + factor * acc[i]);
        diff[i] = (next - un[i]) * inv;
        un[i] = next;
      }
      plan.backward(diff.data(), diff.data());
      for (const auto& z : diff) sup = std::max(sup, std::abs(z));
    }
    result.iterations = iter;
    result.last_difference = sup;
    if (!std::isfinite(sup) || (sup > prev && prev > prev2)) {
      std::ostringstream os;
      os << "picard_solve: iterates are not contracting (difference " << sup << " at iteration " << iter
         << "); use a smaller T";
      throw NumericalError(os.str());
    }
    if (sup <= tol) break;
    if (iter == max_iter) {
      std::ostringstream os;
      os << "picard_solve: no convergence within " << max_iter << " iterations (difference " << sup
         << "); use a smaller T";
      throw NumericalError(os.str());
    }
    prev2 = prev;
    prev = sup;
  }
  for (auto& c : traj) {
    plan.backward(c.data(), c.data());
    for (auto& z : c) z *= inv;
    result.trajectory.emplace_back(model.box_length, std::move(c));
  }
  return result;
}

double local_energy_probe(const GridField& u, const LocalEnergyProbe& probe, const Mollifier& phi) {
  if (!(probe.r >= 1.0)) throw std::invalid_argument("local_energy_probe: R must be >= 1");
  const double l = u.box_length();
  if (probe.x0 - 2.0 * probe.r < -0.5 * l + l / 8.0 || probe.x0 + 2.0 * probe.r > 0.5 * l - l / 8.0)
    throw std::invalid_argument("local_energy_probe: probe window must stay L/8 inside the box");
  const std::size_t m = u.size();
  const auto c = forward(u);
  const auto ux = derivative_samples(c, l);
  const auto v = filtered_samples(c, filter_for(m, l, phi));
  double s = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double w = chi_eval((u.position(j) - probe.x0) / probe.r);
    if (w == 0.0) continue;
    const double q = std::norm(v[j]);
    s += w * w * (0.5 * std::norm(ux[j]) + 0.25 * q * q + 0.5 * std::norm(u[j]));
  }
  return s * u.spacing();
}

ContinuumRunResult run_continuum(const GridField& u0, const ContinuumModel& model, const ContinuumRunOptions& opts) {
  model.validate();
  if (!(opts.t_final >= 0.0)) throw std::invalid_argument("run_continuum: t_final must be >= 0");
  ContinuumRunResult result;
  LawsonStepper stepper(model);
  GridField u = u0;
  long done = 0;
  for (long stop : stop_steps(opts.t_final, model.dt, opts.sample_times)) {
    while (done < stop) {
      const long chunk = std::min<long>(stop - done, 256);
      stepper.advance(u, chunk);
      done += chunk;
    }
    ContinuumRecord rec{static_cast<double>(done) * model.dt, u.sup_abs(), global_mass(u),
                        global_energy(u, model.mollifier, model.sign), {}};
    for (const auto& p : opts.probes) rec.probes.push_back(local_energy_probe(u, p, model.mollifier));
    result.records.push_back(std::move(rec));
    if (opts.keep_snapshots) result.snapshots.push_back(u);
  }
  return result;
}

BootstrapReport bootstrap_monitor(const std::vector<ContinuumRecord>& records, const std::vector<LocalEnergyProbe>& probes,
                                  double r, double factor) {
  if (records.empty() || probes.empty()) throw std::invalid_argument("bootstrap_monitor: need records and probes");
  if (records.front().t != 0.0) throw std::invalid_argument("bootstrap_monitor: trajectory must start at t = 0");
  const double window = std::pow(r, 0.125);
  if (records.back().t < window - 1e-9) throw std::invalid_argument("bootstrap_monitor: trajectory does not cover [0, R^{1/8}]");
  BootstrapReport rep;
  for (double e : records.front().probes) rep.initial_max = std::max(rep.initial_max, e);
  double sup = 0.0;
  for (const auto& rec : records) {
    if (rec.t > window + 1e-9) break;
    if (rec.probes.size() != probes.size()) throw std::invalid_argument("bootstrap_monitor: probe count mismatch");
    for (std::size_t j = 0; j < probes.size(); ++j)
      if (rec.probes[j] > sup) {
        sup = rec.probes[j];
        rep.worst_time = rec.t;
        rep.worst_x0 = probes[j].x0;
      }
  }
  if (rep.initial_max == 0.0) {
    rep.max_ratio = 0.0;
    rep.flagged = sup > 0.0;
    rep.note = sup > 0.0 ? "initial probe energy is zero but later values are not" : "zero data: ratio 0/0 treated as pass";
    return rep;
  }
  rep.max_ratio = sup / rep.initial_max;
  rep.flagged = rep.max_ratio > factor;
  return rep;
}

} // namespace bnls
