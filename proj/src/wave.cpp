#include "bnls/wave.hpp"

#include "bnls/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bnls {
namespace {

double odd_power(double u, int p) {
  // u^{2p+1}
  const double u2 = u * u;
  double r = u;
  for (int i = 0; i < p; ++i) r *= u2;
  return r;
}

} // namespace

void WaveModel::validate() const {
  if (!(box_length > 0.0) || !std::isfinite(box_length)) throw std::invalid_argument("wave model: box_length must be positive");
  if (!is_power_of_two(grid_size) || grid_size < 8) throw std::invalid_argument("wave model: grid_size must be a power of two >= 8");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("wave model: dt must be positive");
  if (p < 0) throw std::invalid_argument("wave model: p must be >= 0");
  const double h = box_length / static_cast<double>(grid_size);
  if (dt > h * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "wave model: CFL violation, dt = " << dt << " exceeds h = " << h;
    throw std::invalid_argument(os.str());
  }
}

WaveStepper::WaveStepper(const WaveModel& model) : model_(model) {
  model_.validate();
  const std::size_t m = model_.grid_size;
  const auto k = wavenumbers(m, model_.box_length);
  cos_.resize(m);
  sin_over_k_.resize(m);
  k_sin_.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const double a = std::abs(k[i]);
    cos_[i] = std::cos(a * model_.dt);
    sin_over_k_[i] = a == 0.0 ? model_.dt : std::sin(a * model_.dt) / a;
    k_sin_[i] = a * std::sin(a * model_.dt);
  }
  uh_.resize(m);
  vh_.resize(m);
}

void WaveStepper::kick(WaveState& s, double tau) const {
  if (!model_.nonlinear) return;
  auto& u = s.u.values();
  auto& v = s.v.values();
  double stiff = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    const double f = odd_power(u[j].real(), model_.p);
    v[j] -= tau * f;
    if (u[j].real() != 0.0) stiff = std::max(stiff, f / u[j].real());
  }
  // Verlet on u'' = -w^2 u is stable only for w dt < 2, with w^2 = (2p+1) u^{2p}.
  const double w2 = (2.0 * model_.p + 1.0) * stiff;
  if (w2 * model_.dt * model_.dt >= 4.0) {
    std::ostringstream os;
    os << "wave kick unstable: local frequency " << std::sqrt(w2) << " times dt = " << model_.dt
       << " exceeds 2; reduce dt or amplitude";
    throw NumericalError(os.str());
  }
}

void WaveStepper::drift(WaveState& s) {
  auto& plan = fft_plan(uh_.size());
  plan.forward(s.u.values().data(), uh_.data());
  plan.forward(s.v.values().data(), vh_.data());
  const double inv = 1.0 / static_cast<double>(uh_.size());
  for (std::size_t i = 0; i < uh_.size(); ++i) {
    const cplx a = uh_[i], b = vh_[i];
    uh_[i] = (cos_[i] * a + sin_over_k_[i] * b) * inv;
    vh_[i] = (-k_sin_[i] * a + cos_[i] * b) * inv;
  }
  plan.backward(uh_.data(), s.u.values().data());
  plan.backward(vh_.data(), s.v.values().data());
  // data are real; drop the roundoff imaginary parts
  for (auto& z : s.u.values()) z.imag(0.0);
  for (auto& z : s.v.values()) z.imag(0.0);
}

void WaveStepper::step(WaveState& s) { advance(s, 1); }

void WaveStepper::advance(WaveState& s, long steps) {
  if (s.u.size() != model_.grid_size || s.v.size() != model_.grid_size || s.u.box_length() != model_.box_length)
    throw std::invalid_argument("WaveStepper: grid does not match model");
  const double dt = model_.dt;
  for (long n = 0; n < steps; ++n) {
    kick(s, 0.5 * dt);
    drift(s);
    kick(s, 0.5 * dt);
  }
  if (!s.u.all_finite() || !s.v.all_finite()) throw NumericalError("wave run overflowed");
}

WaveState nlw_step_leapfrog(const WaveState& s, const WaveModel& model) {
  WaveStepper st(model);
  WaveState out = s;
  st.step(out);
  return out;
}

double nlw_energy(const WaveState& s, int p) {
  const std::size_t m = s.u.size();
  std::vector<cplx> c(m);
  fft_plan(m).forward(s.u.values().data(), c.data());
  const auto k = wavenumbers(m, s.u.box_length());
  double grad = 0.0;
  for (std::size_t i = 0; i < m; ++i) grad += k[i] * k[i] * std::norm(c[i]);
  grad *= s.u.box_length() / (static_cast<double>(m) * static_cast<double>(m));
  double kin = 0.0, pot = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double v = s.v[j].real();
    const double u = s.u[j].real();
    kin += v * v;
    pot += u * odd_power(u, p);
  }
  const double h = s.u.spacing();
  return 0.5 * grad + 0.5 * kin * h + pot * h / (2.0 * p + 2.0);
}

WaveState make_wave_state(GridField u0, GridField u1) {
  if (u0.size() != u1.size() || u0.box_length() != u1.box_length()) throw std::invalid_argument("make_wave_state: grids differ");
  for (auto* f : {&u0, &u1})
    for (auto& z : f->values()) z.imag(0.0);
  return {std::move(u0), std::move(u1)};
}

double nlw_cone_test(const GridField& u0, const GridField& u1, double x0, double t_final, const WaveModel& model) {
  if (!(t_final > 0.0)) throw std::invalid_argument("nlw_cone_test: T must be positive");
  const double h = u0.spacing();
  const double idx = (x0 + 0.5 * u0.box_length()) / h;
  const long j0 = std::lround(idx);
  if (std::abs(idx - static_cast<double>(j0)) > 1e-9 || j0 < 0 || j0 >= static_cast<long>(u0.size()))
    throw std::invalid_argument("nlw_cone_test: x0 must be a grid point");
  GridField c0 = u0, c1 = u1;
  for (std::size_t j = 0; j < u0.size(); ++j) {
    const double w = chi_eval((u0.position(j) - x0) / t_final);
    c0[j] *= w;
    c1[j] *= w;
  }
  WaveState full = make_wave_state(u0, u1), cut = make_wave_state(std::move(c0), std::move(c1));
  WaveStepper a(model), b(model);
  const long steps = std::lround(t_final / model.dt);
  const auto uj = static_cast<std::size_t>(j0);
  double sup = std::abs(full.u[uj] - cut.u[uj]);
  for (long n = 0; n < steps; ++n) {
    a.step(full);
    b.step(cut);
    sup = std::max(sup, std::abs(full.u[uj] - cut.u[uj]));
  }
  return sup;
}

std::vector<WaveRecord> run_wave(const WaveState& s0, const WaveModel& model, double t_final,
                                 const std::vector<double>& sample_times) {
  const long total = std::lround(t_final / model.dt);
  std::vector<long> stops{0, total};
  for (double t : sample_times)
    if (t >= 0.0 && t <= t_final + 1e-12) stops.push_back(std::lround(t / model.dt));
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  WaveStepper st(model);
  WaveState s = s0;
  long done = 0;
  std::vector<WaveRecord> out;
  for (long stop : stops) {
    st.advance(s, stop - done);
    done = stop;
    out.push_back({static_cast<double>(done) * model.dt, s.u.sup_abs(), nlw_energy(s, model.p)});
  }
  return out;
}

} // namespace bnls
