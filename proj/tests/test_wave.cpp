#include "doctest.h"

#include "bnls/errors.hpp"
#include "bnls/wave.hpp"

#include <cmath>
#include <numbers>

using namespace bnls;

namespace {

constexpr double pi = std::numbers::pi;

GridField sampled(double L, std::size_t m, auto&& f) {
  GridField g(L, m);
  for (std::size_t j = 0; j < m; ++j) g[j] = f(g.position(j));
  return g;
}

WaveState random_state(double L, std::size_t m, std::uint64_t seed) {
  const long half = static_cast<long>(L / 2) + 4;
  auto c0 = CombCoefficients::random_uniform(-half, half, seed);
  auto c1 = CombCoefficients::random_uniform(-half, half, seed + 1);
  return make_wave_state(make_initial_grid(InitialData::gaussian_comb(c0), L, m),
                         make_initial_grid(InitialData::gaussian_comb(c1), L, m));
}

WaveModel model_for(double L, std::size_t m, double dt, bool nonlinear = true) {
  WaveModel w;
  w.box_length = L;
  w.grid_size = m;
  w.dt = dt;
  w.nonlinear = nonlinear;
  return w;
}

} // namespace

TEST_CASE("wave: zero state stays zero with zero energy") {
  auto s = make_wave_state(GridField(16.0, 64), GridField(16.0, 64));
  const auto out = nlw_step_leapfrog(s, model_for(16.0, 64, 0.125));
  CHECK(out.u.sup_abs() == 0.0);
  CHECK(out.v.sup_abs() == 0.0);
  CHECK(nlw_energy(out) == 0.0);
}

TEST_CASE("wave: CFL violation is rejected") {
  CHECK_THROWS_AS((void)WaveStepper(model_for(16.0, 64, 0.3)), std::invalid_argument);
  CHECK_NOTHROW((void)WaveStepper(model_for(16.0, 64, 0.25)));
}

TEST_CASE("wave: energy of a single mode matches the closed form") {
  const double L = 2.0 * pi, a = 0.7, b = 0.4;
  auto s = make_wave_state(sampled(L, 64, [&](double x) { return a * std::cos(x); }),
                           sampled(L, 64, [&](double x) { return b * std::sin(x); }));
  const double expect = 0.5 * a * a * pi + 0.5 * b * b * pi + 0.25 * std::pow(a, 4) * 0.75 * pi;
  CHECK(nlw_energy(s) == doctest::Approx(expect).epsilon(1e-14));
  // p = 2: 1/6 int cos^6 = (1/6)(5/16) 2 pi a^6
  const double expect2 = 0.5 * a * a * pi + 0.5 * b * b * pi + std::pow(a, 6) * 5.0 * pi / 48.0;
  CHECK(nlw_energy(s, 2) == doctest::Approx(expect2).epsilon(1e-14));
}

TEST_CASE("wave: linear standing wave is reproduced") {
  const double L = 2.0 * pi;
  const int k = 3;
  auto s = make_wave_state(sampled(L, 64, [&](double x) { return std::cos(k * x); }), GridField(L, 64));
  const auto model = model_for(L, 64, L / 64 / 2, false);
  WaveStepper st(model);
  const long steps = 400;
  st.advance(s, steps);
  const double t = steps * model.dt;
  double err = 0.0;
  for (std::size_t j = 0; j < 64; ++j) {
    const double x = s.u.position(j);
    err = std::max(err, std::abs(s.u[j].real() - std::cos(k * x) * std::cos(k * t)));
    err = std::max(err, std::abs(s.v[j].real() + k * std::cos(k * x) * std::sin(k * t)));
  }
  CHECK(err < 1e-12);
}

TEST_CASE("wave: nonlinear time stepping is second order") {
  const double L = 16.0, T = 2.0;
  const std::size_t m = 256;
  const auto s0 = random_state(L, m, 3);
  auto run = [&](double dt) {
    auto s = s0;
    WaveStepper st(model_for(L, m, dt));
    st.advance(s, std::lround(T / dt));
    return s;
  };
  const auto ref = run(1.0 / 512);
  auto diff = [&](const WaveState& a) {
    double e = 0.0;
    for (std::size_t j = 0; j < m; ++j) e = std::max(e, std::abs(a.u[j] - ref.u[j]));
    return e;
  };
  const double e1 = diff(run(1.0 / 32)), e2 = diff(run(1.0 / 64));
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("wave: energy drift at dt = h/4 stays below 1e-6") {
  const double L = 8.0;
  const std::size_t m = 2048;
  const auto s0 = random_state(L, m, 21);
  const auto model = model_for(L, m, L / m / 4);
  std::vector<double> samples;
  for (int i = 1; i <= 20; ++i) samples.push_back(0.5 * i);
  const auto rec = run_wave(s0, model, 10.0, samples);
  REQUIRE(rec.size() == 21);
  double drift = 0.0;
  for (const auto& r : rec) drift = std::max(drift, std::abs(r.energy - rec.front().energy) / rec.front().energy);
  CHECK(drift <= 1e-6);
  CHECK(rec.back().t == doctest::Approx(10.0));
}

TEST_CASE("wave: stiff kick is reported instead of blowing up") {
  auto s = make_wave_state(sampled(16.0, 64, [](double) { return 10.0; }), GridField(16.0, 64));
  auto model = model_for(16.0, 64, 0.25);
  model.p = 2;
  WaveStepper st(model);
  CHECK_THROWS_AS(st.step(s), NumericalError);
}

TEST_CASE("wave cone: trivial cases vanish") {
  const auto model = model_for(64.0, 1024, 1.0 / 16);
  CHECK(nlw_cone_test(GridField(64.0, 1024), GridField(64.0, 1024), 0.0, 5.0, model) == 0.0);
  // data supported in |x| < T sees no cutoff at all
  const double T = 8.0;
  auto u0 = sampled(64.0, 1024, [&](double x) { return chi_eval(2.0 * x / T) * std::cos(x); });
  auto u1 = sampled(64.0, 1024, [&](double x) { return 0.5 * chi_eval(2.0 * x / T); });
  CHECK(nlw_cone_test(u0, u1, 0.0, T, model) <= 1e-15);
  CHECK_THROWS_AS((void)nlw_cone_test(u0, u1, 0.01, T, model), std::invalid_argument);
}

TEST_CASE("wave cone: random bounded data, T = 20") {
  const double L = 128.0;
  const std::size_t m = 8192;
  const auto s = random_state(L, m, 11);
  CHECK(nlw_cone_test(s.u, s.v, 0.0, 20.0, model_for(L, m, L / m)) <= 1e-10);
}
