#include "doctest.h"

#include "bnls/continuum.hpp"
#include "bnls/errors.hpp"
#include "bnls/newton.hpp"
#include "bnls/rng.hpp"

#include <cmath>
#include <numbers>

using namespace bnls;

namespace {

constexpr double pi = std::numbers::pi;
const cplx I{0.0, 1.0};

GridField sampled(double L, std::size_t m, auto&& f) {
  GridField g(L, m);
  for (std::size_t j = 0; j < m; ++j) g[j] = f(g.position(j));
  return g;
}

Trajectory constant_trajectory(const GridField& g, std::size_t frames, double dt) {
  return {dt, std::vector<GridField>(frames, g)};
}

GridField cos_data(double a) {
  return sampled(2.0 * pi, 64, [a](double x) { return cplx(a * std::cos(x), 0.0); });
}

} // namespace

TEST_CASE("majorant: closed forms") {
  const double L = 2.0 * pi;
  CHECK(majorant_norm(sampled(L, 32, [](double) { return cplx(0.0, -2.5); }), {3.0, 2}) ==
        doctest::Approx(2.5).epsilon(1e-14));
  const int k = 3;
  const auto wave = sampled(L, 32, [](double x) { return std::exp(I * (k * x)); });
  for (int p = 0; p <= 3; ++p) {
    double w = 0.0;
    for (int q = 0; q <= p; ++q) w += std::pow(k, q);
    CHECK(majorant_norm(wave, {0.7, p}) == doctest::Approx(w * std::exp(k * 0.7)).epsilon(1e-13));
  }
  CHECK(majorant_norm(sampled(L, 32, [](double x) { return std::cos(x); }), {1.0, 0}) ==
        doctest::Approx(std::numbers::e).epsilon(1e-14));
  CHECK_THROWS_AS((void)majorant_norm(wave, {100.0, 0}), NumericalError);
}

TEST_CASE("majorant: derivative loss bound on random band-limited fields") {
  Rng rng(4242);
  const double L = 2.0 * pi;
  const std::size_t m = 64;
  for (int sample = 0; sample < 100; ++sample) {
    const int band = 1 + static_cast<int>(rng.uniform() * 20);
    std::vector<cplx> amp(2 * band + 1);
    for (auto& a : amp) a = cplx(rng.normal(), rng.normal()) * std::exp(-0.3 * band * rng.uniform());
    const auto f = sampled(L, m, [&](double x) {
      cplx s = 0.0;
      for (int j = -band; j <= band; ++j) s += amp[static_cast<std::size_t>(j + band)] * std::exp(I * (j * x));
      return s;
    });
    const double r = 0.5 + rng.uniform();
    const double delta = 0.01 + 0.49 * rng.uniform();
    const double base = majorant_norm(f, {r, 0});
    for (int p = 0; p <= 3; ++p) {
      const double cp = (p + 1) * (p == 0 ? 1.0 : std::pow(p / std::numbers::e, p));
      CHECK(majorant_norm(f, {r - delta, p}) <= cp * std::pow(delta, -p) * base * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("newton schedule: radii decrease and lose half of r1 in the limit") {
  NewtonSchedule s;
  CHECK(s.radius(1) == 1.0);
  CHECK(s.delta(1) == doctest::Approx(3.0 / (pi * pi)));
  CHECK(s.delta(4) == doctest::Approx(s.delta(1) / 16.0));
  double prev = s.radius(1);
  for (int n = 2; n < 50; ++n) {
    CHECK(s.radius(n) < prev);
    prev = s.radius(n);
  }
  CHECK(s.radius(5000) == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(s.radius(5000) > 0.5);
}

TEST_CASE("residual: vanishing, single mode, homogeneity") {
  const double L = 2.0 * pi, dt = 0.01;
  const auto psi = constant_trajectory(cos_data(0.3), 5, dt);
  const auto zero = constant_trajectory(GridField(L, 64), 5, dt);
  CHECK(residual(psi, zero).sup_abs() == 0.0);

  const cplx A(0.4, -0.2);
  const int k = 2;
  const auto p1 = free_evolution(sampled(L, 64, [&](double x) { return A * std::exp(I * (k * x)); }), 0.04, dt);
  const auto r1 = residual_first(p1);
  for (std::size_t j = 0; j < p1.size(); ++j) {
    const double t = dt * j;
    for (std::size_t x = 0; x < 64; ++x) {
      const double pos = p1.frames[j].position(x);
      CHECK(std::abs(r1.frames[j][x] - std::norm(A) * A * std::exp(I * (k * pos - k * k * t))) < 1e-15);
    }
  }

  const auto xi = constant_trajectory(sampled(L, 64, [](double x) { return cplx(std::sin(x), 0.5 * std::cos(2 * x)); }), 5, dt);
  const auto base = residual(psi, xi);
  const double lam = 0.37;
  auto xl = xi;
  for (auto& f : xl.frames)
    for (auto& z : f.values()) z *= lam;
  const auto scaled = residual(psi, xl);
  for (std::size_t x = 0; x < 64; ++x) {
    const cplx p = psi.frames[0][x], e = xi.frames[0][x];
    const cplx quad = 2.0 * std::norm(e) * p + e * e * std::conj(p);
    const cplx cub = std::norm(e) * e;
    CHECK(std::abs(base.frames[1][x] - (quad + cub)) < 1e-15);
    CHECK(std::abs(scaled.frames[1][x] - (lam * lam * quad + lam * lam * lam * cub)) < 1e-15);
  }
}

TEST_CASE("linearized system: potential structure") {
  const auto psi = sampled(2.0 * pi, 64, [](double x) { return cplx(std::cos(x), 0.3 * std::sin(3 * x)); });
  const LinearizedSystem sys{constant_trajectory(psi, 2, 0.1), constant_trajectory(psi, 2, 0.1)};
  const auto v = sys.potential(1);
  for (std::size_t x = 0; x < 64; ++x) {
    CHECK(v.v21[x] == -std::conj(v.v12[x]));
    CHECK(v.v22[x] == -std::conj(v.v11[x]));
    CHECK(v.v11[x].real() == doctest::Approx(2.0 * std::norm(psi[x])));
  }
}

TEST_CASE("solve_linearized: zero forcing gives zero") {
  const auto psi = constant_trajectory(cos_data(0.5), 11, 0.01);
  const auto zero = constant_trajectory(GridField(2.0 * pi, 64), 11, 0.01);
  const auto sol = solve_linearized({psi, zero}, 0.1, 0.001);
  CHECK(sol.xi.size() == 11);
  CHECK(sol.xi.sup_abs() == 0.0);
}

TEST_CASE("solve_linearized: free propagator with constant forcing matches per-mode solution") {
  const double L = 2.0 * pi, T = 0.5;
  const auto b = sampled(L, 64, [](double x) { return 0.3 + std::exp(I * (2 * x)) - 0.5 * I * std::exp(-I * (5 * x)); });
  const std::size_t frames = 51;
  // c_k(t) = -i b_k t for k = 0, else -b_k (1 - e^{-i k^2 t}) / k^2
  auto mode = [](int k, double t) { return k == 0 ? -I * t : -(1.0 - std::exp(-I * double(k * k) * t)) / double(k * k); };
  auto error_at = [&](double dt) {
    const auto sol = solve_linearized({constant_trajectory(GridField(L, 64), frames, 0.01), constant_trajectory(b, frames, 0.01)}, T, dt);
    CHECK(sol.symmetry_defect < 1e-15);
    double err = 0.0;
    for (std::size_t j = 0; j < frames; ++j) {
      const double t = 0.01 * j;
      for (std::size_t x = 0; x < 64; ++x) {
        const double pos = b.position(x);
        const cplx expect = 0.3 * mode(0, t) + mode(2, t) * std::exp(I * (2 * pos)) - 0.5 * I * mode(5, t) * std::exp(-I * (5 * pos));
        err = std::max(err, std::abs(sol.xi.frames[j][x] - expect));
      }
    }
    return err;
  };
  const double e1 = error_at(2e-3), e2 = error_at(1e-3);
  CHECK(e2 < 1e-10);
  CHECK(e1 / e2 > 12.0);
}

TEST_CASE("solve_linearized: the two components stay conjugate") {
  const double dt = 1e-3;
  const auto psi = free_evolution(cos_data(0.8), 0.2, dt);
  const auto sol = solve_linearized({psi, residual_first(psi)}, 0.2, dt);
  CHECK(sol.xi.sup_abs() > 1e-3);
  CHECK(sol.symmetry_defect <= 1e-15);
  CHECK(sol.xi.frames[0].sup_abs() == 0.0);
}

TEST_CASE("newton: zero data stays zero") {
  const auto res = newton_iterate(GridField(2.0 * pi, 64), 0.1, {.dt = 0.01});
  CHECK(res.converged);
  REQUIRE(res.report.size() == 1);
  CHECK(res.report[0].eps == 0.0);
  CHECK(res.solution.sup_abs() == 0.0);
}

TEST_CASE("newton: 0.1 cos x on T = 0.3 converges quadratically") {
  const auto psi0 = cos_data(0.1);
  NewtonOptions opt;
  opt.dt = 1e-3;
  opt.tol = 1e-10;
  opt.max_iter = 5;
  const auto res = newton_iterate(psi0, 0.3, opt);
  CHECK(res.converged);
  CHECK(res.scale == 1.0);
  CHECK(res.report.size() <= 5);
  CHECK(res.report.back().sup_residual <= 1e-10);
  CHECK(res.report[0].eps == doctest::Approx(0.1 * std::numbers::e).epsilon(1e-12));
  for (const auto& r : res.report) {
    CHECK(r.initial_defect == 0.0);
    CHECK(r.symmetry_defect <= 1e-15);
    CHECK(r.telescoping <= 1e-6);
    if (r.n > 1) CHECK(r.ratio <= 1e3);
  }

  // independent integration of the cubic equation, unmollified, at dt / 10
  ContinuumModel cm;
  cm.mollifier = Mollifier::identity();
  cm.box_length = 2.0 * pi;
  cm.grid_size = 64;
  cm.dt = 1e-4;
  LawsonStepper st(cm);
  GridField u = psi0;
  double diff = 0.0;
  for (std::size_t j = 0; j < res.solution.size(); ++j) {
    if (j > 0) st.advance(u, 10);
    for (std::size_t x = 0; x < 64; ++x) diff = std::max(diff, std::abs(u[x] - res.solution.frames[j][x]));
  }
  CHECK(diff <= 1e-8);
}

TEST_CASE("newton: large data are rescaled and still solve the original problem") {
  const auto psi0 = cos_data(0.5);
  NewtonOptions opt;
  opt.dt = 1e-3;
  opt.max_iter = 10;
  const auto res = newton_iterate(psi0, 0.05, opt);
  CHECK(res.scale < 1.0);
  CHECK(res.report[0].eps == doctest::Approx(opt.eps1_target).epsilon(1e-6));
  CHECK(res.converged);
  CHECK(res.solution.dt == opt.dt);
  CHECK(res.solution.frames[0].box_length() == psi0.box_length());
  for (std::size_t x = 0; x < 64; ++x) CHECK(std::abs(res.solution.frames[0][x] - psi0[x]) < 1e-15);
  ContinuumModel cm;
  cm.mollifier = Mollifier::identity();
  cm.box_length = 2.0 * pi;
  cm.grid_size = 64;
  cm.dt = 1e-4;
  LawsonStepper st(cm);
  GridField u = psi0;
  st.advance(u, 500);
  double diff = 0.0;
  for (std::size_t x = 0; x < 64; ++x) diff = std::max(diff, std::abs(u[x] - res.solution.frames.back()[x]));
  CHECK(diff <= 1e-8);
}

TEST_CASE("newton: divergence and bad arguments are reported") {
  NewtonOptions opt;
  opt.dt = 1e-2;
  opt.max_iter = 12;
  opt.eps1_target = 1e9;  // no rescaling
  CHECK_THROWS_AS((void)newton_iterate(cos_data(3.0), 3.0, opt), NumericalError);
  CHECK_THROWS_AS((void)newton_iterate(cos_data(0.1), 0.3051, opt), std::invalid_argument);
  opt.max_iter = 0;
  CHECK_THROWS_AS((void)newton_iterate(cos_data(0.1), 0.3, opt), std::invalid_argument);
}

TEST_CASE("newton: working time search returns a converging horizon") {
  NewtonOptions opt;
  opt.dt = 1e-2;
  opt.max_iter = 6;
  opt.eps1_target = 1e9;
  const auto psi0 = cos_data(2.0);
  const double t = newton_working_time(psi0, 4.0, opt, 0.05);
  CHECK(t > 0.0);
  CHECK(t < 4.0);
  CHECK(newton_iterate(psi0, t, opt).converged);
}
