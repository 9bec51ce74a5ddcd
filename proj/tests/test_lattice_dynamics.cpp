#include "doctest.h"

#include "bnls/lattice_dynamics.hpp"
#include "bnls/lattice_linear.hpp"

#include <cmath>
#include <numbers>

using namespace bnls;

namespace {

LatticeModel model_with(int extent, double dt, int sign = 1, double p = 2.0, bool nonlinear = true) {
  LatticeModel m;
  m.extent = extent;
  m.dt = dt;
  m.sign = sign;
  m.p = p;
  m.nonlinear = nonlinear;
  return m;
}

double sup_diff(const LatticeField& a, const LatticeField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

} // namespace

TEST_CASE("forward difference stencil") {
  const auto c = forward_diff(make_initial_lattice(InitialData::constant(2.0), 5));
  for (const auto& z : c.values()) CHECK(z == cplx(0.0));
  const auto d = forward_diff(make_initial_lattice(InitialData::delta(1.0), 5));
  CHECK(d.at(0) == cplx(-1.0));
  CHECK(d.at(-1) == cplx(1.0));
  for (long x = -5; x <= 5; ++x)
    if (x != 0 && x != -1) CHECK(d.at(x) == cplx(0.0));
  LatticeField lin(10);
  for (long x = -10; x <= 10; ++x) lin.at(x) = static_cast<double>(x);
  const auto dl = forward_diff(lin);
  for (long x = -9; x <= 9; ++x) CHECK(dl.at(x) == cplx(1.0));
}

TEST_CASE("lattice laplacian stencil and symbol") {
  const auto d = lattice_laplacian(make_initial_lattice(InitialData::delta(1.0), 4));
  CHECK(d.at(-1) == cplx(1.0));
  CHECK(d.at(0) == cplx(-2.0));
  CHECK(d.at(1) == cplx(1.0));
  CHECK(d.at(2) == cplx(0.0));
  CHECK(d.at(-2) == cplx(0.0));
  const auto c = lattice_laplacian(make_initial_lattice(InitialData::constant(1.0), 4));
  for (const auto& z : c.values()) CHECK(z == cplx(0.0));
  const int n = 50;
  const double kappa = 2.0 * std::numbers::pi * 7.0 / (2 * n + 1);
  LatticeField pw(n);
  for (long x = -n; x <= n; ++x) pw.at(x) = std::polar(1.0, kappa * x);
  const auto lp = lattice_laplacian(pw);
  const double lambda = -4.0 * std::pow(std::sin(kappa / 2.0), 2);
  for (long x = -n; x <= n; ++x) CHECK(std::abs(lp.at(x) - lambda * pw.at(x)) < 1e-13);
}

TEST_CASE("split step: zero field and uniform solution") {
  const auto m = model_with(16, 0.01);
  const auto z = step_splitstep(LatticeField(16), m);
  for (const auto& v : z.values()) CHECK(v == cplx(0.0));
  SplitStepper st(m);
  auto psi = make_initial_lattice(InitialData::constant(1.0), 16);
  st.advance(psi, 500);
  for (const auto& v : psi.values()) {
    CHECK(std::abs(std::abs(v) - 1.0) < 1e-13);
    CHECK(std::abs(v - std::polar(1.0, -5.0)) < 1e-12);
  }
}

TEST_CASE("split step with the nonlinearity off reproduces the Bessel kernel") {
  for (double dt : {0.05, 0.005}) {
    const auto m = model_with(256, dt, 1, 2.0, false);
    SplitStepper st(m);
    auto psi = make_initial_lattice(InitialData::delta(1.0), 256);
    st.advance(psi, std::lround(50.0 / dt));
    const auto k = kernel_table(50.0, 256);
    double err = 0.0;
    for (long x = -256; x <= 256; ++x) err = std::max(err, std::abs(psi.at(x) - k(x)));
    CHECK(err <= 1e-8);
  }
}

TEST_CASE("split step preserves mass") {
  const auto m = model_with(512, 0.01);
  SplitStepper st(m);
  auto psi = make_initial_lattice(InitialData::random_phase(1.0, 3), 512);
  const double m0 = global_mass(psi);
  st.step(psi);
  CHECK(std::abs(global_mass(psi) - m0) / m0 <= 1e-14);
  st.advance(psi, 9999);
  CHECK(std::abs(global_mass(psi) - m0) / m0 <= 1e-12);
}

TEST_CASE("split step rejects mismatched field and overflows") {
  SplitStepper st(model_with(8, 0.01));
  LatticeField wrong(9);
  CHECK_THROWS_AS(st.step(wrong), std::invalid_argument);
  LatticeModel bad = model_with(8, 0.01);
  bad.sign = 0;
  CHECK_THROWS(SplitStepper{bad});
  auto big = make_initial_lattice(InitialData::constant(1e200), 8);
  CHECK_THROWS((void)step_splitstep(big, model_with(8, 0.01)));
}

TEST_CASE("local mass") {
  CHECK(local_mass(LatticeField(10), WeightProfile(0, 1.0, 0.0), 0.0) == 0.0);
  CHECK(local_mass(make_initial_lattice(InitialData::delta(1.0), 10), WeightProfile(0, 1.0, 0.0), 0.0) ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
  // direct summation oracle
  const double expect = 41.8256630663226;
  CHECK(local_mass(make_initial_lattice(InitialData::constant(1.0), 1000), WeightProfile(0, 1.0, 10.0), 0.0) ==
        doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("local energy") {
  const WeightProfile w0(0, 1.0, 0.0);
  CHECK(local_energy(LatticeField(10), w0, 0.0) == 0.0);
  const double expect = 0.5 * (std::exp(-std::sqrt(2.0)) + std::exp(-1.0)) + 0.25 * std::exp(-1.0);
  CHECK(local_energy(make_initial_lattice(InitialData::delta(1.0), 10), w0, 0.0) == doctest::Approx(expect).epsilon(1e-15));
  const WeightProfile w(3, 2.0, 10.0);
  const auto c = make_initial_lattice(InitialData::constant(1.5), 200);
  double sum = 0.0;
  for (long x = -200; x <= 200; ++x) sum += std::exp(-weight_eval(w, 4.0, x));
  CHECK(local_energy(c, w, 4.0) == doctest::Approx(std::pow(1.5, 4) / 4.0 * sum).epsilon(1e-13));
  CHECK_THROWS_AS((void)local_energy(c, w, 11.0), std::out_of_range);
}

TEST_CASE("windowed averages") {
  const auto c1 = make_initial_lattice(InitialData::constant(1.0), 100);
  CHECK(windowed_mass_avg(c1, 0, 10.0) == doctest::Approx(2.1));
  CHECK(windowed_quartic_avg(c1, 0, 10.0) == doctest::Approx(2.1));
  const auto c2 = make_initial_lattice(InitialData::constant(2.0), 100);
  CHECK(windowed_quartic_avg(c2, 0, 10.0) == doctest::Approx(21.0 * 16.0 / 10.0));
  CHECK(windowed_mass_avg(LatticeField(100), 0, 10.0) == 0.0);
  CHECK(windowed_quartic_avg(LatticeField(100), 0, 10.0) == 0.0);
  const auto r = make_initial_lattice(InitialData::random_phase(1.0, 5), 100);
  CHECK(windowed_mass_avg(r, 0, 50.0) == doctest::Approx(101.0 / 50.0).epsilon(1e-14));
  CHECK_THROWS_AS((void)windowed_mass_avg(c1, 60, 50.0), std::out_of_range);
  CHECK_THROWS_AS((void)windowed_mass_avg(c1, 0, 0.5), std::invalid_argument);
}

TEST_CASE("sup of the time derivative") {
  const auto m = model_with(10, 0.01);
  CHECK(sup_time_derivative(LatticeField(10), m) == 0.0);
  CHECK(sup_time_derivative(make_initial_lattice(InitialData::constant(1.0), 10), m) == doctest::Approx(1.0));
  CHECK(sup_time_derivative(make_initial_lattice(InitialData::delta(1.0), 10), m) == doctest::Approx(3.0));
}

TEST_CASE("defocusing requirement") {
  CHECK_NOTHROW(require_defocusing(model_with(4, 0.01, 1)));
  CHECK_THROWS_AS(require_defocusing(model_with(4, 0.01, -1)), std::invalid_argument);
}

TEST_CASE("run driver records and windows") {
  LatticeRunOptions opts;
  opts.t_final = 5.0;
  opts.sample_times = {1.0, 2.0, 3.0};
  opts.window_times = {1.0, 5.0};
  const auto m = model_with(80, 0.01);
  const auto r = run_lattice(make_initial_lattice(InitialData::constant(1.0), 80), m, opts);
  REQUIRE(r.records.size() == 5);
  for (std::size_t i = 1; i < r.records.size(); ++i) CHECK(r.records[i].t > r.records[i - 1].t);
  for (const auto& rec : r.records) {
    CHECK(rec.sup_abs == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(rec.sup_dt == doctest::Approx(1.0).epsilon(1e-12));
  }
  REQUIRE(r.windows.size() == 2);
  CHECK(r.windows[1].quartic_avg.has_value());
  CHECK(r.warnings.empty());

  const auto f = run_lattice(make_initial_lattice(InitialData::constant(1.0), 80), model_with(80, 0.01, -1), opts);
  CHECK_FALSE(f.windows[0].quartic_avg.has_value());

  opts.t_final = 40.0;
  opts.window_times.clear();
  const auto w = run_lattice(make_initial_lattice(InitialData::constant(1.0), 80), m, opts);
  CHECK(w.warnings.size() == 1);
}

TEST_CASE("local mass obeys the exponential Groenwall factor") {
  for (double r : {1.0, 2.0}) {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto m = model_with(160, 0.02, seed == 2 ? -1 : 1);
      LatticeRunOptions opts;
      opts.t_final = 20.0;
      opts.weight = WeightProfile(0, r, 20.0);
      const auto res = run_lattice(make_initial_lattice(InitialData::random_phase(1.0, seed), 160), m, opts);
      const double ratio = res.records.back().local_mass / res.records.front().local_mass;
      CHECK(ratio <= std::pow(2.0, 3.0 / r) * (1.0 + 1e-6));
    }
  }
}

TEST_CASE("energy is nearly conserved by the Strang step") {
  const auto m = model_with(128, 0.01);
  SplitStepper st(m);
  auto psi = make_initial_lattice(InitialData::random_phase(1.0, 11), 128);
  const double e0 = global_energy(psi, m);
  st.advance(psi, 1000);
  CHECK(std::abs(global_energy(psi, m) - e0) / std::abs(e0) < 1e-3);
}
