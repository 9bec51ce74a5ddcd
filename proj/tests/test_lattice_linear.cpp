#include "doctest.h"

#include "bnls/errors.hpp"
#include "bnls/lattice_linear.hpp"

#include <cmath>
#include <numbers>

using namespace bnls;

TEST_CASE("kernel integral values") {
  const cplx a = kernel_integral(0.0, 0);
  CHECK(std::abs(a - cplx(1.0)) < 1e-13);
  CHECK(std::abs(kernel_integral(0.0, 3)) < 1e-13);
  const cplx b = kernel_integral(10.0, 2);
  CHECK(std::abs(b - cplx(-0.2546303136851206)) < 1e-12);
  CHECK(std::abs(b.real() + std::cyl_bessel_j(2.0, 10.0)) < 1e-12);
  CHECK_THROWS((void)kernel_integral(-1.0, 0));
}

TEST_CASE("Miller recurrence against reference values") {
  const auto j1 = bessel_j_sequence(1.0, 5);
  CHECK(j1[0] == doctest::Approx(0.7651976865579666).epsilon(1e-14));
  const auto j35 = bessel_j_sequence(3.5, 10);
  CHECK(j35[5] == doctest::Approx(0.08044198664799178).epsilon(1e-13));
  for (double x : {0.5, 7.0, 33.0, 120.0}) {
    const auto j = bessel_j_sequence(x, 60);
    for (int n = 0; n <= 60; n += 3) CHECK(std::abs(j[n] - std::cyl_bessel_j(static_cast<double>(n), x)) < 1e-12);
  }
  const auto z = bessel_j_sequence(0.0, 3);
  CHECK(z[0] == 1.0);
  CHECK(z[3] == 0.0);
}

TEST_CASE("kernel table basics") {
  const auto k0 = kernel_table(0.0, 5);
  CHECK(k0(0) == cplx(1.0));
  for (long n = 1; n <= 5; ++n) CHECK(k0(n) == cplx(0.0));
  for (double t : {1.0, 10.0, 50.0, 200.0}) {
    const auto k = kernel_table(t, recommended_half_width(t));
    CHECK(std::abs(k.mass() - 1.0) <= 1e-12);
    for (long n = 1; n <= k.half_width; ++n) REQUIRE(k(n) == k(-n));
    const auto h = kernel_table(t, recommended_half_width(t, KernelKind::hopping), KernelKind::hopping);
    CHECK(std::abs(h.mass() - 1.0) <= 1e-12);
  }
  const auto k = kernel_table(25.0, 120);
  CHECK(std::abs(k(10) - cplx(0.1098593068461327, 0.029870812765098984)) < 1e-13);
  CHECK_THROWS_AS((void)kernel_table(50.0, 60), NumericalError);
}

TEST_CASE("recurrence kernel agrees with quadrature") {
  const double t = 10.0;
  const auto hop = kernel_table(t, recommended_half_width(t, KernelKind::hopping), KernelKind::hopping);
  const auto lat = kernel_table(t, recommended_half_width(t));
  double err_hop = 0.0, err_lat = 0.0;
  for (int n = -static_cast<int>(t) - 40; n <= static_cast<int>(t) + 40; ++n) {
    err_hop = std::max(err_hop, std::abs(hop(n) - kernel_integral(t, n)));
    err_lat = std::max(err_lat, std::abs(lat(n) - std::polar(1.0, -2.0 * t) * kernel_integral(2.0 * t, n)));
  }
  CHECK(err_hop <= 1e-12);
  CHECK(err_lat <= 1e-12);
}

TEST_CASE("linear evolution") {
  const auto d = make_initial_lattice(InitialData::delta(1.0), 150);
  const auto e = linear_evolve(d, 20.0);
  const auto k = kernel_table(20.0, 150);
  for (long n = -150; n <= 150; ++n) REQUIRE(std::abs(e.at(n) - k(n)) < 1e-14);
  const auto r = make_initial_lattice(InitialData::random_phase(1.0, 2), 300);
  const auto same = linear_evolve(r, 0.0);
  for (std::size_t i = 0; i < r.size(); ++i) CHECK(same[i] == r[i]);
  double m0 = 0.0, m1 = 0.0;
  const auto re = linear_evolve(r, 37.5);
  for (std::size_t i = 0; i < r.size(); ++i) {
    m0 += std::norm(r[i]);
    m1 += std::norm(re[i]);
  }
  CHECK(std::abs(m1 - m0) / m0 <= 1e-12);
  // wrap-around is handled by the periodized kernel
  const auto kt = kernel_table(37.5, recommended_half_width(37.5));
  for (long x : {-300L, -7L, 0L, 151L, 300L}) CHECK(std::abs(evolve_site(kt, r, x) - re.at(x)) < 1e-12);
}

TEST_CASE("stationary phase structure") {
  for (int n = -50; n <= 50; ++n) {
    const cplx v = stationary_phase_eval(100.0, n);
    if (n % 2 == 0) CHECK(v.imag() == 0.0);
    else CHECK(v.real() == 0.0);
  }
  const auto s0 = stationary_phase(200.0, 0);
  CHECK(s0.amplitude == doctest::Approx(std::sqrt(2.0 / (std::numbers::pi * 200.0))));
  CHECK(s0.value().real() == doctest::Approx(s0.amplitude * std::cos(200.0 + std::numbers::pi / 4)));
  CHECK_THROWS_AS((void)stationary_phase_eval(100.0, 51), std::invalid_argument);
}

TEST_CASE("stationary phase envelope matches the kernel") {
  // n = 0: amplitude against the exact modulus sqrt(J0^2 + Y0^2)
  const double t = 200.0;
  const double env = std::hypot(std::cyl_bessel_j(0.0, t), std::cyl_neumann(0.0, t));
  CHECK(std::abs(stationary_phase(t, 0).amplitude - env) / env <= 0.05);
  // root-mean-square envelope over |n| <= t/2 against the quadrature oracle
  double num = 0.0, den = 0.0;
  for (int n = -100; n <= 100; ++n) {
    num += std::norm(stationary_phase_eval(t, n));
    den += std::norm(kernel_integral(t, n));
  }
  CHECK(std::abs(std::sqrt(num / den) - 1.0) <= 0.05);
}

TEST_CASE("adversarial data") {
  for (double t0 : {25.0, 100.0}) {
    const int n = recommended_half_width(t0);
    const auto a = adversarial_data(t0, n);
    for (const auto& v : a.values()) REQUIRE(std::abs(v) <= 1.0 + 1e-15);
    const auto k = kernel_table(t0, n);
    const double target = k.abs_sum();
    CHECK(std::abs(evolve_site(k, a, 0)) == doctest::Approx(target).epsilon(1e-13));
    CHECK(std::abs(linear_evolve(a, t0).at(0)) == doctest::Approx(target).epsilon(1e-11));
  }
  const int nh = recommended_half_width(100.0, KernelKind::hopping);
  const auto hop = kernel_table(100.0, nh, KernelKind::hopping);
  const double ratio_hop = hop.abs_sum() / 10.0;
  CHECK(ratio_hop >= 0.3);
  CHECK(ratio_hop <= 1.6);
  const double ratio_lat = kernel_table(100.0, recommended_half_width(100.0)).abs_sum() / 10.0;
  CHECK(ratio_lat >= 0.3);
  CHECK(ratio_lat <= 2.0);
  CHECK_THROWS((void)adversarial_data(100.0, 100));
}

TEST_CASE("pairing check") {
  CHECK(pairing_check(100.0));
  CHECK(pairing_check(400.0));
  CHECK(pairing_check(20.0));
  CHECK_THROWS((void)pairing_check(10.0));
}

TEST_CASE("random ensemble second moment") {
  const double m1 = random_ensemble_second_moment(10.0, 1.0, 200, 99);
  CHECK(std::abs(m1 - 1.0) <= 4.0 / std::sqrt(200.0));
  const double m2 = random_ensemble_second_moment(10.0, 2.0, 200, 99);
  CHECK(m2 == doctest::Approx(4.0 * m1).epsilon(1e-13));
  CHECK(random_ensemble_second_moment(0.0, 1.0, 100, 5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(random_ensemble_second_moment(10.0, 1.0, 150, 3, 1) == random_ensemble_second_moment(10.0, 1.0, 150, 3, 3));
  CHECK_THROWS((void)random_ensemble_second_moment(1.0, 1.0, 50, 1));
}
