#pragma once

#include "bnls/field_core.hpp"

#include <cstdint>
#include <vector>

namespace bnls {

// lattice: kernel of e^{it Lap} for Lap f = f(x+1) + f(x-1) - 2 f(x),
//          K_n(t) = e^{-2it} i^n J_n(2t).
// hopping: kernel of the pure hopping operator f(x+1) + f(x-1),
//          F_n(t) = i^n J_n(t) = (2 pi)^{-1} int e^{it cos(theta) + i n theta} dtheta.
enum class KernelKind { lattice, hopping };

// F_n(t) by adaptive Gauss-Kronrod quadrature (absolute tolerance 1e-13).
// Slow; used as an oracle.
[[nodiscard]] cplx kernel_integral(double t, int n);

// J_0(x), ..., J_{n_max}(x) for x >= 0 by Miller's backward recurrence,
// normalized with J_0 + 2 sum_k J_{2k} = 1. `tail_mass` receives
// 2 sum_{n > n_max} J_n(x)^2 from the recurrence values.
[[nodiscard]] std::vector<double> bessel_j_sequence(double x, int n_max, double* tail_mass = nullptr);

struct KernelTable {
  double t = 0.0;
  int half_width = 0;
  KernelKind kind = KernelKind::lattice;
  std::vector<cplx> values;  // values[n + half_width]

  [[nodiscard]] cplx operator()(long n) const;
  [[nodiscard]] double mass() const;  // sum_n |K_n|^2
  [[nodiscard]] double abs_sum() const;  // sum_n |K_n|
};

// Throws NumericalError if the kernel mass beyond half_width exceeds 1e-14.
[[nodiscard]] KernelTable kernel_table(double t, int half_width, KernelKind kind = KernelKind::lattice);
// Smallest convenient half width whose tail is negligible.
[[nodiscard]] int recommended_half_width(double t, KernelKind kind = KernelKind::lattice);

// e^{it Lap} psi0 on the periodic lattice: circular convolution with the
// periodized Bessel kernel, evaluated through the FFT.
[[nodiscard]] LatticeField linear_evolve(const LatticeField& psi0, double t);
// The same convolution at a single site, summed directly.
[[nodiscard]] cplx evolve_site(const KernelTable& kernel, const LatticeField& psi0, long x);

struct StationaryPhaseApprox {
  double t;
  int n;
  double theta_s;   // sin(theta_s) = n / t
  double phi;       // pi/4 + t cos(theta_s) + n theta_s
  double amplitude; // (2 / (pi t cos(theta_s)))^{1/2}

  // amplitude cos(phi) for even n, i amplitude sin(phi) for odd n
  [[nodiscard]] cplx value() const;
};

[[nodiscard]] StationaryPhaseApprox stationary_phase(double t, int n);
// Approximates the hopping kernel F_n(t); requires |n| <= t/2.
[[nodiscard]] cplx stationary_phase_eval(double t, int n);

// a_n = conj(K_n(t0)) / |K_n(t0)| (0 where |K_n| < 1e-300) on {-N, ..., N}, so
// that the evolved field at site 0 and time t0 is sum_n |K_n(t0)|.
[[nodiscard]] LatticeField adversarial_data(double t0, int extent, KernelKind kind = KernelKind::lattice);

// For every even |n| <= t/2: max(|cos phi(t,n)|, |sin phi(t,n+1)|) >= 1/4.
[[nodiscard]] bool pairing_check(double t);

// Monte-Carlo E|psi(t,0)|^2 for iid unit-modulus phases scaled by A under the
// lattice kernel. Sample s uses the stream Rng::stream(seed, s).
[[nodiscard]] double random_ensemble_second_moment(double t, double a, int num_samples, std::uint64_t seed,
                                                   unsigned workers = 1);

} // namespace bnls
