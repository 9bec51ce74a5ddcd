#include "bnls/lattice_linear.hpp"

#include "bnls/errors.hpp"
#include "bnls/parallel.hpp"
#include "bnls/rng.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bnls {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTailLimit = 1e-14;
constexpr std::size_t kQuadLimit = 4000;

cplx i_pow(long n) {
  switch (((n % 4) + 4) % 4) {
  case 0: return {1.0, 0.0};
  case 1: return {0.0, 1.0};
  case 2: return {-1.0, 0.0};
  default: return {0.0, -1.0};
  }
}

struct QuadParams {
  double t;
  int n;
  bool imag;
};

double kernel_integrand(double theta, void* p) {
  const auto* q = static_cast<const QuadParams*>(p);
  const double ph = q->t * std::cos(theta) + q->n * theta;
  return q->imag ? std::sin(ph) : std::cos(ph);
}

double integrate_part(double t, int n, bool imag) {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
      gsl_integration_workspace_alloc(kQuadLimit), &gsl_integration_workspace_free);
  QuadParams params{t, n, imag};
  gsl_function fn{&kernel_integrand, &params};
  double result = 0.0, abserr = 0.0;
  const int status = gsl_integration_qag(&fn, 0.0, 2.0 * kPi, 2.0 * kPi * 1e-13, 0.0, kQuadLimit, GSL_INTEG_GAUSS61,
                                         ws.get(), &result, &abserr);
  if (status != GSL_SUCCESS) {
    std::ostringstream os;
    os << "kernel_integral(t=" << t << ", n=" << n << "): quadrature did not reach 1e-13 (" << gsl_strerror(status)
       << ", estimated error " << abserr / (2.0 * kPi) << ")";
    throw NumericalError(os.str());
  }
  return result / (2.0 * kPi);
}

double bessel_argument(double t, KernelKind kind) { return kind == KernelKind::lattice ? 2.0 * t : t; }

} // namespace

cplx kernel_integral(double t, int n) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("kernel_integral: t must be >= 0");
  return {integrate_part(t, n, false), integrate_part(t, n, true)};
}

std::vector<double> bessel_j_sequence(double x, int n_max, double* tail_mass) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("bessel_j_sequence: x must be >= 0");
  if (n_max < 0) throw std::invalid_argument("bessel_j_sequence: n_max must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    if (tail_mass) *tail_mass = 0.0;
    return out;
  }
  const int start = static_cast<int>(std::ceil(std::max<double>(n_max, x) + 40.0 + 20.0 * std::cbrt(x)));
  std::vector<double> j(static_cast<std::size_t>(start) + 2, 0.0);
  j[static_cast<std::size_t>(start)] = 1.0;
  for (int k = start; k >= 1; --k) {
    const auto uk = static_cast<std::size_t>(k);
    j[uk - 1] = (2.0 * k / x) * j[uk] - j[uk + 1];
    if (std::abs(j[uk - 1]) > 1e250) {
      for (std::size_t i = uk - 1; i < j.size(); ++i) j[i] *= 1e-250;
    }
  }
  double norm = j[0];
  for (std::size_t k = 2; k < j.size(); k += 2) norm += 2.0 * j[k];
  for (auto& v : j) v /= norm;
  if (tail_mass) {
    double tail = 0.0;
    for (std::size_t k = static_cast<std::size_t>(n_max) + 1; k < j.size(); ++k) tail += j[k] * j[k];
    *tail_mass = 2.0 * tail;
  }
  std::copy(j.begin(), j.begin() + n_max + 1, out.begin());
  return out;
}

cplx KernelTable::operator()(long n) const {
  if (n < -half_width || n > half_width) return {};
  return values[static_cast<std::size_t>(n + half_width)];
}

double KernelTable::mass() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return s;
}

double KernelTable::abs_sum() const {
  double s = 0.0;
  for (const auto& v : values) s += std::abs(v);
  return s;
}

int recommended_half_width(double t, KernelKind kind) {
  const double x = bessel_argument(t, kind);
  return static_cast<int>(std::ceil(x + 40.0 + 10.0 * std::cbrt(x)));
}

KernelTable kernel_table(double t, int half_width, KernelKind kind) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw std::invalid_argument("kernel_table: t must be >= 0");
  if (half_width < 0) throw std::invalid_argument("kernel_table: half_width must be >= 0");
  double tail = 0.0;
  const auto j = bessel_j_sequence(bessel_argument(t, kind), half_width, &tail);
  if (tail > kTailLimit) {
    std::ostringstream os;
    os << "kernel_table: half_width " << half_width << " too small for t = " << t << " (tail mass " << tail << ")";
    throw NumericalError(os.str());
  }
  KernelTable k{t, half_width, kind, std::vector<cplx>(2 * static_cast<std::size_t>(half_width) + 1)};
  const cplx global = kind == KernelKind::lattice ? std::polar(1.0, -2.0 * t) : cplx(1.0);
  for (long n = 0; n <= half_width; ++n) {
    const cplx v = global * i_pow(n) * j[static_cast<std::size_t>(n)];
    k.values[static_cast<std::size_t>(half_width + n)] = v;
    k.values[static_cast<std::size_t>(half_width - n)] = v;
  }
  return k;
}

LatticeField linear_evolve(const LatticeField& psi0, double t) {
  if (t == 0.0) return psi0;
  const auto kernel = kernel_table(t, recommended_half_width(t));
  const std::size_t n = psi0.size();
  const long ln = static_cast<long>(n);
  std::vector<cplx> kper(n);
  for (long m = -kernel.half_width; m <= kernel.half_width; ++m) kper[static_cast<std::size_t>(((m % ln) + ln) % ln)] += kernel(m);
  auto& plan = fft_plan(n);
  std::vector<cplx> a(n), b(n);
  plan.forward(kper.data(), a.data());
  plan.forward(psi0.values().data(), b.data());
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) a[i] *= b[i] * inv;
  LatticeField out(psi0.extent());
  plan.backward(a.data(), out.values().data());
  return out;
}

cplx evolve_site(const KernelTable& kernel, const LatticeField& psi0, long x) {
  const long n = static_cast<long>(psi0.size());
  const long hw = kernel.half_width;
  cplx sum{};
  for (long y = -psi0.extent(); y <= psi0.extent(); ++y) {
    const cplx v = psi0.at(y);
    if (v == cplx{}) continue;
    const long d = x - y;
    // images d + m n inside [-hw, hw]
    const long m_lo = static_cast<long>(std::ceil(static_cast<double>(-hw - d) / static_cast<double>(n)));
    const long m_hi = static_cast<long>(std::floor(static_cast<double>(hw - d) / static_cast<double>(n)));
    for (long m = m_lo; m <= m_hi; ++m) sum += kernel(d + m * n) * v;
  }
  return sum;
}

cplx StationaryPhaseApprox::value() const {
  return n % 2 == 0 ? cplx(amplitude * std::cos(phi), 0.0) : cplx(0.0, amplitude * std::sin(phi));
}

StationaryPhaseApprox stationary_phase(double t, int n) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("stationary_phase: t must be positive");
  if (2.0 * std::abs(n) > t) throw std::invalid_argument("stationary_phase: requires |n| <= t/2");
  const double th = std::asin(static_cast<double>(n) / t);
  const double c = std::cos(th);
  return {t, n, th, 0.25 * kPi + t * c + n * th, std::sqrt(2.0 / (kPi * t * c))};
}

cplx stationary_phase_eval(double t, int n) { return stationary_phase(t, n).value(); }

LatticeField adversarial_data(double t0, int extent, KernelKind kind) {
  const auto kernel = kernel_table(t0, extent, kind);
  LatticeField a(extent);
  for (long n = -extent; n <= extent; ++n) {
    const cplx k = kernel(n);
    const double m = std::abs(k);
    a.at(n) = m < 1e-300 ? cplx{} : std::conj(k) / m;
  }
  return a;
}

bool pairing_check(double t) {
  if (!(t >= 20.0)) throw std::invalid_argument("pairing_check: requires t >= 20");
  auto phase = [t](int n) {
    const double th = std::asin(static_cast<double>(n) / t);
    return 0.25 * kPi + t * std::cos(th) + n * th;
  };
  const int lim = static_cast<int>(std::floor(0.5 * t));
  for (int n = -lim; n <= lim; ++n) {
    if (n % 2 != 0) continue;
    const double c = std::abs(std::cos(phase(n)));
    const double s = std::abs(std::sin(phase(n + 1)));
    if (std::max(c, s) < 0.25) return false;
  }
  return true;
}

double random_ensemble_second_moment(double t, double a, int num_samples, std::uint64_t seed, unsigned workers) {
  if (num_samples < 100) throw std::invalid_argument("random_ensemble_second_moment: need >= 100 samples");
  const auto kernel = kernel_table(t, recommended_half_width(t));
  std::vector<double> samples(static_cast<std::size_t>(num_samples));
  parallel_for(samples.size(), workers, [&](std::size_t s) {
    Rng rng = Rng::stream(seed, s);
    cplx psi{};
    for (long n = -kernel.half_width; n <= kernel.half_width; ++n) psi += kernel(n) * std::polar(a, 2.0 * kPi * rng.uniform());
    samples[s] = std::norm(psi);
  });
  double sum = 0.0;
  for (double v : samples) sum += v;
  return sum / static_cast<double>(num_samples);
}

} // namespace bnls
