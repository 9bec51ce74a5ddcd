#include "bnls/field_core.hpp"

#include "bnls/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace bnls {
namespace {

constexpr double kPi = std::numbers::pi;
// e^{-d^2} < 1e-18 beyond this distance.
const double kCombCut = std::sqrt(18.0 * std::log(10.0));

double smoothstep(double u) { return u * u * u * (10.0 + u * (-15.0 + 6.0 * u)); }

template <class Vec> bool finite_entries(const Vec& v) {
  return std::all_of(v.begin(), v.end(),
                     [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

template <class Vec> double sup_of(const Vec& v) {
  double s = 0.0;
  for (const auto& z : v) s = std::max(s, std::abs(z));
  return s;
}

} // namespace

LatticeField::LatticeField(int extent) : LatticeField(extent, std::vector<cplx>(2 * static_cast<std::size_t>(std::max(extent, 0)) + 1)) {}

LatticeField::LatticeField(int extent, std::vector<cplx> values) : extent_(extent), values_(std::move(values)) {
  if (extent < 0) throw std::invalid_argument("LatticeField: negative extent");
  if (values_.size() != 2 * static_cast<std::size_t>(extent) + 1)
    throw std::invalid_argument("LatticeField: expected 2N+1 values");
  if (!finite_entries(values_)) throw std::invalid_argument("LatticeField: non-finite value");
}

cplx& LatticeField::at(long x) {
  if (x < -extent_ || x > extent_) throw std::out_of_range("LatticeField: site outside [-N, N]");
  return values_[static_cast<std::size_t>(x + extent_)];
}

const cplx& LatticeField::at(long x) const {
  if (x < -extent_ || x > extent_) throw std::out_of_range("LatticeField: site outside [-N, N]");
  return values_[static_cast<std::size_t>(x + extent_)];
}

const cplx& LatticeField::wrapped(long x) const {
  const long n = static_cast<long>(values_.size());
  long i = (x + extent_) % n;
  if (i < 0) i += n;
  return values_[static_cast<std::size_t>(i)];
}

bool LatticeField::all_finite() const { return finite_entries(values_); }
double LatticeField::sup_abs() const { return sup_of(values_); }

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

GridField::GridField(double box_length, std::size_t m) : GridField(box_length, std::vector<cplx>(m)) {}

GridField::GridField(double box_length, std::vector<cplx> values) : box_length_(box_length), values_(std::move(values)) {
  if (!(box_length > 0.0) || !std::isfinite(box_length)) throw std::invalid_argument("GridField: box length must be positive");
  if (!is_power_of_two(values_.size())) throw std::invalid_argument("GridField: size must be a power of two");
  if (!finite_entries(values_)) throw std::invalid_argument("GridField: non-finite value");
}

double GridField::position(std::size_t j) const { return -0.5 * box_length_ + static_cast<double>(j) * spacing(); }
bool GridField::all_finite() const { return finite_entries(values_); }
double GridField::sup_abs() const { return sup_of(values_); }

SpectralField::SpectralField(double box_length, std::vector<cplx> coeffs) : box_length_(box_length), coeffs_(std::move(coeffs)) {
  if (!(box_length > 0.0)) throw std::invalid_argument("SpectralField: box length must be positive");
  if (!is_power_of_two(coeffs_.size())) throw std::invalid_argument("SpectralField: size must be a power of two");
}

long SpectralField::mode_index(std::size_t i) const {
  const long m = static_cast<long>(coeffs_.size());
  const long li = static_cast<long>(i);
  return li < m / 2 ? li : li - m;
}

double SpectralField::wavenumber(std::size_t i) const { return 2.0 * kPi * static_cast<double>(mode_index(i)) / box_length_; }

std::vector<double> wavenumbers(std::size_t m, double box_length) {
  std::vector<double> k(m);
  const long mm = static_cast<long>(m);
  for (long i = 0; i < mm; ++i) k[static_cast<std::size_t>(i)] = 2.0 * kPi * static_cast<double>(i < mm / 2 ? i : i - mm) / box_length;
  return k;
}

// The grid starts at -L/2, so the coefficient of mode m carries the phase
// e^{i k_m L/2} = (-1)^m relative to the plain DFT.
SpectralField to_spectral(const GridField& f) {
  const std::size_t m = f.size();
  std::vector<cplx> c(m);
  fft_plan(m).forward(f.values().data(), c.data());
  const double inv = 1.0 / static_cast<double>(m);
  SpectralField out(f.box_length(), std::move(c));
  for (std::size_t i = 0; i < m; ++i) out[i] *= (out.mode_index(i) % 2 == 0 ? inv : -inv);
  return out;
}

GridField to_grid(const SpectralField& c) {
  const std::size_t m = c.size();
  std::vector<cplx> tmp(c.coeffs());
  for (std::size_t i = 0; i < m; ++i)
    if (c.mode_index(i) % 2 != 0) tmp[i] = -tmp[i];
  fft_plan(m).backward(tmp.data(), tmp.data());
  return GridField(c.box_length(), std::move(tmp));
}

double chi_eval(double x) {
  const double a = std::abs(x);
  if (a <= 1.0) return 1.0;
  if (a >= 2.0) return 0.0;
  return 1.0 - smoothstep(a - 1.0);
}

double chi_derivative(double x) {
  const double a = std::abs(x);
  if (a <= 1.0 || a >= 2.0) return 0.0;
  const double u = a - 1.0;
  const double ds = 30.0 * u * u * (u - 1.0) * (u - 1.0);
  return x > 0 ? -ds : ds;
}

WeightProfile::WeightProfile(long x0, double r, double t0) : x0_(x0), r_(r), t0_(t0) {
  if (!(r >= 1.0)) throw std::invalid_argument("WeightProfile: R must be >= 1");
  if (!(t0 >= 0.0)) throw std::invalid_argument("WeightProfile: t0 must be >= 0");
}

double WeightProfile::evaluate(double t, double x) const {
  if (!(t >= 0.0) || t > t0_) throw std::out_of_range("WeightProfile: t outside [0, t0]");
  const double d = x - static_cast<double>(x0_);
  return std::sqrt(d * d + 1.0) / (r_ * (2.0 * t0_ - t + 1.0));
}

double weight_eval(const WeightProfile& w, double t, long x) { return w.evaluate(t, static_cast<double>(x)); }

Mollifier Mollifier::gaussian(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw std::invalid_argument("Mollifier: sigma must be positive");
  return {Kind::gaussian, sigma};
}

Mollifier Mollifier::fourier_cutoff(double k_cut) {
  if (!(k_cut > 0.0) || !std::isfinite(k_cut)) throw std::invalid_argument("Mollifier: cutoff must be positive");
  return {Kind::fourier_cutoff, k_cut};
}

Mollifier Mollifier::identity() { return {Kind::identity, 0.0}; }

double Mollifier::transfer(double k) const {
  switch (kind_) {
  case Kind::gaussian: return std::exp(-0.5 * parameter_ * parameter_ * k * k);
  case Kind::fourier_cutoff: return std::abs(k) <= parameter_ ? 1.0 : 0.0;
  case Kind::identity: return 1.0;
  }
  return 1.0;
}

double Mollifier::kernel(double x) const {
  if (kind_ != Kind::gaussian) throw std::logic_error("Mollifier::kernel: only the Gaussian has a pointwise profile");
  const double s = parameter_;
  return std::exp(-0.5 * x * x / (s * s)) / (s * std::sqrt(2.0 * kPi));
}

std::string Mollifier::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
  case Kind::gaussian: os << "gaussian(sigma=" << parameter_ << ")"; break;
  case Kind::fourier_cutoff: os << "fourier_cutoff(K=" << parameter_ << ")"; break;
  case Kind::identity: os << "identity"; break;
  }
  return os.str();
}

cplx CombCoefficients::operator()(long j) const {
  if (j < first || j > last()) return {};
  return values[static_cast<std::size_t>(j - first)];
}

CombCoefficients CombCoefficients::ones(long first, long last) {
  return {first, std::vector<cplx>(static_cast<std::size_t>(std::max(0L, last - first + 1)), cplx(1.0))};
}

CombCoefficients CombCoefficients::unit_delta() { return {0, {cplx(1.0)}}; }

CombCoefficients CombCoefficients::random_phase(long first, long last, std::uint64_t seed) {
  Rng rng(seed);
  CombCoefficients c{first, {}};
  for (long j = first; j <= last; ++j) c.values.push_back(std::polar(1.0, 2.0 * kPi * rng.uniform()));
  return c;
}

CombCoefficients CombCoefficients::random_uniform(long first, long last, std::uint64_t seed) {
  Rng rng(seed);
  CombCoefficients c{first, {}};
  for (long j = first; j <= last; ++j) c.values.emplace_back(2.0 * rng.uniform() - 1.0, 0.0);
  return c;
}

cplx gaussian_comb_eval(const CombCoefficients& a, double x) {
  if (a.values.empty()) return {};
  const long lo = std::max(a.first, static_cast<long>(std::ceil(x - kCombCut)));
  const long hi = std::min(a.last(), static_cast<long>(std::floor(x + kCombCut)));
  cplx sum{};
  for (long j = lo; j <= hi; ++j) {
    const double d = x - static_cast<double>(j);
    sum += a(j) * std::exp(-d * d);
  }
  return sum;
}

std::string to_string(DataKind kind) {
  switch (kind) {
  case DataKind::constant: return "constant";
  case DataKind::random_phase: return "random_phase";
  case DataKind::random_gaussian: return "random_gaussian";
  case DataKind::gaussian_comb: return "gaussian_comb";
  case DataKind::periodic: return "periodic";
  case DataKind::delta: return "delta";
  }
  return "?";
}

DataKind data_kind_from_string(const std::string& name) {
  for (auto k : {DataKind::constant, DataKind::random_phase, DataKind::random_gaussian, DataKind::gaussian_comb,
                 DataKind::periodic, DataKind::delta})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown data kind '" + name + "'");
}

InitialData InitialData::constant(double a) { return {DataKind::constant, a, 0, {}, {}, {}}; }
InitialData InitialData::delta(double a) { return {DataKind::delta, a, 0, {}, {}, {}}; }
InitialData InitialData::random_phase(double a, std::uint64_t seed) { return {DataKind::random_phase, a, seed, {}, {}, {}}; }
InitialData InitialData::random_gaussian(double a, std::uint64_t seed) { return {DataKind::random_gaussian, a, seed, {}, {}, {}}; }
InitialData InitialData::gaussian_comb(CombCoefficients coeffs, double a) { return {DataKind::gaussian_comb, a, 0, std::move(coeffs), {}, {}}; }

InitialData InitialData::periodic(std::vector<double> amplitudes, std::vector<double> frequencies) {
  InitialData d{DataKind::periodic, 0.0, 0, {}, std::move(amplitudes), std::move(frequencies)};
  for (double a : d.amplitudes) d.amplitude += std::abs(a);
  return d;
}

double InitialData::sup_bound() const {
  switch (kind) {
  case DataKind::gaussian_comb:
    // sup_x sum_j e^{-(x-j)^2}, attained at integer x.
    return std::abs(amplitude) * 1.7726372048266521;
  case DataKind::periodic: {
    double s = 0.0;
    for (double a : amplitudes) s += std::abs(a);
    return s;
  }
  case DataKind::random_gaussian: return INFINITY;
  default: return std::abs(amplitude);
  }
}

void InitialData::validate() const {
  if (!std::isfinite(amplitude) || amplitude < 0.0) throw std::invalid_argument("initial data: amplitude must be finite and >= 0");
  if (kind == DataKind::gaussian_comb) {
    for (const auto& a : comb.values)
      if (!(std::abs(a) <= 1.0 + 1e-15)) throw std::invalid_argument("initial data: comb coefficients need |a_j| <= 1");
  }
  if (kind == DataKind::periodic) {
    if (amplitudes.size() != frequencies.size() || amplitudes.empty())
      throw std::invalid_argument("initial data: periodic needs matching, non-empty amplitude and frequency lists");
    for (std::size_t i = 0; i < amplitudes.size(); ++i)
      if (!std::isfinite(amplitudes[i]) || !std::isfinite(frequencies[i]))
        throw std::invalid_argument("initial data: periodic parameters must be finite");
  }
}

LatticeField make_initial_lattice(const InitialData& spec, int extent) {
  if (extent < 1) throw std::invalid_argument("make_initial_lattice: extent must be >= 1");
  spec.validate();
  LatticeField f(extent);
  auto& v = f.values();
  const double a = spec.amplitude;
  switch (spec.kind) {
  case DataKind::constant: std::fill(v.begin(), v.end(), cplx(a)); break;
  case DataKind::delta: f.at(0) = a; break;
  case DataKind::random_phase: {
    Rng rng(spec.seed);
    for (auto& z : v) z = std::polar(a, 2.0 * kPi * rng.uniform());
    break;
  }
  case DataKind::random_gaussian: {
    Rng rng(spec.seed);
    const double s = a / std::sqrt(2.0);
    for (auto& z : v) {
      const double re = rng.normal();
      z = cplx(s * re, s * rng.normal());
    }
    break;
  }
  case DataKind::gaussian_comb:
    for (long x = -extent; x <= extent; ++x) f.at(x) = a * gaussian_comb_eval(spec.comb, static_cast<double>(x));
    break;
  case DataKind::periodic:
    for (long x = -extent; x <= extent; ++x) {
      double s = 0.0;
      for (std::size_t i = 0; i < spec.amplitudes.size(); ++i) s += spec.amplitudes[i] * std::cos(spec.frequencies[i] * static_cast<double>(x));
      f.at(x) = s;
    }
    break;
  }
  return f;
}

GridField make_initial_grid(const InitialData& spec, double box_length, std::size_t m) {
  spec.validate();
  GridField f(box_length, m);
  auto& v = f.values();
  const double a = spec.amplitude;
  switch (spec.kind) {
  case DataKind::constant: std::fill(v.begin(), v.end(), cplx(a)); break;
  case DataKind::delta: v[m / 2] = a; break;
  case DataKind::random_phase: {
    Rng rng(spec.seed);
    for (auto& z : v) z = std::polar(a, 2.0 * kPi * rng.uniform());
    break;
  }
  case DataKind::random_gaussian: {
    Rng rng(spec.seed);
    const double s = a / std::sqrt(2.0);
    for (auto& z : v) {
      const double re = rng.normal();
      z = cplx(s * re, s * rng.normal());
    }
    break;
  }
  case DataKind::gaussian_comb: {
    const long images = static_cast<long>(std::ceil((kCombCut + 0.5 * box_length + std::max(std::abs(spec.comb.first), std::abs(spec.comb.last()))) / box_length));
    for (std::size_t j = 0; j < m; ++j) {
      const double x = f.position(j);
      cplx s{};
      for (long img = -images; img <= images; ++img) s += gaussian_comb_eval(spec.comb, x + static_cast<double>(img) * box_length);
      v[j] = a * s;
    }
    break;
  }
  case DataKind::periodic:
    for (std::size_t j = 0; j < m; ++j) {
      const double x = f.position(j);
      double s = 0.0;
      for (std::size_t i = 0; i < spec.amplitudes.size(); ++i) s += spec.amplitudes[i] * std::cos(spec.frequencies[i] * x);
      v[j] = s;
    }
    break;
  }
  return f;
}

RationalApprox rational_approximation(double ratio, long max_denominator) {
  if (!std::isfinite(ratio) || max_denominator < 1) throw std::invalid_argument("rational_approximation: bad arguments");
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = ratio;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    const long ai = static_cast<long>(a);
    const long p2 = ai * p1 + p0;
    const long q2 = ai * q1 + q0;
    if (q2 > max_denominator) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  return {p1, q1, std::abs(ratio - static_cast<double>(p1) / static_cast<double>(q1))};
}

} // namespace bnls
