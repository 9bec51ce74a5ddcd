#pragma once

#include "bnls/fft.hpp"

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace bnls {

using cplx = std::complex<double>;

// Complex amplitudes on the truncated lattice {-N, ..., N}, stored contiguously
// with site x at values[x + N]. Engines treat the truncation as periodic.
class LatticeField {
public:
  LatticeField() = default;
  explicit LatticeField(int extent);
  LatticeField(int extent, std::vector<cplx> values);

  [[nodiscard]] int extent() const { return extent_; }
  [[nodiscard]] int origin_index() const { return extent_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }

  // Site access, x in [-N, N]; throws std::out_of_range otherwise.
  [[nodiscard]] cplx& at(long x);
  [[nodiscard]] const cplx& at(long x) const;
  // Site access with periodic wrap of the truncated lattice.
  [[nodiscard]] const cplx& wrapped(long x) const;

  [[nodiscard]] cplx& operator[](std::size_t i) { return values_[i]; }
  [[nodiscard]] const cplx& operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] std::vector<cplx>& values() { return values_; }
  [[nodiscard]] const std::vector<cplx>& values() const { return values_; }

  [[nodiscard]] bool all_finite() const;
  [[nodiscard]] double sup_abs() const;

private:
  int extent_ = 0;
  std::vector<cplx> values_;
};

// M samples on the periodic box [-L/2, L/2): values[j] sits at x_j = -L/2 + j h.
class GridField {
public:
  GridField() = default;
  GridField(double box_length, std::size_t m);
  GridField(double box_length, std::vector<cplx> values);

  [[nodiscard]] double box_length() const { return box_length_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double spacing() const { return box_length_ / static_cast<double>(values_.size()); }
  [[nodiscard]] double position(std::size_t j) const;

  [[nodiscard]] cplx& operator[](std::size_t j) { return values_[j]; }
  [[nodiscard]] const cplx& operator[](std::size_t j) const { return values_[j]; }
  [[nodiscard]] std::vector<cplx>& values() { return values_; }
  [[nodiscard]] const std::vector<cplx>& values() const { return values_; }

  [[nodiscard]] bool all_finite() const;
  [[nodiscard]] double sup_abs() const;

private:
  double box_length_ = 0.0;
  std::vector<cplx> values_;
};

// Fourier coefficients c_m of a GridField, f(x) = sum_m c_m e^{i k_m x} with
// k_m = 2 pi m / L. Storage is in FFT order: index i holds m = i for i < M/2
// and m = i - M otherwise.
class SpectralField {
public:
  SpectralField() = default;
  SpectralField(double box_length, std::vector<cplx> coeffs);

  [[nodiscard]] double box_length() const { return box_length_; }
  [[nodiscard]] std::size_t size() const { return coeffs_.size(); }
  [[nodiscard]] long mode_index(std::size_t i) const;
  [[nodiscard]] double wavenumber(std::size_t i) const;

  [[nodiscard]] cplx& operator[](std::size_t i) { return coeffs_[i]; }
  [[nodiscard]] const cplx& operator[](std::size_t i) const { return coeffs_[i]; }
  [[nodiscard]] std::vector<cplx>& coeffs() { return coeffs_; }
  [[nodiscard]] const std::vector<cplx>& coeffs() const { return coeffs_; }

private:
  double box_length_ = 0.0;
  std::vector<cplx> coeffs_;
};

[[nodiscard]] bool is_power_of_two(std::size_t m);
// Wavenumbers in FFT order for an M-point grid on a box of length L.
[[nodiscard]] std::vector<double> wavenumbers(std::size_t m, double box_length);
[[nodiscard]] SpectralField to_spectral(const GridField& f);
[[nodiscard]] GridField to_grid(const SpectralField& c);

// Cutoff: 1 on |x| <= 1, 0 on |x| >= 2, quintic smoothstep in between.
[[nodiscard]] double chi_eval(double x);
[[nodiscard]] double chi_derivative(double x);

class WeightProfile {
public:
  WeightProfile(long x0, double r, double t0);

  [[nodiscard]] long x0() const { return x0_; }
  [[nodiscard]] double r() const { return r_; }
  [[nodiscard]] double t0() const { return t0_; }

  // F(t, x) = sqrt((x - x0)^2 + 1) / (R (2 t0 - t + 1)), defined for 0 <= t <= t0.
  [[nodiscard]] double evaluate(double t, double x) const;

private:
  long x0_;
  double r_;
  double t0_;
};

[[nodiscard]] double weight_eval(const WeightProfile& w, double t, long x);

class Mollifier {
public:
  enum class Kind { gaussian, fourier_cutoff, identity };

  // Unit-mass Gaussian of standard deviation sigma; transfer e^{-sigma^2 k^2 / 2}.
  static Mollifier gaussian(double sigma);
  // Sharp projection onto |k| <= K.
  static Mollifier fourier_cutoff(double k_cut);
  // The sigma -> 0 limit, i.e. the plain cubic nonlinearity.
  static Mollifier identity();

  [[nodiscard]] Kind kind() const { return kind_; }
  [[nodiscard]] double parameter() const { return parameter_; }
  [[nodiscard]] double transfer(double k) const;
  // Real-space profile; Gaussian only.
  [[nodiscard]] double kernel(double x) const;
  [[nodiscard]] std::string describe() const;

private:
  Mollifier(Kind kind, double parameter) : kind_(kind), parameter_(parameter) {}
  Kind kind_;
  double parameter_;
};

// Coefficients a_j for j = first, ..., first + values.size() - 1; zero elsewhere.
struct CombCoefficients {
  long first = 0;
  std::vector<cplx> values;

  [[nodiscard]] long last() const { return first + static_cast<long>(values.size()) - 1; }
  [[nodiscard]] cplx operator()(long j) const;

  static CombCoefficients ones(long first, long last);
  static CombCoefficients unit_delta();
  static CombCoefficients random_phase(long first, long last, std::uint64_t seed);
  static CombCoefficients random_uniform(long first, long last, std::uint64_t seed);
};

// sum_j a_j e^{-(x - j)^2}, skipping terms with e^{-(x-j)^2} < 1e-18.
[[nodiscard]] cplx gaussian_comb_eval(const CombCoefficients& a, double x);

enum class DataKind { constant, random_phase, random_gaussian, gaussian_comb, periodic, delta };

[[nodiscard]] std::string to_string(DataKind kind);
[[nodiscard]] DataKind data_kind_from_string(const std::string& name);

struct InitialData {
  DataKind kind = DataKind::constant;
  double amplitude = 1.0;
  std::uint64_t seed = 0;
  // gaussian_comb: psi_0 = amplitude * sum_j a_j e^{-(x-j)^2}
  CombCoefficients comb;
  // periodic: psi_0 = sum_i amplitudes[i] cos(frequencies[i] x)
  std::vector<double> amplitudes;
  std::vector<double> frequencies;

  static InitialData constant(double a);
  static InitialData delta(double a);
  static InitialData random_phase(double a, std::uint64_t seed);
  // Complex Gaussian with E|psi_0|^2 = a^2. Unbounded, so no sup bound applies.
  static InitialData random_gaussian(double a, std::uint64_t seed);
  static InitialData gaussian_comb(CombCoefficients coeffs, double a = 1.0);
  static InitialData periodic(std::vector<double> amplitudes, std::vector<double> frequencies);

  [[nodiscard]] bool bounded() const { return kind != DataKind::random_gaussian; }
  // Guaranteed bound on sup|psi_0| for bounded kinds.
  [[nodiscard]] double sup_bound() const;
  void validate() const;
};

[[nodiscard]] LatticeField make_initial_lattice(const InitialData& spec, int extent);
// Grid samples on [-L/2, L/2). Combs are periodized over the box.
[[nodiscard]] GridField make_initial_grid(const InitialData& spec, double box_length, std::size_t m);

// Best rational approximation p/q of `ratio` with q <= max_denominator, from
// the continued fraction expansion.
struct RationalApprox {
  long p;
  long q;
  double error;
};
[[nodiscard]] RationalApprox rational_approximation(double ratio, long max_denominator);

} // namespace bnls
