#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hfock/poly.hpp"
#include "hfock/specfun.hpp"

namespace hfock {

/// t1 = ⟨x,y⟩, t2 = V(x,y) = sqrt(|x|²|y|² − ⟨x,y⟩²). V is formed from the
/// 2×2 minors x_i y_j − x_j y_i so it stays accurate for nearly parallel pairs.
struct KernelGeometry {
  double t1 = 0.0;
  double t2 = 0.0;
  /// angle between x and y; 0 when either vector vanishes
  double angle = 0.0;
  double norm_x = 0.0;
  double norm_y = 0.0;

  static KernelGeometry of(std::span<const double> x, std::span<const double> y);
};

// Every representation depends on (x, y, α) only through a = t1/α and
// b = t2/α; the *_ab entry points take those directly.
namespace kernel_ab {

struct SeriesResult {
  double value;
  int terms;
};

/// Zonal series Σ_k ρ^k/(n/2)_k 𝒴_k(u), ρ = |x||y|/α, accumulated in
/// 113-bit precision. Reference representation.
SeriesResult series(int n, double a, double b, const PrecisionPolicy& policy = {});
/// Same series in double precision; accurate in absolute terms (error
/// ≲ 1e−16·e^{ρ}), which is what Gaussian-weighted quadrature needs.
SeriesResult series_fast(int n, double a, double b, const PrecisionPolicy& policy = {});
Phi2Real phi2(int n, double a, double b, const PrecisionPolicy& policy = {});
double closed_n2(double a, double b);
/// form printed without the m = 0 correction: 2e^{a} cos b
double closed_n2_printed(double a, double b);
double closed_n4(double a, double b);

struct EvenNResult {
  double value = 0.0;
  double imag_residue = 0.0;
  int legendre_order = 0;
  /// V below the near-parallel threshold: value is the reference series
  bool fallback = false;
  /// Σ |terms| before the real part is taken; the cancellation scale
  double term_scale = 0.0;
};
EvenNResult even_n(int N, double a, double b, int legendre_order = 64);

/// For fixed b > 0 the even-n formula is e^{a}·Σ_k c_k a^k; returns c_0..c_N.
/// Loses about (N−1)·log10(1/b) digits as b → 0.
std::vector<double> even_n_a_polynomial(int N, double b);

/// Cheapest valid representation: closed form for n ∈ {2,4}, the even-n
/// formula for other even n, the double series for odd n.
double fast(int n, double a, double b);

}  // namespace kernel_ab

double kernel_series(int n, double alpha, std::span<const double> x, std::span<const double> y,
                     const PrecisionPolicy& policy = {});
double kernel_phi2(int n, double alpha, std::span<const double> x, std::span<const double> y,
                   const PrecisionPolicy& policy = {});
double kernel_closed_n2(double alpha, std::span<const double> x, std::span<const double> y);
double kernel_closed_n4(double alpha, std::span<const double> x, std::span<const double> y);
double kernel_even_n(int N, double alpha, std::span<const double> x, std::span<const double> y,
                     int legendre_order = 64);

/// G_N(t) = (−1)^{N−1} d^{N−1}/dt^{N−1} (1−t²)^{N−1} as a univariate polynomial.
MultiPoly g_n_poly(int N);

/// H_α(x,x) = ₁F₁(n−2, n/2−1; |x|²/α); n = 2 uses the closed form 2e^{|x|²/α} − 1.
double kernel_trace(int n, double alpha, std::span<const double> x, const PrecisionPolicy& policy = {});

struct TraceAsymptotic {
  double value;
  double first_omitted;
  /// same prefactor with the ₂F₀ parameters as printed, (1−n/2, n−3)
  double printed_parameters_value;
};
/// Large-|x| form Γ(n/2−1) e^{X} X^{n/2−1}/Γ(n−2) · ₂F₀(1−n/2, 3−n; 1/X), X = |x|²/α,
/// truncated after `terms` terms. n ≥ 3.
TraceAsymptotic kernel_trace_asymptotic(int n, double alpha, std::span<const double> x, int terms);

struct CrossCheckReport {
  struct Entry {
    std::string name;
    double value;
  };
  struct Deviation {
    std::string a;
    std::string b;
    double value;
  };
  std::vector<Entry> values;
  std::vector<Deviation> deviations;
  double chosen = 0.0;
  double max_deviation = 0.0;
  bool near_parallel_fallback = false;
  int series_terms = 0;
  int legendre_order = 0;
  double even_imag_residue = 0.0;
  double phi2_imag_residue = 0.0;
  /// n = 2 only: the printed closed form without the −1, never part of the deviations
  std::optional<double> printed_n2;
};

/// |a − b| / max(|a|, |b|), 0 when both vanish.
double relative_deviation(double a, double b);

double kernel(int n, double alpha, std::span<const double> x, std::span<const double> y);
CrossCheckReport kernel_checked(int n, double alpha, std::span<const double> x, std::span<const double> y,
                                const PrecisionPolicy& policy = {});

}  // namespace hfock
