#pragma once

#include <functional>
#include <span>

#include "hfock/point.hpp"
#include "hfock/poly.hpp"
#include "hfock/quad.hpp"

namespace hfock {

/// f(y) = e^{−x|y|²} |y|^k 𝒴_k(z, y/|y|).
struct TestFunction {
  Point z;
  int k = 0;
  double x_param = 1.0;

  void validate() const;
  double operator()(std::span<const double> y) const;
};

/// Quadrature used for one probe point: aligned about the probe, fine in
/// the polar angle, coarse on the orthogonal sub-sphere.
struct ProjectionQuadrature {
  int radial_order = 64;
  int polar_degree = 80;
  /// must cover the polynomial degree of f on spheres
  int rest_degree = 4;
};

/// (P_α f)(w) = ∫ H_α(w,y) f(y) dμ_α(y) with a rule on dμ_α.
double project_at(const Integrand& f, int n, double alpha, std::span<const double> w, const QuadratureRule& rule);

/// β-form: (β/α)^{n/2} ∫ H_α(w,y) e^{(1/β−1/α)|y|²} f(y) dμ_β(y), rule on dμ_β.
double project_at_beta(const Integrand& f, int n, double alpha, double beta, std::span<const double> w,
                       const QuadratureRule& rule);

/// P_α f evaluated on demand; each call builds a rule aligned with the probe.
std::function<double(std::span<const double>)> project(Integrand f, int n, double alpha,
                                                       ProjectionQuadrature q = {});

/// |z|^k / (αx+1)^{k+n/2} · 𝒴_k(w, z/|z|)
double project_test_closed(const TestFunction& tf, int n, double alpha, std::span<const double> w);

/// e^{(1/β−1/α)|w|²} |z|^k / (α^{n/2+k} (x+1/β)^{k+n/2}) · 𝒴_k(w, z/|z|)
double adjoint_test_closed(const TestFunction& tf, int n, double alpha, double beta, std::span<const double> w);

/// P_α* g(w) = (β/α)^{n/2} e^{(1/β−1/α)|w|²} ∫ H_α(w,y) g(y) dμ_β(y), the
/// adjoint in L²(dμ_β); rule on dμ_β.
double adjoint_at(const Integrand& g, int n, double alpha, double beta, std::span<const double> w,
                  const QuadratureRule& rule);

enum class PolyConstants {
  /// c_{k,i} = α^{(k−i)/2} Γ((k+i+n)/2) / Γ(n/2+i)
  Derived,
  /// every c_{k,i} = 1
  Printed,
};

/// c_{k,i} for the image of |y|^{k−i} ψ with ψ harmonic homogeneous of degree i.
double poly_image_constant(int n, double alpha, int k, int i, PolyConstants c = PolyConstants::Derived);

/// P_α f for a polynomial f (degree ≤ 12): Σ_{k,i} c_{k,i} ψ_k^i where
/// f_k = Σ_i |y|^{k−i} ψ_k^i is the harmonic decomposition of the degree-k part.
MultiPoly project_polynomial(const MultiPoly& f, double alpha, PolyConstants c = PolyConstants::Derived);

/// I_α^β(y) = ∫ |H_α(y,x)| dμ_β(x) on the given dμ_β rule.
double i_alpha_beta(std::span<const double> y, int n, double alpha, double beta, const QuadratureRule& rule);

/// Resolution of the dedicated I_α^β integrator: composite Gauss–Legendre
/// in both coordinates, panel width in units of sqrt(β).
struct AbsKernelQuadrature {
  double panel_width = 0.5;
  int panel_order = 16;
  /// sign changes of H along t1 are located at this many points per panel, then bisected
  int scan_per_panel = 2;
  /// outer panels are bisected until 16-point Gauss and its two halves agree
  double rel_tol = 1e-9;
  int max_depth = 12;
};

/// ∫ g(H_α(y,x)) dμ_β(x) for |y| = y_norm. The integrand is zonal about y, so
/// this reduces to t1 = ⟨x,ŷ⟩ and t2 = |x − t1ŷ|; each t1-line is split at
/// the zeros of H. g may grow at most quadratically.
double zonal_kernel_integral(double y_norm, int n, double alpha, double beta, const std::function<double(double)>& g,
                             AbsKernelQuadrature q = {});

/// I_α^β by zonal_kernel_integral with g = |·|.
double i_alpha_beta(std::span<const double> y, int n, double alpha, double beta, AbsKernelQuadrature q = {});

struct BoundParams {
  double epsilon = 0.5;
  double theta = 0.95;
  void validate() const;
};

struct LemmaBound {
  double psi;
  double phi;
  double c1;
  double c2;
  double total;
  /// max_{0≤m≤N} ∫_{−1}^{1} |G_N(t) t^m| dt
  double g_integral;
};

/// ∫_{−1}^{1} |G_N(t) t^m| dt, split at the roots of G_N and at 0.
double g_abs_moment(int N, int m);

/// The upper estimate c1·Ψ(|y|) + c2·Φ(|y|) for I_α^β, n = 2N+2.
LemmaBound lemma_bound(double y_norm, int n, double alpha, double beta, const BoundParams& bp);

struct RemarkEnvelope {
  /// Δ(|y|) = |y| + |y|^{1−N} for |y| < 1, |y| for |y| ≥ 1
  double delta;
  /// ₁F₁((1+n)/2, 3/2; θ²β|y|²/(4α²))
  double f_odd;
  /// ₁F₁(n/2, 1/2; θ²β|y|²/(4α²))
  double f_even;
  /// one-sided values of Δ at |y| = 1
  double delta_left_at_one;
  double delta_right_at_one;
};
RemarkEnvelope remark_envelope(double y_norm, int n, double alpha, double beta, double theta);

}  // namespace hfock
