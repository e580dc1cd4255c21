#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hfock/point.hpp"
#include "hfock/sphere.hpp"

namespace hfock {

/// dμ_α(x) = (πα)^{−n/2} e^{−|x|²/α} dx, a probability measure on ℝⁿ.
struct GaussianMeasure {
  int n;
  double alpha;

  void validate() const;
  double density(std::span<const double> x) const;
  /// ∫ x^s dμ_α in closed form
  double moment(std::span<const int> s) const;
};

/// Weighted node set approximating ∫ f dμ_α. Nodes row-major, n per node.
struct QuadratureRule {
  enum class Form { TensorHermite, RadialSphere };

  GaussianMeasure measure{2, 1.0};
  Form form = Form::RadialSphere;
  std::vector<double> coords;
  std::vector<double> weights;
  int radial_order = 0;
  int sphere_degree = 0;
  /// total degree certified exact, and the max moment error found
  int exact_degree = 0;
  double certificate = 0.0;

  int n() const noexcept { return measure.n; }
  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> node(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(measure.n), static_cast<std::size_t>(measure.n)};
  }
};

/// Non-finite integrand value; the message names the node.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Radial × sphere product rule on dμ_α: generalized Gauss–Laguerre in
/// u = |x|²/α with exponent n/2 − 1, times sphere_rule(n, sphere_degree).
/// 2 ≤ n ≤ 6, radial_order ≤ 128.
QuadratureRule gauss_rule(int n, double alpha, int radial_order, int sphere_degree);

/// Same radial factor, sphere factor from sphere_rule_aligned(axis, ...).
QuadratureRule gauss_rule_aligned(double alpha, int radial_order, const UnitVector& axis, int polar_degree,
                                  int rest_degree);

/// Tensor Gauss–Hermite rule with `order` nodes per axis; n ≤ 3, for cross-checks.
QuadratureRule tensor_hermite_rule(int n, double alpha, int order);

/// Max error of the rule's monomial moments up to `degree` (sampled when large).
double certify_rule(const QuadratureRule& rule, int degree, std::size_t max_monomials = 2000);

using Integrand = std::function<double(std::span<const double>)>;

/// Σ w_i f(x_i). Nodes are split into fixed chunks that may run on
/// HFOCK_THREADS workers; partial sums are combined in chunk order, so the
/// result does not depend on the worker count. f must be thread-safe.
double integrate(const Integrand& f, const QuadratureRule& rule);

/// Number of workers integrate() uses: HFOCK_THREADS if set (≥ 1), else
/// the hardware concurrency.
int worker_count();

/// ‖f‖_{p,α} = (∫ |f|^p dμ_{2α/p})^{1/p}; `rule` must be built on dμ_{2α/p}.
double lp_seminorm(const Integrand& f, double p, double alpha, const QuadratureRule& rule);

/// max over `grid` of |f(x)| e^{−|x|²/(2α)}: a lower bound for ‖f‖_{∞,α}.
double lp_sup_lower_bound(const Integrand& f, double alpha, const std::vector<Point>& grid);

}  // namespace hfock
