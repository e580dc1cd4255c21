#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "hfock/point.hpp"

namespace hfock {

/// Requested rule or size lies outside what the implementation supports.
class CapabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Zonal harmonic 𝒴_m(x, ξ) by the explicit finite sum, homogeneous of
/// degree m in x. m = 0 gives 1.
double zonal(int m, std::span<const double> x, const UnitVector& xi);

/// 𝒴_m(ξ, η) for unit vectors with ⟨ξ,η⟩ = u, by the Gegenbauer recurrence.
double zonal_unit(int n, int m, double u);

/// Solid zonal Y_m(x, y) = |y|^m 𝒴_m(x, y/|y|); 0 (or 1 for m = 0) when |y| < 1e−300.
double zonal_solid(int m, std::span<const double> x, std::span<const double> y);

/// dim H_m(ℝⁿ) = 𝒴_m(ξ, ξ).
std::int64_t zonal_dim(int n, int m);

/// Quadrature on S^{n−1} for the normalized surface measure dσ′.
/// Nodes are stored row-major, n coordinates each.
struct SphereRule {
  int n = 0;
  std::vector<double> coords;
  std::vector<double> weights;
  int exact_degree = 0;
  /// max |rule moment − exact moment| over the certified monomials
  double certificate = 0.0;

  std::size_t size() const noexcept { return weights.size(); }
  std::span<const double> node(std::size_t i) const {
    return {coords.data() + i * static_cast<std::size_t>(n), static_cast<std::size_t>(n)};
  }
};

/// Spherical-coordinate product rule exact to `exact_degree`, certified
/// against closed-form monomial moments. 2 ≤ n ≤ 8, degree ≤ 30.
SphereRule sphere_rule(int n, int exact_degree);

/// Rule built around `axis`: the polar cosine ⟨ξ, axis⟩ is resolved to
/// `polar_degree`, the orthogonal sub-sphere only to `rest_degree`.
/// Exact for f(ξ) = g(⟨ξ,axis⟩)·q(ξ) with deg g + deg q ≤ polar_degree and
/// deg q ≤ rest_degree; rest_degree = 0 suits integrands zonal about `axis`.
SphereRule sphere_rule_aligned(const UnitVector& axis, int polar_degree, int rest_degree);

double sphere_integrate(const std::function<double(std::span<const double>)>& f, const SphereRule& rule);

/// ∫ ξ^s dσ′(ξ) in closed form.
double sphere_moment(std::span<const int> s);

/// Max moment error of `rule` over monomials of degree ≤ degree (a fixed
/// pseudo-random sample when there are more than `max_monomials`).
double certify_sphere_rule(const SphereRule& rule, int degree, std::size_t max_monomials = 4000);

}  // namespace hfock
