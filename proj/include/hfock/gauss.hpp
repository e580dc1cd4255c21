#pragma once

#include <vector>

namespace hfock {

/// One-dimensional Gaussian rule: nodes ascending, weights summing to μ₀.
struct GaussRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss–Legendre on [−1, 1], weight 1.
GaussRule1D gauss_legendre(int order);

/// Gauss–Gegenbauer on [−1, 1], weight (1−u²)^exponent, exponent ≥ 0.
GaussRule1D gauss_gegenbauer(int order, double exponent);

/// Generalized Gauss–Laguerre on [0, ∞), weight u^exponent e^{−u}, exponent > −1.
GaussRule1D gauss_laguerre(int order, double exponent);

/// Gauss–Hermite on ℝ, weight e^{−t²}.
GaussRule1D gauss_hermite(int order);

}  // namespace hfock
