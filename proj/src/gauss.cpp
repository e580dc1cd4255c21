#include "hfock/gauss.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace hfock {

namespace {

/// Monic three-term recurrence p_{k+1} = (x − a_k) p_k − b_k p_{k−1}; b_0 = μ₀.
struct Recurrence {
  std::vector<double> a;
  std::vector<double> b;
};

/// Orthonormal polynomial values P̂_0..P̂_{m} at x and the derivative of P̂_m.
struct OrthoEval {
  double sum_sq;  // Σ_{k<m} P̂_k(x)²
  double pm;
  double dpm;
};

OrthoEval evaluate(const Recurrence& r, int m, double x) {
  double p_prev = 0.0;
  double p = 1.0 / std::sqrt(r.b[0]);
  double d_prev = 0.0;
  double d = 0.0;
  double sum_sq = 0.0;
  for (int k = 0; k < m; ++k) {
    sum_sq += p * p;
    const double s_next = std::sqrt(r.b[k + 1]);
    const double s_prev = k > 0 ? std::sqrt(r.b[k]) : 0.0;
    const double p_next = ((x - r.a[k]) * p - s_prev * p_prev) / s_next;
    const double d_next = (p + (x - r.a[k]) * d - s_prev * d_prev) / s_next;
    p_prev = p;
    p = p_next;
    d_prev = d;
    d = d_next;
  }
  return {sum_sq, p, d};
}

GaussRule1D golub_welsch(const Recurrence& r, int m) {
  Eigen::VectorXd diag(m);
  Eigen::VectorXd sub(m > 1 ? m - 1 : 0);
  for (int k = 0; k < m; ++k) diag[k] = r.a[k];
  for (int k = 1; k < m; ++k) sub[k - 1] = std::sqrt(r.b[k]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("gauss rule: eigen solve failed");

  GaussRule1D rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = solver.eigenvalues()[i];
    // Newton polish on the orthonormal P̂_m
    for (int it = 0; it < 4; ++it) {
      const OrthoEval e = evaluate(r, m, x);
      if (e.dpm == 0.0 || !std::isfinite(e.dpm)) break;
      const double step = e.pm / e.dpm;
      x -= step;
      if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(x))) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 1.0 / evaluate(r, m, x).sum_sq;  // Christoffel numbers
  }
  return rule;
}

void check_order(int order) {
  if (order < 1 || order > 512) throw std::invalid_argument("gauss rule: order must be in [1, 512]");
}

}  // namespace

GaussRule1D gauss_legendre(int order) { return gauss_gegenbauer(order, 0.0); }

GaussRule1D gauss_gegenbauer(int order, double exponent) {
  check_order(order);
  if (exponent < 0.0) throw std::invalid_argument("gauss_gegenbauer: exponent must be >= 0");
  Recurrence r;
  r.a.assign(order + 1, 0.0);
  r.b.resize(order + 1);
  const double e = exponent;
  r.b[0] = std::sqrt(M_PI) * std::exp(std::lgamma(e + 1.0) - std::lgamma(e + 1.5));
  for (int k = 1; k <= order; ++k) {
    r.b[k] = k * (k + 2.0 * e) / ((2.0 * k + 2.0 * e + 1.0) * (2.0 * k + 2.0 * e - 1.0));
  }
  return golub_welsch(r, order);
}

GaussRule1D gauss_laguerre(int order, double exponent) {
  check_order(order);
  if (!(exponent > -1.0)) throw std::invalid_argument("gauss_laguerre: exponent must be > -1");
  Recurrence r;
  r.a.resize(order + 1);
  r.b.resize(order + 1);
  r.b[0] = std::exp(std::lgamma(exponent + 1.0));
  for (int k = 0; k <= order; ++k) {
    r.a[k] = 2.0 * k + exponent + 1.0;
    if (k > 0) r.b[k] = k * (k + exponent);
  }
  return golub_welsch(r, order);
}

GaussRule1D gauss_hermite(int order) {
  check_order(order);
  Recurrence r;
  r.a.assign(order + 1, 0.0);
  r.b.resize(order + 1);
  r.b[0] = std::sqrt(M_PI);
  for (int k = 1; k <= order; ++k) r.b[k] = 0.5 * k;
  return golub_welsch(r, order);
}

}  // namespace hfock
