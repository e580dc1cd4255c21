#include "hfock/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>

#include "hfock/detail/extended.hpp"
#include "hfock/gauss.hpp"
#include "hfock/point.hpp"

namespace hfock {

KernelGeometry KernelGeometry::of(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("KernelGeometry: dimension mismatch");
  KernelGeometry g;
  g.t1 = dot(x, y);
  double v2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = i + 1; j < x.size(); ++j) {
      const double m = x[i] * y[j] - x[j] * y[i];
      v2 += m * m;
    }
  g.t2 = std::sqrt(v2);
  g.norm_x = norm(x);
  g.norm_y = norm(y);
  if (g.norm_x > 0.0 && g.norm_y > 0.0) g.angle = std::atan2(g.t2, g.t1);
  return g;
}

namespace {

void check_n(int n) {
  if (n < 2) throw std::domain_error("kernel: n must be >= 2");
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0)) throw std::domain_error("kernel: alpha must be > 0");
}

/// sqrt by Newton iteration so the extended path needs only field operations.
template <class Real>
Real sqrt_newton(Real s) {
  if (s <= Real(0)) return Real(0);
  Real r = Real(std::sqrt(static_cast<double>(s)));
  for (int i = 0; i < 3; ++i) r = (r + s / r) / Real(2);
  return r;
}

/// dim H_{k+1} / dim H_k
double dim_ratio(int n, int k) {
  if (n == 2) return k == 0 ? 2.0 : 1.0;
  return (2.0 * k + n) / (2.0 * k + n - 2.0) * (k + n - 2.0) / (k + 1.0);
}

template <class Real>
kernel_ab::SeriesResult series_impl(int n, double a, double b, const PrecisionPolicy& policy) {
  check_n(n);
  policy.validate();
  const Real s2 = Real(a) * Real(a) + Real(b) * Real(b);
  if (s2 == Real(0)) return {1.0, 1};
  const Real rho = sqrt_newton(s2);
  const Real u = Real(a) / rho;
  const double rho_d = static_cast<double>(rho);

  const Real lambda = Real(n - 2) / Real(2);
  Real z_prev = Real(1);  // T_{k−1} or C_{k−1}
  Real z = u;             // T_k or C_k / (2λ)
  if (n != 2) z = Real(2) * lambda * u;

  Real coef = Real(1);
  Real sum = Real(1);
  double bound = 1.0;  // dim_k ρ^k/(n/2)_k at the current k
  int quiet = 0;
  for (int k = 1; k <= policy.max_terms; ++k) {
    if (k >= 2) {
      Real next;
      if (n == 2) {
        next = Real(2) * u * z - z_prev;
      } else {
        next = (Real(2) * (Real(k) + lambda - Real(1)) * u * z - (Real(k) + Real(2) * lambda - Real(2)) * z_prev) /
               Real(k);
      }
      z_prev = z;
      z = next;
    }
    const Real zonal = n == 2 ? Real(2) * z : (Real(k) + lambda) / lambda * z;
    coef = coef * rho / Real(0.5 * n + k - 1);
    const Real term = coef * zonal;
    sum += term;
    bound *= rho_d / (0.5 * n + k - 1) * dim_ratio(n, k - 1);

    const double mag = std::abs(static_cast<double>(sum));
    const double tol = policy.rel_tol * (mag > 0.0 ? mag : 1e-300);
    if (std::abs(static_cast<double>(term)) < tol) {
      ++quiet;
    } else {
      quiet = 0;
    }
    if (quiet >= 3) {
      const double b1 = bound * rho_d / (0.5 * n + k) * dim_ratio(n, k);
      const double r = rho_d / (0.5 * n + k + 1) * dim_ratio(n, k + 1);
      if (r < 1.0 && b1 / (1.0 - r) < tol) return {static_cast<double>(sum), k + 1};
    }
  }
  throw SpecfunError(SpecfunError::Kind::Truncation, "kernel_series: tail bound not reached within max_terms",
                     static_cast<double>(sum));
}

const GaussRule1D& cached_legendre(int order) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule1D>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<GaussRule1D>(gauss_legendre(order));
  return *slot;
}

/// Coefficients of G_N in ascending powers of t.
std::vector<double> g_n_coeffs(int N) {
  if (N < 1) throw std::domain_error("g_n_poly: N must be >= 1");
  const int m = N - 1;
  // (1 − t²)^m = Σ_i C(m,i) (−1)^i t^{2i}
  std::vector<double> c(2 * m + 1, 0.0);
  double binom = 1.0;
  for (int i = 0; i <= m; ++i) {
    c[2 * i] = (i % 2 == 0 ? 1.0 : -1.0) * binom;
    binom = binom * (m - i) / (i + 1);
  }
  for (int d = 0; d < m; ++d) {
    std::vector<double> dc(c.size() > 1 ? c.size() - 1 : 1, 0.0);
    for (std::size_t p = 1; p < c.size(); ++p) dc[p - 1] = c[p] * static_cast<double>(p);
    c = std::move(dc);
  }
  if (m % 2 != 0)
    for (double& v : c) v = -v;
  return c;
}

const std::vector<double>& cached_g_n(int N) {
  static std::mutex mu;
  static std::map<int, std::vector<double>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(N);
  if (it == cache.end()) it = cache.emplace(N, g_n_coeffs(N)).first;
  return it->second;
}

// ∫ G_N(t) t^m e^{ibt} dt for m = 0..N
std::vector<std::complex<double>> even_n_moments(int N, double b, int order) {
  const GaussRule1D& gl = cached_legendre(order);
  const std::vector<double>& g = cached_g_n(N);
  std::vector<std::complex<double>> moments(N + 1, {0.0, 0.0});
  for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
    const double t = gl.nodes[i];
    double gv = 0.0;
    for (std::size_t p = g.size(); p-- > 0;) gv = gv * t + g[p];
    const std::complex<double> e(std::cos(b * t), std::sin(b * t));
    double tp = gl.weights[i] * gv;
    for (int m = 0; m <= N; ++m) {
      moments[m] += tp * e;
      tp *= t;
    }
  }
  return moments;
}

kernel_ab::EvenNResult even_n_once(int N, double a, double b, int order) {
  using C = std::complex<double>;
  const std::vector<C> moments = even_n_moments(N, b, order);
  const C ib(0.0, b);
  C total(0.0, 0.0);
  double magnitude = 0.0;
  const double n_fact = std::tgamma(N + 1.0);
  for (int j = 0; j <= N; ++j) {
    const double outer = std::tgamma(N + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(N - j + 1.0)) * n_fact /
                         std::tgamma(j + 1.0);
    for (int k = 0; k <= j; ++k) {
      const double cjk = std::tgamma(j + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(j - k + 1.0));
      const C term = outer * cjk * std::pow(a, k) * std::pow(ib, j - k) * moments[j - k];
      total += term;
      magnitude += std::abs(term);
    }
  }
  // 2^{1−2N}/(N−1)! · (1/(ib))^{N−1} · e^{a}
  const C pref = std::ldexp(1.0, 1 - 2 * N) / std::tgamma(static_cast<double>(N)) * std::pow(C(0.0, -1.0 / b), N - 1) *
                 std::exp(a);
  const C v = pref * total;
  return {v.real(), std::abs(v.imag()), order, false, std::abs(pref) * magnitude};
}


}  // namespace

namespace kernel_ab {

SeriesResult series(int n, double a, double b, const PrecisionPolicy& policy) {
  return series_impl<detail::extended>(n, a, b, policy);
}

SeriesResult series_fast(int n, double a, double b, const PrecisionPolicy& policy) {
  return series_impl<double>(n, a, b, policy);
}

Phi2Real phi2(int n, double a, double b, const PrecisionPolicy& policy) {
  if (n < 3) throw std::domain_error("kernel_phi2: requires n >= 3 (parameters degenerate for n = 2)");
  const double c = 0.5 * n - 1.0;
  return horn_phi2_conjugate(c, c, c, {a, b}, policy);
}

double closed_n2(double a, double b) { return 2.0 * std::exp(a) * std::cos(b) - 1.0; }

double closed_n2_printed(double a, double b) { return 2.0 * std::exp(a) * std::cos(b); }

double closed_n4(double a, double b) {
  const double sinc = std::abs(b) < 1e-4 ? 1.0 - b * b / 6.0 : std::sin(b) / b;
  return std::exp(a) * (std::cos(b) + a * sinc);
}

EvenNResult even_n(int N, double a, double b, int legendre_order) {
  if (N < 1) throw std::domain_error("kernel_even_n: N must be >= 1");
  if (legendre_order < 1) throw std::domain_error("kernel_even_n: legendre_order must be >= 1");
  const double rho = std::hypot(a, b);
  const bool near_parallel = b <= 1e-6 * rho || (N >= 2 && b < std::pow(10.0, -6.0 / (N - 1)));
  if (near_parallel) {
    EvenNResult r;
    r.value = series(2 * N + 2, a, b).value;
    r.fallback = true;
    return r;
  }
  int order = std::min(512, std::max(legendre_order, static_cast<int>(std::ceil(0.5 * b)) + 32));
  EvenNResult r = even_n_once(N, a, b, order);
  while (r.imag_residue > 1e-13 * r.term_scale && order < 512) {
    order = std::min(512, 2 * order);
    r = even_n_once(N, a, b, order);
  }
  return r;
}

std::vector<double> even_n_a_polynomial(int N, double b) {
  if (N < 1) throw std::domain_error("even_n_a_polynomial: N must be >= 1");
  if (!(b > 0.0)) throw std::domain_error("even_n_a_polynomial: b must be > 0");
  using C = std::complex<double>;
  const int order = std::min(512, std::max(64, static_cast<int>(std::ceil(0.5 * b)) + 32));
  const std::vector<C> moments = even_n_moments(N, b, order);
  const C ib(0.0, b);
  const C pref = std::ldexp(1.0, 1 - 2 * N) / std::tgamma(static_cast<double>(N)) * std::pow(C(0.0, -1.0 / b), N - 1);
  const double n_fact = std::tgamma(N + 1.0);
  std::vector<double> c(N + 1, 0.0);
  for (int k = 0; k <= N; ++k) {
    C acc(0.0, 0.0);
    for (int j = k; j <= N; ++j) {
      const double outer = std::tgamma(N + 1.0) / (std::tgamma(j + 1.0) * std::tgamma(N - j + 1.0)) * n_fact /
                           std::tgamma(j + 1.0);
      const double cjk = std::tgamma(j + 1.0) / (std::tgamma(k + 1.0) * std::tgamma(j - k + 1.0));
      acc += outer * cjk * std::pow(ib, j - k) * moments[j - k];
    }
    c[k] = (pref * acc).real();
  }
  return c;
}

double fast(int n, double a, double b) {
  if (n == 2) return closed_n2(a, b);
  if (n == 4) return closed_n4(a, b);
  if (n % 2 == 0) return even_n((n - 2) / 2, a, b).value;
  return series_fast(n, a, b).value;
}

}  // namespace kernel_ab

namespace {

struct Scaled {
  double a;
  double b;
};

Scaled scaled_args(double alpha, std::span<const double> x, std::span<const double> y) {
  check_alpha(alpha);
  const KernelGeometry g = KernelGeometry::of(x, y);
  return {g.t1 / alpha, g.t2 / alpha};
}

void check_dim(int n, std::span<const double> x, std::span<const double> y) {
  check_n(n);
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw std::invalid_argument("kernel: point dimension does not match n");
}

}  // namespace

double kernel_series(int n, double alpha, std::span<const double> x, std::span<const double> y,
                     const PrecisionPolicy& policy) {
  check_dim(n, x, y);
  const Scaled s = scaled_args(alpha, x, y);
  return kernel_ab::series(n, s.a, s.b, policy).value;
}

double kernel_phi2(int n, double alpha, std::span<const double> x, std::span<const double> y,
                   const PrecisionPolicy& policy) {
  check_dim(n, x, y);
  const Scaled s = scaled_args(alpha, x, y);
  return kernel_ab::phi2(n, s.a, s.b, policy).value;
}

double kernel_closed_n2(double alpha, std::span<const double> x, std::span<const double> y) {
  check_dim(2, x, y);
  const Scaled s = scaled_args(alpha, x, y);
  return kernel_ab::closed_n2(s.a, s.b);
}

double kernel_closed_n4(double alpha, std::span<const double> x, std::span<const double> y) {
  check_dim(4, x, y);
  const Scaled s = scaled_args(alpha, x, y);
  return kernel_ab::closed_n4(s.a, s.b);
}

double kernel_even_n(int N, double alpha, std::span<const double> x, std::span<const double> y,
                     int legendre_order) {
  check_dim(2 * N + 2, x, y);
  const Scaled s = scaled_args(alpha, x, y);
  return kernel_ab::even_n(N, s.a, s.b, legendre_order).value;
}

MultiPoly g_n_poly(int N) {
  const std::vector<double> c = g_n_coeffs(N);
  MultiPoly p(1);
  for (std::size_t i = 0; i < c.size(); ++i) p.add_term({static_cast<int>(i)}, c[i]);
  return p;
}

double kernel_trace(int n, double alpha, std::span<const double> x, const PrecisionPolicy& policy) {
  check_n(n);
  check_alpha(alpha);
  if (static_cast<int>(x.size()) != n) throw std::invalid_argument("kernel_trace: point dimension does not match n");
  const double X = norm_sq(x) / alpha;
  if (n == 2) return kernel_ab::closed_n2(X, 0.0);
  return kummer_1f1(n - 2.0, 0.5 * n - 1.0, X, policy);
}

TraceAsymptotic kernel_trace_asymptotic(int n, double alpha, std::span<const double> x, int terms) {
  if (n < 3) throw std::domain_error("kernel_trace_asymptotic: requires n >= 3");
  check_alpha(alpha);
  const double X = norm_sq(x) / alpha;
  if (!(X > 0.0)) throw std::domain_error("kernel_trace_asymptotic: requires x != 0");
  const double a = n - 2.0, b = 0.5 * n - 1.0;
  const double log_pref = std::lgamma(b) - std::lgamma(a) + X + (a - b) * std::log(X);
  const double pref = std::exp(log_pref);
  const Truncated2F0 t = hyp_2f0_truncated(b - a, 1.0 - a, 1.0 / X, terms);
  const Truncated2F0 printed = hyp_2f0_truncated(1.0 - 0.5 * n, n - 3.0, 1.0 / X, terms);
  return {pref * t.value, pref * t.first_omitted, pref * printed.value};
}

double relative_deviation(double a, double b) {
  const double m = std::max(std::abs(a), std::abs(b));
  return m == 0.0 ? 0.0 : std::abs(a - b) / m;
}

double kernel(int n, double alpha, std::span<const double> x, std::span<const double> y) {
  check_dim(n, x, y);
  const Scaled s = scaled_args(alpha, x, y);
  return kernel_ab::fast(n, s.a, s.b);
}

CrossCheckReport kernel_checked(int n, double alpha, std::span<const double> x, std::span<const double> y,
                                const PrecisionPolicy& policy) {
  check_dim(n, x, y);
  const Scaled s = scaled_args(alpha, x, y);
  CrossCheckReport rep;
  const kernel_ab::SeriesResult ser = kernel_ab::series(n, s.a, s.b, policy);
  rep.values.push_back({"series", ser.value});
  rep.series_terms = ser.terms;
  rep.chosen = ser.value;
  if (n >= 3) {
    const Phi2Real p = kernel_ab::phi2(n, s.a, s.b, policy);
    rep.values.push_back({"phi2", p.value});
    rep.phi2_imag_residue = p.imag_residue;
  }
  if (n == 2) {
    rep.values.push_back({"closed_n2", kernel_ab::closed_n2(s.a, s.b)});
    rep.printed_n2 = kernel_ab::closed_n2_printed(s.a, s.b);
  }
  if (n == 4) rep.values.push_back({"closed_n4", kernel_ab::closed_n4(s.a, s.b)});
  if (n % 2 == 0 && n >= 4) {
    const kernel_ab::EvenNResult e = kernel_ab::even_n((n - 2) / 2, s.a, s.b);
    rep.values.push_back({"even_n", e.value});
    rep.near_parallel_fallback = e.fallback;
    rep.legendre_order = e.legendre_order;
    rep.even_imag_residue = e.imag_residue;
  }
  for (std::size_t i = 0; i < rep.values.size(); ++i)
    for (std::size_t j = i + 1; j < rep.values.size(); ++j) {
      const double d = relative_deviation(rep.values[i].value, rep.values[j].value);
      rep.deviations.push_back({rep.values[i].name, rep.values[j].name, d});
      rep.max_deviation = std::max(rep.max_deviation, d);
    }
  return rep;
}

}  // namespace hfock
