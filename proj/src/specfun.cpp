#include "hfock/specfun.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "hfock/detail/extended.hpp"

namespace hfock {

namespace {

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

[[noreturn]] void fail(SpecfunError::Kind kind, const std::string& msg, double partial = 0.0) {
  throw SpecfunError(kind, msg, partial);
}

std::string describe(const char* fn, double a, double b, double x) {
  std::ostringstream os;
  os.precision(17);
  os << fn << "(a=" << a << ", b=" << b << ", x=" << x << ")";
  return os.str();
}

/// log|Γ(x)| and sign for any non-pole real x.
SignedLog log_gamma_signed(double x) {
  if (is_nonpositive_integer(x)) return {std::numeric_limits<double>::infinity(), 0};
  const double lg = std::lgamma(x);
  int sign = 1;
  if (x < 0.0 && static_cast<long long>(std::floor(x)) % 2 != 0) sign = -1;
  return {lg, sign};
}

}  // namespace

void PrecisionPolicy::validate() const {
  if (!(rel_tol > 0.0)) fail(SpecfunError::Kind::Domain, "PrecisionPolicy: rel_tol must be > 0");
  if (max_terms < 1) fail(SpecfunError::Kind::Domain, "PrecisionPolicy: max_terms must be >= 1");
  if (!(asymptotic_threshold > 0.0))
    fail(SpecfunError::Kind::Domain, "PrecisionPolicy: asymptotic_threshold must be > 0");
}

double ln_gamma(double x) {
  if (!(x > 0.0)) fail(SpecfunError::Kind::Domain, "ln_gamma: argument must be positive");
  return std::lgamma(x);
}

SignedLog log_pochhammer(double a, int k) {
  if (k < 0) fail(SpecfunError::Kind::Domain, "pochhammer: k must be nonnegative");
  double log_abs = 0.0;
  int sign = 1;
  for (int i = 0; i < k; ++i) {
    const double f = a + i;
    if (f == 0.0) return {-std::numeric_limits<double>::infinity(), 0};
    if (f < 0.0) sign = -sign;
    log_abs += std::log(std::abs(f));
  }
  return {log_abs, sign};
}

double pochhammer(double a, int k) {
  if (k < 0) fail(SpecfunError::Kind::Domain, "pochhammer: k must be nonnegative");
  double prod = 1.0;
  for (int i = 0; i < k; ++i) {
    prod *= a + i;
    if (prod == 0.0) return 0.0;
    if (!std::isfinite(prod) || std::abs(prod) > 1e300) {
      const SignedLog l = log_pochhammer(a, k);
      return l.sign * std::exp(l.log_abs);
    }
  }
  return prod;
}

double kummer_1f1_series(double a, double b, double x, const PrecisionPolicy& policy) {
  policy.validate();
  if (is_nonpositive_integer(b)) fail(SpecfunError::Kind::Pole, "kummer_1f1: pole at " + describe("1F1", a, b, x));
  if (a == 0.0 && b == 0.0) fail(SpecfunError::Kind::Domain, "kummer_1f1: degenerate parameters (0,0)");
  if (x < 0.0) {
    // Kummer transformation keeps every term positive for b > a > 0
    return std::exp(x) * kummer_1f1_series(b - a, b, -x, policy);
  }
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < policy.max_terms; ++k) {
    const double ratio = (a + k) * x / ((b + k) * (k + 1));
    term *= ratio;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(term) <= policy.rel_tol * std::abs(sum) && std::abs(ratio) < 1.0) return sum;
  }
  fail(SpecfunError::Kind::Truncation, "kummer_1f1: series did not converge for " + describe("1F1", a, b, x),
       sum);
}

Truncated2F0 hyp_2f0_truncated(double a, double b, double x, int terms) {
  if (terms < 1) fail(SpecfunError::Kind::Domain, "hyp_2f0_truncated: terms must be >= 1");
  double term = 1.0;
  double sum = 0.0;
  for (int k = 0; k < terms; ++k) {
    sum += term;
    term *= (a + k) * (b + k) * x / (k + 1);
  }
  return {sum, std::abs(term)};
}

namespace {

/// Optimally truncated ₂F₀(b−a, 1−a; 1/x): stop at the smallest term or
/// once terms fall below rel_tol, whichever first. Returns the sum.
double asymptotic_2f0(double a, double b, double x, const PrecisionPolicy& policy) {
  const double p = b - a;
  const double q = 1.0 - a;
  const double inv = 1.0 / x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < policy.max_terms; ++k) {
    const double next = term * (p + k) * (q + k) * inv / (k + 1);
    if (next == 0.0) return sum;  // terminating series
    if (std::abs(next) >= std::abs(term)) return sum;
    sum += next;
    term = next;
    if (std::abs(term) <= policy.rel_tol * std::abs(sum)) return sum;
  }
  return sum;
}

double log_asymptotic_prefactor(double a, double b, double x, int& sign) {
  const SignedLog gb = log_gamma_signed(b);
  const SignedLog ga = log_gamma_signed(a);
  sign = gb.sign * ga.sign;
  return gb.log_abs - ga.log_abs + x + (a - b) * std::log(x);
}

}  // namespace

double kummer_1f1_asymptotic(double a, double b, double x, const PrecisionPolicy& policy) {
  policy.validate();
  if (is_nonpositive_integer(b)) fail(SpecfunError::Kind::Pole, "kummer_1f1: pole at " + describe("1F1", a, b, x));
  if (!(x > 0.0)) fail(SpecfunError::Kind::Domain, "kummer_1f1_asymptotic: requires x > 0");
  if (is_nonpositive_integer(a))
    fail(SpecfunError::Kind::Domain, "kummer_1f1_asymptotic: polynomial case has no exponential branch");
  int sign = 1;
  const double log_pref = log_asymptotic_prefactor(a, b, x, sign);
  return sign * std::exp(log_pref) * asymptotic_2f0(a, b, x, policy);
}

double kummer_1f1(double a, double b, double x, const PrecisionPolicy& policy) {
  policy.validate();
  if (is_nonpositive_integer(b)) fail(SpecfunError::Kind::Pole, "kummer_1f1: pole at " + describe("1F1", a, b, x));
  if (a == 0.0 && b == 0.0) fail(SpecfunError::Kind::Domain, "kummer_1f1: degenerate parameters (0,0)");
  if (x == 0.0 || a == 0.0) return 1.0;
  if (x >= policy.asymptotic_threshold && !is_nonpositive_integer(a))
    return kummer_1f1_asymptotic(a, b, x, policy);
  if (x <= -policy.asymptotic_threshold && !is_nonpositive_integer(b - a))
    return std::exp(x) * kummer_1f1_asymptotic(b - a, b, -x, policy);
  return kummer_1f1_series(a, b, x, policy);
}

double log_kummer_1f1(double a, double b, double x, const PrecisionPolicy& policy) {
  policy.validate();
  if (x < 0.0) fail(SpecfunError::Kind::Domain, "log_kummer_1f1: requires x >= 0");
  if (x >= policy.asymptotic_threshold && !is_nonpositive_integer(a) &&
      !is_nonpositive_integer(b)) {
    int sign = 1;
    const double log_pref = log_asymptotic_prefactor(a, b, x, sign);
    const double tail = asymptotic_2f0(a, b, x, policy);
    if (sign * tail <= 0.0) fail(SpecfunError::Kind::Domain, "log_kummer_1f1: non-positive value");
    return log_pref + std::log(std::abs(tail));
  }
  const double v = kummer_1f1(a, b, x, policy);
  if (!(v > 0.0)) fail(SpecfunError::Kind::Domain, "log_kummer_1f1: non-positive value");
  return std::log(v);
}

namespace {

/// Anti-diagonal summation shared by the double and extended paths.
/// Terms are α_j β_k / (c)_m with α_j = (a)_j z^j / j!, β_k = (b)_k w^k / k!.
/// Every factor is formed in Real so the extended path keeps its precision;
/// 1/(c)_m is accumulated as a reciprocal and can only underflow.
template <class Real>
detail::Complex<Real> phi2_antidiagonal(double a, double b, double c, std::complex<double> z,
                                        std::complex<double> w, const PrecisionPolicy& policy) {
  using C = detail::Complex<Real>;
  const C zz{Real(z.real()), Real(z.imag())};
  const C ww{Real(w.real()), Real(w.imag())};
  std::vector<C> alpha{C{Real(1), Real(0)}};
  std::vector<C> beta{C{Real(1), Real(0)}};
  C sum{Real(1), Real(0)};
  Real inv_c{1};
  int quiet = 0;
  const double reach = std::abs(z) + std::abs(w);
  for (int m = 1; m <= policy.max_terms; ++m) {
    const double cf = c + (m - 1);
    if (cf == 0.0) {
      fail(SpecfunError::Kind::Pole, "horn_phi2: (c)_m vanishes before convergence",
           static_cast<double>(sum.re));
    }
    inv_c = inv_c / Real(cf);
    alpha.push_back(alpha.back() * zz * (Real(a + (m - 1)) / Real(m)));
    beta.push_back(beta.back() * ww * (Real(b + (m - 1)) / Real(m)));
    C diag{};
    for (int j = 0; j <= m; ++j) diag += alpha[j] * beta[m - j];
    diag = diag * inv_c;
    sum += diag;
    const double contrib = static_cast<double>(diag.l1());
    const double total = static_cast<double>(sum.l1());
    if (contrib < policy.rel_tol * total || contrib == 0.0) {
      ++quiet;
    } else {
      quiet = 0;
    }
    if (quiet >= 3 && m > reach) return sum;
  }
  fail(SpecfunError::Kind::Truncation, "horn_phi2: anti-diagonal cutoff not reached",
       static_cast<double>(sum.re));
}

}  // namespace

std::complex<double> horn_phi2(const Phi2Args& args, const PrecisionPolicy& policy) {
  policy.validate();
  const auto s = phi2_antidiagonal<double>(args.a, args.b, args.c, args.z, args.w, policy);
  return {s.re, s.im};
}

Phi2Real horn_phi2_conjugate(double a, double b, double c, std::complex<double> z,
                             const PrecisionPolicy& policy) {
  policy.validate();
  const auto s = phi2_antidiagonal<detail::extended>(a, b, c, z, std::conj(z), policy);
  return {static_cast<double>(s.re), std::abs(static_cast<double>(s.im))};
}

}  // namespace hfock
