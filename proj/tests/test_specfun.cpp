#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"
#include "hfock/specfun.hpp"

using namespace hfock;

TEST_SUITE("specfun") {

TEST_CASE("ln_gamma matches known values") {
  CHECK(ln_gamma(1.0) == doctest::Approx(0.0));
  CHECK(ln_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
  CHECK(ln_gamma(10.0) == doctest::Approx(std::log(362880.0)).epsilon(1e-14));
  for (double x : {1e-3, 0.37, 2.5, 17.0, 99.5, 170.0}) {
    const double g = std::tgamma(x);
    CHECK(std::abs(std::exp(ln_gamma(x)) - g) / g <= 1e-13);
  }
  CHECK_THROWS_AS(ln_gamma(0.0), SpecfunError);
  CHECK_THROWS_AS(ln_gamma(-2.0), SpecfunError);
}

TEST_CASE("pochhammer") {
  CHECK(pochhammer(3.5, 0) == 1.0);
  double fact = 1.0;
  for (int k = 1; k <= 15; ++k) {
    fact *= k;
    CHECK(pochhammer(1.0, k) == doctest::Approx(fact).epsilon(1e-15));
  }
  CHECK(pochhammer(2.0, 2) == 6.0);  // (n/2)_2 for n = 4
  CHECK(pochhammer(-2.0, 5) == 0.0);
  // log-domain fallback far outside double range of intermediate products
  const double big = pochhammer(1.0, 170);
  CHECK(std::isfinite(big));
  CHECK(big == doctest::Approx(std::tgamma(171.0)).epsilon(1e-12));
  CHECK(log_pochhammer(0.5, 400).log_abs == doctest::Approx(std::lgamma(400.5) - std::lgamma(0.5)).epsilon(1e-13));
}

TEST_CASE("log pochhammer recursion") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(-7.3, 40.0);
  for (int t = 0; t < 200; ++t) {
    const double a = ua(rng);
    const int k = static_cast<int>(rng() % 60);
    const SignedLog l0 = log_pochhammer(a, k);
    const SignedLog l1 = log_pochhammer(a, k + 1);
    if (l0.sign == 0 || a + k == 0.0) continue;
    CHECK(l1.sign == l0.sign * (a + k < 0 ? -1 : 1));
    CHECK(std::abs(l1.log_abs - (l0.log_abs + std::log(std::abs(a + k)))) <= 1e-14 * std::max(1.0, std::abs(l1.log_abs)));
  }
}

TEST_CASE("kummer 1F1 values") {
  CHECK(kummer_1f1(1.3, 2.1, 0.0) == 1.0);
  CHECK(kummer_1f1(2.0, 1.0, 1.0) == doctest::Approx(2.0 * M_E).epsilon(1e-14));
  // 200-term exact-rational partial sum
  CHECK(kummer_1f1(1.0, 0.5, 4.0) == doctest::Approx(193.6400484571649).epsilon(1e-12));
  // e^t (1 + t) family, both branches
  for (double t : {0.1, 3.0, 39.0, 41.0, 80.0}) {
    CHECK(kummer_1f1(2.0, 1.0, t) == doctest::Approx(std::exp(t) * (1 + t)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(kummer_1f1(1.0, -2.0, 1.0), SpecfunError);
  CHECK_THROWS_AS(kummer_1f1(0.0, 0.0, 1.0), SpecfunError);
}

TEST_CASE("kummer 1F1 series truncation carries partial sum") {
  PrecisionPolicy tight;
  tight.max_terms = 3;
  try {
    (void)kummer_1f1_series(1.0, 1.0, 10.0, tight);
    FAIL("expected truncation");
  } catch (const SpecfunError& e) {
    CHECK(e.kind() == SpecfunError::Kind::Truncation);
    CHECK(e.partial() == doctest::Approx(1 + 10 + 50 + 1000.0 / 6));
  }
}

TEST_CASE("kummer 1F1 monotone in x for b > a > 0") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 6.0);
  for (int t = 0; t < 20; ++t) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    if (a == b) b += 0.5;
    double prev = kummer_1f1(a, b, 0.0);
    for (double x = 0.25; x <= 30.0; x += 0.25) {
      const double v = kummer_1f1(a, b, x);
      CHECK(v > prev);
      prev = v;
    }
  }
}

TEST_CASE("kummer 1F1 regime switch continuity for the trace family") {
  const PrecisionPolicy policy;
  for (int n = 3; n <= 8; ++n) {
    const double a = n - 2.0, b = n / 2.0 - 1.0;
    const double x = policy.asymptotic_threshold;
    const double s = kummer_1f1_series(a, b, x, policy);
    const double as = kummer_1f1_asymptotic(a, b, x, policy);
    CAPTURE(n);
    CHECK(std::abs(s - as) / s <= 1e-6);
  }
}

TEST_CASE("log kummer agrees with kummer and extends past overflow") {
  for (double x : {0.5, 10.0, 60.0, 300.0}) {
    CHECK(log_kummer_1f1(4.0, 2.0, x) == doctest::Approx(std::log(kummer_1f1(4.0, 2.0, x))).epsilon(1e-13));
  }
  // n = 4 trace family: log(e^x (1 + x))
  CHECK(log_kummer_1f1(2.0, 1.0, 1000.0) == doctest::Approx(1000.0 + std::log(1001.0)).epsilon(1e-14));
}

TEST_CASE("2F0 truncation") {
  CHECK(hyp_2f0_truncated(0.3, 0.7, 0.0, 6).value == 1.0);
  for (int n = 2; n <= 8; ++n) CHECK(hyp_2f0_truncated(1.0 - n / 2.0, n - 3.0, 0.37, 1).value == 1.0);
  const auto t = hyp_2f0_truncated(0.5, 1.0, 0.01, 5);
  CHECK(t.value == doctest::Approx(1.005076940625).epsilon(1e-14));
  CHECK(t.first_omitted == doctest::Approx(2.953125e-09).epsilon(1e-12));
}

TEST_CASE("horn phi2") {
  CHECK(horn_phi2({1.5, 1.5, 1.5, 0.0, 0.0}) == std::complex<double>(1.0, 0.0));
  // brute-force double sum of (1,1;1) at z = w = 1/2
  const auto v = horn_phi2({1.0, 1.0, 1.0, {0.5, 0.0}, {0.5, 0.0}});
  CHECK(v.real() == doctest::Approx(2.4730819060501923).epsilon(1e-10));
  CHECK(std::abs(v.imag()) < 1e-15);
  CHECK_THROWS_AS(horn_phi2({1.0, 1.0, -2.0, {0.5, 0.0}, {0.5, 0.0}}), SpecfunError);
}

TEST_CASE("horn phi2 with conjugate arguments is real") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-6.0, 6.0);
  const PrecisionPolicy policy;
  for (int t = 0; t < 100; ++t) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const double c = n / 2.0 - 1.0;
    const std::complex<double> z(u(rng), std::abs(u(rng)));
    const Phi2Real r = horn_phi2_conjugate(c, c, c, z, policy);
    CHECK(r.imag_residue <= 10 * policy.rel_tol * std::abs(r.value));
    const auto d = horn_phi2({c, c, c, z, std::conj(z)}, policy);
    CHECK(std::abs(d.imag()) <= 1e-10 * std::max(1.0, std::abs(d.real())));
  }
}

}  // TEST_SUITE
