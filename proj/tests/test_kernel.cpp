#include <cmath>
#include <random>

#include "doctest.h"
#include "hfock/kernel.hpp"
#include "hfock/quad.hpp"
#include "hfock/sphere.hpp"

using namespace hfock;

namespace {

Point random_ball(std::mt19937_64& rng, int n, double radius) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Point p(n);
  do {
    for (double& v : p) v = radius * u(rng);
  } while (norm(p) > radius);
  return p;
}

/// random rotation: Gram–Schmidt on a Gaussian matrix
std::vector<Point> random_rotation(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Point> q;
  for (int i = 0; i < n; ++i) {
    Point v(n);
    for (double& c : v) c = g(rng);
    for (const Point& b : q) {
      const double d = dot(v, b);
      for (int k = 0; k < n; ++k) v[k] -= d * b[k];
    }
    q.push_back(scaled(v, 1.0 / norm(v)));
  }
  return q;
}

Point apply(const std::vector<Point>& r, const Point& x) {
  Point y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = dot(r[i], x);
  return y;
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("geometry") {
  const Point x{1.0, 2.0, 2.0};
  const Point y{2.0, 0.0, 1.0};
  const KernelGeometry g = KernelGeometry::of(x, y);
  CHECK(g.t1 == 4.0);
  CHECK(g.t1 * g.t1 + g.t2 * g.t2 == doctest::Approx(9.0 * 5.0).epsilon(1e-14));
  CHECK(g.t2 >= 0.0);
  const KernelGeometry p = KernelGeometry::of(Point{1.0, 1.0}, Point{2.0, 2.0 + 1e-9});
  CHECK(p.t2 == doctest::Approx(1e-9).epsilon(1e-6));
}

TEST_CASE("series special values") {
  for (int n = 2; n <= 7; ++n) {
    const Point zero(n, 0.0);
    Point y(n, 0.3);
    CHECK(kernel_series(n, 1.3, zero, y) == 1.0);
  }
  // n = 4 diagonal e^{t}(1 + t) at t = 1
  CHECK(kernel_series(4, 1.0, Point{1, 0, 0, 0}, Point{1, 0, 0, 0}) == doctest::Approx(2 * M_E).epsilon(1e-14));
  // n = 2 diagonal with the m = 0 term equal to 1
  CHECK(kernel_series(2, 1.0, Point{1, 0}, Point{1, 0}) == doctest::Approx(2 * M_E - 1).epsilon(1e-14));
}

TEST_CASE("closed form n = 2") {
  CHECK(kernel_closed_n2(1.0, Point{0, 0}, Point{0, 0}) == 1.0);
  CHECK(kernel_closed_n2(1.0, Point{1, 0}, Point{1, 0}) == doctest::Approx(4.4365636569180902).epsilon(1e-14));
  // x ⊥ y with |x||y|/α = π/2
  const double s = std::sqrt(M_PI / 2);
  const double v = kernel_closed_n2(1.0, Point{s, 0}, Point{0, s});
  CHECK(v == doctest::Approx(-1.0).epsilon(1e-14));
  PrecisionPolicy p;
  p.max_terms = 40;
  CHECK(kernel_series(2, 1.0, Point{s, 0}, Point{0, s}) == doctest::Approx(-1.0).epsilon(1e-14));
  const CrossCheckReport rep = kernel_checked(2, 1.0, Point{1, 0}, Point{1, 0});
  REQUIRE(rep.printed_n2.has_value());
  CHECK(*rep.printed_n2 == doctest::Approx(2 * M_E).epsilon(1e-14));
  CHECK(rep.max_deviation <= 1e-13);
}

TEST_CASE("closed form n = 4") {
  for (double t : {0.0, 0.5, 1.0, 3.0}) {
    const Point x{std::sqrt(t), 0, 0, 0};
    CHECK(kernel_closed_n4(1.0, x, x) == doctest::Approx(std::exp(t) * (1 + t)).epsilon(1e-14));
  }
  CHECK(kernel_closed_n4(2.0, Point{0, 0, 0, 0}, Point{1, 2, 3, 4}) == 1.0);
  std::mt19937_64 rng(31);
  for (int i = 0; i < 50; ++i) {
    const Point x = random_ball(rng, 4, 3), y = random_ball(rng, 4, 3);
    CHECK(kernel_closed_n4(1.0, x, y) == doctest::Approx(kernel_series(4, 1.0, x, y)).epsilon(1e-9));
  }
}

TEST_CASE("phi2 representation") {
  CHECK(kernel_phi2(5, 1.0, Point(5, 0.0), Point(5, 1.0)) == 1.0);
  CHECK(kernel_phi2(4, 1.0, Point{1.5, 0, 0, 0}, Point{1.5, 0, 0, 0}) ==
        doctest::Approx(kummer_1f1(2.0, 1.0, 2.25)).epsilon(1e-13));
  std::mt19937_64 rng(32);
  for (int i = 0; i < 50; ++i) {
    const Point x = random_ball(rng, 5, 3), y = random_ball(rng, 5, 3);
    const double s = kernel_series(5, 0.7, x, y);
    CHECK(std::abs(kernel_phi2(5, 0.7, x, y) - s) <= 1e-8 * std::abs(s));
  }
  CHECK_THROWS_AS(kernel_phi2(2, 1.0, Point{1, 0}, Point{0, 1}), std::domain_error);
}

TEST_CASE("G_N polynomials") {
  CHECK(g_n_poly(1).coeff({0}) == 1.0);
  CHECK(g_n_poly(1).terms().size() == 1);
  const MultiPoly g2 = g_n_poly(2);
  CHECK(g2.coeff({1}) == 2.0);
  CHECK(g2.terms().size() == 1);
  const MultiPoly g3 = g_n_poly(3);
  CHECK(g3.coeff({2}) == 12.0);
  CHECK(g3.coeff({0}) == -4.0);
  CHECK(g3.terms().size() == 2);
}

TEST_CASE("even-n formula") {
  std::mt19937_64 rng(33);
  // N = 1, x ⊥ y: (1/2)∫(1 + itb)e^{itb}dt = cos b
  const double b = 1.7;
  CHECK(kernel_even_n(1, 1.0, Point{std::sqrt(b), 0, 0, 0}, Point{0, std::sqrt(b), 0, 0}) ==
        doctest::Approx(std::cos(b)).epsilon(1e-13));
  for (int i = 0; i < 50; ++i) {
    const Point x = random_ball(rng, 4, 3), y = random_ball(rng, 4, 3);
    CHECK(kernel_even_n(1, 1.0, x, y) == doctest::Approx(kernel_closed_n4(1.0, x, y)).epsilon(1e-8));
  }
  for (int i = 0; i < 50; ++i) {
    const Point x = random_ball(rng, 6, 3), y = random_ball(rng, 6, 3);
    const double s = kernel_series(6, 1.0, x, y);
    CHECK(std::abs(kernel_even_n(2, 1.0, x, y) - s) <= 1e-7 * std::abs(s));
  }
  // near-parallel pair takes the series fallback
  const auto r = kernel_ab::even_n(2, 2.0, 1e-9);
  CHECK(r.fallback);
  CHECK(r.value == doctest::Approx(kernel_ab::series(6, 2.0, 1e-9).value).epsilon(1e-15));

  // polynomial in a for fixed b
  for (int N : {1, 2, 3}) {
    for (double bb : {0.3, 4.0, 25.0}) {
      const auto c = kernel_ab::even_n_a_polynomial(N, bb);
      REQUIRE(c.size() == static_cast<std::size_t>(N + 1));
      for (double a : {-3.0, 0.0, 1.5, 6.0}) {
        double p = 0.0;
        for (std::size_t k = c.size(); k-- > 0;) p = p * a + c[k];
        const double ref = kernel_ab::series(2 * N + 2, a, bb).value;
        CHECK(std::abs(std::exp(a) * p - ref) <= 1e-9 * std::max(1.0, std::exp(a) * (1.0 + std::abs(a))));
      }
    }
  }
}

TEST_CASE("trace formula") {
  CHECK(kernel_trace(5, 1.0, Point(5, 0.0)) == 1.0);
  const Point x{std::sqrt(3.0), 0, 0, 0};
  CHECK(kernel_trace(4, 1.0, x) == doctest::Approx(4 * std::exp(3.0)).epsilon(1e-13));
  const Point big{std::sqrt(60.0), 0, 0};
  const double series_branch = kummer_1f1_series(1.0, 0.5, 60.0);
  const TraceAsymptotic as = kernel_trace_asymptotic(3, 1.0, big, 8);
  CHECK(std::abs(as.value - series_branch) <= 1e-6 * series_branch);
  CHECK(kernel_trace(2, 1.0, Point{1, 0}) == doctest::Approx(2 * M_E - 1).epsilon(1e-14));
  std::mt19937_64 rng(34);
  for (int n = 3; n <= 6; ++n)
    for (int i = 0; i < 10; ++i) {
      const Point p = random_ball(rng, n, 3);
      CHECK(kernel(n, 0.8, p, p) == doctest::Approx(kernel_trace(n, 0.8, p)).epsilon(1e-9));
    }
}

TEST_CASE("dispatcher") {
  const Point x{0.3, -1.2}, y{1.1, 0.4};
  CHECK(kernel(2, 1.0, x, y) == kernel_closed_n2(1.0, x, y));
  const Point x4{0.3, -1.2, 0.5, 1.0}, y4{1.1, 0.4, -0.7, 0.2};
  const CrossCheckReport r4 = kernel_checked(4, 1.0, x4, y4);
  CHECK(r4.values.size() >= 3);
  CHECK(r4.max_deviation <= 1e-7);
  const Point x5{0.3, -1.2, 0.5, 1.0, 2.0}, y5{1.1, 0.4, -0.7, 0.2, -1.5};
  const CrossCheckReport r5 = kernel_checked(5, 1.0, x5, y5);
  CHECK(r5.values.size() == 2);
  CHECK(r5.max_deviation <= 1e-7);
}

TEST_CASE("symmetry, rotation and scaling") {
  std::mt19937_64 rng(35);
  for (int n = 2; n <= 6; ++n) {
    const auto rot = random_rotation(rng, n);
    for (int i = 0; i < 20; ++i) {
      const Point x = random_ball(rng, n, 3), y = random_ball(rng, n, 3);
      const double alpha = 0.5 + (i % 3) * 0.75;
      const double h = kernel_series(n, alpha, x, y);
      const double tol = 1e-10 * std::max(std::abs(h), 1e-3);
      CHECK(std::abs(kernel_series(n, alpha, y, x) - h) <= tol);
      CHECK(std::abs(kernel_series(n, alpha, apply(rot, x), apply(rot, y)) - h) <= tol);
      const double s = 1.0 / std::sqrt(alpha);
      CHECK(std::abs(kernel_series(n, 1.0, scaled(x, s), scaled(y, s)) - h) <= tol);
      CHECK(std::abs(kernel(n, alpha, x, y) - h) <= 1e-9 * std::max(std::abs(h), 1.0));
    }
  }
}

TEST_CASE("harmonic in x") {
  std::mt19937_64 rng(36);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 5;
    const Point x = random_ball(rng, n, 2), y = random_ball(rng, n, 2);
    const double h = 1e-3;
    double lap = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
      Point xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double d2 =
          (kernel_series(n, 1.0, xp, y) - 2 * kernel_series(n, 1.0, x, y) + kernel_series(n, 1.0, xm, y)) / (h * h);
      lap += d2;
      scale += std::abs(d2);
    }
    CHECK(std::abs(lap) <= 1e-4 * std::max(scale, 1.0));
  }
}

TEST_CASE("reproducing identity and Minkowski bound") {
  for (int n : {3, 4}) {
    for (double r : {0.0, 1.0, 2.5}) {
      Point x(n, 0.0);
      x[0] = r;
      Point e1(n, 0.0);
      e1[0] = 1.0;
      const UnitVector axis(e1);
      const QuadratureRule rule = gauss_rule_aligned(1.0, 64, axis, 80, 0);
      const double trace = kernel_trace(n, 1.0, x);
      const double l2 = integrate([&](std::span<const double> y) { const double h = kernel(n, 1.0, x, y); return h * h; }, rule);
      CAPTURE(n);
      CAPTURE(r);
      CHECK(std::abs(l2 - trace) <= 1e-5 * trace);
      for (double q : {1.0, 1.5, 2.0}) {
        const double lq = integrate([&](std::span<const double> y) { return std::pow(std::abs(kernel(n, 1.0, x, y)), q); }, rule);
        CHECK(lq <= std::pow(trace, q / 2) * (1 + 1e-6));
      }
    }
  }
}

}  // TEST_SUITE
