#include <doctest.h>

#include <cmath>
#include <random>

#include "hfock/kernel.hpp"
#include "hfock/projector.hpp"

using namespace hfock;

namespace {

Point probe(int n, int i) {
  Point w(n, 0.0);
  for (int d = 0; d < n; ++d) w[d] = std::sin(1.7 * i + 0.9 * d + 0.3) * (0.4 + 0.15 * (i % 5));
  return w;
}

MultiPoly random_poly(int n, int deg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MultiPoly p(n);
  for (int m = 0; m <= deg; ++m)
    for (const auto& s : monomials_of_degree(n, m)) p.add_term(s, u(rng));
  return p;
}

}  // namespace

TEST_SUITE("projector") {

TEST_CASE("test function and its closed images") {
  TestFunction bad{Point{0.0, 0.0}, 1, 1.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  TestFunction tf{Point{0.6, 0.8, 0.0}, 0, 0.7};
  const Point w{0.3, -1.1, 0.4};
  CHECK(project_test_closed(tf, 3, 1.5, w) == doctest::Approx(std::pow(1.5 * 0.7 + 1.0, -1.5)).epsilon(1e-15));
  CHECK(adjoint_test_closed(tf, 3, 1.5, 1.5, w) == doctest::Approx(project_test_closed(tf, 3, 1.5, w)).epsilon(1e-14));

  // as x → 0 the image of Y_k(z, ·) is Y_k(z, ·) itself
  TestFunction small{Point{0.0, 1.2, 0.5}, 3, 1e-12};
  const double h = zonal_solid(3, small.z, w);
  CHECK(project_test_closed(small, 3, 0.8, w) == doctest::Approx(h).epsilon(1e-10));

  // diagonal value of the adjoint image
  TestFunction d{Point{0.5, -0.2, 0.7, 0.1}, 2, 0.4};
  const double alpha = 1.0, beta = 2.0;
  const double zz = norm_sq(d.z);
  const double want = zonal_dim(4, 2) * std::exp((1 / beta - 1 / alpha) * zz) * std::pow(zz, 2) /
                      (std::pow(alpha, 4.0) * std::pow(d.x_param + 1 / beta, 4.0));
  CHECK(adjoint_test_closed(d, 4, alpha, beta, d.z) == doctest::Approx(want).epsilon(1e-13));
}

TEST_CASE("quadrature projection of the test family") {
  for (int n = 2; n <= 6; ++n) {
    for (int k = 0; k <= 5; ++k) {
      if (n == 6 && k > 3) continue;
      TestFunction tf{Point(n, 0.0), k, 0.5};
      tf.z[0] = 0.6;
      tf.z[n - 1] = 0.8;
      ProjectionQuadrature q;
      q.rest_degree = k;
      auto P = project(tf, n, 1.0, q);
      for (int i = 0; i < 2; ++i) {
        const Point w = probe(n, i + k);
        CHECK(std::abs(P(w) - project_test_closed(tf, n, 1.0, w)) <= 1e-6);
      }
    }
  }
  SUBCASE("n = 3, k = 2, x = 0.5, |z| = 1 on a full rule") {
    TestFunction tf{Point{0.0, 0.0, 1.0}, 2, 0.5};
    const QuadratureRule rule = gauss_rule(3, 1.0, 48, 30);
    const Point w{0.5, -0.4, 0.8};
    CHECK(project_at(tf, 3, 1.0, w, rule) == doctest::Approx(project_test_closed(tf, 3, 1.0, w)).epsilon(1e-6));
  }
}

TEST_CASE("beta form and adjoint against quadrature") {
  const int n = 4;
  const double alpha = 1.0, beta = 2.0;
  TestFunction tf{Point{0.3, 0.0, -0.9, 0.2}, 2, 0.6};
  const Point w{0.4, 0.2, 0.1, -0.3};
  Point axis = w;
  const QuadratureRule rb = gauss_rule_aligned(beta, 64, UnitVector::normalize(axis), 80, 2);
  CHECK(project_at_beta(tf, n, alpha, beta, w, rb) == doctest::Approx(project_test_closed(tf, n, alpha, w)).epsilon(1e-6));
  CHECK(adjoint_at(tf, n, alpha, beta, w, rb) == doctest::Approx(adjoint_test_closed(tf, n, alpha, beta, w)).epsilon(1e-6));
  CHECK_THROWS_AS(project_at(tf, n, alpha, w, rb), std::invalid_argument);
}

TEST_CASE("reproducing property on harmonic polynomials") {
  const int n = 3;
  const double alpha = 1.3;
  const MultiPoly h = parse_poly("3*x1^2*x2 - x2^3 + 2*x1*x3 - x2 + 0.5", n);
  REQUIRE(h.laplacian().is_zero());
  ProjectionQuadrature q;
  q.rest_degree = 4;
  auto P = project([&](std::span<const double> y) { return h.evaluate(y); }, n, alpha, q);
  for (int i = 0; i < 20; ++i) {
    const Point w = probe(n, i);
    CHECK(std::abs(P(w) - h.evaluate(w)) <= 1e-6);
  }
  auto R = project([](std::span<const double> y) { return norm_sq(y); }, n, alpha, q);
  CHECK(R(probe(n, 3)) == doctest::Approx(n * alpha / 2).epsilon(1e-9));
}

TEST_CASE("polynomial images") {
  const double alpha = 0.7;
  CHECK(poly_image_constant(4, alpha, 3, 3) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(poly_image_constant(5, alpha, 2, 0) == doctest::Approx(5 * alpha / 2).epsilon(1e-14));
  CHECK(poly_image_constant(4, alpha, 3, 1) == doctest::Approx(3 * alpha).epsilon(1e-14));
  CHECK(poly_image_constant(4, alpha, 3, 1, PolyConstants::Printed) == 1.0);
  CHECK_THROWS_AS(poly_image_constant(4, alpha, 3, 2), std::invalid_argument);

  const MultiPoly r2 = MultiPoly::radius_squared(4);
  const MultiPoly p1 = project_polynomial(r2, alpha);
  CHECK(p1.degree() == 0);
  CHECK(p1.coeff({0, 0, 0, 0}) == doctest::Approx(2 * alpha).epsilon(1e-14));

  const MultiPoly y1 = MultiPoly::monomial({1, 0, 0, 0});
  const MultiPoly p2 = project_polynomial(r2 * y1, alpha);
  CHECK((p2 - y1 * (3 * alpha)).max_abs_coeff() <= 1e-13);
  // printed constants keep |y|² y1 ↦ y1
  CHECK((project_polynomial(r2 * y1, alpha, PolyConstants::Printed) - y1).max_abs_coeff() <= 1e-13);

  const MultiPoly h = parse_poly("x1*x2*x3 + x1^2 - x4^2 + 3", 4);
  CHECK((project_polynomial(h, alpha) - h).max_abs_coeff() <= 1e-13);
}

TEST_CASE("polynomial images agree with quadrature, are idempotent and orthogonal") {
  std::mt19937_64 rng(17);
  for (int n : {2, 3, 4}) {
    const double alpha = 0.9;
    const MultiPoly f = random_poly(n, 4, rng);
    const MultiPoly pf = project_polynomial(f, alpha);
    CHECK((project_polynomial(pf, alpha) - pf).max_abs_coeff() <= 1e-11);

    ProjectionQuadrature q;
    q.rest_degree = 4;
    auto P = project([&](std::span<const double> y) { return f.evaluate(y); }, n, alpha, q);
    for (int i = 0; i < 4; ++i) {
      const Point w = probe(n, i);
      CHECK(std::abs(P(w) - pf.evaluate(w)) <= 1e-6);
    }

    const QuadratureRule rule = gauss_rule(n, alpha, 8, 10);
    const MultiPoly resid = f - pf;
    for (int m = 0; m <= 4; ++m) {
      for (const auto& s : monomials_of_degree(n, m)) {
        const auto layers = harmonic_decompose(MultiPoly::monomial(s), m);
        const MultiPoly& hm = layers.front();
        if (hm.is_zero()) continue;
        const double ip =
            integrate([&](std::span<const double> y) { return resid.evaluate(y) * hm.evaluate(y); }, rule);
        CHECK(std::abs(ip) <= 1e-6);
      }
    }
  }
}

TEST_CASE("absolute kernel integral") {
  CHECK(i_alpha_beta(Point{0.0, 0.0, 0.0, 0.0}, 4, 1.0, 2.0) == 1.0);
  for (double s : {0.5, 1.0, 2.0, 3.0}) {
    const Point y{0.6 * s, 0.8 * s};
    const double v = i_alpha_beta(y, 2, 1.0, 1.5);
    CHECK(v >= 1.0);
    CHECK(v <= 2.0 * std::exp(1.5 * s * s / 4.0));
  }
  // self-convergence against a finer resolution
  const double fine = 2.94248;
  CHECK(i_alpha_beta(Point{2.0, 0.0, 0.0, 0.0}, 4, 1.0, 1.0) == doctest::Approx(fine).epsilon(1e-4));
  CHECK(i_alpha_beta(Point{0.0, 1.2, 1.6, 0.0}, 4, 1.0, 1.0) == doctest::Approx(fine).epsilon(1e-4));

  // the generic rule path converges to the same value, more slowly
  const Point y{2.0, 0.0, 0.0, 0.0};
  const QuadratureRule rule = gauss_rule_aligned(1.0, 96, UnitVector(Point{1.0, 0.0, 0.0, 0.0}), 200, 0);
  CHECK(i_alpha_beta(y, 4, 1.0, 1.0, rule) == doctest::Approx(fine).epsilon(1e-3));
}

TEST_CASE("zonal kernel integrals reproduce exact identities") {
  for (int n : {2, 3, 4, 6}) {
    // ∫ H(y,·) dμ_β = 1 for any β; only meaningful while there is little cancellation
    CHECK(zonal_kernel_integral(0.7, n, 1.0, 1.5, [](double v) { return v; }) == doctest::Approx(1.0).epsilon(1e-9));
    // ∫ H(y,·)² dμ_α = H(y,y)
    for (double s : {0.5, 3.0, 8.0}) {
      Point y(n, 0.0);
      y[n - 1] = s;
      const double sq = zonal_kernel_integral(s, n, 1.2, 1.2, [](double v) { return v * v; });
      CHECK(sq == doctest::Approx(kernel_trace(n, 1.2, y)).epsilon(1e-9));
    }
  }
  // refining every resolution parameter leaves I unchanged
  AbsKernelQuadrature fine{0.25, 20, 4, 1e-11, 14};
  for (int n : {4, 6}) {
    const double a = zonal_kernel_integral(8.0, n, 1.0, 2.0, [](double v) { return std::abs(v); });
    const double b = zonal_kernel_integral(8.0, n, 1.0, 2.0, [](double v) { return std::abs(v); }, fine);
    CHECK(a == doctest::Approx(b).epsilon(1e-8));
  }
}

TEST_CASE("G_N absolute moments") {
  CHECK(g_abs_moment(1, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(g_abs_moment(2, 0) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(g_abs_moment(2, 1) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  // G_3 = 4(3t² − 1), against a fine midpoint sum
  double acc = 0.0;
  const int m = 2000000;
  for (int i = 0; i < m; ++i) {
    const double t = -1.0 + (i + 0.5) * 2.0 / m;
    acc += std::abs(4.0 * (3 * t * t - 1.0) * t) * 2.0 / m;
  }
  CHECK(g_abs_moment(3, 1) == doctest::Approx(acc).epsilon(1e-9));
}

TEST_CASE("lemma bound and envelope") {
  CHECK_THROWS_AS((BoundParams{0.5, 0.5}.validate()), std::invalid_argument);
  CHECK_NOTHROW((BoundParams{0.5, 0.95}.validate()));
  CHECK_THROWS_AS(lemma_bound(1.0, 5, 1.0, 2.0, {}), std::invalid_argument);

  for (double s : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const LemmaBound b = lemma_bound(s, 4, 1.0, 2.0, {0.5, 0.95});
    CHECK(b.total == doctest::Approx(b.c1 * b.psi + b.c2 * b.phi).epsilon(1e-15));
    const double i = i_alpha_beta(Point{s, 0.0, 0.0, 0.0}, 4, 1.0, 2.0);
    CHECK(i <= b.total + 1e-4 * i);
  }

  const RemarkEnvelope e = remark_envelope(0.5, 4, 1.0, 2.0, 0.95);
  CHECK(e.delta == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(e.delta_left_at_one == 2.0);
  CHECK(e.delta_right_at_one == 1.0);
  CHECK(remark_envelope(1.0, 6, 1.0, 2.0, 0.95).delta == 1.0);
  CHECK(remark_envelope(0.5, 6, 1.0, 2.0, 0.95).delta == doctest::Approx(2.5).epsilon(1e-15));
  // with β = 2α the weighted envelope eventually decays as θ < 1
  double last = 0.0;
  for (double s : {10.0, 20.0, 30.0}) {
    const RemarkEnvelope r = remark_envelope(s, 4, 1.0, 2.0, 0.95);
    const double v = std::log(r.delta * r.f_odd + r.f_even) - s * s / 2.0;
    if (last != 0.0) CHECK(v < last);
    last = v;
  }
}

}
