#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hfock/poly.hpp"
#include "hfock/sphere.hpp"

using namespace hfock;

namespace {

MultiPoly random_homogeneous(std::mt19937_64& rng, int n, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  MultiPoly p(n);
  for (const auto& s : monomials_of_degree(n, m)) p.add_term(s, u(rng));
  return p;
}

/// harmonic homogeneous polynomial: harmonic layer of a random polynomial
MultiPoly random_harmonic(std::mt19937_64& rng, int n, int m) {
  return harmonic_decompose(random_homogeneous(rng, n, m), m).front();
}

double residual(const MultiPoly& a, const MultiPoly& b) { return (a - b).max_abs_coeff(); }

}  // namespace

TEST_SUITE("poly") {

TEST_CASE("ring operations") {
  const MultiPoly r2 = MultiPoly::radius_squared(2);
  const MultiPoly lap = r2.laplacian();
  CHECK(lap.terms().size() == 1);
  CHECK(lap.coeff({0, 0}) == 4.0);
  CHECK(MultiPoly::monomial({1, 1}).laplacian().is_zero());
  CHECK(MultiPoly::monomial({2, 1}).evaluate(std::vector<double>{2.0, 3.0}) == 12.0);
  const MultiPoly a = parse_poly("x1 + 2*x2", 2);
  const MultiPoly b = parse_poly("x1 - x2", 2);
  CHECK(residual(a * b, parse_poly("x1^2 + x1*x2 - 2*x2^2", 2)) == 0.0);
  CHECK((a - a).is_zero());
  CHECK_THROWS(a + MultiPoly::radius_squared(3));
}

TEST_CASE("multi factorial") {
  CHECK(multi_factorial({0, 0, 0}).exact == 1);
  CHECK(multi_factorial({2, 1}).exact == 2);
  CHECK(multi_factorial({3, 2, 1}).exact == 12);
  const auto big = multi_factorial({25, 3});
  CHECK(big.overflow);
  CHECK(big.log_value == doctest::Approx(std::lgamma(26.0) + std::log(6.0)).epsilon(1e-14));
}

TEST_CASE("decomposition examples") {
  const auto r = harmonic_decompose(MultiPoly::radius_squared(3), 2);
  REQUIRE(r.size() == 2);
  CHECK(r[0].max_abs_coeff() <= 1e-14);
  CHECK(r[1].coeff({0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-14));

  const auto h = harmonic_decompose(parse_poly("x1*x2", 2), 2);
  CHECK(residual(h[0], parse_poly("x1*x2", 2)) <= 1e-15);
  CHECK(h[1].max_abs_coeff() <= 1e-15);

  const auto d = harmonic_decompose(parse_poly("x1^2", 2), 2);
  CHECK(residual(d[0], parse_poly("0.5*x1^2 - 0.5*x2^2", 2)) <= 1e-15);
  CHECK(d[1].coeff({0, 0}) == doctest::Approx(0.5).epsilon(1e-15));

  CHECK_THROWS_AS(harmonic_decompose(parse_poly("x1^2 + x2", 2), 2), std::domain_error);
}

TEST_CASE("decomposition residuals on random polynomials") {
  std::mt19937_64 rng(21);
  for (int n = 2; n <= 5; ++n)
    for (int m = 0; m <= 8; ++m) {
      const MultiPoly p = random_homogeneous(rng, n, m);
      const auto layers = harmonic_decompose(p, m);
      MultiPoly rebuilt(n);
      MultiPoly rad = MultiPoly::constant(n, 1.0);
      const double scale = p.max_abs_coeff();
      for (std::size_t j = 0; j < layers.size(); ++j) {
        CHECK(layers[j].is_homogeneous(m - 2 * static_cast<int>(j)));
        CHECK(layers[j].laplacian().max_abs_coeff() <= 1e-10 * scale);
        rebuilt = rebuilt + rad * layers[j];
        rad = rad.multiply_by_radius_squared();
      }
      CAPTURE(n);
      CAPTURE(m);
      CHECK(residual(rebuilt, p) <= 1e-10 * scale);
    }
}

TEST_CASE("decomposition is unique") {
  std::mt19937_64 rng(22);
  for (int n = 2; n <= 5; ++n)
    for (int d = 0; d <= 4; ++d)
      for (int j = 1; j <= 2; ++j) {
        const MultiPoly h = random_harmonic(rng, n, d);
        MultiPoly p = h;
        for (int t = 0; t < j; ++t) p = p.multiply_by_radius_squared();
        const auto layers = harmonic_decompose(p, d + 2 * j);
        REQUIRE(static_cast<int>(layers.size()) > j);
        for (int t = 0; t < static_cast<int>(layers.size()); ++t) {
          if (t == j) {
            CHECK(residual(layers[t], h) <= 1e-10 * h.max_abs_coeff());
          } else {
            CHECK(layers[t].max_abs_coeff() <= 1e-10 * h.max_abs_coeff());
          }
        }
      }
}

TEST_CASE("restriction to the sphere") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n = 2; n <= 5; ++n) {
    const int m = 6;
    const MultiPoly p = random_homogeneous(rng, n, m);
    const auto layers = harmonic_decompose(p, m);
    for (int t = 0; t < 10; ++t) {
      std::vector<double> x(n);
      for (double& v : x) v = g(rng);
      const UnitVector xi = UnitVector::normalize(x);
      double sum = 0.0;
      for (const auto& layer : layers) sum += layer.evaluate(xi.coords());
      CHECK(sum == doctest::Approx(p.evaluate(xi.coords())).epsilon(1e-11));
    }
  }
}

TEST_CASE("laplacian of radius times harmonic") {
  std::mt19937_64 rng(24);
  for (int n = 2; n <= 5; ++n)
    for (int d = 0; d <= 5; ++d) {
      const MultiPoly h = random_harmonic(rng, n, d);
      const MultiPoly lhs = h.multiply_by_radius_squared().laplacian();
      CHECK(residual(lhs, h * (4.0 * d + 2.0 * n)) <= 1e-12 * std::max(1.0, h.max_abs_coeff()));
    }
}

TEST_CASE("zonal dimension equals the Laplacian nullspace dimension") {
  for (int n = 2; n <= 4; ++n)
    for (int m = 0; m <= 6; ++m) {
      const auto rows = monomials_of_degree(n, m - 2);
      const auto cols = monomials_of_degree(n, m);
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(std::max<std::size_t>(rows.size(), 1), cols.size());
      for (std::size_t j = 0; j < cols.size(); ++j) {
        const MultiPoly img = MultiPoly::monomial(cols[j]).laplacian();
        for (std::size_t i = 0; i < rows.size(); ++i) a(i, j) = img.coeff(rows[i]);
      }
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      const long nullity = static_cast<long>(cols.size()) - (rows.empty() ? 0 : lu.rank());
      CAPTURE(n);
      CAPTURE(m);
      CHECK(nullity == zonal_dim(n, m));
    }
}

TEST_CASE("text grammar") {
  const MultiPoly p = parse_poly(" 3*x1^2*x2 - x3 + 0.5 ", 3);
  CHECK(p.coeff({2, 1, 0}) == 3.0);
  CHECK(p.coeff({0, 0, 1}) == -1.0);
  CHECK(p.coeff({0, 0, 0}) == 0.5);
  CHECK(parse_poly("x1*x1", 1).coeff({2}) == 1.0);
  CHECK(parse_poly("-1e-3*x2", 2).coeff({0, 1}) == -1e-3);
  const MultiPoly back = parse_poly(format_poly(p), 3);
  CHECK(residual(back, p) == 0.0);
  CHECK(format_poly(MultiPoly(2)) == "0");
  CHECK_THROWS(parse_poly("x4", 3));
  CHECK_THROWS(parse_poly("x1^", 3));
  CHECK_THROWS(parse_poly("", 3));
  CHECK_THROWS(parse_poly("x1 x2", 3));
}

}  // TEST_SUITE
