#include "hfock/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "hfock/detail/zonal_recurrence.hpp"
#include "hfock/gauss.hpp"

namespace hfock {

namespace {

constexpr std::size_t kMaxSphereNodes = 20'000'000;

/// Orthonormal basis e_1..e_{n−1} of axis^⊥ by Gram–Schmidt on the
/// coordinate vectors, skipping the one most parallel to the axis.
std::vector<Point> complement_basis(const Point& axis) {
  const int n = static_cast<int>(axis.size());
  int skip = 0;
  for (int i = 1; i < n; ++i)
    if (std::abs(axis[i]) > std::abs(axis[skip])) skip = i;
  std::vector<Point> basis{axis};
  for (int i = 0; i < n; ++i) {
    if (i == skip) continue;
    Point v(n, 0.0);
    v[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass) {
      for (const Point& b : basis) {
        const double c = dot(v, b);
        for (int d = 0; d < n; ++d) v[d] -= c * b[d];
      }
    }
    const double r = norm(v);
    for (double& x : v) x /= r;
    basis.push_back(std::move(v));
  }
  basis.erase(basis.begin());
  return basis;
}

/// Rule on S^{d−1} ⊂ ℝ^d expressed in local coordinates (first axis = e_1).
SphereRule local_rule(int d, int polar_degree, int rest_degree);

SphereRule circle_rule(const Point& axis, const Point& perp, int degree) {
  int m = std::max(2, degree + 1);
  if (m % 2 != 0) ++m;
  SphereRule r;
  r.n = 2;
  r.exact_degree = degree;
  r.coords.reserve(2 * m);
  r.weights.assign(m, 1.0 / m);
  for (int i = 0; i < m; ++i) {
    const double th = 2.0 * M_PI * i / m;
    const double c = std::cos(th);
    const double s = std::sin(th);
    r.coords.push_back(c * axis[0] + s * perp[0]);
    r.coords.push_back(c * axis[1] + s * perp[1]);
  }
  return r;
}

SphereRule build(const Point& axis, const std::vector<Point>& perp, int polar_degree, int rest_degree) {
  const int n = static_cast<int>(axis.size());
  if (n == 2) return circle_rule(axis, perp[0], polar_degree);

  const int order = std::max(1, (polar_degree + 2) / 2);
  const GaussRule1D g = gauss_gegenbauer(order, 0.5 * (n - 3));
  double gsum = 0.0;
  for (double w : g.weights) gsum += w;

  SphereRule sub;
  if (rest_degree == 0) {
    sub.n = n - 1;
    sub.coords.assign(n - 1, 0.0);
    sub.coords[0] = 1.0;
    sub.weights = {1.0};
  } else {
    sub = local_rule(n - 1, rest_degree, rest_degree);
  }
  if (static_cast<double>(order) * sub.size() > kMaxSphereNodes)
    throw CapabilityError("sphere rule: node count exceeds supported size");

  SphereRule r;
  r.n = n;
  r.exact_degree = std::min(polar_degree, rest_degree);
  r.coords.reserve(static_cast<std::size_t>(order) * sub.size() * n);
  r.weights.reserve(static_cast<std::size_t>(order) * sub.size());
  for (int i = 0; i < order; ++i) {
    const double u = g.nodes[i];
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    for (std::size_t j = 0; j < sub.size(); ++j) {
      const auto eta = sub.node(j);
      for (int d = 0; d < n; ++d) {
        double v = u * axis[d];
        for (int c = 0; c < n - 1; ++c) v += s * eta[c] * perp[c][d];
        r.coords.push_back(v);
      }
      r.weights.push_back(g.weights[i] / gsum * sub.weights[j]);
    }
  }
  return r;
}

SphereRule local_rule(int d, int polar_degree, int rest_degree) {
  Point axis(d, 0.0);
  axis[0] = 1.0;
  std::vector<Point> perp;
  for (int i = 1; i < d; ++i) {
    Point e(d, 0.0);
    e[i] = 1.0;
    perp.push_back(std::move(e));
  }
  return build(axis, perp, polar_degree, rest_degree);
}

void check_degree(int degree) {
  if (degree < 0) throw std::invalid_argument("sphere rule: degree must be nonnegative");
}

}  // namespace

double zonal(int m, std::span<const double> x, const UnitVector& xi) {
  if (m < 0) throw std::domain_error("zonal: degree must be nonnegative");
  if (x.size() != xi.dim()) throw std::invalid_argument("zonal: dimension mismatch");
  if (m == 0) return 1.0;
  const int n = static_cast<int>(x.size());
  const double t = dot(x, xi);
  const double r2 = norm_sq(x);
  double sum = 0.0;
  for (int k = 0; k <= m / 2; ++k) {
    double prod = 1.0;
    for (int f = n; f <= n + 2 * m - 2 * k - 4; f += 2) prod *= f;
    const double denom = std::ldexp(std::tgamma(k + 1.0) * std::tgamma(m - 2.0 * k + 1.0), k);
    const double term = prod / denom * std::pow(t, m - 2 * k) * std::pow(r2, k);
    sum += (k % 2 == 0 ? term : -term);
  }
  return (n + 2.0 * m - 2.0) * sum;
}

double zonal_unit(int n, int m, double u) {
  if (m < 0) throw std::domain_error("zonal_unit: degree must be nonnegative");
  if (n < 2) throw std::domain_error("zonal_unit: n must be >= 2");
  std::vector<double> z;
  detail::zonal_values(n, m, std::clamp(u, -1.0, 1.0), z);
  return z[m];
}

double zonal_solid(int m, std::span<const double> x, std::span<const double> y) {
  const double ry = norm(y);
  if (ry < 1e-300) return m == 0 ? 1.0 : 0.0;
  return std::pow(ry, m) * zonal(m, x, UnitVector::normalize(y));
}

std::int64_t zonal_dim(int n, int m) {
  if (n < 2) throw std::domain_error("zonal_dim: n must be >= 2");
  if (m < 0) throw std::domain_error("zonal_dim: degree must be nonnegative");
  // C(m+n−1, n−1) − C(m+n−3, n−1)
  auto binom = [](std::int64_t top, std::int64_t k) -> std::int64_t {
    if (top < k || top < 0) return 0;
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) r = r * (top - k + i) / i;
    return r;
  };
  return binom(m + n - 1, n - 1) - binom(m + n - 3, n - 1);
}

SphereRule sphere_rule(int n, int exact_degree) {
  if (n < 2 || n > 8) throw CapabilityError("sphere_rule: n must be in [2, 8]");
  if (exact_degree > 30) throw CapabilityError("sphere_rule: exact_degree must be <= 30");
  check_degree(exact_degree);
  SphereRule r = local_rule(n, exact_degree, exact_degree);
  r.exact_degree = exact_degree;
  r.certificate = certify_sphere_rule(r, exact_degree);
  return r;
}

SphereRule sphere_rule_aligned(const UnitVector& axis, int polar_degree, int rest_degree) {
  const int n = static_cast<int>(axis.dim());
  if (n < 2 || n > 8) throw CapabilityError("sphere_rule_aligned: n must be in [2, 8]");
  check_degree(polar_degree);
  check_degree(rest_degree);
  if (rest_degree > 30 || polar_degree > 1000)
    throw CapabilityError("sphere_rule_aligned: degree outside supported range");
  SphereRule r = build(axis.coords(), complement_basis(axis.coords()), polar_degree, rest_degree);
  r.exact_degree = std::min(polar_degree, n == 2 ? polar_degree : rest_degree);
  r.certificate = certify_sphere_rule(r, r.exact_degree);
  return r;
}

double sphere_integrate(const std::function<double(std::span<const double>)>& f, const SphereRule& rule) {
  double s = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) s += rule.weights[i] * f(rule.node(i));
  return s;
}

double sphere_moment(std::span<const int> s) {
  const int n = static_cast<int>(s.size());
  int total = 0;
  double log_num = std::lgamma(0.5 * n);
  for (int e : s) {
    if (e < 0) throw std::invalid_argument("sphere_moment: negative exponent");
    if (e % 2 != 0) return 0.0;
    total += e;
    log_num += std::lgamma(0.5 * (e + 1));
  }
  return std::exp(log_num - 0.5 * n * std::log(M_PI) - std::lgamma(0.5 * (total + n)));
}

double certify_sphere_rule(const SphereRule& rule, int degree, std::size_t max_monomials) {
  const int n = rule.n;
  // enumerate all exponent vectors of total degree ≤ degree
  std::vector<std::vector<int>> monomials;
  std::vector<int> s(n, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == n - 1) {
      for (int e = 0; e <= left; ++e) {
        s[pos] = e;
        monomials.push_back(s);
      }
      return;
    }
    for (int e = 0; e <= left; ++e) {
      s[pos] = e;
      rec(pos + 1, left - e);
    }
  };
  std::size_t count = 1;
  for (int i = 1; i <= n; ++i) count = count * (degree + i) / i;  // C(degree+n, n)
  if (count <= max_monomials) {
    rec(0, degree);
  } else {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_int_distribution<int> pick(0, n - 1);
    std::uniform_int_distribution<int> deg(0, degree);
    for (std::size_t t = 0; t < max_monomials; ++t) {
      std::fill(s.begin(), s.end(), 0);
      const int d = deg(rng);
      for (int j = 0; j < d; ++j) ++s[pick(rng)];
      monomials.push_back(s);
    }
  }
  double worst = 0.0;
  for (const auto& mono : monomials) {
    double q = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto xi = rule.node(i);
      double v = rule.weights[i];
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < mono[d]; ++e) v *= xi[d];
      q += v;
    }
    worst = std::max(worst, std::abs(q - sphere_moment(mono)));
  }
  return worst;
}

}  // namespace hfock
