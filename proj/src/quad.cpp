#include "hfock/quad.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <sstream>
#include <thread>

#include "hfock/gauss.hpp"

namespace hfock {

namespace {

constexpr std::size_t kChunk = 256;

void check_rule_args(int n, double alpha, int radial_order) {
  if (n < 2 || n > 6) throw CapabilityError("gauss_rule: n must be in [2, 6]");
  if (radial_order < 1 || radial_order > 128) throw CapabilityError("gauss_rule: radial_order must be in [1, 128]");
  GaussianMeasure{n, alpha}.validate();
}

QuadratureRule radial_times_sphere(double alpha, int radial_order, const SphereRule& sphere) {
  const int n = sphere.n;
  const GaussRule1D g = gauss_laguerre(radial_order, 0.5 * n - 1.0);
  const double norm = std::exp(-std::lgamma(0.5 * n));
  QuadratureRule rule;
  rule.measure = {n, alpha};
  rule.form = QuadratureRule::Form::RadialSphere;
  rule.radial_order = radial_order;
  rule.coords.reserve(g.nodes.size() * sphere.size() * n);
  rule.weights.reserve(g.nodes.size() * sphere.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const double r = std::sqrt(alpha * g.nodes[i]);
    const double wr = g.weights[i] * norm;
    for (std::size_t j = 0; j < sphere.size(); ++j) {
      const auto xi = sphere.node(j);
      for (int d = 0; d < n; ++d) rule.coords.push_back(r * xi[d]);
      rule.weights.push_back(wr * sphere.weights[j]);
    }
  }
  return rule;
}

// keeps certification near 1e8 multiply-adds however large the rule
double certify_budgeted(const QuadratureRule& rule) {
  const int deg = std::min(rule.exact_degree, 12);
  const double work = static_cast<double>(rule.size()) * std::max(deg, 1);
  const std::size_t cap = static_cast<std::size_t>(std::clamp(1e8 / work, 20.0, 2000.0));
  return certify_rule(rule, deg, cap);
}

double double_factorial_odd(int k) {  // (k−1)!! for even k
  double v = 1.0;
  for (int i = k - 1; i > 1; i -= 2) v *= i;
  return v;
}

}  // namespace

void GaussianMeasure::validate() const {
  if (n < 1) throw std::invalid_argument("GaussianMeasure: n must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("GaussianMeasure: alpha must be > 0");
}

double GaussianMeasure::density(std::span<const double> x) const {
  return std::pow(M_PI * alpha, -0.5 * n) * std::exp(-norm_sq(x) / alpha);
}

double GaussianMeasure::moment(std::span<const int> s) const {
  double v = 1.0;
  for (int e : s) {
    if (e % 2 != 0) return 0.0;
    v *= std::pow(0.5 * alpha, e / 2) * double_factorial_odd(e);
  }
  return v;
}

QuadratureRule gauss_rule(int n, double alpha, int radial_order, int sphere_degree) {
  check_rule_args(n, alpha, radial_order);
  QuadratureRule rule = radial_times_sphere(alpha, radial_order, sphere_rule(n, sphere_degree));
  rule.sphere_degree = sphere_degree;
  rule.exact_degree = std::min(2 * radial_order - 1, sphere_degree);
  rule.certificate = certify_budgeted(rule);
  return rule;
}

QuadratureRule gauss_rule_aligned(double alpha, int radial_order, const UnitVector& axis, int polar_degree,
                                  int rest_degree) {
  const int n = static_cast<int>(axis.dim());
  check_rule_args(n, alpha, radial_order);
  const SphereRule s = sphere_rule_aligned(axis, polar_degree, rest_degree);
  QuadratureRule rule = radial_times_sphere(alpha, radial_order, s);
  rule.sphere_degree = s.exact_degree;
  rule.exact_degree = std::min(2 * radial_order - 1, s.exact_degree);
  rule.certificate = certify_budgeted(rule);
  return rule;
}

QuadratureRule tensor_hermite_rule(int n, double alpha, int order) {
  if (n < 1 || n > 3) throw CapabilityError("tensor_hermite_rule: n must be <= 3");
  GaussianMeasure{n, alpha}.validate();
  const GaussRule1D g = gauss_hermite(order);
  QuadratureRule rule;
  rule.measure = {n, alpha};
  rule.form = QuadratureRule::Form::TensorHermite;
  rule.radial_order = order;
  std::size_t total = 1;
  for (int d = 0; d < n; ++d) total *= g.nodes.size();
  std::vector<std::size_t> idx(n, 0);
  const double scale = std::sqrt(alpha);
  for (std::size_t t = 0; t < total; ++t) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      rule.coords.push_back(scale * g.nodes[idx[d]]);
      w *= g.weights[idx[d]] / std::sqrt(M_PI);
    }
    rule.weights.push_back(w);
    for (int d = 0; d < n; ++d) {
      if (++idx[d] < g.nodes.size()) break;
      idx[d] = 0;
    }
  }
  rule.exact_degree = 2 * order - 1;
  rule.certificate = certify_budgeted(rule);
  return rule;
}

double certify_rule(const QuadratureRule& rule, int degree, std::size_t max_monomials) {
  const int n = rule.n();
  std::vector<std::vector<int>> monomials;
  std::mt19937_64 rng(0xc0ffeeULL);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> deg(0, std::max(degree, 0));
  std::size_t count = 1;
  for (int i = 1; i <= n; ++i) count = count * (degree + i) / i;
  if (count <= max_monomials) {
    std::vector<int> s(n, 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
      if (pos == n) {
        monomials.push_back(s);
        return;
      }
      for (int e = 0; e <= left; ++e) {
        s[pos] = e;
        self(self, pos + 1, left - e);
      }
    };
    rec(rec, 0, degree);
  } else {
    for (std::size_t t = 0; t < max_monomials; ++t) {
      std::vector<int> s(n, 0);
      const int d = deg(rng);
      for (int j = 0; j < d; ++j) ++s[pick(rng)];
      monomials.push_back(s);
    }
  }
  double worst = 0.0;
  for (const auto& s : monomials) {
    double q = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i) {
      const auto x = rule.node(i);
      double v = rule.weights[i];
      for (int d = 0; d < n; ++d)
        for (int e = 0; e < s[d]; ++e) v *= x[d];
      q += v;
    }
    const double exact = rule.measure.moment(s);
    // relative to the moment of |x|^{|s|}-size, which bounds |exact|
    int total = 0;
    for (int e : s) total += e;
    const double scale = std::max(1.0, rule.measure.moment(std::vector<int>{2 * ((total + 1) / 2)}));
    worst = std::max(worst, std::abs(q - exact) / scale);
  }
  return worst;
}

int worker_count() {
  if (const char* env = std::getenv("HFOCK_THREADS")) {
    const int v = std::atoi(env);
    if (v >= 1) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

double integrate(const Integrand& f, const QuadratureRule& rule) {
  const std::size_t total = rule.size();
  const std::size_t chunks = (total + kChunk - 1) / kChunk;
  std::vector<double> partial(chunks, 0.0);
  std::vector<std::exception_ptr> errors(chunks);

  auto run_chunk = [&](std::size_t c) {
    try {
      const std::size_t lo = c * kChunk;
      const std::size_t hi = std::min(total, lo + kChunk);
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) {
        const auto x = rule.node(i);
        const double v = f(x);
        if (!std::isfinite(v)) {
          std::ostringstream os;
          os.precision(17);
          os << "integrate: non-finite integrand " << v << " at node " << i << " (";
          for (std::size_t d = 0; d < x.size(); ++d) os << (d ? "," : "") << x[d];
          os << ")";
          throw QuadratureError(os.str());
        }
        s += rule.weights[i] * v;
      }
      partial[c] = s;
    } catch (...) {
      errors[c] = std::current_exception();
    }
  };

  const int workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(worker_count()), chunks));
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += workers) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  double sum = 0.0;
  for (double s : partial) sum += s;
  return sum;
}

double lp_seminorm(const Integrand& f, double p, double alpha, const QuadratureRule& rule) {
  if (!(p > 0.0)) throw std::invalid_argument("lp_seminorm: p must be > 0");
  if (std::isinf(p)) throw std::invalid_argument("lp_seminorm: use lp_sup_lower_bound for p = inf");
  const double want = 2.0 * alpha / p;
  if (std::abs(rule.measure.alpha - want) > 1e-12 * want)
    throw std::invalid_argument("lp_seminorm: rule must be built on the measure with parameter 2*alpha/p");
  const double v = integrate([&](std::span<const double> x) { return std::pow(std::abs(f(x)), p); }, rule);
  return std::pow(v, 1.0 / p);
}

double lp_sup_lower_bound(const Integrand& f, double alpha, const std::vector<Point>& grid) {
  if (!(alpha > 0.0)) throw std::invalid_argument("lp_sup_lower_bound: alpha must be > 0");
  double best = 0.0;
  for (const Point& x : grid) best = std::max(best, std::abs(f(x)) * std::exp(-norm_sq(x) / (2.0 * alpha)));
  return best;
}

}  // namespace hfock
