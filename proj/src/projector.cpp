#include "hfock/projector.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>

#include "hfock/gauss.hpp"
#include "hfock/kernel.hpp"
#include "hfock/specfun.hpp"

namespace hfock {

namespace {

void check_n_alpha(int n, double alpha) {
  if (n < 2) throw std::invalid_argument("projector: n must be >= 2");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("projector: alpha must be > 0");
}

void check_dim(std::span<const double> w, int n) {
  if (static_cast<int>(w.size()) != n) throw std::invalid_argument("projector: point dimension does not match n");
}

// Householder reflection sending e1 to w/|w| (identity when w = 0 or w ∥ e1).
struct Reflection {
  Point v;
  bool identity = true;

  explicit Reflection(std::span<const double> w) : v(w.begin(), w.end()) {
    const double r = norm(w);
    if (!(r > 0.0)) return;
    for (double& c : v) c /= r;
    v[0] -= 1.0;
    const double vv = norm_sq(v);
    if (vv < 1e-28) return;
    for (double& c : v) c /= std::sqrt(vv);
    identity = false;
  }

  void apply(std::span<const double> x, Point& out) const {
    out.assign(x.begin(), x.end());
    if (identity) return;
    const double s = 2.0 * dot(v, x);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= s * v[i];
  }
};

double binom(int n, int k) { return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0)); }

double factorial(int k) { return std::tgamma(k + 1.0); }

double gamma_product(int n) {
  double v = 1.0;
  for (int k = 1; k <= n - 3; ++k) v *= std::exp(std::lgamma(0.5 * (1 + k)) - std::lgamma(1.0 + 0.5 * k));
  return v;
}

int half_dim(int n) {
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("lemma_bound: n must be even and >= 4");
  return (n - 2) / 2;
}

}  // namespace

void TestFunction::validate() const {
  if (!(norm(z) > 0.0)) throw std::invalid_argument("TestFunction: z must be nonzero");
  if (k < 0) throw std::invalid_argument("TestFunction: k must be >= 0");
  if (!(x_param > 0.0)) throw std::invalid_argument("TestFunction: x must be > 0");
}

double TestFunction::operator()(std::span<const double> y) const {
  // e^{−x|y|²}|y|^k 𝒴_k(z, y/|y|) = e^{−x|y|²} Y_k(z, y)
  return std::exp(-x_param * norm_sq(y)) * zonal_solid(k, z, y);
}

double project_at(const Integrand& f, int n, double alpha, std::span<const double> w, const QuadratureRule& rule) {
  check_n_alpha(n, alpha);
  check_dim(w, n);
  if (rule.n() != n || std::abs(rule.measure.alpha - alpha) > 1e-12 * alpha)
    throw std::invalid_argument("project_at: rule must be built on dμ_alpha in dimension n");
  return integrate([&](std::span<const double> y) { return kernel(n, alpha, w, y) * f(y); }, rule);
}

double project_at_beta(const Integrand& f, int n, double alpha, double beta, std::span<const double> w,
                       const QuadratureRule& rule) {
  check_n_alpha(n, alpha);
  check_n_alpha(n, beta);
  check_dim(w, n);
  if (rule.n() != n || std::abs(rule.measure.alpha - beta) > 1e-12 * beta)
    throw std::invalid_argument("project_at_beta: rule must be built on dμ_beta in dimension n");
  const double c = 1.0 / beta - 1.0 / alpha;
  const double pre = std::pow(beta / alpha, 0.5 * n);
  return pre * integrate(
                   [&](std::span<const double> y) { return kernel(n, alpha, w, y) * std::exp(c * norm_sq(y)) * f(y); },
                   rule);
}

std::function<double(std::span<const double>)> project(Integrand f, int n, double alpha, ProjectionQuadrature q) {
  check_n_alpha(n, alpha);
  Point e1(n, 0.0);
  e1[0] = 1.0;
  auto rule = std::make_shared<QuadratureRule>(
      gauss_rule_aligned(alpha, q.radial_order, UnitVector(e1), q.polar_degree, q.rest_degree));
  return [f = std::move(f), n, alpha, rule](std::span<const double> w) {
    check_dim(w, n);
    const Reflection refl(w);
    return integrate(
        [&](std::span<const double> y) {
          thread_local Point ry;
          refl.apply(y, ry);
          return kernel(n, alpha, w, ry) * f(ry);
        },
        *rule);
  };
}

double project_test_closed(const TestFunction& tf, int n, double alpha, std::span<const double> w) {
  check_n_alpha(n, alpha);
  tf.validate();
  const double zn = norm(tf.z);
  const UnitVector zh = UnitVector::normalize(tf.z);
  return std::pow(zn, tf.k) / std::pow(alpha * tf.x_param + 1.0, tf.k + 0.5 * n) * zonal(tf.k, w, zh);
}

double adjoint_test_closed(const TestFunction& tf, int n, double alpha, double beta, std::span<const double> w) {
  check_n_alpha(n, alpha);
  check_n_alpha(n, beta);
  tf.validate();
  const double zn = norm(tf.z);
  const UnitVector zh = UnitVector::normalize(tf.z);
  const double e = std::exp((1.0 / beta - 1.0 / alpha) * norm_sq(w));
  return e * std::pow(zn, tf.k) /
         (std::pow(alpha, 0.5 * n + tf.k) * std::pow(tf.x_param + 1.0 / beta, tf.k + 0.5 * n)) *
         zonal(tf.k, w, zh);
}

double adjoint_at(const Integrand& g, int n, double alpha, double beta, std::span<const double> w,
                  const QuadratureRule& rule) {
  check_n_alpha(n, alpha);
  check_n_alpha(n, beta);
  check_dim(w, n);
  if (rule.n() != n || std::abs(rule.measure.alpha - beta) > 1e-12 * beta)
    throw std::invalid_argument("adjoint_at: rule must be built on dμ_beta in dimension n");
  const double pre = std::pow(beta / alpha, 0.5 * n) * std::exp((1.0 / beta - 1.0 / alpha) * norm_sq(w));
  return pre * integrate([&](std::span<const double> y) { return kernel(n, alpha, w, y) * g(y); }, rule);
}

double poly_image_constant(int n, double alpha, int k, int i, PolyConstants c) {
  check_n_alpha(n, alpha);
  if (i < 0 || k < i || (k - i) % 2 != 0) throw std::invalid_argument("poly_image_constant: need 0 <= i <= k, k-i even");
  if (c == PolyConstants::Printed) return 1.0;
  return std::pow(alpha, 0.5 * (k - i)) * std::exp(std::lgamma(0.5 * (k + i + n)) - std::lgamma(0.5 * n + i));
}

MultiPoly project_polynomial(const MultiPoly& f, double alpha, PolyConstants c) {
  const int n = f.dim();
  check_n_alpha(n, alpha);
  const int deg = f.degree();
  if (deg > 12) throw std::invalid_argument("project_polynomial: degree must be <= 12");
  MultiPoly out(n);
  for (int k = 0; k <= deg; ++k) {
    const MultiPoly fk = f.homogeneous_part(k);
    if (fk.is_zero()) continue;
    const std::vector<MultiPoly> layers = harmonic_decompose(fk, k);
    for (std::size_t j = 0; j < layers.size(); ++j) {
      const int i = k - 2 * static_cast<int>(j);
      out = out + layers[j] * poly_image_constant(n, alpha, k, i, c);
    }
  }
  return out.pruned(1e-15 * std::max(1.0, out.max_abs_coeff()));
}

double i_alpha_beta(std::span<const double> y, int n, double alpha, double beta, const QuadratureRule& rule) {
  check_n_alpha(n, alpha);
  check_n_alpha(n, beta);
  check_dim(y, n);
  if (rule.n() != n || std::abs(rule.measure.alpha - beta) > 1e-12 * beta)
    throw std::invalid_argument("i_alpha_beta: rule must be built on dμ_beta in dimension n");
  return integrate([&](std::span<const double> x) { return std::abs(kernel(n, alpha, y, x)); }, rule);
}

double zonal_kernel_integral(double y_norm, int n, double alpha, double beta, const std::function<double(double)>& g,
                             AbsKernelQuadrature q) {
  check_n_alpha(n, alpha);
  check_n_alpha(n, beta);
  if (!(y_norm >= 0.0)) throw std::invalid_argument("zonal_kernel_integral: |y| must be >= 0");
  const double s = y_norm;
  if (s == 0.0) return g(1.0);

  // x = t1·ŷ + t2·η with η on the sphere orthogonal to y:
  // dμ_β = (πβ)^{−n/2} |S^{n−2}| t2^{n−2} e^{−(t1²+t2²)/β} dt1 dt2
  const double sb = std::sqrt(beta);
  const double width = q.panel_width * sb;
  const double reach = 9.0 * sb + n * sb;
  const double t1_lo = -reach, t1_hi = beta * s / alpha + reach;
  const double t2_hi = reach;
  const GaussRule1D gl = gauss_legendre(q.panel_order);


  // ∫ g(H) e^{−t1²/β} dt1 along one line, split at the sign changes of H
  auto line = [&](double t2) {
    // even n ≥ 6: H = e^{a} Σ c_k a^k along the line, coefficients computed once
    const double b = s * t2 / alpha;
    std::vector<double> coef;
    if (n >= 6 && n % 2 == 0 && b >= 0.05) coef = kernel_ab::even_n_a_polynomial((n - 2) / 2, b);
    auto h = [&](double t1, double) {
      const double a = s * t1 / alpha;
      if (coef.empty()) return kernel_ab::fast(n, a, b);
      double p = 0.0;
      for (std::size_t k = coef.size(); k-- > 0;) p = p * a + coef[k];
      return std::exp(a) * p;
    };
    const int panels = static_cast<int>(std::ceil((t1_hi - t1_lo) / width));
    const double pw = (t1_hi - t1_lo) / panels;
    double acc = 0.0;
    auto piece = [&](double a, double b) {
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      double part = 0.0;
      for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
        const double t = mid + half * gl.nodes[j];
        part += gl.weights[j] * g(h(t, t2)) * std::exp(-t * t / beta);
      }
      return half * part;
    };
    double lo = t1_lo, flo = h(lo, t2);
    for (int p = 0; p < panels; ++p) {
      const double a = t1_lo + p * pw;
      const double b = a + pw;
      std::vector<double> cuts{a};
      for (int k = 1; k <= q.scan_per_panel; ++k) {
        const double t = a + pw * k / q.scan_per_panel;
        const double ft = h(t, t2);
        if ((flo < 0.0) != (ft < 0.0) && flo != 0.0 && ft != 0.0) {
          double l = lo, r = t, fl = flo;
          while (r - l > 1e-13 * std::max(1.0, std::abs(l))) {
            const double m = 0.5 * (l + r);
            const double fm = h(m, t2);
            if ((fm < 0.0) == (fl < 0.0)) {
              l = m;
              fl = fm;
            } else {
              r = m;
            }
          }
          cuts.push_back(0.5 * (l + r));
        }
        lo = t;
        flo = ft;
      }
      cuts.push_back(b);
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) acc += piece(cuts[c], cuts[c + 1]);
    }
    return acc;
  };

  auto outer = [&](double t2) { return std::pow(t2, n - 2) * std::exp(-t2 * t2 / beta) * line(t2); };
  auto gauss = [&](double a, double b) {
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    double part = 0.0;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) part += gl.weights[j] * outer(mid + half * gl.nodes[j]);
    return half * part;
  };
  // the zeros of H sweep through the Gaussian peak within narrow t2-windows,
  // so panels are bisected until two resolutions agree
  const int panels2 = static_cast<int>(std::ceil(t2_hi / width));
  const double pw2 = t2_hi / panels2;
  std::vector<double> coarse(panels2);
  double rough = 0.0;
  for (int p = 0; p < panels2; ++p) rough += std::abs(coarse[p] = gauss(p * pw2, (p + 1) * pw2));
  const double tol = q.rel_tol * rough / panels2;
  auto adapt = [&](auto&& self, double a, double b, double whole, int depth) -> double {
    const double m = 0.5 * (a + b);
    const double left = gauss(a, m), right = gauss(m, b);
    if (depth >= q.max_depth || std::abs(left + right - whole) <= tol * std::ldexp(1.0, -depth / 2)) return left + right;
    return self(self, a, m, left, depth + 1) + self(self, m, b, right, depth + 1);
  };
  double total = 0.0;
  for (int p = 0; p < panels2; ++p) total += adapt(adapt, p * pw2, (p + 1) * pw2, coarse[p], 0);
  const double sphere = 2.0 * std::pow(M_PI, 0.5 * (n - 1)) / std::tgamma(0.5 * (n - 1));
  return total * sphere * std::pow(M_PI * beta, -0.5 * n);
}

double i_alpha_beta(std::span<const double> y, int n, double alpha, double beta, AbsKernelQuadrature q) {
  check_dim(y, n);
  return zonal_kernel_integral(norm(y), n, alpha, beta, [](double v) { return std::abs(v); }, q);
}

void BoundParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw std::invalid_argument("BoundParams: epsilon must lie in (0, 1)");
  if (!(theta > std::sqrt(1.0 - epsilon * epsilon) && theta < 1.0))
    throw std::invalid_argument("BoundParams: theta must lie in (sqrt(1-epsilon^2), 1)");
}

double g_abs_moment(int N, int m) {
  if (N < 1 || m < 0) throw std::invalid_argument("g_abs_moment: need N >= 1, m >= 0");
  const MultiPoly g = g_n_poly(N);
  // G_N is a multiple of the Legendre polynomial of degree N−1
  std::vector<double> cuts{-1.0, 0.0, 1.0};
  if (N >= 2) {
    const GaussRule1D roots = gauss_legendre(N - 1);
    cuts.insert(cuts.end(), roots.nodes.begin(), roots.nodes.end());
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [](double a, double b) { return std::abs(a - b) < 1e-15; }),
             cuts.end());
  const GaussRule1D gl = gauss_legendre(N + m / 2 + 2);
  double acc = 0.0;
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double half = 0.5 * (cuts[c + 1] - cuts[c]), mid = 0.5 * (cuts[c + 1] + cuts[c]);
    double part = 0.0;
    for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
      const double t = mid + half * gl.nodes[j];
      const double x[1] = {t};
      part += gl.weights[j] * g.evaluate(x) * std::pow(t, m);
    }
    acc += std::abs(half * part);
  }
  return acc;
}

LemmaBound lemma_bound(double y_norm, int n, double alpha, double beta, const BoundParams& bp) {
  check_n_alpha(n, alpha);
  check_n_alpha(n, beta);
  bp.validate();
  if (!(y_norm > 0.0)) throw std::invalid_argument("lemma_bound: |y| must be > 0");
  const int N = half_dim(n);
  const double eps = bp.epsilon, th = bp.theta;

  double gmax = 0.0;
  for (int m = 0; m <= N; ++m) gmax = std::max(gmax, g_abs_moment(N, m));

  const double xe = (1.0 - eps * eps) * beta * y_norm * y_norm / (4.0 * alpha * alpha);
  const double xt = th * th * beta * y_norm * y_norm / (4.0 * alpha * alpha);
  double psi = 0.0, sum_cf = 0.0;
  for (int j = 0; j <= N; ++j) {
    const double cf = binom(N, j) * factorial(N) / factorial(j);
    const double s = 0.5 * (N + j + 3);
    psi += cf * std::pow(beta, s) * std::tgamma(s) / (std::pow(alpha, j) * std::pow(y_norm, N - j - 1)) *
           kummer_1f1(s, 1.5, xe);
    sum_cf += cf;
  }
  const double phi = std::tgamma(0.5 * n) * sum_cf * kummer_1f1(0.5 * n, 0.5, xt) +
                     std::tgamma(0.5 * (n + 1)) * sum_cf * std::sqrt(beta) / alpha * th * y_norm *
                         kummer_1f1(0.5 * (1 + n), 1.5, xt);

  const double gp = gamma_product(n);
  const double c1 = std::pow(2.0, 3 - 2 * N) / std::sqrt(M_PI) * std::pow(alpha, N) * std::pow(beta, -0.5 * n) * gp /
                    (std::pow(eps, N + 1) * (1.0 - eps) * factorial(N - 1)) * gmax;
  const double c2 = std::pow(2.0, 1 - 2 * N) * std::pow(M_PI, -0.5 * n) * std::pow(alpha, N - 1) * gp /
                    factorial(N - 1) * gmax;
  return {psi, phi, c1, c2, c1 * psi + c2 * phi, gmax};
}

RemarkEnvelope remark_envelope(double y_norm, int n, double alpha, double beta, double theta) {
  check_n_alpha(n, alpha);
  check_n_alpha(n, beta);
  const int N = half_dim(n);
  if (!(y_norm > 0.0)) throw std::invalid_argument("remark_envelope: |y| must be > 0");
  const double x = theta * theta * beta * y_norm * y_norm / (4.0 * alpha * alpha);
  RemarkEnvelope e{};
  e.delta = y_norm < 1.0 ? y_norm + std::pow(y_norm, 1 - N) : y_norm;
  e.f_odd = kummer_1f1(0.5 * (1 + n), 1.5, x);
  e.f_even = kummer_1f1(0.5 * n, 0.5, x);
  e.delta_left_at_one = 2.0;
  e.delta_right_at_one = 1.0;
  return e;
}

}  // namespace hfock
