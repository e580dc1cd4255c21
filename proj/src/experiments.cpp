#include "hfock/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "hfock/quad.hpp"

namespace hfock {

namespace {

constexpr double kGrowth = 13.815510557964274;  // ln 1e6
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void check_common(int n, double alpha, double beta) {
  if (n < 1) throw std::invalid_argument("experiments: n must be >= 1");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("experiments: alpha must be > 0");
  if (!(beta > 0.0) || !std::isfinite(beta)) throw std::invalid_argument("experiments: beta must be > 0");
}

void check_grid(const std::vector<double>& g, const char* who) {
  if (g.empty()) throw std::invalid_argument(std::string(who) + ": empty grid");
  for (double v : g)
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(who) + ": grid values must be > 0");
}

bool on_critical_line(double p, double alpha, double beta) { return std::abs(p * beta - 2.0 * alpha) <= 1e-12 * alpha; }

double necessity_log(double k, double x, double p, int n, double alpha, double beta) {
  return 0.5 * (k * p + n) * std::log(beta) + 0.5 * (p * k + n) * std::log(p * x + 1.0 / beta) -
         (p * k + 0.5 * p * n) * std::log1p(alpha * x);
}

double adjoint_log(double k, double x, double q, int n, double alpha, double beta) {
  return 0.5 * (q * k + n) * std::log((q * alpha * beta * x + alpha) / (alpha - q * (alpha - beta))) -
         q * (k + 0.5 * n) * std::log(alpha * x + alpha / beta);
}

double fit_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double m = static_cast<double>(xs.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  sx /= m;
  sy /= m;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - sx) * (ys[i] - sy);
    sxx += (xs[i] - sx) * (xs[i] - sx);
  }
  return sxy / sxx;
}

/// Runs f(0..count−1) on worker_count() threads; results land by index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& f) {
  std::vector<std::exception_ptr> errors(count);
  auto run = [&](std::size_t i) {
    try {
      f(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(worker_count()), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < count; i += workers) run(i);
      });
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double abs_integral(double y_norm, int n, double alpha, double beta) {
  return zonal_kernel_integral(y_norm, n, alpha, beta, [](double h) { return std::abs(h); });
}

double fischer(const MultiPoly& a, const MultiPoly& b) {
  double s = 0.0;
  for (const auto& [idx, c] : a.terms()) {
    const double d = b.coeff(idx);
    if (d != 0.0) s += c * d * multi_factorial(idx).value();
  }
  return s;
}

/// Harmonic layers of f grouped by the harmonic degree i: layers[i] = {(k, ψ_k^i)}.
std::vector<std::vector<std::pair<int, MultiPoly>>> layers_by_degree(const MultiPoly& f) {
  const int deg = std::max(f.degree(), 0);
  std::vector<std::vector<std::pair<int, MultiPoly>>> out(static_cast<std::size_t>(deg) + 1);
  for (int k = 0; k <= f.degree(); ++k) {
    const MultiPoly fk = f.homogeneous_part(k);
    if (fk.is_zero()) continue;
    const auto layers = harmonic_decompose(fk, k);
    for (std::size_t j = 0; j < layers.size(); ++j) {
      const int i = k - 2 * static_cast<int>(j);
      if (!layers[j].is_zero()) out[static_cast<std::size_t>(i)].emplace_back(k, layers[j]);
    }
  }
  return out;
}

double image_norm_sq(const std::vector<std::vector<std::pair<int, MultiPoly>>>& by_i, int n, double alpha,
                     double beta, PolyConstants c) {
  double total = 0.0;
  for (std::size_t i = 0; i < by_i.size(); ++i) {
    if (by_i[i].empty()) continue;
    MultiPoly g(n);
    for (const auto& [k, psi] : by_i[i]) g = g + psi * poly_image_constant(n, alpha, k, static_cast<int>(i), c);
    total += std::pow(beta / 2.0, static_cast<double>(i)) * fischer(g, g);
  }
  return total;
}

struct Witness {
  std::string method;
  double observable;
  bool diverges;
};

/// k-growth of an affine-in-k log ratio: beyond 1e6 and fitted rate within 5% of the prediction.
bool k_growth(const std::function<double(double)>& log_ratio, double predicted_rate) {
  if (!(predicted_rate > 0.0)) return false;
  const double kmax = std::clamp(std::ceil(2.0 * kGrowth / predicted_rate), 8.0, 1e8);
  std::vector<double> ks, ls;
  for (int j = 0; j < 8; ++j) {
    const double k = std::round(1.0 + (kmax - 1.0) * j / 7.0);
    ks.push_back(k);
    ls.push_back(log_ratio(k));
  }
  const double rate = fit_slope(ks, ls);
  return ls.back() - ls.front() > kGrowth && std::abs(rate - predicted_rate) <= 0.05 * predicted_rate;
}

Witness necessity_witness(double p, int n, double alpha, double beta, const std::vector<double>& xs) {
  std::vector<double> cand = xs;
  if (p * beta > 2.0 * alpha) cand.push_back((p * beta - 2.0 * alpha) / (alpha * p * beta));
  double best_x = cand.front(), best = -1.0;
  for (double x : cand) {
    const double l = necessity_limit(x, p, alpha, beta);
    if (l > best) {
      best = l;
      best_x = x;
    }
  }
  const bool grows = best > 1.0 + 1e-12 && k_growth([&](double k) { return necessity_log(k, best_x, p, n, alpha, beta); },
                                                    p * std::log(best));
  return {"necessity", best, grows};
}

Witness adjoint_witness(double p, int n, double alpha, double beta, const std::vector<double>& xs) {
  const double q = p / (p - 1.0);
  const double guard = 1.0 / beta - q * (1.0 / beta - 1.0 / alpha);
  if (!(guard > 0.0)) return {"adjoint-guard", guard, true};
  const AdjointNecessity a = adjoint_necessity(p, xs.front(), 1, n, alpha, beta, xs);
  return {"adjoint", std::max(a.product_at_x0, a.max_product), a.contradiction};
}

Witness p1_witness(int n, double alpha, double beta, const std::vector<double>& xs) {
  (void)n;
  if (beta <= alpha) return {"p1-sup", 1.0 / beta - 1.0 / alpha, true};
  const P1Interval iv = p1_interval_check(xs, alpha, beta);
  return {"p1-interval", iv.hi_closed - iv.lo_closed, !iv.empty};
}

/// Witnesses for p ≥ 1, with L^p(μ_β) for p > 2 read through the dual L^q(μ_γ).
Witness witness_p_ge_1(double p, int n, double alpha, double beta, const std::vector<double>& xs) {
  if (p > 2.0) {
    const double q = p / (p - 1.0);
    const double inv_gamma = 1.0 / beta - q * (1.0 / beta - 1.0 / alpha);
    if (!(inv_gamma > 0.0)) return {"dual-degenerate", inv_gamma, true};
    Witness w = witness_p_ge_1(q, n, alpha, 1.0 / inv_gamma, xs);
    w.method = "dual-" + w.method;
    return w;
  }
  Witness nec = necessity_witness(p, n, alpha, beta, xs);
  if (nec.diverges) return nec;
  Witness other = p == 1.0 ? p1_witness(n, alpha, beta, xs) : adjoint_witness(p, n, alpha, beta, xs);
  if (other.diverges) return other;
  nec.method += "+" + other.method;
  return nec;
}

std::string mode_for(int n) { return n % 2 == 0 ? "verdict" : "probe"; }

std::string bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

NecessityRatio necessity_ratio(int k, double x, double p, int n, double alpha, double beta) {
  check_common(n, alpha, beta);
  if (k < 1) throw std::invalid_argument("necessity_ratio: k must be >= 1");
  if (!(x > 0.0)) throw std::invalid_argument("necessity_ratio: x must be > 0");
  if (!(p > 0.0)) throw std::invalid_argument("necessity_ratio: p must be > 0");
  const double l = necessity_log(k, x, p, n, alpha, beta);
  return {l, std::exp(l / (p * k))};
}

double necessity_limit(double x, double p, double alpha, double beta) {
  return std::sqrt(p * beta * x + 1.0) / (alpha * x + 1.0);
}

double necessity_limit_richardson(int k, double x, double p, int n, double alpha, double beta) {
  const double l1 = necessity_ratio(k, x, p, n, alpha, beta).log_ratio_p / (p * k);
  const double l2 = necessity_ratio(2 * k, x, p, n, alpha, beta).log_ratio_p / (p * 2 * k);
  return std::exp(2.0 * l2 - l1);
}

SmallPFit small_p_divergence(int k, double p, int n, double alpha, double beta, const std::vector<double>& x_grid) {
  check_common(n, alpha, beta);
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("small_p_divergence: need 0 < p < 1");
  if (k < 0) throw std::invalid_argument("small_p_divergence: k must be >= 0");
  if (x_grid.size() < 4) throw std::invalid_argument("small_p_divergence: grid needs at least 4 points");
  check_grid(x_grid, "small_p_divergence");
  const std::size_t start = x_grid.size() / 2;
  std::vector<double> lx, ly;
  for (std::size_t i = start; i < x_grid.size(); ++i) {
    lx.push_back(std::log(x_grid[i]));
    ly.push_back(necessity_log(k, x_grid[i], p, n, alpha, beta));
  }
  SmallPFit r;
  r.slope = fit_slope(lx, ly);
  r.expected = 0.5 * n * (1.0 - p) - 0.5 * p * k;
  r.log_growth = necessity_log(k, x_grid.back(), p, n, alpha, beta) - necessity_log(k, x_grid.front(), p, n, alpha, beta);
  r.unbounded = r.log_growth > kGrowth && r.slope > 0.0 && r.expected > 0.0 &&
                std::abs(r.slope - r.expected) <= 0.05 * r.expected;
  return r;
}

double adjoint_product(double x, double p, double alpha, double beta) {
  const double u = 1.0 / (beta * x + 1.0);
  return (u - alpha / beta) * (p - alpha / beta - u);
}

AdjointNecessity adjoint_necessity(double p, double x, int k, int n, double alpha, double beta,
                                   const std::vector<double>& x_grid) {
  check_common(n, alpha, beta);
  if (!(p > 1.0 && p <= 2.0)) throw std::invalid_argument("adjoint_necessity: need 1 < p <= 2");
  if (k < 1) throw std::invalid_argument("adjoint_necessity: k must be >= 1");
  if (!(x > 0.0)) throw std::invalid_argument("adjoint_necessity: x must be > 0");
  check_grid(x_grid, "adjoint_necessity");
  AdjointNecessity r;
  r.p = p;
  r.q = p / (p - 1.0);
  r.guard = 1.0 / beta - r.q * (1.0 / beta - 1.0 / alpha);
  r.guard_ok = r.guard > 0.0;
  if (!r.guard_ok) throw std::invalid_argument("adjoint_necessity: 1/beta - q(1/beta - 1/alpha) must be > 0");
  r.log_ratio_q = adjoint_log(k, x, r.q, n, alpha, beta);
  r.kth_root = std::exp(r.log_ratio_q / (r.q * k));
  r.limit = std::sqrt((r.q * alpha * beta * x + alpha) / (alpha - r.q * (alpha - beta))) / (alpha * x + alpha / beta);
  r.x0 = (2.0 / p - 1.0) / beta;
  r.product_at_x0 = adjoint_product(r.x0, p, alpha, beta);
  r.max_product = -std::numeric_limits<double>::infinity();
  for (double g : x_grid) r.max_product = std::max(r.max_product, adjoint_product(g, p, alpha, beta));
  const double tol = 1e-12 * std::max(1.0, p * p);
  r.contradiction = (r.x0 > 0.0 && r.product_at_x0 > tol) || r.max_product > tol;
  return r;
}

P1Interval p1_interval_check(const std::vector<double>& x_grid, double alpha, double beta) {
  check_common(1, alpha, beta);
  if (!(beta > alpha)) throw std::invalid_argument("p1_interval_check: need beta > alpha");
  check_grid(x_grid, "p1_interval_check");
  const double c = 1.0 / alpha - 1.0 / beta;
  auto F = [&](double x) {
    const double t = alpha * x + alpha / beta;
    return t * t - x / c;
  };
  P1Interval r;
  const double r1 = (beta - alpha) / (alpha * beta), r2 = alpha / ((beta - alpha) * beta);
  r.lo_closed = std::min(r1, r2);
  r.hi_closed = std::max(r1, r2);
  r.min_slack = std::numeric_limits<double>::infinity();
  std::vector<double> xs = x_grid;
  std::sort(xs.begin(), xs.end());
  for (double x : xs) r.min_slack = std::min(r.min_slack, F(x));
  auto bisect = [&](double a, double b) {
    double fa = F(a);
    for (int it = 0; it < 200 && b - a > 4e-16 * b; ++it) {
      const double m = 0.5 * (a + b);
      const double fm = F(m);
      if ((fm < 0.0) == (fa < 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    return 0.5 * (a + b);
  };
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const bool in_a = F(xs[i]) < 0.0, in_b = F(xs[i + 1]) < 0.0;
    if (!in_a && in_b && !r.lo_found) r.lo_found = bisect(xs[i], xs[i + 1]);
    if (in_a && !in_b) r.hi_found = bisect(xs[i], xs[i + 1]);
  }
  r.empty = !(r.min_slack < -1e-12 * (1.0 + alpha * alpha * r.lo_closed * r.lo_closed));
  return r;
}

SchurReport schur_check(double p, int n, double alpha, double beta, const std::vector<double>& norms,
                        std::optional<double> delta, SchurPairing pairing) {
  check_common(n, alpha, beta);
  if (n < 2) throw std::invalid_argument("schur_check: n must be >= 2");
  if (!(p > 1.0)) throw std::invalid_argument("schur_check: need p > 1");
  if (!on_critical_line(p, alpha, beta)) throw std::invalid_argument("schur_check: need p*beta = 2*alpha");
  if (norms.empty()) throw std::invalid_argument("schur_check: empty grid");
  for (double v : norms)
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("schur_check: |x| must be >= 0");
  SchurReport r;
  r.p = p;
  r.q = p / (p - 1.0);
  r.pairing = pairing;
  r.delta = delta.value_or(1.0 / (p * r.q * beta));
  if (!(r.delta > 0.0)) throw std::invalid_argument("schur_check: delta must be > 0");
  const double ey = pairing == SchurPairing::Standard ? r.q : p;
  const double ex = pairing == SchurPairing::Standard ? p : r.q;
  if (!(ey * r.delta < 1.0 / alpha))
    throw std::invalid_argument("schur_check: exponent on the y-integral times delta must be < 1/alpha");
  if (!(ex * r.delta < 1.0 / beta))
    throw std::invalid_argument("schur_check: exponent on the x-integral times delta must be < 1/beta");
  r.norms = norms;
  const double beta1 = 1.0 / (1.0 / alpha - ey * r.delta);
  const double beta2 = 1.0 / (1.0 / beta - ex * r.delta);
  r.ratio1.assign(norms.size(), 0.0);
  r.ratio2.assign(norms.size(), 0.0);
  parallel_for(2 * norms.size(), [&](std::size_t t) {
    const std::size_t i = t / 2;
    const double s = norms[i];
    if (t % 2 == 0) {
      r.ratio1[i] = std::pow(beta1 / beta, 0.5 * n) * abs_integral(s, n, alpha, beta1) * std::exp(-ey * r.delta * s * s);
    } else {
      r.ratio2[i] = std::exp((1.0 / beta - 1.0 / alpha - ex * r.delta) * s * s) * std::pow(beta2 / beta, 0.5 * n) *
                    abs_integral(s, n, alpha, beta2);
    }
  });
  r.plateau1 = r.plateau2 = 0.0;
  bool have_plateau = false;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (norms[i] <= 1.0) {
      have_plateau = true;
      r.plateau1 = std::max(r.plateau1, r.ratio1[i]);
      r.plateau2 = std::max(r.plateau2, r.ratio2[i]);
    }
  }
  if (!have_plateau) throw std::invalid_argument("schur_check: grid needs a point with |x| <= 1");
  r.sup1 = *std::max_element(r.ratio1.begin(), r.ratio1.end());
  r.sup2 = *std::max_element(r.ratio2.begin(), r.ratio2.end());
  r.bounded_trend = r.sup1 <= 3.0 * r.plateau1 && r.sup2 <= 3.0 * r.plateau2;
  return r;
}

L1Report l1_sufficiency_check(int n, double alpha, double beta, const std::vector<double>& norms) {
  check_common(n, alpha, beta);
  if (n < 2) throw std::invalid_argument("l1_sufficiency_check: n must be >= 2");
  if (norms.size() < 2) throw std::invalid_argument("l1_sufficiency_check: grid needs at least 2 points");
  for (double v : norms)
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("l1_sufficiency_check: |y| must be >= 0");
  L1Report r;
  r.norms = norms;
  r.weighted.assign(norms.size(), 0.0);
  r.envelope.assign(norms.size(), kNan);
  parallel_for(norms.size(), [&](std::size_t i) {
    const double s = norms[i];
    const double w = std::exp(-s * s / (2.0 * alpha));
    r.weighted[i] = w * abs_integral(s, n, alpha, beta);
    if (n % 2 == 0 && n >= 4 && s > 0.0) r.envelope[i] = w * lemma_bound(s, n, alpha, beta, BoundParams{}).total;
  });
  r.tail_start = 2.0 * std::sqrt(n * alpha);
  r.max_weighted = *std::max_element(r.weighted.begin(), r.weighted.end());
  int tail_points = 0;
  bool dec = true;
  double prev = 0.0;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (norms[i] < r.tail_start) continue;
    if (tail_points > 0 && r.weighted[i] > prev) dec = false;
    prev = r.weighted[i];
    ++tail_points;
  }
  r.decreasing_tail = dec && tail_points >= 2;
  r.growth = r.weighted.back() / r.weighted.front();
  return r;
}

double polinomx_constant(int n, double beta) {
  if (n < 1) throw std::invalid_argument("polinomx_constant: n must be >= 1");
  if (!(beta > 0.0)) throw std::invalid_argument("polinomx_constant: beta must be > 0");
  const double inv = 1.0 / beta;
  if (beta >= 1.0 || inv <= 0.5 * n) return 1.0;
  return std::pow(2.0 / (n * beta), 0.5 * (std::floor(inv - 0.5 * n + 1.0) + 1.0));
}

double poly_norm_sq(const MultiPoly& f, double beta) {
  if (!(beta > 0.0)) throw std::invalid_argument("poly_norm_sq: beta must be > 0");
  const int n = f.dim();
  const auto by_i = layers_by_degree(f);
  double total = 0.0;
  for (std::size_t i = 0; i < by_i.size(); ++i) {
    for (const auto& [k, pk] : by_i[i]) {
      for (const auto& [j, pj] : by_i[i]) {
        const double lw = 0.5 * (k + j) * std::log(beta) + std::lgamma(0.5 * (k + j + n)) -
                          static_cast<double>(i) * std::log(2.0) - std::lgamma(static_cast<double>(i) + 0.5 * n);
        total += std::exp(lw) * fischer(pk, pj);
      }
    }
  }
  return total;
}

PolyNormRatio poly_norm_ratio(const MultiPoly& f, double alpha, double beta) {
  check_common(f.dim(), alpha, beta);
  const double den = poly_norm_sq(f, beta);
  if (!(den > 0.0)) throw std::invalid_argument("poly_norm_ratio: f must be nonzero");
  const auto by_i = layers_by_degree(f);
  return {std::sqrt(image_norm_sq(by_i, f.dim(), alpha, beta, PolyConstants::Printed) / den),
          std::sqrt(image_norm_sq(by_i, f.dim(), alpha, beta, PolyConstants::Derived) / den)};
}

std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void Report::write_csv(std::ostream& os) const {
  os << "# schema=" << schema << " version=" << version << '\n';
  for (const auto& [k, v] : meta) os << "# " << k << '=' << v << '\n';
  if (!summary.empty()) os << "# summary=" << summary << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) os << (i ? "," : "") << columns[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
}

std::vector<double> lin_grid(double lo, double hi, int count) {
  if (count < 1) throw std::invalid_argument("lin_grid: count must be >= 1");
  if (count == 1) return {lo};
  std::vector<double> g(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (count - 1);
  return g;
}

std::vector<double> log_grid(double lo, double hi, int count) {
  if (!(lo > 0.0 && hi > 0.0)) throw std::invalid_argument("log_grid: bounds must be > 0");
  std::vector<double> g = lin_grid(std::log10(lo), std::log10(hi), count);
  for (double& v : g) v = std::pow(10.0, v);
  return g;
}

namespace {

Report base_report(const std::string& schema, int n, double alpha, double beta) {
  Report r;
  r.schema = schema;
  r.meta = {{"n", std::to_string(n)},
            {"alpha", format_number(alpha)},
            {"beta", format_number(beta)},
            {"mode", mode_for(n)}};
  return r;
}

}  // namespace

Report run_necessity(int n, double p, double alpha, double beta, int k, const std::vector<double>& x_grid) {
  check_grid(x_grid, "run_necessity");
  Report r = base_report("hfock.necessity", n, alpha, beta);
  r.meta.insert(r.meta.begin() + 1, {"p", format_number(p)});
  r.meta.push_back({"k", std::to_string(k)});
  r.meta.push_back({"z_norm", "1"});
  r.meta.push_back({"convention", "L^p(dmu_beta) norms; A_k^p(z) and Gamma factors cancel"});
  r.columns = {"x", "log_ratio_p", "kth_root", "richardson", "limit", "deviation", "limit_above_one"};
  double worst = 0.0, best = 0.0;
  bool divergent = false;
  for (double x : x_grid) {
    const NecessityRatio nr = necessity_ratio(k, x, p, n, alpha, beta);
    const double rich = necessity_limit_richardson(k, x, p, n, alpha, beta);
    const double lim = necessity_limit(x, p, alpha, beta);
    const double dev = std::abs(rich - lim);
    worst = std::max(worst, dev);
    best = std::max(best, lim);
    divergent = divergent || lim > 1.0 + 1e-12;
    r.rows.push_back({format_number(x), format_number(nr.log_ratio_p), format_number(nr.kth_root), format_number(rich),
                      format_number(lim), format_number(dev), bool_text(lim > 1.0 + 1e-12)});
  }
  r.ok = worst <= 1e-6 && (!divergent || p * beta > 2.0 * alpha);
  r.meta.push_back({"max_limit", format_number(best)});
  r.meta.push_back({"max_deviation", format_number(worst)});
  r.summary = std::string(divergent ? "divergent" : "no divergence") + " on grid; max limit " + format_number(best) +
              "; max Richardson deviation " + format_number(worst);
  return r;
}

Report run_adjoint(int n, double p, double alpha, double beta, int k, const std::vector<double>& x_grid) {
  check_grid(x_grid, "run_adjoint");
  const AdjointNecessity a = adjoint_necessity(p, x_grid.front(), k, n, alpha, beta, x_grid);
  Report r = base_report("hfock.adjoint", n, alpha, beta);
  r.meta.insert(r.meta.begin() + 1, {"p", format_number(p)});
  r.meta.push_back({"q", format_number(a.q)});
  r.meta.push_back({"k", std::to_string(k)});
  r.meta.push_back({"z_norm", "1"});
  r.meta.push_back({"guard", format_number(a.guard)});
  r.meta.push_back({"x0", format_number(a.x0)});
  r.meta.push_back({"product_at_x0", format_number(a.product_at_x0)});
  r.meta.push_back({"max_product", format_number(a.max_product)});
  r.meta.push_back({"convention", "adjoint in L^2(dmu_beta), ratio in L^q(dmu_beta)"});
  r.columns = {"x", "product", "log_ratio_q", "kth_root", "limit"};
  for (double x : x_grid) {
    const AdjointNecessity ax = adjoint_necessity(p, x, k, n, alpha, beta, x_grid);
    r.rows.push_back({format_number(x), format_number(adjoint_product(x, p, alpha, beta)), format_number(ax.log_ratio_q),
                      format_number(ax.kth_root), format_number(ax.limit)});
  }
  r.ok = a.contradiction != on_critical_line(p, alpha, beta);
  r.summary = a.contradiction ? "contradiction: product > 0, P unbounded" : "consistent with boundedness";
  return r;
}

Report run_small_p(int n, double p, double alpha, double beta, int k, const std::vector<double>& x_grid) {
  const SmallPFit fit = small_p_divergence(k, p, n, alpha, beta, x_grid);
  Report r = base_report("hfock.smallp", n, alpha, beta);
  r.meta.insert(r.meta.begin() + 1, {"p", format_number(p)});
  r.meta.push_back({"k", std::to_string(k)});
  r.meta.push_back({"z_norm", "1"});
  r.meta.push_back({"observable", "log of ||P f||^p / ||f||^p against log x"});
  r.meta.push_back({"slope", format_number(fit.slope)});
  r.meta.push_back({"expected_slope", format_number(fit.expected)});
  r.meta.push_back({"log_growth", format_number(fit.log_growth)});
  r.columns = {"x", "log_ratio_p"};
  for (double x : x_grid) r.rows.push_back({format_number(x), format_number(necessity_log(k, x, p, n, alpha, beta))});
  r.ok = fit.unbounded;
  r.summary = std::string(fit.unbounded ? "unbounded" : "no blow-up detected") + "; slope " + format_number(fit.slope) +
              " expected " + format_number(fit.expected);
  return r;
}

Report run_schur(int n, double p, double alpha, double beta, const std::vector<double>& norms,
                  SchurPairing pairing) {
  const SchurReport s = schur_check(p, n, alpha, beta, norms, std::nullopt, pairing);
  Report r = base_report("hfock.schur", n, alpha, beta);
  r.meta.insert(r.meta.begin() + 1, {"p", format_number(p)});
  r.meta.push_back({"q", format_number(s.q)});
  r.meta.push_back({"delta", format_number(s.delta)});
  r.meta.push_back({"h", "exp(delta |y|^2)"});
  r.meta.push_back({"pairing", pairing == SchurPairing::Standard ? "standard: h^q in y, h^p in x"
                                                                 : "printed: h^p in y, h^q in x"});
  r.meta.push_back({"plateau1", format_number(s.plateau1)});
  r.meta.push_back({"plateau2", format_number(s.plateau2)});
  r.meta.push_back({"sup1", format_number(s.sup1)});
  r.meta.push_back({"sup2", format_number(s.sup2)});
  r.meta.push_back({"bounded_trend", bool_text(s.bounded_trend)});
  r.columns = {"norm", "ratio1", "ratio2"};
  for (std::size_t i = 0; i < norms.size(); ++i)
    r.rows.push_back({format_number(norms[i]), format_number(s.ratio1[i]), format_number(s.ratio2[i])});
  r.ok = n % 2 == 1 || s.bounded_trend;
  r.summary = std::string(s.bounded_trend ? "bounded trend" : "growth beyond 3x plateau") + "; sup/plateau " +
              format_number(s.sup1 / s.plateau1) + ", " + format_number(s.sup2 / s.plateau2);
  return r;
}

Report run_l1(int n, double alpha, double beta, const std::vector<double>& norms) {
  const L1Report l = l1_sufficiency_check(n, alpha, beta, norms);
  Report r = base_report("hfock.l1", n, alpha, beta);
  const bool critical = on_critical_line(1.0, alpha, beta);
  r.meta.push_back({"tail_start", format_number(l.tail_start)});
  r.meta.push_back({"max_weighted", format_number(l.max_weighted)});
  r.meta.push_back({"decreasing_tail", bool_text(l.decreasing_tail)});
  r.meta.push_back({"growth", format_number(l.growth)});
  r.meta.push_back({"observable", "exp(-|y|^2/(2 alpha)) * integral of |H| dmu_beta"});
  r.columns = {"norm", "weighted", "envelope"};
  for (std::size_t i = 0; i < norms.size(); ++i)
    r.rows.push_back({format_number(norms[i]), format_number(l.weighted[i]), format_number(l.envelope[i])});
  const bool grows = l.growth > 1e6;
  if (n % 2 == 1) {
    r.ok = true;
  } else if (critical) {
    r.ok = l.decreasing_tail;
  } else if (beta > 2.0 * alpha) {
    r.ok = grows;
  } else {
    r.ok = true;
    r.meta[3].second = "probe";
  }
  r.summary = std::string(l.decreasing_tail ? "decreasing tail" : "tail not decreasing") + "; growth " +
              format_number(l.growth);
  return r;
}

Report run_polinomx(int n, double alpha, double beta, int count, int max_degree, std::uint64_t seed) {
  check_common(n, alpha, beta);
  if (count < 1) throw std::invalid_argument("run_polinomx: count must be >= 1");
  if (max_degree < 1 || max_degree > 12) throw std::invalid_argument("run_polinomx: degree must be in [1, 12]");
  std::mt19937_64 rng(seed);
  auto unit = [&] { return static_cast<double>(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  const double cst = polinomx_constant(n, beta);
  Report r = base_report("hfock.polinomx", n, alpha, beta);
  r.meta.push_back({"seed", std::to_string(seed)});
  r.meta.push_back({"C", format_number(cst)});
  r.meta.push_back({"convention", "printed: every image constant 1; derived: c_{k,i}"});
  r.columns = {"index", "degree", "ratio_printed", "ratio_derived", "poly"};
  double max_p = 0.0, max_d = 0.0;
  int violations = 0;
  for (int t = 0; t < count; ++t) {
    const int deg = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_degree));
    MultiPoly f(n);
    for (int m = 0; m <= deg; ++m)
      for (const auto& s : monomials_of_degree(n, m)) f.add_term(s, unit());
    const PolyNormRatio pr = poly_norm_ratio(f, alpha, beta);
    max_p = std::max(max_p, pr.printed);
    max_d = std::max(max_d, pr.derived);
    if (pr.printed > cst * (1.0 + 1e-6)) ++violations;
    r.rows.push_back({std::to_string(t), std::to_string(deg), format_number(pr.printed), format_number(pr.derived),
                      format_poly(f)});
  }
  r.meta.push_back({"max_ratio_printed", format_number(max_p)});
  r.meta.push_back({"max_ratio_derived", format_number(max_d)});
  r.meta.push_back({"violations_printed", std::to_string(violations)});
  r.ok = violations == 0;
  r.summary = std::to_string(violations) + " of " + std::to_string(count) + " exceed C under printed constants; max " +
              format_number(max_p) + " (derived max " + format_number(max_d) + ")";
  return r;
}

Report run_phase(int n, double alpha) {
  check_common(n, alpha, alpha);
  const std::vector<double> ps = {0.5, 1.0, 1.5, 2.0, 3.0};
  const std::vector<double> ratios = {0.25, 0.5, 1.0, 2.0, 4.0};
  const std::vector<double> xs = log_grid(1e-6, 1e6, 121);
  const std::vector<double> tail = log_grid(1.0, 1e40, 41);
  Report r = base_report("hfock.phase", n, alpha, alpha);
  r.meta.erase(r.meta.begin() + 2);
  r.meta.push_back({"expected", "bounded iff p >= 1 and p*beta = 2*alpha"});
  r.columns = {"p", "beta_over_alpha", "method", "observable", "verdict", "expected", "match"};
  int mismatches = 0;
  for (double p : ps) {
    for (double ra : ratios) {
      const double beta = ra * alpha;
      Witness w;
      if (p < 1.0) {
        const SmallPFit f = small_p_divergence(0, p, n, alpha, beta, tail);
        w = {"smallp", f.slope, f.unbounded};
      } else {
        w = witness_p_ge_1(p, n, alpha, beta, xs);
      }
      const bool expected_bounded = p >= 1.0 && on_critical_line(p, alpha, beta);
      const bool match = w.diverges != expected_bounded;
      if (!match) ++mismatches;
      r.rows.push_back({format_number(p), format_number(ra), w.method, format_number(w.observable),
                        w.diverges ? "unbounded" : "bounded", expected_bounded ? "bounded" : "unbounded",
                        bool_text(match)});
    }
  }
  r.ok = mismatches == 0;
  r.summary = std::to_string(25 - mismatches) + " of 25 cells match";
  return r;
}

}  // namespace hfock
