#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hfock/poly.hpp"
#include "hfock/projector.hpp"

namespace hfock {

// All witness families use |z| = 1; every ratio below is |z|-homogeneous and
// the sphere factor A_k^p(z) cancels.

struct NecessityRatio {
  /// log of ‖P_α f‖^p / ‖f‖^p in L^p(dμ_β) for f = f_{z,k}^x
  double log_ratio_p;
  /// (ratio^{1/p})^{1/k}
  double kth_root;
};

NecessityRatio necessity_ratio(int k, double x, double p, int n, double alpha, double beta);

/// lim_k kth_root = (pβx+1)^{1/2}/(αx+1)
double necessity_limit(double x, double p, double alpha, double beta);

/// Richardson value from k and 2k; log kth_root is exactly linear in 1/k.
double necessity_limit_richardson(int k, double x, double p, int n, double alpha, double beta);

struct SmallPFit {
  double slope;
  /// n(1−p)/2 − pk/2
  double expected;
  /// log ratio at the last grid point minus at the first
  double log_growth;
  /// growth beyond 1e6 with a positive slope within 5% of expected
  bool unbounded;
};

/// Least-squares slope of log(‖P_α f‖^p/‖f‖^p) against log x over the last half of x_grid.
SmallPFit small_p_divergence(int k, double p, int n, double alpha, double beta, const std::vector<double>& x_grid);

struct AdjointNecessity {
  double p;
  double q;
  /// 1/β − q(1/β − 1/α); the L^q norm of P_α* f is finite only when positive
  double guard;
  bool guard_ok;
  /// log of ‖P_α* f‖_q^q / ‖f‖_q^q at (k, x), and its k-th root of the 1/q power
  double log_ratio_q;
  double kth_root;
  /// lim_k kth_root = ((qαβx+α)/(α−q(α−β)))^{1/2}/(αx+α/β)
  double limit;
  /// 1/(βx₀+1) = p/2
  double x0;
  /// (1/(βx+1) − α/β)(p − α/β − 1/(βx+1)) at x₀ and its max over the grid
  double product_at_x0;
  double max_product;
  bool contradiction;
};

/// Witness for 1 < p ≤ 2 through the adjoint on L^q, q = p/(p−1). Throws
/// when the guard fails.
AdjointNecessity adjoint_necessity(double p, double x, int k, int n, double alpha, double beta,
                                   const std::vector<double>& x_grid);

/// Value of the product above at one x.
double adjoint_product(double x, double p, double alpha, double beta);

struct P1Interval {
  double lo_closed;
  double hi_closed;
  /// endpoints located numerically from sign changes on the grid
  std::optional<double> lo_found;
  std::optional<double> hi_found;
  /// min over the grid of (αx+α/β)² − x/(1/α−1/β)
  double min_slack;
  bool empty;
};

/// Needs β > α; for β ≤ α the witness P_α* f is not bounded at all.
P1Interval p1_interval_check(const std::vector<double>& x_grid, double alpha, double beta);

enum class SchurPairing {
  /// ∫K(x,y)h^q(y)dμ_β(y) ≤ Ch^q(x) and ∫K(x,y)h^p(x)dμ_β(x) ≤ Ch^p(y)
  Standard,
  /// exponents exchanged: h^p in the y-integral, h^q in the x-integral
  Printed,
};

struct SchurReport {
  double p;
  double q;
  double delta;
  SchurPairing pairing;
  std::vector<double> norms;
  /// y-integral ratio at |x| and x-integral ratio at |y|
  std::vector<double> ratio1;
  std::vector<double> ratio2;
  /// max over grid points with |x| ≤ 1
  double plateau1;
  double plateau2;
  double sup1;
  double sup2;
  bool bounded_trend;
};

/// Schur test with h(y) = e^{δ|y|²} and K(x,y) = e^{(1/β−1/α)|y|²}|H_α(x,y)|.
/// Needs pβ = 2α; δ defaults to 1/(pqβ). With r, t the exponents on the y- and
/// x-integrals, rδ < 1/α and tδ < 1/β are enforced.
SchurReport schur_check(double p, int n, double alpha, double beta, const std::vector<double>& norms,
                        std::optional<double> delta = std::nullopt, SchurPairing pairing = SchurPairing::Standard);

struct L1Report {
  std::vector<double> norms;
  /// e^{−|y|²/(2α)} I_α^β(y)
  std::vector<double> weighted;
  /// e^{−|y|²/(2α)} times the lemma bound (NaN where it is undefined)
  std::vector<double> envelope;
  double tail_start;
  double max_weighted;
  bool decreasing_tail;
  /// weighted at the last grid point over weighted at the first
  double growth;
};

L1Report l1_sufficiency_check(int n, double alpha, double beta, const std::vector<double>& norms);

/// The printed case table for C(n, β).
double polinomx_constant(int n, double beta);

struct PolyNormRatio {
  double printed;
  double derived;
};

/// ‖P_α f‖/‖f‖ in L²(dμ_β) from the harmonic-layer coefficient formulas, with
/// P_α f = Σ ψ_k^i (printed) or Σ c_{k,i} ψ_k^i (derived).
PolyNormRatio poly_norm_ratio(const MultiPoly& f, double alpha, double beta);

/// ‖f‖² in L²(dμ_β) from the same layer formulas; for cross-checks.
double poly_norm_sq(const MultiPoly& f, double beta);

/// CSV output: `# schema=<id> version=<v>`, then `# key=value` lines, a header row and data rows.
struct Report {
  std::string schema;
  int version = 1;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::string summary;
  /// false when the experiment's verdict contradicts the expected outcome
  bool ok = true;

  void write_csv(std::ostream& os) const;
};

/// Shortest round-trip decimal form, independent of locale.
std::string format_number(double v);

/// count points from lo to hi, evenly spaced or geometric
std::vector<double> lin_grid(double lo, double hi, int count);
std::vector<double> log_grid(double lo, double hi, int count);

Report run_necessity(int n, double p, double alpha, double beta, int k, const std::vector<double>& x_grid);
Report run_adjoint(int n, double p, double alpha, double beta, int k, const std::vector<double>& x_grid);
Report run_small_p(int n, double p, double alpha, double beta, int k, const std::vector<double>& x_grid);
Report run_schur(int n, double p, double alpha, double beta, const std::vector<double>& norms,
                  SchurPairing pairing = SchurPairing::Standard);
/// β = 2α expects a decreasing tail, β > 2α expects growth beyond 1e6; other β are probes.
Report run_l1(int n, double alpha, double beta, const std::vector<double>& norms);
Report run_polinomx(int n, double alpha, double beta, int count, int max_degree, std::uint64_t seed);
/// 25 cells (p, β/α) ∈ {0.5,1,1.5,2,3} × {0.25,0.5,1,2,4}.
Report run_phase(int n, double alpha);

}  // namespace hfock
