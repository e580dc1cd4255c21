#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace hfock {

/// Truncation choices shared by every series in the library.
struct PrecisionPolicy {
  double rel_tol = 1e-15;
  int max_terms = 2000;
  /// ₁F₁ switches from the Taylor series to the asymptotic form at this argument.
  double asymptotic_threshold = 40.0;

  void validate() const;
};

/// Errors raised by special-function evaluation. `partial` carries the
/// partial sum when a series was cut off by `max_terms`.
class SpecfunError : public std::runtime_error {
 public:
  enum class Kind { Domain, Pole, Truncation };

  SpecfunError(Kind kind, const std::string& what, double partial = 0.0)
      : std::runtime_error(what), kind_(kind), partial_(partial) {}

  Kind kind() const noexcept { return kind_; }
  double partial() const noexcept { return partial_; }

 private:
  Kind kind_;
  double partial_;
};

double ln_gamma(double x);

/// (a)_k = a(a+1)...(a+k-1); switches to log-domain accumulation with sign
/// tracking when the running product would leave the double range.
double pochhammer(double a, int k);

/// log|(a)_k| and its sign (+1, -1, or 0 when a factor vanishes).
struct SignedLog {
  double log_abs;
  int sign;
};
SignedLog log_pochhammer(double a, int k);

/// Kummer's function of the first kind. Taylor series below
/// `policy.asymptotic_threshold`, asymptotic expansion above.
double kummer_1f1(double a, double b, double x, const PrecisionPolicy& policy = {});

/// log of ₁F₁ for x ≥ 0 where the value may overflow (large arguments).
double log_kummer_1f1(double a, double b, double x, const PrecisionPolicy& policy = {});

/// The two branches of kummer_1f1, exposed for continuity checks.
double kummer_1f1_series(double a, double b, double x, const PrecisionPolicy& policy = {});
double kummer_1f1_asymptotic(double a, double b, double x, const PrecisionPolicy& policy = {});

struct Truncated2F0 {
  double value;
  /// magnitude of the first omitted term
  double first_omitted;
};

/// Partial sum Σ_{k<terms} (a)_k (b)_k x^k / k! of the divergent ₂F₀ series.
Truncated2F0 hyp_2f0_truncated(double a, double b, double x, int terms);

struct Phi2Args {
  double a, b, c;
  std::complex<double> z, w;
};

/// Horn's Φ₂(a,b;c; z,w) = Σ_{j,k} (a)_j (b)_k / ((c)_{j+k} j! k!) z^j w^k,
/// summed by anti-diagonals j+k = m.
std::complex<double> horn_phi2(const Phi2Args& args, const PrecisionPolicy& policy = {});

struct Phi2Real {
  double value;
  /// |Im Φ₂|, which vanishes analytically for conjugate arguments
  double imag_residue;
};

/// Φ₂ for the conjugate pair (z, conj z). Accumulates in 113-bit binary
/// floating point so that the alternating anti-diagonals of anti-aligned
/// kernel arguments do not wipe out the double-precision result.
Phi2Real horn_phi2_conjugate(double a, double b, double c, std::complex<double> z,
                             const PrecisionPolicy& policy = {});

}  // namespace hfock
