#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace hfock {

/// Exponent vector s = (s_1, ..., s_n).
using MultiIndex = std::vector<int>;

int degree(const MultiIndex& s);

/// s! = Π s_i!. `exact` is valid unless `overflow` is set; `log_value`
/// always holds ln(s!).
struct MultiFactorial {
  std::uint64_t exact = 1;
  double log_value = 0.0;
  bool overflow = false;
  double value() const;
};
MultiFactorial multi_factorial(const MultiIndex& s);

/// Sparse polynomial in n variables with real coefficients. Zero
/// coefficients are never stored.
class MultiPoly {
 public:
  explicit MultiPoly(int n = 1);
  static MultiPoly constant(int n, double c);
  static MultiPoly monomial(const MultiIndex& s, double c = 1.0);
  /// |x|² in n variables
  static MultiPoly radius_squared(int n);

  int dim() const noexcept { return n_; }
  const std::map<MultiIndex, double>& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }
  /// highest total degree, −1 for the zero polynomial
  int degree() const;
  bool is_homogeneous(int m) const;
  double coeff(const MultiIndex& s) const;
  double max_abs_coeff() const;

  void add_term(const MultiIndex& s, double c);

  MultiPoly operator+(const MultiPoly& q) const;
  MultiPoly operator-(const MultiPoly& q) const;
  MultiPoly operator*(const MultiPoly& q) const;
  MultiPoly operator*(double c) const;

  double evaluate(std::span<const double> x) const;
  MultiPoly laplacian() const;
  MultiPoly multiply_by_radius_squared() const;
  /// part of total degree exactly m
  MultiPoly homogeneous_part(int m) const;
  /// drop coefficients with |c| ≤ tol
  MultiPoly pruned(double tol) const;

 private:
  void check_dim(const MultiPoly& q) const;

  int n_;
  std::map<MultiIndex, double> terms_;
};

/// All exponent vectors in n variables of total degree m, lexicographic.
std::vector<MultiIndex> monomials_of_degree(int n, int m);

/// p = p_m + |x|² p_{m−2} + |x|⁴ p_{m−4} + ··· with each p_{m−2j} harmonic
/// and homogeneous. Returns [p_m, p_{m−2}, ...]. p must be homogeneous of degree m.
std::vector<MultiPoly> harmonic_decompose(const MultiPoly& p, int m);

/// Text form `coeff*x1^a1*...*xn^an` joined by `+`/`-`; whitespace ignored.
MultiPoly parse_poly(const std::string& text, int n);
std::string format_poly(const MultiPoly& p);

}  // namespace hfock
