#include "hfock/poly.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace hfock {

int degree(const MultiIndex& s) { return std::accumulate(s.begin(), s.end(), 0); }

double MultiFactorial::value() const {
  return overflow ? std::exp(log_value) : static_cast<double>(exact);
}

MultiFactorial multi_factorial(const MultiIndex& s) {
  MultiFactorial f;
  for (int e : s) {
    if (e < 0) throw std::invalid_argument("multi_factorial: negative exponent");
    f.log_value += std::lgamma(e + 1.0);
    for (int i = 2; i <= e && !f.overflow; ++i) {
      if (f.exact > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(i)) {
        f.overflow = true;
      } else {
        f.exact *= static_cast<std::uint64_t>(i);
      }
    }
  }
  if (f.overflow) f.exact = 0;
  return f;
}

MultiPoly::MultiPoly(int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("MultiPoly: dimension must be >= 1");
}

MultiPoly MultiPoly::constant(int n, double c) {
  MultiPoly p(n);
  p.add_term(MultiIndex(n, 0), c);
  return p;
}

MultiPoly MultiPoly::monomial(const MultiIndex& s, double c) {
  MultiPoly p(static_cast<int>(s.size()));
  p.add_term(s, c);
  return p;
}

MultiPoly MultiPoly::radius_squared(int n) {
  MultiPoly p(n);
  for (int i = 0; i < n; ++i) {
    MultiIndex s(n, 0);
    s[i] = 2;
    p.add_term(s, 1.0);
  }
  return p;
}

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& [s, c] : terms_) d = std::max(d, hfock::degree(s));
  return d;
}

bool MultiPoly::is_homogeneous(int m) const {
  for (const auto& [s, c] : terms_)
    if (hfock::degree(s) != m) return false;
  return true;
}

double MultiPoly::coeff(const MultiIndex& s) const {
  const auto it = terms_.find(s);
  return it == terms_.end() ? 0.0 : it->second;
}

double MultiPoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [s, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

void MultiPoly::add_term(const MultiIndex& s, double c) {
  if (static_cast<int>(s.size()) != n_) throw std::invalid_argument("MultiPoly: dimension mismatch");
  for (int e : s)
    if (e < 0) throw std::invalid_argument("MultiPoly: negative exponent");
  if (c == 0.0) return;
  auto [it, inserted] = terms_.try_emplace(s, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

void MultiPoly::check_dim(const MultiPoly& q) const {
  if (q.n_ != n_) throw std::invalid_argument("MultiPoly: dimension mismatch");
}

MultiPoly MultiPoly::operator+(const MultiPoly& q) const {
  check_dim(q);
  MultiPoly r = *this;
  for (const auto& [s, c] : q.terms_) r.add_term(s, c);
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& q) const { return *this + q * -1.0; }

MultiPoly MultiPoly::operator*(const MultiPoly& q) const {
  check_dim(q);
  MultiPoly r(n_);
  MultiIndex s(n_);
  for (const auto& [a, ca] : terms_)
    for (const auto& [b, cb] : q.terms_) {
      for (int i = 0; i < n_; ++i) s[i] = a[i] + b[i];
      r.add_term(s, ca * cb);
    }
  return r;
}

MultiPoly MultiPoly::operator*(double c) const {
  MultiPoly r(n_);
  if (c == 0.0) return r;
  for (const auto& [s, v] : terms_) r.add_term(s, v * c);
  return r;
}

double MultiPoly::evaluate(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != n_) throw std::invalid_argument("MultiPoly::evaluate: dimension mismatch");
  double sum = 0.0;
  for (const auto& [s, c] : terms_) {
    double v = c;
    for (int i = 0; i < n_; ++i)
      for (int e = 0; e < s[i]; ++e) v *= x[i];
    sum += v;
  }
  return sum;
}

MultiPoly MultiPoly::laplacian() const {
  MultiPoly r(n_);
  for (const auto& [s, c] : terms_)
    for (int i = 0; i < n_; ++i) {
      if (s[i] < 2) continue;
      MultiIndex t = s;
      t[i] -= 2;
      r.add_term(t, c * s[i] * (s[i] - 1));
    }
  return r;
}

MultiPoly MultiPoly::multiply_by_radius_squared() const { return *this * radius_squared(n_); }

MultiPoly MultiPoly::homogeneous_part(int m) const {
  MultiPoly r(n_);
  for (const auto& [s, c] : terms_)
    if (hfock::degree(s) == m) r.add_term(s, c);
  return r;
}

MultiPoly MultiPoly::pruned(double tol) const {
  MultiPoly r(n_);
  for (const auto& [s, c] : terms_)
    if (std::abs(c) > tol) r.add_term(s, c);
  return r;
}

std::vector<MultiIndex> monomials_of_degree(int n, int m) {
  std::vector<MultiIndex> out;
  MultiIndex s(n, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      s[pos] = left;
      out.push_back(s);
      return;
    }
    for (int e = left; e >= 0; --e) {
      s[pos] = e;
      self(self, pos + 1, left - e);
    }
  };
  if (m >= 0) rec(rec, 0, m);
  return out;
}

namespace {

/// Solve Δ(|x|² q) = rhs for q homogeneous of degree d. The map is
/// invertible on degree-d polynomials (its eigenvalues are 2j(2d+n−2j+2) > 0).
MultiPoly solve_layer(const MultiPoly& rhs, int n, int d) {
  const std::vector<MultiIndex> basis = monomials_of_degree(n, d);
  std::map<MultiIndex, int> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = static_cast<int>(i);

  std::vector<Eigen::Triplet<double>> entries;
  for (std::size_t j = 0; j < basis.size(); ++j) {
    const MultiPoly image = MultiPoly::monomial(basis[j]).multiply_by_radius_squared().laplacian();
    for (const auto& [s, c] : image.terms()) entries.emplace_back(index.at(s), static_cast<int>(j), c);
  }
  const int size = static_cast<int>(basis.size());
  Eigen::SparseMatrix<double> a(size, size);
  a.setFromTriplets(entries.begin(), entries.end());
  a.makeCompressed();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size);
  for (const auto& [s, c] : rhs.terms()) b[index.at(s)] = c;

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw std::logic_error("harmonic_decompose: singular layer system");
  const Eigen::VectorXd q = lu.solve(b);
  if (lu.info() != Eigen::Success) throw std::logic_error("harmonic_decompose: layer solve failed");

  MultiPoly out(n);
  for (int i = 0; i < size; ++i) out.add_term(basis[i], q[i]);
  return out;
}

}  // namespace

std::vector<MultiPoly> harmonic_decompose(const MultiPoly& p, int m) {
  if (m < 0) throw std::domain_error("harmonic_decompose: degree must be nonnegative");
  if (!p.is_homogeneous(m)) throw std::domain_error("harmonic_decompose: polynomial is not homogeneous of the given degree");
  const int n = p.dim();
  std::vector<MultiPoly> layers;
  MultiPoly rest = p;
  for (int d = m; d >= 0; d -= 2) {
    if (d < 2) {
      layers.push_back(rest);
      break;
    }
    const double scale = std::max(rest.max_abs_coeff(), 1e-300);
    const MultiPoly q = solve_layer(rest.laplacian(), n, d - 2).pruned(1e-15 * scale);
    layers.push_back((rest - q.multiply_by_radius_squared()).pruned(1e-15 * scale));
    rest = q;
  }
  return layers;
}

namespace {

[[noreturn]] void parse_error(const std::string& text, std::size_t pos, const std::string& what) {
  std::ostringstream os;
  os << "parse_poly: " << what << " at position " << pos << " in \"" << text << "\"";
  throw std::invalid_argument(os.str());
}

}  // namespace

MultiPoly parse_poly(const std::string& text, int n) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) parse_error(text, 0, "empty input");

  MultiPoly p(n);
  std::size_t i = 0;
  while (i < s.size()) {
    double sign = 1.0;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1.0 : 1.0;
      ++i;
    } else if (i != 0) {
      parse_error(text, i, "expected '+' or '-'");
    }
    double coeff = sign;
    MultiIndex e(n, 0);
    bool any = false;
    while (true) {
      if (i >= s.size()) parse_error(text, i, "missing factor");
      if (s[i] == 'x') {
        ++i;
        char* end = nullptr;
        const long var = std::strtol(s.c_str() + i, &end, 10);
        if (end == s.c_str() + i) parse_error(text, i, "missing variable index");
        if (var < 1 || var > n) parse_error(text, i, "variable index out of range");
        i = static_cast<std::size_t>(end - s.c_str());
        long pow = 1;
        if (i < s.size() && s[i] == '^') {
          ++i;
          pow = std::strtol(s.c_str() + i, &end, 10);
          if (end == s.c_str() + i || pow < 0) parse_error(text, i, "bad exponent");
          i = static_cast<std::size_t>(end - s.c_str());
        }
        e[var - 1] += static_cast<int>(pow);
      } else {
        char* end = nullptr;
        const double c = std::strtod(s.c_str() + i, &end);
        if (end == s.c_str() + i) parse_error(text, i, "expected number or variable");
        coeff *= c;
        i = static_cast<std::size_t>(end - s.c_str());
      }
      any = true;
      if (i < s.size() && s[i] == '*') {
        ++i;
        continue;
      }
      break;
    }
    if (!any) parse_error(text, i, "empty term");
    p.add_term(e, coeff);
  }
  return p;
}

std::string format_poly(const MultiPoly& p) {
  if (p.is_zero()) return "0";
  std::string out;
  char buf[64];
  // descending degree, then lexicographic descending exponents
  std::vector<std::pair<MultiIndex, double>> terms(p.terms().rbegin(), p.terms().rend());
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return degree(a.first) > degree(b.first); });
  for (const auto& [s, c] : terms) {
    const double mag = std::abs(c);
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::snprintf(buf, sizeof buf, "%.17g", mag);
    std::string term = buf;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == 0) continue;
      term += "*x" + std::to_string(i + 1);
      if (s[i] > 1) term += "^" + std::to_string(s[i]);
    }
    out += term;
  }
  return out;
}

}  // namespace hfock
