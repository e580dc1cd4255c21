#pragma once

#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace hfock {

/// A vector in ℝⁿ.
using Point = std::vector<double>;

inline double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

inline double norm_sq(std::span<const double> x) { return dot(x, x); }
inline double norm(std::span<const double> x) { return std::sqrt(norm_sq(x)); }

inline Point scaled(std::span<const double> x, double s) {
  Point r(x.begin(), x.end());
  for (double& v : r) v *= s;
  return r;
}

/// A point on S^{n−1}; construction checks |ξ| = 1 to 1e−12.
class UnitVector {
 public:
  explicit UnitVector(Point coords) : coords_(std::move(coords)) {
    if (coords_.empty() || std::abs(norm(coords_) - 1.0) > 1e-12)
      throw std::invalid_argument("UnitVector: coordinates are not of unit length");
  }

  /// x/|x| for nonzero x.
  static UnitVector normalize(std::span<const double> x) {
    const double r = norm(x);
    if (!(r > 0.0)) throw std::invalid_argument("UnitVector: cannot normalize the zero vector");
    Point c = scaled(x, 1.0 / r);
    const double fix = norm(c);  // absorb the last ulp of rounding
    for (double& v : c) v /= fix;
    return UnitVector(std::move(c));
  }

  const Point& coords() const noexcept { return coords_; }
  std::size_t dim() const noexcept { return coords_.size(); }
  operator std::span<const double>() const noexcept { return coords_; }

 private:
  Point coords_;
};

}  // namespace hfock
