#pragma once

// 113-bit mantissa arithmetic for series that cancel catastrophically in
// double. Only the four field operations are used, so no libquadmath calls.

namespace hfock::detail {

using extended = __float128;

template <class Real>
inline Real abs_value(Real x) {
  return x < Real(0) ? -x : x;
}

/// Minimal complex type usable with both double and extended.
template <class Real>
struct Complex {
  Real re{0};
  Real im{0};

  friend Complex operator+(Complex a, Complex b) { return {a.re + b.re, a.im + b.im}; }
  friend Complex operator-(Complex a, Complex b) { return {a.re - b.re, a.im - b.im}; }
  friend Complex operator*(Complex a, Complex b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend Complex operator*(Complex a, Real s) { return {a.re * s, a.im * s}; }
  Complex& operator+=(Complex b) {
    re += b.re;
    im += b.im;
    return *this;
  }
  /// |re| + |im|, cheap magnitude for convergence tests
  Real l1() const { return abs_value(re) + abs_value(im); }
};

}  // namespace hfock::detail
