#ifndef BETHE_QUAD_COMPLEX_HPP
#define BETHE_QUAD_COMPLEX_HPP

#include <quadmath.h>

#include <cmath>
#include <complex>

namespace bethe::detail {

// Minimal __float128 complex type for the extended-precision spectral path.
// The deep left tail of the windowed distributions cancels through ~40
// decimal digits, which double and long double cannot carry.
struct QComplex {
  __float128 re = 0;
  __float128 im = 0;

  QComplex() = default;
  QComplex(__float128 r) : re(r) {}
  QComplex(__float128 r, __float128 i) : re(r), im(i) {}
  explicit QComplex(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}
};

inline QComplex operator+(const QComplex& a, const QComplex& b) {
  return {a.re + b.re, a.im + b.im};
}
inline QComplex operator-(const QComplex& a, const QComplex& b) {
  return {a.re - b.re, a.im - b.im};
}
inline QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
inline QComplex operator*(const QComplex& a, const QComplex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline QComplex operator*(__float128 s, const QComplex& a) {
  return {s * a.re, s * a.im};
}
inline QComplex operator*(const QComplex& a, __float128 s) { return s * a; }
inline QComplex operator/(const QComplex& a, const QComplex& b) {
  const __float128 d = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
inline QComplex operator/(__float128 s, const QComplex& b) {
  return QComplex{s, 0} / b;
}
inline QComplex operator+(__float128 s, const QComplex& a) {
  return {s + a.re, a.im};
}
inline QComplex operator+(const QComplex& a, __float128 s) { return s + a; }
inline QComplex operator-(const QComplex& a, __float128 s) {
  return {a.re - s, a.im};
}
inline QComplex operator-(__float128 s, const QComplex& a) {
  return {s - a.re, -a.im};
}
inline QComplex& operator+=(QComplex& a, const QComplex& b) {
  a.re += b.re;
  a.im += b.im;
  return a;
}

inline QComplex qpolar(__float128 mag, __float128 ang) {
  return {mag * cosq(ang), mag * sinq(ang)};
}
inline QComplex qexp(const QComplex& z) {
  const __float128 m = expq(z.re);
  return {m * cosq(z.im), m * sinq(z.im)};
}
inline double qabs(const QComplex& z) {
  return std::hypot(static_cast<double>(z.re), static_cast<double>(z.im));
}
inline std::complex<double> to_double(const QComplex& z) {
  return {static_cast<double>(z.re), static_cast<double>(z.im)};
}

}  // namespace bethe::detail

#endif  // BETHE_QUAD_COMPLEX_HPP
