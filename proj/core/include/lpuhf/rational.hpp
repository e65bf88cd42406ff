#pragma once

// Exact complex rationals usable as an Eigen scalar.

#include <Eigen/Core>
#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <ostream>
#include <string>

namespace lpuhf {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

/// Complex number with exact rational real and imaginary parts.
struct QComplex {
  Rational re;
  Rational im;

  QComplex() = default;
  QComplex(int v) : re(v) {}
  QComplex(long long v) : re(v) {}
  QComplex(Rational r) : re(std::move(r)) {}
  QComplex(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

  static QComplex ratio(long long num, long long den) { return QComplex(Rational(num) / Rational(den)); }

  bool is_zero() const { return re == 0 && im == 0; }
  QComplex conj() const { return {re, -im}; }
  Rational norm_squared() const { return re * re + im * im; }
  std::complex<double> to_complex() const {
    return {static_cast<double>(re), static_cast<double>(im)};
  }

  QComplex& operator+=(const QComplex& o) {
    re += o.re;
    im += o.im;
    return *this;
  }
  QComplex& operator-=(const QComplex& o) {
    re -= o.re;
    im -= o.im;
    return *this;
  }
  QComplex& operator*=(const QComplex& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = std::move(r);
    return *this;
  }
  QComplex& operator/=(const QComplex& o) {
    Rational den = o.norm_squared();
    Rational r = (re * o.re + im * o.im) / den;
    im = (im * o.re - re * o.im) / den;
    re = std::move(r);
    return *this;
  }

  friend QComplex operator+(QComplex a, const QComplex& b) { return a += b; }
  friend QComplex operator-(QComplex a, const QComplex& b) { return a -= b; }
  friend QComplex operator*(QComplex a, const QComplex& b) { return a *= b; }
  friend QComplex operator/(QComplex a, const QComplex& b) { return a /= b; }
  friend QComplex operator-(const QComplex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const QComplex& a, const QComplex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const QComplex& a, const QComplex& b) { return !(a == b); }

  friend std::ostream& operator<<(std::ostream& os, const QComplex& z) {
    os << z.re;
    if (z.im != 0) os << (z.im > 0 ? "+" : "") << z.im << "i";
    return os;
  }
};

}  // namespace lpuhf

namespace Eigen {
template <>
struct NumTraits<lpuhf::QComplex> : GenericNumTraits<lpuhf::QComplex> {
  using Real = lpuhf::QComplex;
  using NonInteger = lpuhf::QComplex;
  using Literal = lpuhf::QComplex;
  using Nested = lpuhf::QComplex;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 16,
    MulCost = 32
  };
};
}  // namespace Eigen

namespace lpuhf {

using QMatrix = Eigen::Matrix<QComplex, Eigen::Dynamic, Eigen::Dynamic>;

/// Entrywise conversion of an exact matrix to double precision.
Eigen::MatrixXcd to_double(const QMatrix& m);

/// Exact equality of two rational matrices (shape and every entry).
bool exactly_equal(const QMatrix& a, const QMatrix& b);

}  // namespace lpuhf
