#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <cmath>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace mgap {

using Rational = mpq_class;

// Parses "p", "p/q", or a plain decimal such as "-1.25e3" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);
// Exact value of a finite double.
Rational rational_from_double(double v);
// Shortest decimal that round-trips to v, read back as a rational.
Rational rational_from_decimal(double v);

// Element of Q(sqrt d): a + b*sqrt(d) with rational a, b and a square-free
// positive integer d (d = 0 when b = 0). Arithmetic between elements of
// two different quadratic fields throws.
class Surd {
 public:
  Surd() = default;
  Surd(int v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  Surd(long v) : a_(v) {}  // NOLINT(google-explicit-constructor)
  Surd(const Rational& q) : a_(q) {}  // NOLINT(google-explicit-constructor)
  Surd(Rational a, Rational b, Rational d);

  // sqrt(q) for q >= 0; rational when q is a perfect square.
  static Surd sqrt_of(const Rational& q);

  const Rational& rational_part() const { return a_; }
  const Rational& surd_coefficient() const { return b_; }
  const Rational& radicand() const { return d_; }
  bool is_rational() const { return sgn(b_) == 0; }
  // Throws if irrational.
  const Rational& as_rational() const;

  int sign() const;
  bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }
  double to_double() const;
  std::string str() const;

  Surd conjugate() const { return Surd(a_, -b_, d_); }

  Surd& operator+=(const Surd& o);
  Surd& operator-=(const Surd& o);
  Surd& operator*=(const Surd& o);
  Surd& operator/=(const Surd& o);
  Surd operator-() const { return Surd(-a_, -b_, d_); }

  friend Surd operator+(Surd x, const Surd& y) { return x += y; }
  friend Surd operator-(Surd x, const Surd& y) { return x -= y; }
  friend Surd operator*(Surd x, const Surd& y) { return x *= y; }
  friend Surd operator/(Surd x, const Surd& y) { return x /= y; }

  friend bool operator==(const Surd& x, const Surd& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (sgn(x.b_) == 0 || x.d_ == y.d_);
  }
  friend bool operator!=(const Surd& x, const Surd& y) { return !(x == y); }
  friend bool operator<(const Surd& x, const Surd& y) { return (x - y).sign() < 0; }
  friend bool operator>(const Surd& x, const Surd& y) { return y < x; }
  friend bool operator<=(const Surd& x, const Surd& y) { return !(y < x); }
  friend bool operator>=(const Surd& x, const Surd& y) { return !(x < y); }

 private:
  // Brings o into this element's field (or adopts o's field when this is rational).
  Rational aligned_coefficient(const Surd& o);
  void normalize();

  Rational a_{0};
  Rational b_{0};
  Rational d_{0};
};

std::ostream& operator<<(std::ostream& os, const Surd& s);

Surd abs(const Surd& s);
Surd sqrt(const Surd& s);  // radicand must be rational
inline Surd conj(const Surd& s) { return s; }
inline Surd real(const Surd& s) { return s; }
inline Surd imag(const Surd&) { return Surd(0); }
inline Surd abs2(const Surd& s) { return s * s; }

struct Tolerance {
  double eps_psd = 1e-9;
  double eps_rank = 1e-9;
};

enum class Arithmetic { Exact, Float };

// Per-scalar policy used by every templated algorithm.
template <class T>
struct Field;

template <>
struct Field<double> {
  static constexpr bool exact = false;
  // Sign with |v| <= eps * scale treated as zero.
  static int sign(double v, double eps, double scale) {
    if (std::abs(v) <= eps * scale) return 0;
    return v > 0 ? 1 : -1;
  }
  static double sqrt(double v) { return std::sqrt(v > 0 ? v : 0.0); }
  static double to_double(double v) { return v; }
  static double magnitude(double v) { return std::abs(v); }
  static double from_rational(const Rational& q) { return mgap::to_double(q); }
};

template <>
struct Field<Surd> {
  static constexpr bool exact = true;
  static int sign(const Surd& v, double, double) { return v.sign(); }
  static Surd sqrt(const Surd& v) { return mgap::sqrt(v); }
  static double to_double(const Surd& v) { return v.to_double(); }
  static double magnitude(const Surd& v) { return std::abs(v.to_double()); }
  static Surd from_rational(const Rational& q) { return Surd(q); }
};

}  // namespace mgap

namespace Eigen {
template <>
struct NumTraits<mgap::Surd> : GenericNumTraits<mgap::Surd> {
  using Real = mgap::Surd;
  using NonInteger = mgap::Surd;
  using Nested = mgap::Surd;
  using Literal = mgap::Surd;
  enum {
    IsInteger = 0,
    IsSigned = 1,
    IsComplex = 0,
    RequireInitialization = 1,
    ReadCost = 10,
    AddCost = 50,
    MulCost = 100
  };
  static inline Real epsilon() { return Real(0); }
  static inline Real dummy_precision() { return Real(0); }
  static inline int digits10() { return 0; }
  static inline Real highest() { return Real(0); }
  static inline Real lowest() { return Real(0); }
};
}  // namespace Eigen
