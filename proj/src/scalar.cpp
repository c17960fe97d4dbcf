#include "momentgaps/scalar.hpp"

#include <charconv>
#include <cctype>
#include <ostream>

namespace mgap {

namespace {

bool perfect_square(const mpz_class& n) { return mpz_perfect_square_p(n.get_mpz_t()) != 0; }

mpz_class isqrt(const mpz_class& n) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
  return r;
}

// n = s^2 * m with small square factors of m removed.
void split_square(const mpz_class& n, mpz_class& s, mpz_class& m) {
  s = 1;
  m = n;
  if (perfect_square(m)) {
    s = isqrt(m);
    m = 1;
    return;
  }
  for (unsigned long p = 2; p < 2000; ++p) {
    const mpz_class p2 = p * p;
    if (p2 > m) break;
    while (mpz_divisible_p(m.get_mpz_t(), p2.get_mpz_t()) != 0) {
      m /= p2;
      s *= p;
    }
  }
  if (perfect_square(m)) {
    s *= isqrt(m);
    m = 1;
  }
}

bool is_rational_square(const Rational& q) {
  return sgn(q) >= 0 && perfect_square(q.get_num()) && perfect_square(q.get_den());
}

}  // namespace

Rational parse_rational(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  if (text.empty()) throw std::invalid_argument("empty number");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    Rational num = parse_rational(text.substr(0, slash));
    Rational den = parse_rational(text.substr(slash + 1));
    if (sgn(den) == 0) throw std::invalid_argument("zero denominator in '" + raw + "'");
    Rational q = num / den;
    q.canonicalize();
    return q;
  }
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') negative = text[i++] == '-';
  mpz_class digits = 0;
  long exponent = 0;
  bool any_digit = false;
  bool seen_point = false;
  for (; i < text.size(); ++i) {
    const char c = text[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits = digits * 10 + (c - '0');
      any_digit = true;
      if (seen_point) --exponent;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw std::invalid_argument("not a number: '" + raw + "'");
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') throw std::invalid_argument("not a number: '" + raw + "'");
    long e = 0;
    const char* first = text.data() + i + 1;
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e);
    if (ec != std::errc() || ptr != last) throw std::invalid_argument("bad exponent in '" + raw + "'");
    exponent += e;
  }
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  Rational q = exponent >= 0 ? Rational(digits * scale) : Rational(digits, scale);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

double to_double(const Rational& q) { return q.get_d(); }

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  return Rational(v);
}

Rational rational_from_decimal(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite value");
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return parse_rational(std::string(buf, ptr));
}

Surd::Surd(Rational a, Rational b, Rational d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {
  normalize();
}

void Surd::normalize() {
  if (sgn(b_) == 0) {
    d_ = 0;
    return;
  }
  if (sgn(d_) < 0) throw std::domain_error("negative radicand");
  if (is_rational_square(d_)) {
    a_ += b_ * Rational(isqrt(d_.get_num()), isqrt(d_.get_den()));
    b_ = 0;
    d_ = 0;
    return;
  }
  if (d_.get_den() != 1 || sgn(d_) == 0) {
    // sqrt(p/q) = sqrt(p q) / q
    mpz_class s, m;
    split_square(d_.get_num() * d_.get_den(), s, m);
    b_ *= Rational(s, d_.get_den());
    b_.canonicalize();
    d_ = m;
  } else {
    mpz_class s, m;
    split_square(d_.get_num(), s, m);
    b_ *= s;
    d_ = m;
  }
}

Surd Surd::sqrt_of(const Rational& q) {
  if (sgn(q) < 0) throw std::domain_error("square root of a negative number");
  if (is_rational_square(q)) return Surd(Rational(isqrt(q.get_num()), isqrt(q.get_den())));
  return Surd(Rational(0), Rational(1), q);
}

const Rational& Surd::as_rational() const {
  if (!is_rational()) throw std::domain_error("irrational value " + str() + " where a rational is required");
  return a_;
}

Rational Surd::aligned_coefficient(const Surd& o) {
  if (o.is_rational()) return Rational(0);
  if (is_rational()) {
    d_ = o.d_;
    return o.b_;
  }
  if (d_ == o.d_) return o.b_;
  const mpz_class prod = d_.get_num() * o.d_.get_num();
  if (perfect_square(prod)) {
    // sqrt(d2) = sqrt(d1 d2) / d1 * sqrt(d1)
    Rational c = o.b_ * Rational(isqrt(prod)) / d_;
    c.canonicalize();
    return c;
  }
  throw std::domain_error("values from two different quadratic fields: " + str() + " and " + o.str());
}

Surd& Surd::operator+=(const Surd& o) {
  const Rational c = aligned_coefficient(o);
  a_ += o.a_;
  b_ += c;
  if (sgn(b_) == 0) d_ = 0;
  return *this;
}

Surd& Surd::operator-=(const Surd& o) {
  const Rational c = aligned_coefficient(o);
  a_ -= o.a_;
  b_ -= c;
  if (sgn(b_) == 0) d_ = 0;
  return *this;
}

Surd& Surd::operator*=(const Surd& o) {
  if (o.is_rational()) {
    a_ *= o.a_;
    b_ *= o.a_;
    if (sgn(b_) == 0) d_ = 0;
    return *this;
  }
  const Rational c = aligned_coefficient(o);
  Rational na = a_ * o.a_ + b_ * c * d_;
  Rational nb = a_ * c + b_ * o.a_;
  a_ = std::move(na);
  b_ = std::move(nb);
  if (sgn(b_) == 0) d_ = 0;
  return *this;
}

Surd& Surd::operator/=(const Surd& o) {
  if (o.is_zero()) throw std::domain_error("division by zero");
  if (o.is_rational()) {
    a_ /= o.a_;
    b_ /= o.a_;
    return *this;
  }
  const Rational norm = o.a_ * o.a_ - o.b_ * o.b_ * o.d_;
  *this *= o.conjugate();
  a_ /= norm;
  b_ /= norm;
  return *this;
}

int Surd::sign() const {
  const int sa = sgn(a_);
  const int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0 || sa == sb) return sb;
  const Rational lhs = a_ * a_;
  const Rational rhs = b_ * b_ * d_;
  const int c = cmp(lhs, rhs);
  return c > 0 ? sa : (c < 0 ? sb : 0);
}

double Surd::to_double() const {
  if (is_rational()) return a_.get_d();
  constexpr mp_bitcnt_t prec = 256;
  mpf_class a(a_, prec), b(b_, prec), d(d_, prec);
  mpf_class v(0, prec);
  v = a + b * ::sqrt(d);
  return v.get_d();
}

std::string Surd::str() const {
  if (is_rational()) return a_.get_str();
  std::string s;
  if (sgn(a_) != 0) s = a_.get_str() + (sgn(b_) > 0 ? " + " : " - ");
  else if (sgn(b_) < 0) s = "-";
  s += Rational(abs(b_)).get_str() + "*sqrt(" + d_.get_str() + ")";
  return s;
}

std::ostream& operator<<(std::ostream& os, const Surd& s) { return os << s.str(); }

Surd abs(const Surd& s) { return s.sign() < 0 ? -s : s; }

Surd sqrt(const Surd& s) {
  if (s.is_zero()) return Surd(0);
  if (!s.is_rational()) throw std::domain_error("nested square root of " + s.str());
  return Surd::sqrt_of(s.rational_part());
}

}  // namespace mgap
