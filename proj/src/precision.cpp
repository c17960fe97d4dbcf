#include "precision.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>

#include "momentgaps/common.hpp"

namespace mgap::detail {

namespace {

struct Complex {
  HighPrec re, im;
};

Complex operator+(const Complex& a, const Complex& b) { return {a.re + b.re, a.im + b.im}; }
Complex operator-(const Complex& a, const Complex& b) { return {a.re - b.re, a.im - b.im}; }
Complex operator*(const Complex& a, const Complex& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
Complex operator/(const Complex& a, const Complex& b) {
  const HighPrec n = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
}
HighPrec magnitude(const Complex& a) { return sqrt(a.re * a.re + a.im * a.im); }

// p(z) and p'(z) for the monic polynomial with low coefficients c.
void horner(const std::vector<HighPrec>& c, const Complex& z, Complex& p, Complex& dp) {
  p = {HighPrec(1), HighPrec(0)};
  dp = {HighPrec(0), HighPrec(0)};
  for (std::size_t i = c.size(); i-- > 0;) {
    dp = dp * z + p;
    p = p * z + Complex{c[i], HighPrec(0)};
  }
}

}  // namespace

HighPrec to_high(const Rational& q) {
  HighPrec out;
  mpfr_set_q(out.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return out;
}

HighPrec to_high(const Surd& s) {
  HighPrec out = to_high(s.rational_part());
  if (!s.is_rational()) out += to_high(s.surd_coefficient()) * sqrt(to_high(s.radicand()));
  return out;
}

std::vector<HighPrec> real_roots(const std::vector<HighPrec>& c, double imag_tol) {
  const std::size_t r = c.size();
  if (r == 0) return {};
  if (r == 1) return {HighPrec(-c[0])};

  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Index>(r), static_cast<Index>(r));
  for (std::size_t i = 1; i < r; ++i) companion(static_cast<Index>(i), static_cast<Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < r; ++i)
    companion(static_cast<Index>(i), static_cast<Index>(r - 1)) = -static_cast<double>(c[i]);
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::NumericalRootFailure, "companion eigenvalues did not converge");

  std::vector<Complex> z(r);
  for (std::size_t i = 0; i < r; ++i) {
    const std::complex<double> e = es.eigenvalues()(static_cast<Index>(i));
    // nudge off the real axis so coincident guesses separate
    const double nudge = 1e-3 * (1.0 + std::abs(e)) * ((i % 2 == 0) ? 1.0 : -1.0) * (1.0 + 0.1 * static_cast<double>(i));
    z[i] = {HighPrec(e.real()), HighPrec(e.imag() + nudge)};
  }

  const HighPrec stop("1e-100");
  bool converged = false;
  HighPrec worst(1);
  for (int iter = 0; iter < 2000 && !converged; ++iter) {
    worst = 0;
    for (std::size_t i = 0; i < r; ++i) {
      Complex p, dp;
      horner(c, z[i], p, dp);
      if (p.re == 0 && p.im == 0) continue;
      const Complex ratio = p / dp;
      Complex sum{HighPrec(0), HighPrec(0)};
      for (std::size_t j = 0; j < r; ++j)
        if (j != i) sum = sum + Complex{HighPrec(1), HighPrec(0)} / (z[i] - z[j]);
      const Complex step = ratio / (Complex{HighPrec(1), HighPrec(0)} - ratio * sum);
      z[i] = z[i] - step;
      worst = std::max(worst, HighPrec(magnitude(step) / (1 + magnitude(z[i]))));
    }
    converged = worst < stop;
  }
  // ill-conditioned roots stall at the working-precision noise floor
  if (!converged && worst > HighPrec("1e-50")) throw Error(ErrorCode::NumericalRootFailure, "root iteration did not converge");

  std::vector<HighPrec> roots;
  for (const Complex& w : z) {
    if (abs(w.im) > imag_tol * (1 + abs(w.re)))
      throw Error(ErrorCode::NumericalRootFailure,
                  "generating polynomial has a non-real root (imaginary part " + w.im.str(6) + ")");
    roots.push_back(w.re);
  }
  std::sort(roots.begin(), roots.end());
  for (std::size_t i = 1; i < r; ++i)
    if (roots[i] - roots[i - 1] <= imag_tol * (1 + abs(roots[i])))
      throw Error(ErrorCode::NumericalRootFailure, "generating polynomial has a repeated root");
  return roots;
}

Rational nearest_simple_rational(const HighPrec& x) {
  // convergents: (h1/k1) latest, (h2/k2) the one before
  mpz_class h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  HighPrec rest = x;
  const HighPrec tiny("1e-90");
  const mpz_class limit("1000000000000000000000000000000");
  Rational best(0);
  for (int i = 0; i < 200; ++i) {
    const HighPrec a_hp = floor(rest);
    mpz_class a;
    mpfr_get_z(a.get_mpz_t(), a_hp.backend().data(), MPFR_RNDD);
    const mpz_class h = a * h1 + h2;
    const mpz_class k = a * k1 + k2;
    if (abs(k) > limit) break;
    h2 = h1;
    k2 = k1;
    h1 = h;
    k1 = k;
    best = Rational(h1, k1);
    best.canonicalize();
    const HighPrec frac = rest - a_hp;
    if (abs(frac) < tiny) break;
    rest = 1 / frac;
  }
  return best;
}

std::vector<HighPrec> vandermonde_solve(const std::vector<HighPrec>& x, const std::vector<HighPrec>& rhs) {
  const std::size_t n = x.size();
  std::vector<std::vector<HighPrec>> m(n, std::vector<HighPrec>(n + 1));
  for (std::size_t j = 0; j < n; ++j) {
    HighPrec p(1);
    for (std::size_t i = 0; i < n; ++i) {
      m[i][j] = p;
      p *= x[j];
    }
  }
  for (std::size_t i = 0; i < n; ++i) m[i][n] = rhs[i];
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t i = col + 1; i < n; ++i)
      if (abs(m[i][col]) > abs(m[piv][col])) piv = i;
    std::swap(m[piv], m[col]);
    if (m[col][col] == 0) throw Error(ErrorCode::NumericalRootFailure, "singular Vandermonde system");
    for (std::size_t i = col + 1; i < n; ++i) {
      const HighPrec f = m[i][col] / m[col][col];
      for (std::size_t j = col; j <= n; ++j) m[i][j] -= f * m[col][j];
    }
  }
  std::vector<HighPrec> w(n);
  for (std::size_t i = n; i-- > 0;) {
    HighPrec acc = m[i][n];
    for (std::size_t j = i + 1; j < n; ++j) acc -= m[i][j] * w[j];
    w[i] = acc / m[i][i];
  }
  return w;
}

}  // namespace mgap::detail
