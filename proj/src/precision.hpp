#pragma once

#include <boost/multiprecision/mpfr.hpp>
#include <vector>

#include "momentgaps/scalar.hpp"

namespace mgap::detail {

using HighPrec =
    boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<120>, boost::multiprecision::et_off>;

HighPrec to_high(const Rational& q);
HighPrec to_high(const Surd& s);
inline HighPrec to_high(double v) { return HighPrec(v); }

// Real roots of x^r + c[r-1] x^(r-1) + ... + c[0], which must all be real and
// simple. Throws NumericalRootFailure otherwise.
std::vector<HighPrec> real_roots(const std::vector<HighPrec>& c, double imag_tol);

// Best rational approximation found along the continued fraction of x.
Rational nearest_simple_rational(const HighPrec& x);

// Solution of the Vandermonde system sum_j w_j x_j^i = rhs_i, i < n.
std::vector<HighPrec> vandermonde_solve(const std::vector<HighPrec>& x, const std::vector<HighPrec>& rhs);

}  // namespace mgap::detail
