#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

namespace finite_sos {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "a", "-a" or "a/b" (b > 0 after normalization). Throws Error{Parse}.
Rational parse_rational(std::string_view text);

/// "a" when the denominator is 1, otherwise "a/b".
std::string to_string(const Rational& q);

Integer binomial(long n, long k);

/// Best rational approximation of `x` with denominator at most `den_bound`
/// (continued-fraction convergents and semiconvergents).
Rational best_rational(double x, const Integer& den_bound);

/// Same, for extended-precision scalars; `Scalar` needs floor, comparisons and
/// conversion from long.
template <class Scalar>
Rational best_rational_of(const Scalar& x, const Integer& den_bound);

/// Exact rational value of a finite double.
Rational exact_rational(double x);

inline double to_double(const Rational& q) { return q.get_d(); }

inline int sign(const Rational& q) { return sgn(q); }

}  // namespace finite_sos

#include "finite_sos/detail/best_rational.ipp"
