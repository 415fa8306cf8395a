#pragma once

#include <string>

namespace finite_sos {

namespace detail {

/// Integer part of a scalar as an mpz, going through a decimal string so that
/// values beyond the range of long survive.
template <class Scalar>
Integer floor_to_integer(const Scalar& x) {
    using std::floor;
    Scalar f = floor(x);
    if constexpr (std::is_floating_point_v<Scalar>) {
        Integer out;
        mpz_set_d(out.get_mpz_t(), static_cast<double>(f));
        return out;
    } else {
        std::string s = f.str(0, std::ios_base::fixed);
        auto dot = s.find('.');
        if (dot != std::string::npos) s.resize(dot);
        return Integer(s);
    }
}

template <class Scalar>
Scalar integer_to_scalar(const Integer& z) {
    if constexpr (std::is_floating_point_v<Scalar>) {
        return static_cast<Scalar>(z.get_d());
    } else {
        return Scalar(z.get_str());
    }
}

}  // namespace detail

template <class Scalar>
Rational best_rational_of(const Scalar& x, const Integer& den_bound) {
    // Convergents p_k/q_k with semiconvergent at the bound.
    Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    Scalar r = x;
    for (int iter = 0; iter < 200; ++iter) {
        Integer a = detail::floor_to_integer(r);
        Integer q2 = a * q1 + q0;
        if (q2 > den_bound) {
            // largest semiconvergent within the bound
            Integer t = (den_bound - q0) / q1;
            Integer ps = t * p1 + p0, qs = t * q1 + q0;
            Rational cand_semi(ps, qs), cand_conv(p1, q1);
            cand_semi.canonicalize();
            cand_conv.canonicalize();
            if (t == 0) return cand_conv;
            Scalar es = x - detail::integer_to_scalar<Scalar>(ps) / detail::integer_to_scalar<Scalar>(qs);
            Scalar ec = x - detail::integer_to_scalar<Scalar>(p1) / detail::integer_to_scalar<Scalar>(q1);
            using std::abs;
            return abs(es) < abs(ec) ? cand_semi : cand_conv;
        }
        Integer p2 = a * p1 + p0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        Scalar frac = r - detail::integer_to_scalar<Scalar>(a);
        if (frac == Scalar(0)) break;
        r = Scalar(1) / frac;
        // stop once the convergent reproduces x to working precision
        Scalar approx = detail::integer_to_scalar<Scalar>(p1) / detail::integer_to_scalar<Scalar>(q1);
        if (approx == x) break;
    }
    Rational out(p1, q1);
    out.canonicalize();
    return out;
}

}  // namespace finite_sos
