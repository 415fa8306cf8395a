#pragma once

#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "finite_sos/linalg.hpp"

namespace finite_sos {

using Float50 = boost::multiprecision::cpp_bin_float_50;

/// Homogeneous linear matrix inequalities F_j(y) = sum_a y_a F_{j,a} >= t D_j
/// with symmetric rational data and positive definite references D_j.
struct LmiProblem {
    struct Block {
        std::string name;
        std::vector<RatMatrix> coeffs;  // one symmetric matrix per variable
        RatMatrix reference;            // D_j
    };
    std::size_t num_vars = 0;
    std::vector<Block> blocks;
};

struct LmiOptions {
    int max_newton = 4000;
    /// Stop once t > 0 and the barrier gap bound is below `gap_fraction * t`.
    double gap_fraction = 0.5;
};

template <class Scalar>
struct LmiResult {
    bool success = false;
    std::vector<Scalar> y;
    Scalar margin = 0;       // t at the returned point, trace-normalized scale
    Scalar upper_bound = 0;  // t + barrier gap bound
    int newton_steps = 0;
    std::string message;
};

/// Maximizes t subject to F_j(y) >= t D_j, sum_j tr(D_j^{-1} F_j(y)) = sum_j dim_j,
/// and y orthogonal to the kernel of y -> (F_j(y))_j, by a damped-Newton
/// log-barrier path. `success` means a point with t > 0 was reached.
template <class Scalar>
LmiResult<Scalar> maximize_lmi_margin(const LmiProblem& prob, const LmiOptions& opts = {});

template <class Scalar>
Scalar rational_to_scalar(const Rational& q);

extern template LmiResult<double> maximize_lmi_margin<double>(const LmiProblem&, const LmiOptions&);
extern template LmiResult<Float50> maximize_lmi_margin<Float50>(const LmiProblem&, const LmiOptions&);

}  // namespace finite_sos
