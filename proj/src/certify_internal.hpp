#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finite_sos/certify.hpp"
#include "finite_sos/lmi.hpp"

namespace finite_sos::detail {

/// Nullspace of the rows v^T, v in `vectors`; identity when there are none.
RatMatrix face_basis(const std::vector<RatVector>& vectors, std::size_t dim);

/// N G' N^T.
RatMatrix congruence(const RatMatrix& n, const RatMatrix& g);

struct PrimalOutcome {
    std::optional<ExactCertificate> cert;
    SdpStatus last_status = SdpStatus::Undetermined;
    double last_min_eigenvalue = 0;
    std::string note;
};

/// Tries descending floors on the blocks without a fixed floor, rounding each
/// numerically feasible point with escalating denominator bounds.
PrimalOutcome search_primal(SdpProblem prob, const std::vector<std::optional<Rational>>& fixed_floors,
                            const SearchOptions& opts);

/// Exact check of weights y for an LMI problem: finds a rational eps > 0 with
/// F_j(y) - eps * scale * D_j >= 0 for all j, halving from `start`.
std::optional<Rational> exact_margin(const LmiProblem& prob, const std::vector<Rational>& y, const Rational& scale,
                                     Rational start, int halvings);

/// Block value F_j(y).
RatMatrix lmi_block(const LmiProblem::Block& b, const std::vector<Rational>& y);

/// Rounds solver weights and verifies them; returns weights and the exact margin.
template <class Scalar>
std::optional<std::pair<std::vector<Rational>, Rational>> round_lmi_weights(
    const LmiProblem& prob, const std::vector<Scalar>& y, const std::vector<Rational>& tv_weights,
    const Integer& den_start, const Integer& den_max, int halvings);

}  // namespace finite_sos::detail
