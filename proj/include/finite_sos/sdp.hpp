#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "finite_sos/linalg.hpp"
#include "finite_sos/rational.hpp"

namespace finite_sos {

/// Coefficient of X_block[row][col] with row <= col. A constraint reads
/// sum coeff * X[row][col] = rhs, so an off-diagonal entry of a symmetric
/// quadratic form w^T X w contributes 2 w_row w_col.
struct SdpEntry {
    std::size_t block = 0;
    std::size_t row = 0;
    std::size_t col = 0;
    Rational coeff;
};

struct SdpConstraint {
    std::vector<SdpEntry> terms;
    Rational rhs;
};

struct SdpBlock {
    std::string name;
    std::size_t dim = 0;
    /// Minimum eigenvalue asked of the block; nullopt means plain X >= 0.
    std::optional<Rational> floor;
};

struct SdpProblem {
    std::vector<SdpBlock> blocks;
    std::vector<SdpConstraint> constraints;

    std::size_t add_block(std::string name, std::size_t dim, std::optional<Rational> floor = std::nullopt);
    /// Adds the linear form w^T X_block w (scaled by `scale`) to `c`.
    static void add_quadratic_form(SdpConstraint& c, std::size_t block, const RatVector& w, const Rational& scale = 1);
    /// Throws InvalidProblem for empty blocks or out-of-range entries.
    void validate() const;
    std::string to_json() const;
};

enum class SdpStatus { Feasible, Infeasible, Undetermined };

const char* to_string(SdpStatus s);

struct SdpSolution {
    std::vector<Eigen::MatrixXd> block_matrices;
    double max_constraint_residual = 0;
    double min_block_eigenvalue = 0;
    long iterations = 0;
    SdpStatus status = SdpStatus::Undetermined;
};

struct ExactCertificate {
    std::vector<RatMatrix> block_matrices;
    bool verified = false;
    bool floors_met = false;  // X - floor*I >= 0 exactly for every block with a floor
    std::string note;
};

struct FeasibilityOptions {
    double tol = 1e-9;
    long max_iter = 200000;
    std::uint64_t seed = 0;
};

/// Alternating projections between the affine constraint set and the
/// (floored) PSD cone. Infeasible is returned only for exactly inconsistent
/// constraints or when the constraints pin down a single non-PSD point.
SdpSolution solve_feasibility(const SdpProblem& prob, double tol, long max_iter, std::uint64_t seed);
inline SdpSolution solve_feasibility(const SdpProblem& prob, const FeasibilityOptions& o = {}) {
    return solve_feasibility(prob, o.tol, o.max_iter, o.seed);
}

/// Frobenius-nearest symmetric matrix with eigenvalues >= floor.
Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m, double floor = 0);
/// Frobenius-nearest blocks satisfying the linear constraints, in floating
/// point; throws InvalidProblem for inconsistent constraints.
std::vector<Eigen::MatrixXd> project_affine(const SdpProblem& prob, const std::vector<Eigen::MatrixXd>& blocks);

/// Rounds to a common denominator den_bound, projects exactly onto the
/// constraints, and checks each block by an exact LDL^T of the rounded block
/// shifted by the Frobenius norm of the projection correction (direct LDL^T
/// of the projected block as a fallback for small blocks).
ExactCertificate round_and_verify(const SdpSolution& sol, const SdpProblem& prob, const Integer& den_bound);

/// Exact residuals of the constraints at the given rational blocks.
std::vector<Rational> exact_residuals(const SdpProblem& prob, const std::vector<RatMatrix>& blocks);

}  // namespace finite_sos
