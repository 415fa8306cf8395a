#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "finite_sos/linalg.hpp"
#include "finite_sos/point_set.hpp"
#include "finite_sos/poly.hpp"

namespace finite_sos {

/// Monomial basis of R[X]_{<=d} with its point-evaluation matrix (rows = points).
struct QuotientBasis {
    PointSet pointset;
    int degree_cap = 0;
    std::vector<Monomial> basis_monomials;
    RatMatrix eval_matrix;

    std::size_t dim() const { return basis_monomials.size(); }
    /// pi(v): evaluations of the basis monomials at point `i`.
    RatVector eval_row(std::size_t i) const { return eval_matrix.row(i); }
    /// Number of basis monomials of degree <= t.
    std::size_t count_up_to(int t) const;
    Poly combination(const RatVector& coeffs) const;
};

/// Degree-by-degree construction of the greedy graded-lex quotient basis.
/// A monomial of degree t is tested only if all its degree t-1 divisors are
/// basis monomials (the standard monomials form an order ideal).
class QuotientBuilder {
public:
    explicit QuotientBuilder(PointSet X);

    const PointSet& pointset() const { return X_; }
    /// Extends the basis through degree t if needed and returns H_X(t).
    std::size_t hilbert(int t);
    QuotientBasis basis(int d);
    int regularity();

private:
    void extend_once();

    PointSet X_;
    SemiEchelon echelon_;
    std::vector<Monomial> monomials_;
    std::vector<SemiEchelon::SparseRow> evals_;  // nonzero evaluations per basis monomial
    std::vector<std::size_t> cumulative_;  // cumulative_[t] = H_X(t)
};

QuotientBasis quotient_basis(const PointSet& X, int d);
std::size_t hilbert_function(const PointSet& X, int t);
int hilbert_regularity(const PointSet& X);

struct Interpolator {
    Point point;
    Poly poly;
};

Interpolator interpolator(const PointSet& X, const Point& v);
/// All interpolators, in point order, from a single inverse.
std::vector<Interpolator> interpolators(const PointSet& X);

/// Pairs (p(v), delta_v) with p = sum p(v) delta_v^2 on X; the identity is
/// checked exactly before returning.
std::vector<std::pair<Rational, Interpolator>> interpolator_decomposition(const PointSet& X, const Poly& p);

struct MainBound {
    int k = 0;
    int certified_degree = 0;
};

/// Least k with H_X(k+s) + H_X(k) > H_X(2k+2s).
MainBound mainbound_k(const PointSet& X, int s);

/// (|X'| - H_{X'}(d), H_C(n-d-1) - H_{X'c}(n-d-1)) for X' inside {0,1}^n.
std::pair<long, long> cayley_bacharach_defect(const PointSet& Xp, int n, int d);

/// Representative of p on Xp in the monomials of quotient_basis(Xp, h(Xp)).
Poly restrict(const Poly& p, const PointSet& Xp);

/// Degree of the canonical representative of f in R[X].
int degree_on(const PointSet& X, const Poly& f);

}  // namespace finite_sos
