#include "finite_sos/quotient.hpp"

#include <algorithm>
#include <set>

#include "finite_sos/errors.hpp"

namespace finite_sos {

std::size_t QuotientBasis::count_up_to(int t) const {
    return static_cast<std::size_t>(std::count_if(basis_monomials.begin(), basis_monomials.end(),
                                                  [t](const Monomial& m) { return m.degree() <= t; }));
}

Poly QuotientBasis::combination(const RatVector& coeffs) const {
    Poly p(pointset.n());
    for (std::size_t j = 0; j < basis_monomials.size(); ++j) p.add_term(basis_monomials[j], coeffs[j]);
    return p;
}

QuotientBuilder::QuotientBuilder(PointSet X) : X_(std::move(X)), echelon_(X_.size()) {
    SemiEchelon::SparseRow ones;
    for (std::size_t p = 0; p < X_.size(); ++p) ones.emplace_back(p, 1);
    echelon_.try_add(ones);
    monomials_.push_back(Monomial::one(X_.n()));
    evals_.push_back(std::move(ones));
    cumulative_.push_back(1);
}

void QuotientBuilder::extend_once() {
    const int t = static_cast<int>(cumulative_.size());
    if (echelon_.rank() == X_.size()) {
        cumulative_.push_back(cumulative_.back());
        return;
    }
    const std::size_t prev_begin = t >= 2 ? cumulative_[static_cast<std::size_t>(t) - 2] : 0;
    const std::size_t prev_end = cumulative_.back();
    std::set<Monomial> previous(monomials_.begin() + static_cast<std::ptrdiff_t>(prev_begin),
                                monomials_.begin() + static_cast<std::ptrdiff_t>(prev_end));
    // candidate -> (parent index, variable) for incremental evaluation
    std::map<Monomial, std::pair<std::size_t, int>> candidates;
    for (std::size_t b = prev_begin; b < prev_end; ++b)
        for (int i = 0; i < X_.n(); ++i) {
            Monomial m = monomials_[b] * Monomial::variable(X_.n(), i);
            if (candidates.count(m)) continue;
            bool closed = true;
            for (int j = 0; j < X_.n() && closed; ++j) {
                if (m.exponents[static_cast<std::size_t>(j)] == 0) continue;
                Monomial q = m;
                --q.exponents[static_cast<std::size_t>(j)];
                closed = previous.count(q) > 0;
            }
            if (closed) candidates.emplace(std::move(m), std::make_pair(b, i));
        }
    for (const auto& [m, origin] : candidates) {
        if (echelon_.rank() == X_.size()) break;
        SemiEchelon::SparseRow ev;
        for (const auto& [p, x] : evals_[origin.first]) {
            const Rational& c = X_[p][static_cast<std::size_t>(origin.second)];
            if (c != 0) ev.emplace_back(p, x * c);
        }
        if (echelon_.try_add(ev)) {
            monomials_.push_back(m);
            evals_.push_back(std::move(ev));
        }
    }
    cumulative_.push_back(monomials_.size());
}

std::size_t QuotientBuilder::hilbert(int t) {
    if (t < 0) throw Error(ErrorKind::InvalidArgument, "negative degree");
    while (static_cast<int>(cumulative_.size()) <= t) extend_once();
    return cumulative_[static_cast<std::size_t>(t)];
}

QuotientBasis QuotientBuilder::basis(int d) {
    std::size_t dim = hilbert(d);
    QuotientBasis qb;
    qb.pointset = X_;
    qb.degree_cap = d;
    qb.basis_monomials.assign(monomials_.begin(), monomials_.begin() + static_cast<std::ptrdiff_t>(dim));
    qb.eval_matrix = RatMatrix(X_.size(), dim);
    for (std::size_t j = 0; j < dim; ++j)
        for (const auto& [p, x] : evals_[j]) qb.eval_matrix(p, j) = x;
    return qb;
}

int QuotientBuilder::regularity() {
    int d = 0;
    while (hilbert(d) < X_.size()) ++d;
    return d;
}

QuotientBasis quotient_basis(const PointSet& X, int d) {
    if (d < 0) throw Error(ErrorKind::InvalidArgument, "degree cap must be nonnegative");
    return QuotientBuilder(X).basis(d);
}

std::size_t hilbert_function(const PointSet& X, int t) { return QuotientBuilder(X).hilbert(t); }

int hilbert_regularity(const PointSet& X) { return QuotientBuilder(X).regularity(); }

namespace {

struct FullBasis {
    QuotientBasis basis;
    RatMatrix inverse;  // columns: coefficient vectors of the interpolators
};

FullBasis full_basis(const PointSet& X) {
    QuotientBuilder qb(X);
    FullBasis fb{qb.basis(qb.regularity()), {}};
    auto inv = inverse(fb.basis.eval_matrix);
    if (!inv) throw Error(ErrorKind::InternalConsistency, "evaluation matrix at regularity is singular");
    fb.inverse = std::move(*inv);
    return fb;
}

}  // namespace

Interpolator interpolator(const PointSet& X, const Point& v) {
    auto idx = X.index_of(v);
    if (!idx) throw Error(ErrorKind::PointNotInSet, "interpolation point is not in the set");
    QuotientBuilder qb(X);
    QuotientBasis basis = qb.basis(qb.regularity());
    RatVector e(X.size());
    e[*idx] = 1;
    auto c = solve(basis.eval_matrix, e);
    if (!c) throw Error(ErrorKind::InternalConsistency, "interpolation system inconsistent");
    return {v, basis.combination(*c)};
}

std::vector<Interpolator> interpolators(const PointSet& X) {
    FullBasis fb = full_basis(X);
    std::vector<Interpolator> out;
    for (std::size_t i = 0; i < X.size(); ++i) out.push_back({X[i], fb.basis.combination(fb.inverse.column(i))});
    return out;
}

std::vector<std::pair<Rational, Interpolator>> interpolator_decomposition(const PointSet& X, const Poly& p) {
    std::vector<Interpolator> deltas = interpolators(X);
    std::vector<std::pair<Rational, Interpolator>> out;
    for (std::size_t i = 0; i < X.size(); ++i) out.emplace_back(p.evaluate(X[i]), std::move(deltas[i]));
    for (std::size_t j = 0; j < X.size(); ++j) {
        Rational s = 0;
        for (const auto& [w, d] : out) {
            Rational dv = d.poly.evaluate(X[j]);
            s += w * dv * dv;
        }
        if (s != p.evaluate(X[j]))
            throw Error(ErrorKind::InternalConsistency, "interpolator decomposition does not reproduce p");
    }
    return out;
}

MainBound mainbound_k(const PointSet& X, int s) {
    if (s < 0) throw Error(ErrorKind::InvalidArgument, "s must be nonnegative");
    QuotientBuilder qb(X);
    for (int k = 0;; ++k)
        if (qb.hilbert(k + s) + qb.hilbert(k) > qb.hilbert(2 * k + 2 * s)) return {k, k + s};
}

std::pair<long, long> cayley_bacharach_defect(const PointSet& Xp, int n, int d) {
    if (Xp.n() != n) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
    if (d < 0 || d > n) throw Error(ErrorKind::InvalidArgument, "d out of range");
    std::set<std::uint64_t> inside;
    for (const auto& v : Xp.points()) inside.insert(PointSet::cube_mask(v));
    long lhs = static_cast<long>(Xp.size()) - static_cast<long>(hilbert_function(Xp, d));
    const std::uint64_t total = std::uint64_t{1} << n;
    const int e = n - d - 1;
    if (e < 0) return {lhs, 0};
    long rhs = static_cast<long>(hilbert_function(PointSet::cube(n), e));
    // the empty complement has the zero coordinate ring
    if (inside.size() < total) {
        std::vector<Point> rest;
        for (std::uint64_t m = 0; m < total; ++m)
            if (!inside.count(m)) rest.push_back(PointSet::cube_point(n, m));
        rhs -= static_cast<long>(hilbert_function(PointSet(n, std::move(rest)), e));
    }
    return {lhs, rhs};
}

Poly restrict(const Poly& p, const PointSet& Xp) {
    QuotientBuilder qb(Xp);
    QuotientBasis basis = qb.basis(qb.regularity());
    auto c = solve(basis.eval_matrix, Xp.evaluate(p));
    if (!c) throw Error(ErrorKind::InternalConsistency, "restriction system inconsistent");
    return basis.combination(*c);
}

int degree_on(const PointSet& X, const Poly& f) { return restrict(f, X).degree(); }

}  // namespace finite_sos
