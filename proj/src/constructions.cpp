#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>

#include "certify_internal.hpp"
#include "finite_sos/certify.hpp"
#include "finite_sos/errors.hpp"
#include "finite_sos/lmi.hpp"

namespace finite_sos {

LowerBoundRegion rsos_lower_bound_region(int n, const Poly& f, int t) {
    LowerBoundRegion r;
    if (f.n() != n) {
        r.failed_hypothesis = "f has " + std::to_string(f.n()) + " variables, not n";
        return r;
    }
    const Poly g = f.cube_reduced();
    if (g.is_zero()) {
        r.failed_hypothesis = "f is zero on the cube";
        return r;
    }
    if (!is_symmetric(g)) {
        r.failed_hypothesis = "f is not invariant under permutations";
        return r;
    }
    const int deg = g.degree();
    if (!(deg <= t && 2 * t <= n)) {
        r.failed_hypothesis = "need deg f <= t <= n/2 (deg f = " + std::to_string(deg) + ")";
        return r;
    }
    r.ell_order = ell_order(g, Rational(t), deg);
    if (r.ell_order % 2 == 0) {
        r.failed_hypothesis = "order of t - sum x in f is " + std::to_string(r.ell_order) + ", not odd";
        return r;
    }
    r.applicable = true;
    r.d1_max = std::min((n - deg) / 2, t);
    r.d2_max = t;
    r.sos_degree_max = t;
    return r;
}

Poly laurent_quadratic_ambient(int n) {
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "n must be positive");
    const int k = n / 2;
    const Poly s = Poly::coordinate_sum(n);
    return (s - Poly::constant(n, k)) * (s - Poly::constant(n, k + 1));
}

Poly laurent_quadratic(int n) { return laurent_quadratic_ambient(n).cube_reduced(); }

MaxcutValue maxcut_deficit(int n, const Point& v) {
    if (n % 2 == 0) throw Error(ErrorKind::RequiresOddN, "the MAXCUT identity is stated for odd n");
    if (static_cast<int>(v.size()) != n) throw Error(ErrorKind::InvalidArgument, "point has the wrong length");
    const long s = std::popcount(PointSet::cube_mask(v));
    const long k = n / 2;
    MaxcutValue out;
    out.q_value = laurent_quadratic(n).evaluate(v);
    out.cut_value = s * (n - s);
    if (out.q_value != Rational(k * (k + 1) - out.cut_value))
        throw Error(ErrorKind::InternalConsistency, "q(v) != k(k+1) - cut(v)");
    return out;
}

Poly cube_penalty(int n) {
    Poly r(n);
    for (int i = 0; i < n; ++i) {
        const Poly x = Poly::variable(n, i);
        r += (x * x - x).pow(2);
    }
    return r;
}

PointSet perturbed_cube(int n, const std::vector<Rational>& alpha) {
    if (n < 1 || n > 20) throw Error(ErrorKind::InvalidArgument, "n must be in 1..20");
    if (static_cast<int>(alpha.size()) != n) throw Error(ErrorKind::InvalidArgument, "alpha must have n entries");
    std::vector<Point> pts;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        Point p(static_cast<std::size_t>(n));
        for (int j = 0; j < n; ++j) p[static_cast<std::size_t>(j)] = alpha[static_cast<std::size_t>(j)] + ((mask >> j) & 1);
        pts.push_back(std::move(p));
    }
    return PointSet(n, std::move(pts));
}

namespace {

Integer two_pow_integer(int e) {
    Integer z = 1;
    mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
    return z;
}

std::vector<Monomial> monomials_up_to(int n, int k) {
    std::vector<Monomial> out;
    std::vector<int> e(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int left) {
        if (i == n) {
            out.emplace_back(e);
            return;
        }
        for (int a = 0; a <= left; ++a) {
            e[static_cast<std::size_t>(i)] = a;
            rec(i + 1, left - a);
        }
        e[static_cast<std::size_t>(i)] = 0;
    };
    rec(0, k);
    std::sort(out.begin(), out.end());
    return out;
}

// Gram matrices of one coefficient-matching block as a homogeneous LMI:
// y_0 times a particular solution plus the kernel directions. A positive
// margin forces y_0 > 0 since no positive definite Gram matrix represents 0.
std::optional<ExactCertificate> interior_gram(const SdpProblem& prob, const SearchOptions& opts, std::string& message) {
    const std::size_t m = prob.blocks[0].dim;
    auto put = [](RatMatrix& g, const SdpEntry& e, const Rational& v) {
        g(e.row, e.col) += v / e.coeff;
        if (e.row != e.col) g(e.col, e.row) += v / e.coeff;
    };
    LmiProblem lp;
    LmiProblem::Block b;
    b.name = "G";
    b.reference = RatMatrix::identity(m);
    RatMatrix g0(m, m);
    std::vector<RatMatrix> dirs;
    for (const auto& c : prob.constraints) {
        put(g0, c.terms[0], c.rhs);
        for (std::size_t t = 1; t < c.terms.size(); ++t) {
            RatMatrix d(m, m);
            put(d, c.terms[0], Rational(1));
            put(d, c.terms[t], Rational(-1));
            dirs.push_back(std::move(d));
        }
    }
    if (dirs.empty()) {
        message = "Gram matrix is unique";
        return std::nullopt;
    }
    b.coeffs.push_back(std::move(g0));
    for (auto& d : dirs) b.coeffs.push_back(std::move(d));
    lp.num_vars = b.coeffs.size();
    lp.blocks.push_back(std::move(b));
    auto lr = maximize_lmi_margin<double>(lp);
    message = lr.message;
    if (!lr.success || !(lr.y[0] > 0)) return std::nullopt;

    SdpSolution sol;
    sol.status = SdpStatus::Feasible;
    Eigen::MatrixXd g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t a = 0; a < lp.num_vars; ++a)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                if (lp.blocks[0].coeffs[a](i, j) != 0)
                    g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += lr.y[a] * to_double(lp.blocks[0].coeffs[a](i, j));
    sol.block_matrices.push_back(g / lr.y[0]);
    Integer den = opts.den_bound;
    for (int e = 0; e < 3; ++e, den *= 1000) {
        ExactCertificate cert = round_and_verify(sol, prob, den);
        if (cert.verified) return cert;
    }
    return std::nullopt;
}

}  // namespace

AmbientSosResult is_sos_ambient(const Poly& p, int k, const SearchOptions& opts) {
    if (k < 0) throw Error(ErrorKind::InvalidArgument, "k must be nonnegative");
    if (p.degree() > 2 * k) throw Error(ErrorKind::InvalidArgument, "deg p exceeds 2k");
    const int n = p.n();
    AmbientSosResult res;
    if (p.is_zero()) {
        res.status = CertStatus::Feasible;
        res.exact = true;
        return res;
    }

    // Half of the Newton polytope, over-approximated by its bounding box and
    // degree slab, then pruned of monomials whose square is forced to zero.
    std::vector<int> lo(static_cast<std::size_t>(n), 1 << 20), hi(static_cast<std::size_t>(n), 0);
    int mindeg = 1 << 20;
    for (const auto& [m, c] : p.terms()) {
        mindeg = std::min(mindeg, m.degree());
        for (std::size_t i = 0; i < m.exponents.size(); ++i) {
            lo[i] = std::min(lo[i], m.exponents[i]);
            hi[i] = std::max(hi[i], m.exponents[i]);
        }
    }
    std::vector<Monomial> basis;
    for (auto& m : monomials_up_to(n, k)) {
        bool keep = 2 * m.degree() >= mindeg && 2 * m.degree() <= p.degree();
        for (std::size_t i = 0; i < m.exponents.size() && keep; ++i)
            keep = 2 * m.exponents[i] >= lo[i] && 2 * m.exponents[i] <= hi[i];
        if (keep) basis.push_back(std::move(m));
    }
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t a = 0; a < basis.size(); ++a) {
            const Monomial sq = basis[a] * basis[a];
            if (p.coefficient(sq) != 0) continue;
            bool other = false;
            for (std::size_t i = 0; i < basis.size() && !other; ++i)
                for (std::size_t j = i + 1; j < basis.size() && !other; ++j)
                    other = basis[i] * basis[j] == sq;
            if (!other) {
                basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(a));
                changed = true;
                break;
            }
        }
    }
    res.monomials = basis;
    const std::size_t m = basis.size();

    std::map<Monomial, SdpConstraint> rows;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i; j < m; ++j)
            rows[basis[i] * basis[j]].terms.push_back({0, i, j, Rational(i == j ? 1 : 2)});
    for (const auto& [mono, c] : p.terms()) {
        auto it = rows.find(mono);
        if (it == rows.end()) {
            res.note = "a term of p lies outside the half Newton polytope";
            return res;
        }
        it->second.rhs = c;
    }
    if (m == 0) {
        res.note = "empty Gram basis";
        return res;
    }
    SdpProblem prob;
    prob.add_block("G", m);
    for (auto& [mono, c] : rows) prob.constraints.push_back(std::move(c));
    std::string barrier;
    std::optional<ExactCertificate> cert = interior_gram(prob, opts, barrier);
    if (!cert) {
        auto found = detail::search_primal(prob, {std::nullopt}, opts);
        if (!found.cert) {
            res.note = found.note + "; interior-point Gram search: " + barrier;
            return res;
        }
        cert = std::move(found.cert);
    }
    res.gram = cert->block_matrices[0];
    Poly back(n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (res.gram(i, j) != 0) back.add_term(basis[i] * basis[j], res.gram(i, j));
    if (back != p)
        throw Error(ErrorKind::InternalConsistency, "ambient Gram certificate failed verification");
    res.status = CertStatus::Feasible;
    res.exact = true;
    return res;
}

GlobalQuartic global_quartic(int n, const SearchOptions& opts) {
    if (n < 2) throw Error(ErrorKind::InvalidArgument, "global_quartic needs n >= 2");
    GlobalQuartic g;
    g.k = n / 2;
    const Poly f = laurent_quadratic_ambient(n);
    const PointSet cube = PointSet::cube(n);
    bool found = false;
    for (int j = 0; j <= 20 && !found; ++j) {
        Rational eps(1, two_pow_integer(j));
        RsosResult r = refute_rsos(cube, f + Poly::constant(n, eps), g.k - 1, g.k, opts);
        if (r.status == CertStatus::Refuted) {
            g.eps = eps;
            found = true;
        }
    }
    if (!found) throw Error(ErrorKind::SearchFailed, "no eps = 2^-j, j <= 20, gave a verified refutation");

    const Poly r = cube_penalty(n);
    const Poly base = f + Poly::constant(n, g.eps);
    Poly mult = Poly::constant(n, 1);
    for (int i = 0; i < n; ++i) mult += Poly::variable(n, i).pow(2);
    auto lambda_of = [](int e) {
        Rational x = 1;
        if (e >= 0) x = Rational(two_pow_integer(e));
        else x = Rational(1, two_pow_integer(-e));
        return x;
    };
    auto attempt = [&](int e) { return is_sos_ambient(mult * (base + lambda_of(e) * r), 3, opts); };
    // feasibility is monotone in lambda since mult * r is itself a sum of squares
    int lo = -10, hi = 12;
    std::optional<AmbientSosResult> best;
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        AmbientSosResult a = attempt(mid);
        if (a.status == CertStatus::Feasible) {
            hi = mid;
            best = std::move(a);
        } else {
            lo = mid;
        }
    }
    if (!best) {
        AmbientSosResult a = attempt(hi);
        if (a.status != CertStatus::Feasible)
            throw Error(ErrorKind::SearchFailed, "no lambda <= 2^12 gave a certificate for (1 + |x|^2) p: " + a.note);
        best = std::move(a);
    }
    if (lo == -10) {
        AmbientSosResult a = attempt(lo);
        if (a.status == CertStatus::Feasible) {
            hi = lo;
            best = std::move(a);
        }
    }
    g.lambda = lambda_of(hi);
    g.p = base + g.lambda * r;
    g.multiplier = mult;
    g.nonnegativity = std::move(*best);
    g.ambient = is_sos_ambient(g.p, 2, opts);
    RsosResult ref = refute_rsos(cube, g.p, g.k - 1, g.k, opts);
    if (ref.status != CertStatus::Refuted)
        throw Error(ErrorKind::SearchFailed, "refutation of p on the cube did not verify: " + ref.note);
    g.cube_refutation = std::move(ref.refutation);
    return g;
}

}  // namespace finite_sos
