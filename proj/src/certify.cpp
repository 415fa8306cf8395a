#include "finite_sos/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include <boost/multiprecision/eigen.hpp>

#include "certify_internal.hpp"
#include "finite_sos/errors.hpp"

namespace finite_sos {

const char* to_string(CertStatus s) {
    switch (s) {
        case CertStatus::Feasible: return "feasible";
        case CertStatus::Refuted: return "refuted";
        case CertStatus::Undetermined: return "undetermined";
    }
    return "undetermined";
}

namespace detail {

RatMatrix face_basis(const std::vector<RatVector>& vectors, std::size_t dim) {
    if (vectors.empty()) return RatMatrix::identity(dim);
    RatMatrix rows(vectors.size(), dim);
    for (std::size_t i = 0; i < vectors.size(); ++i)
        for (std::size_t j = 0; j < dim; ++j) rows(i, j) = vectors[i][j];
    return nullspace(rows);
}

RatMatrix congruence(const RatMatrix& n, const RatMatrix& g) { return n * g * n.transpose(); }

PrimalOutcome search_primal(SdpProblem prob, const std::vector<std::optional<Rational>>& fixed_floors,
                            const SearchOptions& opts) {
    // interior floors first; the last attempt allows singular blocks
    static const std::vector<Rational> kFloors = {Rational(1, 100), Rational(1, 1000), Rational(1, 100000),
                                                  Rational(1, 10000000), Rational(0)};
    PrimalOutcome out;
    bool any_free = false;
    for (std::size_t b = 0; b < prob.blocks.size(); ++b)
        if (!fixed_floors[b]) any_free = true;
    const std::size_t tries = any_free ? kFloors.size() : 1;
    const long budget = std::max<long>(1, opts.max_iter / static_cast<long>(tries));
    for (std::size_t attempt = 0; attempt < tries; ++attempt) {
        for (std::size_t b = 0; b < prob.blocks.size(); ++b)
            prob.blocks[b].floor = fixed_floors[b] ? fixed_floors[b] : std::optional<Rational>(kFloors[attempt]);
        SdpSolution sol = solve_feasibility(prob, opts.tol, budget, opts.seed);
        out.last_status = sol.status;
        out.last_min_eigenvalue = sol.min_block_eigenvalue;
        if (sol.status == SdpStatus::Infeasible) {
            out.note = "constraints admit no point with the requested block floors";
            if (!any_free) return out;
            // the free floors only shrink from here; a pinned non-PSD point stays infeasible
            continue;
        }
        if (sol.status != SdpStatus::Feasible) continue;
        Integer den = opts.den_bound;
        for (int e = 0; e < 3; ++e, den *= 1000) {
            ExactCertificate cert = round_and_verify(sol, prob, den);
            bool fixed_ok = true;
            if (cert.verified) {
                for (std::size_t b = 0; b < prob.blocks.size(); ++b) {
                    if (!fixed_floors[b]) continue;
                    RatMatrix m = cert.block_matrices[b];
                    for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= *fixed_floors[b];
                    if (!psd_check(m).psd) fixed_ok = false;
                }
            }
            if (cert.verified && fixed_ok) {
                out.cert = std::move(cert);
                out.note.clear();
                return out;
            }
        }
    }
    if (out.note.empty()) out.note = "no exactly verified point found";
    return out;
}

RatMatrix lmi_block(const LmiProblem::Block& b, const std::vector<Rational>& y) {
    const std::size_t m = b.reference.rows();
    RatMatrix out(m, m);
    for (std::size_t a = 0; a < y.size(); ++a) {
        if (y[a] == 0) continue;
        const RatMatrix& f = b.coeffs[a];
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j)
                if (f(i, j) != 0) out(i, j) += y[a] * f(i, j);
    }
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) out(i, j) = out(j, i);
    return out;
}

std::optional<Rational> exact_margin(const LmiProblem& prob, const std::vector<Rational>& y, const Rational& scale,
                                     Rational start, int halvings) {
    std::vector<RatMatrix> vals;
    for (const auto& b : prob.blocks) vals.push_back(lmi_block(b, y));
    Rational eps = start;
    for (int h = 0; h <= halvings; ++h, eps /= 2) {
        bool ok = true;
        for (std::size_t j = 0; j < prob.blocks.size() && ok; ++j) {
            RatMatrix m = vals[j] - prob.blocks[j].reference.scaled(eps * scale);
            ok = psd_check(m).psd;
        }
        if (ok) return eps;
    }
    return std::nullopt;
}

namespace {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <class Scalar>
Mat<Scalar> to_mat(const RatMatrix& m) {
    Mat<Scalar> out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rational_to_scalar<Scalar>(m(i, j));
    return out;
}

// Cyclic Jacobi rotations; Eigen's eigensolver needs NumTraits members that
// the multiprecision adaptor lacks.
template <class Scalar>
Scalar jacobi_min_eigenvalue(Mat<Scalar> a) {
    using std::abs;
    using std::sqrt;
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        Scalar off = 0, diag = 0;
        for (Eigen::Index i = 0; i < n; ++i) {
            diag += a(i, i) * a(i, i);
            for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        }
        if (off <= diag * std::numeric_limits<Scalar>::epsilon() * std::numeric_limits<Scalar>::epsilon()) break;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0) continue;
                const Scalar theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
                const Scalar t = (theta >= 0 ? Scalar(1) : Scalar(-1)) / (abs(theta) + sqrt(theta * theta + 1));
                const Scalar c = 1 / sqrt(t * t + 1);
                const Scalar s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Scalar apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
    }
    Scalar m = a(0, 0);
    for (Eigen::Index i = 1; i < n; ++i) m = std::min<Scalar>(m, a(i, i));
    return m;
}

// Least eigenvalue of the pencil (M, D) for D positive definite.
template <class Scalar>
Scalar min_pencil_eigenvalue(const RatMatrix& m, const RatMatrix& d) {
    Mat<Scalar> dm = to_mat<Scalar>(d);
    Eigen::LLT<Mat<Scalar>> llt(dm);
    Mat<Scalar> l = llt.matrixL();
    Mat<Scalar> a = to_mat<Scalar>(m);
    Mat<Scalar> x = l.template triangularView<Eigen::Lower>().solve(a);
    Mat<Scalar> y = l.template triangularView<Eigen::Lower>().solve(x.transpose());
    Mat<Scalar> sym = (y + y.transpose()) / Scalar(2);
    if constexpr (std::is_same_v<Scalar, double>) {
        Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(sym, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    } else {
        return jacobi_min_eigenvalue(sym);
    }
}

Rational power_of_two_below(double x) {
    int e = 0;
    std::frexp(x, &e);  // x in [2^(e-1), 2^e)
    Rational r = 1;
    if (e - 2 >= 0) {
        mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(e - 2));
    } else {
        mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(2 - e));
    }
    r.canonicalize();
    return r;
}

}  // namespace

template <class Scalar>
std::optional<std::pair<std::vector<Rational>, Rational>> round_lmi_weights(
    const LmiProblem& prob, const std::vector<Scalar>& y, const std::vector<Rational>& tv_weights,
    const Integer& den_start, const Integer& den_max, int halvings) {
    using std::abs;
    Scalar mx = 0;
    for (const auto& v : y) mx = std::max<Scalar>(mx, abs(v));
    if (!(mx > 0)) return std::nullopt;
    for (Integer den = den_start; den <= den_max; den *= 1000) {
        const Scalar sden = integer_to_scalar<Scalar>(den);
        std::vector<Rational> w(y.size());
        Rational tv = 0;
        for (std::size_t i = 0; i < y.size(); ++i) {
            w[i] = Rational(floor_to_integer<Scalar>(y[i] / mx * sden + Scalar(0.5)), den);
            w[i].canonicalize();
            tv += tv_weights[i] * abs(w[i]);
        }
        if (tv == 0) continue;
        Scalar est = std::numeric_limits<double>::infinity();
        for (const auto& b : prob.blocks) est = std::min(est, min_pencil_eigenvalue<Scalar>(lmi_block(b, w), b.reference));
        est /= rational_to_scalar<Scalar>(tv);
        if (!(est > 0)) continue;
        auto eps = exact_margin(prob, w, tv, power_of_two_below(static_cast<double>(est)), halvings);
        if (!eps) continue;
        for (auto& v : w) v /= tv;
        return std::make_pair(std::move(w), *eps);
    }
    return std::nullopt;
}

template std::optional<std::pair<std::vector<Rational>, Rational>> round_lmi_weights<double>(
    const LmiProblem&, const std::vector<double>&, const std::vector<Rational>&, const Integer&, const Integer&, int);
template std::optional<std::pair<std::vector<Rational>, Rational>> round_lmi_weights<Float50>(
    const LmiProblem&, const std::vector<Float50>&, const std::vector<Rational>&, const Integer&, const Integer&, int);

}  // namespace detail

namespace {

RatMatrix outer(const RatVector& a, const Rational& scale = 1) {
    RatMatrix m(a.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = scale * a[i] * a[j];
    return m;
}

RatVector times(const RatMatrix& nt, const RatVector& v) { return nt * v; }

Rational quad(const RatMatrix& g, const RatVector& v) { return dot(v, g * v); }

double min_eig_double(const RatMatrix& m) {
    if (m.rows() == 0) return 0;
    Eigen::MatrixXd a(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = to_double(m(i, j));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void check_degrees(int d1, int d2) {
    if (d1 < 0 || d2 < 0) throw Error(ErrorKind::InvalidArgument, "degrees must be nonnegative");
}

void check_arity(const PointSet& X, const Poly& p) {
    if (p.n() != X.n()) throw Error(ErrorKind::InvalidArgument, "polynomial and point set have different arity");
}

std::vector<RatVector> eval_rows(const QuotientBasis& b) {
    std::vector<RatVector> out;
    for (std::size_t i = 0; i < b.pointset.size(); ++i) out.push_back(b.eval_row(i));
    return out;
}

RsosResult rsos_search(const PointSet& X, const Poly& p, int d1, int d2, std::optional<Rational> h_floor,
                       std::optional<Rational> g_floor, const SearchOptions& opts) {
    check_degrees(d1, d2);
    check_arity(X, p);
    RsosResult res;
    QuotientBuilder qb(X);
    QuotientBasis b1 = qb.basis(d1);
    QuotientBasis b2 = qb.basis(d2);
    const auto pv = X.evaluate(p);
    const auto pi1 = eval_rows(b1);
    const auto pi2 = eval_rows(b2);

    // p a positive constant on X: h = 1 and ph = p.
    const bool constant_positive =
        pv[0] > 0 && std::all_of(pv.begin(), pv.end(), [&](const Rational& q) { return q == pv[0]; });
    if (constant_positive && (!h_floor || (b1.dim() == 1 && *h_floor <= 1)) &&
        (!g_floor || (b2.dim() == 1 && *g_floor <= pv[0]))) {
        MultiplierCertificate mc;
        mc.h_gram = {b1, RatMatrix(b1.dim(), b1.dim()), std::vector<Rational>(X.size()), true, 0};
        mc.ph_gram = {b2, RatMatrix(b2.dim(), b2.dim()), std::vector<Rational>(X.size()), true, 0};
        mc.h_gram.gram(0, 0) = 1;
        mc.ph_gram.gram(0, 0) = pv[0];
        mc.h_gram.min_eigenvalue = b1.dim() == 1 ? 1.0 : 0.0;
        mc.ph_gram.min_eigenvalue = b2.dim() == 1 ? to_double(pv[0]) : 0.0;
        mc.normalization = static_cast<long>(X.size());
        res.status = CertStatus::Feasible;
        res.certificate = std::move(mc);
        return res;
    }

    // Facial reduction: h vanishes where p < 0, g vanishes where p <= 0.
    std::vector<RatVector> kill1, kill2;
    for (std::size_t v = 0; v < X.size(); ++v) {
        if (pv[v] < 0) kill1.push_back(pi1[v]);
        if (pv[v] <= 0) kill2.push_back(pi2[v]);
    }
    if (h_floor && !kill1.empty()) {
        res.note = "p is negative somewhere on X, so no multiplier has a positive definite Gram matrix";
        return res;
    }
    if (g_floor && !kill2.empty()) {
        res.note = "p vanishes somewhere on X, so p*h has no positive definite Gram matrix";
        return res;
    }
    const RatMatrix n1 = detail::face_basis(kill1, b1.dim());
    const RatMatrix n2 = detail::face_basis(kill2, b2.dim());
    if (n1.cols() == 0) {
        res.note = "every multiplier of this degree vanishes on X";
        return res;
    }
    const RatMatrix n1t = n1.transpose();
    const RatMatrix n2t = n2.transpose();

    SdpProblem prob;
    const std::size_t hb = prob.add_block("H", n1.cols());
    std::optional<std::size_t> gb;
    if (n2.cols() > 0) gb = prob.add_block("G", n2.cols());
    std::vector<std::optional<Rational>> fixed{h_floor};
    if (gb) fixed.push_back(g_floor);
    for (std::size_t v = 0; v < X.size(); ++v) {
        if (pv[v] <= 0) continue;
        SdpConstraint c;
        SdpProblem::add_quadratic_form(c, hb, times(n1t, pi1[v]), pv[v]);
        if (gb) SdpProblem::add_quadratic_form(c, *gb, times(n2t, pi2[v]), -1);
        c.rhs = 0;
        prob.constraints.push_back(std::move(c));
    }
    SdpConstraint norm;
    for (std::size_t v = 0; v < X.size(); ++v) SdpProblem::add_quadratic_form(norm, hb, times(n1t, pi1[v]));
    norm.rhs = static_cast<long>(X.size());
    prob.constraints.push_back(std::move(norm));

    auto found = detail::search_primal(prob, fixed, opts);
    if (!found.cert) {
        res.note = found.note;
        return res;
    }
    RatMatrix h = detail::congruence(n1, found.cert->block_matrices[hb]);
    RatMatrix g = gb ? detail::congruence(n2, found.cert->block_matrices[*gb]) : RatMatrix(b2.dim(), b2.dim());

    MultiplierCertificate mc;
    mc.h_gram.basis = b1;
    mc.h_gram.gram = h;
    mc.ph_gram.basis = b2;
    mc.ph_gram.gram = g;
    Rational total = 0;
    bool ok = true;
    for (std::size_t v = 0; v < X.size(); ++v) {
        Rational hv = quad(h, pi1[v]);
        Rational gv = quad(g, pi2[v]);
        total += hv;
        mc.h_gram.residuals.push_back(0);
        Rational r = pv[v] * hv - gv;
        if (r != 0) ok = false;
        mc.ph_gram.residuals.push_back(r);
    }
    mc.normalization = total;
    if (total != static_cast<long>(X.size())) ok = false;
    if (!ok) throw Error(ErrorKind::InternalConsistency, "reconstructed multiplier certificate failed verification");
    mc.h_gram.exact = mc.ph_gram.exact = true;
    mc.h_gram.min_eigenvalue = min_eig_double(h);
    mc.ph_gram.min_eigenvalue = min_eig_double(g);
    res.status = CertStatus::Feasible;
    res.certificate = std::move(mc);
    return res;
}

LmiProblem refutation_lmi(const std::vector<RatVector>& pi1, const std::vector<RatVector>& pi2,
                          const std::vector<Rational>& pv) {
    const std::size_t m = pv.size();
    LmiProblem lp;
    lp.num_vars = m;
    LmiProblem::Block hi{"hi", {}, RatMatrix(pi2[0].size(), pi2[0].size())};
    LmiProblem::Block lo{"lo", {}, RatMatrix(pi1[0].size(), pi1[0].size())};
    const Rational inv(1, static_cast<long>(m));
    for (std::size_t v = 0; v < m; ++v) {
        hi.coeffs.push_back(outer(pi2[v]));
        lo.coeffs.push_back(outer(pi1[v], -pv[v]));
        hi.reference = hi.reference + outer(pi2[v], inv);
        lo.reference = lo.reference + outer(pi1[v], inv);
    }
    lp.blocks = {std::move(hi), std::move(lo)};
    return lp;
}

template <class Scalar>
std::optional<RefutationCertificate> refute_with(const LmiProblem& lp, const std::vector<RatVector>& pi1,
                                                 const std::vector<RatVector>& pi2, const std::vector<Rational>& pv,
                                                 const Integer& den_start, const Integer& den_max,
                                                 const SearchOptions& opts, std::string& message) {
    auto lr = maximize_lmi_margin<Scalar>(lp);
    message = lr.message;
    if (!lr.success) return std::nullopt;
    std::vector<Rational> ones(pv.size(), Rational(1));
    auto rounded = detail::round_lmi_weights<Scalar>(lp, lr.y, ones, den_start, den_max, 60);
    if (!rounded) {
        message = "solver weights did not survive exact rounding";
        return std::nullopt;
    }
    RefutationCertificate rc;
    rc.weights = std::move(rounded->first);
    rc.margin = rounded->second;
    rc.solver_margin = static_cast<double>(lr.margin);
    const std::size_t c1 = pi1[0].size(), c2 = pi2[0].size();
    rc.moment_hi = RatMatrix(c2, c2);
    rc.moment_lo = RatMatrix(c1, c1);
    rc.all_weights_clear_tau = true;
    for (std::size_t v = 0; v < pv.size(); ++v) {
        const Rational& w = rc.weights[v];
        if (w != 0) {
            rc.moment_hi = rc.moment_hi + outer(pi2[v], w);
            rc.moment_lo = rc.moment_lo + outer(pi1[v], w * pv[v]);
        }
        double wd = to_double(w);
        if (wd > opts.tau) ++rc.m_plus;
        else if (wd < -opts.tau) ++rc.m_minus;
        if (std::abs(wd) <= opts.tau) rc.all_weights_clear_tau = false;
    }
    rc.dim_hi = c2;
    rc.dim_lo = c1;
    rc.signs_lemma_holds = rc.m_plus >= c2 && rc.m_minus >= c1;
    rc.exact = true;
    rc.method = std::is_same_v<Scalar, double> ? "barrier, double" : "barrier, 50 digits";
    return rc;
}

}  // namespace

RsosResult refute_rsos(const PointSet& X, const Poly& p, int d1, int d2, const SearchOptions& opts) {
    check_degrees(d1, d2);
    check_arity(X, p);
    RsosResult res;
    QuotientBuilder qb(X);
    QuotientBasis b1 = qb.basis(d1);
    QuotientBasis b2 = qb.basis(d2);
    const auto pv = X.evaluate(p);
    const auto pi1 = eval_rows(b1);
    const auto pi2 = eval_rows(b2);
    const LmiProblem lp = refutation_lmi(pi1, pi2, pv);
    std::string message;
    auto rc = refute_with<double>(lp, pi1, pi2, pv, opts.den_bound, Integer("1000000000000000"), opts, message);
    if (!rc && X.size() <= 32) {
        rc = refute_with<Float50>(lp, pi1, pi2, pv, opts.den_bound, Integer("1" + std::string(45, '0')), opts,
                                  message);
    }
    if (!rc) {
        res.note = "no separating weights found: " + message;
        return res;
    }
    rc->d1 = d1;
    rc->d2 = d2;
    res.status = CertStatus::Refuted;
    res.refutation = std::move(rc);
    return res;
}

RsosResult is_rsos(const PointSet& X, const Poly& p, int d1, int d2, const SearchOptions& opts) {
    RsosResult res = rsos_search(X, p, d1, d2, std::nullopt, std::nullopt, opts);
    if (res.status == CertStatus::Feasible) return res;
    RsosResult dual = refute_rsos(X, p, d1, d2, opts);
    if (dual.status == CertStatus::Refuted) return dual;
    res.note += "; " + dual.note;
    return res;
}

RsosResult interior_multiplier(const PointSet& X, const Poly& p, int d, const Rational& eps, bool strict_product,
                               const SearchOptions& opts) {
    if (p.is_zero()) throw Error(ErrorKind::ZeroPolynomial, "interior multiplier of the zero polynomial");
    if (!X.is_cube_subset()) throw Error(ErrorKind::InvalidArgument, "interior multipliers need a subset of {0,1}^n");
    if (eps <= 0) throw Error(ErrorKind::InvalidArgument, "eps must be positive");
    const int deg = std::max(0, p.degree());
    const int d2 = d + (deg + 1) / 2;
    return rsos_search(X, p, d, d2, eps, strict_product ? std::optional<Rational>(eps) : std::nullopt, opts);
}

int interior_multiplier_degree(const PointSet& X, const Poly& p) {
    const auto pv = X.evaluate(p);
    const bool positive = std::all_of(pv.begin(), pv.end(), [](const Rational& q) { return q > 0; });
    return X.n() / 2 + (positive ? 0 : 1);
}

SosResult is_k_sos(const PointSet& X, const Poly& f, int k, const SearchOptions& opts) {
    if (k < 0) throw Error(ErrorKind::InvalidArgument, "k must be nonnegative");
    check_arity(X, f);
    SosResult res;
    QuotientBuilder qb(X);
    QuotientBasis b = qb.basis(k);
    const auto fv = X.evaluate(f);
    const auto pi = eval_rows(b);

    for (std::size_t v = 0; v < X.size(); ++v) {
        if (fv[v] >= 0) continue;
        RefutationCertificate rc;
        rc.d1 = 0;
        rc.d2 = k;
        rc.weights.assign(X.size(), Rational(0));
        rc.weights[v] = 1;
        rc.moment_hi = outer(pi[v]);
        rc.moment_lo = RatMatrix(1, 1);
        rc.moment_lo(0, 0) = fv[v];
        rc.margin = 0;
        rc.m_plus = 1;
        rc.dim_hi = b.dim();
        rc.dim_lo = 1;
        rc.exact = true;
        rc.method = "point evaluation";
        res.status = CertStatus::Refuted;
        res.refutation = std::move(rc);
        res.note = "f is negative at a point of X";
        return res;
    }

    std::vector<RatVector> kill;
    for (std::size_t v = 0; v < X.size(); ++v)
        if (fv[v] == 0) kill.push_back(pi[v]);
    const RatMatrix nb = detail::face_basis(kill, b.dim());
    const bool f_zero = std::all_of(fv.begin(), fv.end(), [](const Rational& q) { return q == 0; });
    if (f_zero) {
        GramCertificate gc{b, RatMatrix(b.dim(), b.dim()), std::vector<Rational>(X.size()), true, 0};
        res.status = CertStatus::Feasible;
        res.gram = std::move(gc);
        return res;
    }
    if (nb.cols() > 0) {
        const RatMatrix nt = nb.transpose();
        SdpProblem prob;
        prob.add_block("G", nb.cols());
        for (std::size_t v = 0; v < X.size(); ++v) {
            if (fv[v] == 0) continue;
            SdpConstraint c;
            SdpProblem::add_quadratic_form(c, 0, times(nt, pi[v]));
            c.rhs = fv[v];
            prob.constraints.push_back(std::move(c));
        }
        auto found = detail::search_primal(prob, {std::nullopt}, opts);
        if (found.cert) {
            GramCertificate gc;
            gc.basis = b;
            gc.gram = detail::congruence(nb, found.cert->block_matrices[0]);
            for (std::size_t v = 0; v < X.size(); ++v) gc.residuals.push_back(fv[v] - quad(gc.gram, pi[v]));
            if (!std::all_of(gc.residuals.begin(), gc.residuals.end(), [](const Rational& q) { return q == 0; }))
                throw Error(ErrorKind::InternalConsistency, "reconstructed Gram certificate failed verification");
            gc.exact = true;
            gc.min_eigenvalue = min_eig_double(gc.gram);
            res.status = CertStatus::Feasible;
            res.gram = std::move(gc);
            return res;
        }
        res.note = found.note;
    } else {
        res.note = "Gram matrix forced to zero by the zeros of f";
    }
    RsosResult dual = refute_rsos(X, f, 0, k, opts);
    if (dual.status == CertStatus::Refuted) {
        res.status = CertStatus::Refuted;
        res.refutation = std::move(dual.refutation);
        return res;
    }
    res.note += "; " + dual.note;
    return res;
}

}  // namespace finite_sos
