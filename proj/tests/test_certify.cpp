#include "doctest.h"

#include <bit>
#include <random>

#include "finite_sos/certify.hpp"
#include "finite_sos/errors.hpp"
#include "test_support.hpp"

using namespace finite_sos;

namespace {

// M_hi and -M_lo minus margin times the uniform moment matrices are PSD.
void check_refutation_exactly(const PointSet& X, const Poly& p, const RefutationCertificate& rc) {
    const auto pv = X.evaluate(p);
    QuotientBasis b1 = quotient_basis(X, rc.d1), b2 = quotient_basis(X, rc.d2);
    RatMatrix hi(b2.dim(), b2.dim()), lo(b1.dim(), b1.dim()), dhi = hi, dlo = lo;
    const Rational inv(1, static_cast<long>(X.size()));
    Rational tv = 0;
    for (std::size_t v = 0; v < X.size(); ++v) {
        const auto r1 = b1.eval_row(v), r2 = b2.eval_row(v);
        tv += abs(rc.weights[v]);
        for (std::size_t i = 0; i < r2.size(); ++i)
            for (std::size_t j = 0; j < r2.size(); ++j) {
                hi(i, j) += rc.weights[v] * r2[i] * r2[j];
                dhi(i, j) += inv * r2[i] * r2[j];
            }
        for (std::size_t i = 0; i < r1.size(); ++i)
            for (std::size_t j = 0; j < r1.size(); ++j) {
                lo(i, j) += rc.weights[v] * pv[v] * r1[i] * r1[j];
                dlo(i, j) += inv * r1[i] * r1[j];
            }
    }
    CHECK(tv == 1);
    CHECK(hi == rc.moment_hi);
    CHECK(lo == rc.moment_lo);
    CHECK(rc.margin > 0);
    CHECK(psd_check(hi - dhi.scaled(rc.margin)).psd);
    CHECK(psd_check(lo.scaled(-1) - dlo.scaled(rc.margin)).psd);
}

void check_multiplier_exactly(const PointSet& X, const Poly& p, const MultiplierCertificate& mc) {
    const auto pv = X.evaluate(p);
    Rational total = 0;
    for (std::size_t v = 0; v < X.size(); ++v) {
        const auto r1 = mc.h_gram.basis.eval_row(v), r2 = mc.ph_gram.basis.eval_row(v);
        const Rational h = dot(r1, mc.h_gram.gram * r1), g = dot(r2, mc.ph_gram.gram * r2);
        CHECK(pv[v] * h == g);
        total += h;
    }
    CHECK(total == static_cast<long>(X.size()));
    CHECK(mc.normalization == total);
    CHECK(psd_check(mc.h_gram.gram).psd);
    CHECK(psd_check(mc.ph_gram.gram).psd);
}

}  // namespace

TEST_CASE("is_k_sos examples") {
    const auto C3 = PointSet::cube(3);
    const Poly x1 = Poly::variable(3, 0), x2 = Poly::variable(3, 1);
    auto sq = is_k_sos(C3, (x1 - x2).pow(2), 1);
    REQUIRE(sq.status == CertStatus::Feasible);
    CHECK(sq.gram->exact);
    for (const auto& r : sq.gram->residuals) CHECK(r == 0);

    auto one = is_k_sos(C3, Poly::constant(3, 1), 0);
    REQUIRE(one.status == CertStatus::Feasible);
    CHECK(one.gram->gram == RatMatrix::identity(1));

    auto laurent = is_k_sos(PointSet::cube(5), laurent_quadratic(5), 2);
    REQUIRE(laurent.status == CertStatus::Refuted);
    check_refutation_exactly(PointSet::cube(5), laurent_quadratic(5), *laurent.refutation);

    auto negative = is_k_sos(C3, x1 - Poly::constant(3, 1), 1);
    REQUIRE(negative.status == CertStatus::Refuted);
    CHECK(negative.refutation->method == "point evaluation");
}

TEST_CASE("is_rsos and refute_rsos examples") {
    const auto C5 = PointSet::cube(5);
    const Poly f = laurent_quadratic(5);
    auto one = is_rsos(C5, Poly::constant(5, 1), 1, 2);
    REQUIRE(one.status == CertStatus::Feasible);
    CHECK(one.certificate->h_gram.gram(0, 0) == 1);
    check_multiplier_exactly(C5, Poly::constant(5, 1), *one.certificate);

    auto yes = is_rsos(C5, f, 2, 3);
    REQUIRE(yes.status == CertStatus::Feasible);
    check_multiplier_exactly(C5, f, *yes.certificate);

    auto no = is_rsos(C5, f, 1, 2);
    REQUIRE(no.status == CertStatus::Refuted);
    CHECK_FALSE(no.certificate.has_value());
    check_refutation_exactly(C5, f, *no.refutation);

    CHECK(refute_rsos(C5, Poly::constant(5, 1), 1, 2).status == CertStatus::Undetermined);
}

TEST_CASE("Laurent quadratic: refutations verify and satisfy the sign counts") {
    for (int n = 3; n <= 5; ++n) {
        const int k = n / 2;
        const auto C = PointSet::cube(n);
        auto r = refute_rsos(C, laurent_quadratic(n), k - 1, k);
        REQUIRE(r.status == CertStatus::Refuted);
        const auto& rc = *r.refutation;
        check_refutation_exactly(C, laurent_quadratic(n), rc);
        CHECK(rc.dim_hi == hilbert_function(C, k));
        CHECK(rc.dim_lo == hilbert_function(C, k - 1));
        if (rc.all_weights_clear_tau) {
            CHECK(rc.m_plus >= rc.dim_hi);
            CHECK(rc.m_minus >= rc.dim_lo);
        }
    }
}

TEST_CASE("random nonnegative quadratics are rsos at the mainbound degree") {
    std::mt19937_64 rng(2024);
    int count = 0;
    for (int n : {3, 4, 5}) {
        const auto C = PointSet::cube(n);
        const int k = mainbound_k(C, 1).k;
        for (int t = 0; t < 7 && count < 20; ++t, ++count) {
            Poly q = testing_support::random_cube_poly(rng, n, 2, 6);
            auto vals = C.evaluate(q);
            const Rational mn = *std::min_element(vals.begin(), vals.end());
            const Poly p = q - Poly::constant(n, mn);
            auto r = is_rsos(C, p, k, k + 1);
            REQUIRE(r.status == CertStatus::Feasible);
            check_multiplier_exactly(C, p, *r.certificate);
        }
    }
    CHECK(count == 20);
}

TEST_CASE("no instance is both certified and refuted") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 12; ++t) {
        const int n = 3 + t % 2;
        const auto C = PointSet::cube(n);
        const Poly p = testing_support::random_cube_poly(rng, n, 2, 5);
        const int d1 = t % 2, d2 = d1 + 1;
        auto a = is_rsos(C, p, d1, d2);
        auto b = refute_rsos(C, p, d1, d2);
        CHECK_FALSE((a.status == CertStatus::Feasible && b.status == CertStatus::Refuted));
        if (b.status == CertStatus::Refuted) check_refutation_exactly(C, p, *b.refutation);
        if (a.status == CertStatus::Feasible) check_multiplier_exactly(C, p, *a.certificate);
    }
}

TEST_CASE("interior multipliers") {
    const auto C5 = PointSet::cube(5);
    const Poly f = laurent_quadratic(5);
    const Poly pos = f + Poly::constant(5, 1);
    CHECK(interior_multiplier_degree(C5, pos) == 2);
    CHECK(interior_multiplier_degree(C5, f) == 3);
    const Rational eps(1, 10000);

    auto a = interior_multiplier(C5, pos, 2, eps, true);
    REQUIRE(a.status == CertStatus::Feasible);
    check_multiplier_exactly(C5, pos, *a.certificate);
    CHECK(a.certificate->h_gram.min_eigenvalue >= 1e-4);
    CHECK(a.certificate->ph_gram.min_eigenvalue >= 1e-4);

    auto b = interior_multiplier(C5, f, 3, eps, false);
    REQUIRE(b.status == CertStatus::Feasible);
    check_multiplier_exactly(C5, f, *b.certificate);
    CHECK(b.certificate->h_gram.min_eigenvalue >= 1e-4);

    auto c = interior_multiplier(C5, Poly::constant(5, 1), 0, eps, true);
    REQUIRE(c.status == CertStatus::Feasible);
    CHECK(c.certificate->h_gram.gram == RatMatrix::identity(1));

    CHECK_THROWS_AS(interior_multiplier(C5, Poly(5), 1, eps, false), Error);
}

TEST_CASE("reduced block basis") {
    for (int n = 2; n <= 9; ++n)
        for (int d = 0; d <= n; ++d) {
            const auto rb = reduced_block_basis(n, d);
            std::size_t total = 0;
            for (std::size_t b = 0; b < rb.ks.size(); ++b) {
                const int k = rb.ks[b];
                CHECK(rb.phi[b].size() == static_cast<std::size_t>(std::min(d - k, n - 2 * k) + 1));
                total += rb.phi[b].size() * Integer(binomial(n, k) - (k > 0 ? binomial(n, k - 1) : Integer(0))).get_ui();
                // orthogonality for the weights C(n,L) s_k(L)
                for (std::size_t i = 0; i < rb.phi[b].size(); ++i)
                    for (std::size_t j = 0; j < i; ++j) {
                        Rational s = 0;
                        for (int L = 0; L <= n; ++L)
                            s += Rational(binomial(n, L)) * rb.s[b][static_cast<std::size_t>(L)] *
                                 rb.phi[b][i][static_cast<std::size_t>(L)] * rb.phi[b][j][static_cast<std::size_t>(L)];
                        CHECK(s == 0);
                    }
            }
            CHECK(total == hilbert_function(PointSet::cube(n), d));
        }
}

TEST_CASE("symmetric reduction agrees with the unreduced problem") {
    int agree = 0;
    for (int n = 2; n <= 5; ++n) {
        const int k = n / 2;
        std::vector<std::tuple<Poly, int, int>> cases = {
            {laurent_quadratic(n), k, k + 1},
            {laurent_quadratic(n) + Poly::constant(n, 1), k, k + 1},
            {Poly::constant(n, 3), 1, 1},
        };
        if (k >= 1) cases.emplace_back(laurent_quadratic(n), k - 1, k);
        for (const auto& [f, d1, d2] : cases) {
            auto r = symmetric_rsos(n, f, d1, d2, SymmetricMode::Certify);
            REQUIRE(r.unreduced_status.has_value());
            CHECK(r.status != CertStatus::Undetermined);
            CHECK(r.status == *r.unreduced_status);
            if (r.status == *r.unreduced_status) ++agree;
            if (r.certificate) {
                const auto lv = level_values(f);
                Rational total = 0;
                for (int L = 0; L <= n; ++L) {
                    CHECK(lv[static_cast<std::size_t>(L)] * r.certificate->h_levels[static_cast<std::size_t>(L)] ==
                          r.certificate->g_levels[static_cast<std::size_t>(L)]);
                    total += Rational(binomial(n, L)) * r.certificate->h_levels[static_cast<std::size_t>(L)];
                }
                CHECK(total == Rational(Integer(1) << n));
            }
        }
    }
    CHECK(agree >= 15);
}

TEST_CASE("reduced refutations lift to unreduced refutations") {
    for (int n = 3; n <= 6; ++n) {
        const int k = n / 2;
        const Poly f = laurent_quadratic(n);
        auto r = symmetric_rsos(n, f, k - 1, k, SymmetricMode::Refute);
        REQUIRE(r.status == CertStatus::Refuted);
        const auto C = PointSet::cube(n);
        RefutationCertificate rc;
        rc.d1 = k - 1;
        rc.d2 = k;
        rc.margin = r.refutation->margin;
        QuotientBasis b1 = quotient_basis(C, k - 1), b2 = quotient_basis(C, k);
        rc.moment_hi = RatMatrix(b2.dim(), b2.dim());
        rc.moment_lo = RatMatrix(b1.dim(), b1.dim());
        const auto pv = C.evaluate(f);
        for (std::size_t v = 0; v < C.size(); ++v) {
            const Rational w = r.refutation->level_weights[static_cast<std::size_t>(std::popcount(v))];
            rc.weights.push_back(w);
            const auto r1 = b1.eval_row(v), r2 = b2.eval_row(v);
            for (std::size_t i = 0; i < r2.size(); ++i)
                for (std::size_t j = 0; j < r2.size(); ++j) rc.moment_hi(i, j) += w * r2[i] * r2[j];
            for (std::size_t i = 0; i < r1.size(); ++i)
                for (std::size_t j = 0; j < r1.size(); ++j) rc.moment_lo(i, j) += w * pv[v] * r1[i] * r1[j];
        }
        check_refutation_exactly(C, f, rc);
    }
}

TEST_CASE("symmetric examples") {
    auto one = symmetric_rsos(4, Poly::constant(4, 1), 1, 2, SymmetricMode::Certify);
    REQUIRE(one.status == CertStatus::Feasible);
    CHECK(psd_check(one.certificate->q_h[0]).rank == 1);
    for (std::size_t b = 1; b < one.certificate->q_h.size(); ++b) CHECK(psd_check(one.certificate->q_h[b]).rank == 0);

    const Poly x1 = Poly::variable(4, 0);
    CHECK_THROWS_AS(symmetric_rsos(4, x1, 1, 2, SymmetricMode::Certify), Error);

    auto r9 = symmetric_rsos(9, laurent_quadratic(9), 3, 4, SymmetricMode::Refute);
    REQUIRE(r9.status == CertStatus::Refuted);
    CHECK(r9.refutation->margin > 0);
    for (auto s : r9.problem.block_sizes_hi) CHECK(s <= 7);
}

TEST_CASE("lower bound region") {
    auto a = rsos_lower_bound_region(9, laurent_quadratic(9), 4);
    REQUIRE(a.applicable);
    CHECK(a.d1_max == 3);
    CHECK(a.d2_max == 4);
    CHECK(a.sos_degree_max == 4);
    CHECK(a.ell_order == 1);

    const Poly ell = Poly::constant(6, 3) - Poly::coordinate_sum(6);
    auto b = rsos_lower_bound_region(6, ell.cube_mul(ell), 3);
    CHECK_FALSE(b.applicable);
    CHECK(b.failed_hypothesis.find("not odd") != std::string::npos);

    const Poly s8 = Poly::coordinate_sum(8);
    auto c = rsos_lower_bound_region(8, ((s8 - Poly::constant(8, 3)) * (s8 - Poly::constant(8, 4))).cube_reduced(), 3);
    REQUIRE(c.applicable);
    CHECK(c.d1_max == 3);
    CHECK(c.d2_max == 3);

    CHECK_FALSE(rsos_lower_bound_region(4, Poly::variable(4, 0), 2).applicable);
}

TEST_CASE("Laurent quadratic values") {
    CHECK(level_values(laurent_quadratic(2)) == std::vector<Rational>{2, 0, 0});
    CHECK(level_values(laurent_quadratic(5)) == std::vector<Rational>{6, 2, 0, 0, 2, 6});
    for (int n = 1; n <= 12; ++n) {
        const Poly f = laurent_quadratic(n);
        const int k = n / 2;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
            const Rational v = f.evaluate_cube(m);
            const int s = std::popcount(m);
            CHECK(v >= 0);
            CHECK((v == 0) == (s == k || s == k + 1));
        }
    }
}

TEST_CASE("maxcut identity") {
    auto a = maxcut_deficit(3, {1, 1, 0});
    CHECK(a.q_value == 0);
    CHECK(a.cut_value == 2);
    auto b = maxcut_deficit(3, {0, 0, 0});
    CHECK(b.q_value == 2);
    CHECK(b.cut_value == 0);
    auto c = maxcut_deficit(5, {1, 0, 1, 0, 0});
    CHECK(c.q_value == 0);
    CHECK(c.cut_value == 6);
    for (int n = 1; n <= 11; n += 2) {
        const long k = n / 2;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
            auto r = maxcut_deficit(n, PointSet::cube_point(n, m));
            const long s = std::popcount(m);
            CHECK(r.q_value == Rational(k * (k + 1) - s * (n - s)));
        }
    }
    try {
        maxcut_deficit(4, {0, 0, 0, 0});
        FAIL("expected RequiresOddN");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::RequiresOddN);
    }
}

TEST_CASE("ambient SOS examples") {
    const Poly x = Poly::variable(1, 0);
    auto a = is_sos_ambient(x * x, 1);
    CHECK(a.status == CertStatus::Feasible);
    CHECK(a.exact);
    auto b = is_sos_ambient((x * x - x).pow(2), 2);
    CHECK(b.status == CertStatus::Feasible);
    auto c = is_sos_ambient(x * x - Poly::constant(1, 1), 1);
    CHECK(c.status != CertStatus::Feasible);
    CHECK_THROWS_AS(is_sos_ambient(x.pow(3), 1), Error);
}

TEST_CASE("ambient SOS with a family of Gram matrices") {
    const Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    const Poly one = Poly::constant(2, 1);
    // x^2 y^2 can come from the diagonal or from the (x^2, y^2) entry
    const Poly p = x.pow(4) + x * x * y * y + y.pow(4) + one;
    auto a = is_sos_ambient(p, 2);
    REQUIRE(a.status == CertStatus::Feasible);
    CHECK(a.exact);
    Poly back(2);
    for (std::size_t i = 0; i < a.monomials.size(); ++i)
        for (std::size_t j = 0; j < a.monomials.size(); ++j)
            back.add_term(a.monomials[i] * a.monomials[j], a.gram(i, j));
    CHECK(back == p);
    // Motzkin polynomial: nonnegative but not a sum of squares
    const Poly motzkin = x.pow(4) * y * y + x * x * y.pow(4) - Poly::constant(2, 3) * x * x * y * y + one;
    CHECK(is_sos_ambient(motzkin, 3).status != CertStatus::Feasible);
}

TEST_CASE("cube penalty and perturbed cubes") {
    for (int n = 1; n <= 6; ++n) {
        const Poly r = cube_penalty(n);
        CHECK(r.degree() == 4);
        const auto cube = PointSet::cube(n);
        for (const auto& v : cube.points()) CHECK(r.evaluate(v) == 0);
    }
    auto z = perturbed_cube(2, {0, 0});
    CHECK(z.points() == PointSet::cube(2).points());
    auto p = perturbed_cube(2, {Rational(1, 100), 0});
    CHECK(p.size() == 4);
    CHECK(p.contains({Rational(1, 100), 0}));
    CHECK(p.contains({Rational(101, 100), 0}));
    CHECK(p.contains({Rational(1, 100), 1}));
    CHECK(p.contains({Rational(101, 100), 1}));
    CHECK_THROWS_AS(perturbed_cube(2, {0}), Error);
}
