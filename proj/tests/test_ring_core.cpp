#include "doctest.h"

#include <random>
#include <set>

#include "finite_sos/errors.hpp"
#include "finite_sos/quotient.hpp"

using namespace finite_sos;

namespace {

Point pt(std::initializer_list<long> xs) {
    Point p;
    for (long x : xs) p.emplace_back(x);
    return p;
}

long cube_hilbert(int n, int t) {
    long s = 0;
    for (int i = 0; i <= std::min(t, n); ++i) s += binomial(n, i).get_si();
    return s;
}

PointSet random_points(std::mt19937_64& rng, int n, std::size_t count) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3);
    std::set<Point> seen;
    std::vector<Point> pts;
    while (pts.size() < count) {
        Point v;
        for (int i = 0; i < n; ++i) v.emplace_back(num(rng), den(rng)), v.back().canonicalize();
        if (seen.insert(v).second) pts.push_back(v);
    }
    return PointSet(n, pts);
}

Poly random_poly(std::mt19937_64& rng, int n, int max_deg) {
    std::uniform_int_distribution<int> coef(-5, 5), deg(0, max_deg), var(0, n - 1);
    Poly p(n);
    for (int term = 0; term < 6; ++term) {
        Monomial m = Monomial::one(n);
        int d = deg(rng);
        for (int j = 0; j < d; ++j) ++m.exponents[static_cast<std::size_t>(var(rng))];
        Rational c(coef(rng), 2);
        c.canonicalize();
        p.add_term(m, c);
    }
    return p;
}

}  // namespace

TEST_CASE("quotient basis on the square is 1, x2, x1") {
    QuotientBasis qb = quotient_basis(PointSet::cube(2), 1);
    REQUIRE(qb.dim() == 3);
    CHECK(qb.basis_monomials[0] == Monomial::one(2));
    CHECK(qb.basis_monomials[1] == Monomial::variable(2, 1));
    CHECK(qb.basis_monomials[2] == Monomial::variable(2, 0));
    CHECK(rank(qb.eval_matrix) == 3);
}

TEST_CASE("quotient basis of a single point is {1}") {
    PointSet one(2, {pt({3, -1})});
    for (int d = 0; d < 4; ++d) CHECK(quotient_basis(one, d).dim() == 1);
}

TEST_CASE("cube Hilbert function equals binomial sums for n <= 8") {
    for (int n = 1; n <= 8; ++n) {
        QuotientBuilder qb(PointSet::cube(n));
        for (int t = 0; t <= n + 1; ++t) CHECK(static_cast<long>(qb.hilbert(t)) == cube_hilbert(n, t));
    }
    CHECK(hilbert_function(PointSet::cube(5), 2) == 16);
    CHECK(hilbert_function(PointSet::cube(5), 3) == 26);
}

TEST_CASE("Hilbert regularity examples") {
    CHECK(hilbert_regularity(PointSet::cube(3)) == 3);
    CHECK(hilbert_regularity(PointSet(1, {pt({5})})) == 0);
    CHECK(hilbert_regularity(PointSet(2, {pt({0, 0}), pt({1, 1}), pt({2, 2})})) == 2);
}

TEST_CASE("duplicate points are rejected") {
    CHECK_THROWS_AS(PointSet(1, {pt({1}), pt({1})}), Error);
    try {
        PointSet(1, {pt({1}), pt({1})});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DuplicatePoint);
    }
}

TEST_CASE("Hilbert function properties on random point sets") {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 1 + trial % 3;
        PointSet X = random_points(rng, n, 3 + static_cast<std::size_t>(trial % 8));
        QuotientBuilder qb(X);
        std::size_t prev = 0;
        int h = qb.regularity();
        for (int t = 0; t <= h + 1; ++t) {
            std::size_t v = qb.hilbert(t);
            CHECK(v >= prev);
            CHECK(v <= X.size());
            CHECK(static_cast<long>(v) <= binomial(n + t, t).get_si());
            prev = v;
        }
        CHECK(qb.hilbert(h) == X.size());
        if (h > 0) CHECK(qb.hilbert(h - 1) < X.size());
    }
}

TEST_CASE("interpolators on small cubes") {
    PointSet c1 = PointSet::cube(1);
    CHECK(interpolator(c1, pt({1})).poly == Poly::variable(1, 0));
    CHECK(interpolator(c1, pt({0})).poly == Poly::constant(1, 1) - Poly::variable(1, 0));
    PointSet c2 = PointSet::cube(2);
    CHECK(interpolator(c2, pt({1, 1})).poly == Poly::variable(2, 0) * Poly::variable(2, 1));
    CHECK_THROWS_AS(interpolator(c2, pt({2, 0})), Error);
}

TEST_CASE("interpolator decomposition weights") {
    PointSet c2 = PointSet::cube(2);
    Poly p = Poly::coordinate_sum(2);
    auto dec = interpolator_decomposition(c2, p);
    // cube order is by bitmask: 00, 10, 01, 11
    REQUIRE(dec.size() == 4);
    CHECK(dec[0].first == 0);
    CHECK(dec[1].first == 1);
    CHECK(dec[2].first == 1);
    CHECK(dec[3].first == 2);
    for (auto& [w, d] : interpolator_decomposition(PointSet::cube(3), Poly::constant(3, 1))) CHECK(w == 1);
}

TEST_CASE("interpolator identity on random rational sets") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 15; ++trial) {
        int n = 1 + trial % 4;
        PointSet X = random_points(rng, n, 2 + static_cast<std::size_t>(rng() % 19));
        Poly p = random_poly(rng, n, 3);
        int h = hilbert_regularity(X);
        auto dec = interpolator_decomposition(X, p);
        for (const auto& v : X.points()) {
            Rational s = 0;
            for (auto& [w, d] : dec) {
                CHECK(d.poly.degree() <= h);
                Rational dv = d.poly.evaluate(v);
                s += w * dv * dv;
            }
            CHECK(s == p.evaluate(v));
        }
        for (auto& [w, d] : dec)
            for (const auto& v : X.points()) CHECK(d.poly.evaluate(v) == (v == d.point ? 1 : 0));
    }
}

TEST_CASE("mainbound_k examples") {
    CHECK(mainbound_k(PointSet::cube(5), 1).k == 2);
    CHECK(mainbound_k(PointSet::cube(5), 1).certified_degree == 3);
    CHECK(mainbound_k(PointSet::cube(4), 1).certified_degree == 3);
    CHECK(mainbound_k(PointSet(1, {pt({0})}), 0).k == 0);
    for (int n = 2; n <= 12; ++n) CHECK(mainbound_k(PointSet::cube(n), 1).certified_degree == n / 2 + 1);
}

TEST_CASE("Cayley-Bacharach identity") {
    for (int d = 0; d <= 3; ++d) {
        auto full = cayley_bacharach_defect(PointSet::cube(3), 3, d);
        CHECK(full.first == full.second);
        CHECK(full.first == 8 - cube_hilbert(3, d));
    }
    CHECK(cayley_bacharach_defect(PointSet::cube(3), 3, 3).first == 0);
    PointSet level1(3, {pt({1, 0, 0}), pt({0, 1, 0}), pt({0, 0, 1})});
    auto l1 = cayley_bacharach_defect(level1, 3, 1);
    CHECK(l1.first == l1.second);
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        int n = 1 + trial % 6;
        std::uint64_t total = std::uint64_t{1} << n;
        std::vector<Point> pts;
        for (std::uint64_t m = 0; m < total; ++m)
            if (rng() % 2) pts.push_back(PointSet::cube_point(n, m));
        if (pts.empty()) pts.push_back(PointSet::cube_point(n, 0));
        PointSet Xp(n, pts);
        for (int d = 0; d <= n; ++d) {
            auto [lhs, rhs] = cayley_bacharach_defect(Xp, n, d);
            CHECK(lhs == rhs);
        }
    }
    CHECK_THROWS_AS(cayley_bacharach_defect(PointSet(2, {pt({2, 0})}), 2, 1), Error);
}

TEST_CASE("restrict to subsets") {
    PointSet c1 = PointSet::cube(1);
    CHECK(restrict(Poly::variable(1, 0).pow(2), c1) == Poly::variable(1, 0));
    CHECK(restrict(Poly::constant(1, 7), c1) == Poly::constant(1, 7));
    PointSet single(2, {pt({2, 3})});
    Poly p = Poly::variable(2, 0) * Poly::variable(2, 1) + Poly::constant(2, 1);
    CHECK(restrict(p, single) == Poly::constant(2, 7));
}
