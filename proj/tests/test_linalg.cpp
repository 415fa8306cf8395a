#include "doctest.h"

#include <random>

#include "finite_sos/linalg.hpp"
#include "finite_sos/rational.hpp"

using namespace finite_sos;

namespace {

RatMatrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
    RatMatrix m(rows.size(), rows.begin()->size());
    std::size_t i = 0;
    for (auto r : rows) {
        std::size_t j = 0;
        for (long x : r) m(i, j++) = x;
        ++i;
    }
    return m;
}

}  // namespace

TEST_CASE("parse_rational canonicalizes and rejects junk") {
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("-7") == -7);
    CHECK(to_string(parse_rational("10/5")) == "2");
    CHECK_THROWS(parse_rational("1/0"));
    CHECK_THROWS(parse_rational("1/-2"));
    CHECK_THROWS(parse_rational("0.5"));
    CHECK_THROWS(parse_rational(""));
}

TEST_CASE("best_rational finds continued-fraction approximants") {
    CHECK(best_rational(0.3333333333, Integer(1000)) == Rational(1, 3));
    CHECK(best_rational(3.14159265358979, Integer(1000)) == Rational(355, 113));
    CHECK(best_rational(-2.5, Integer(10)) == Rational(-5, 2));
    CHECK(best_rational(1.0000000001, Integer(1000000)) == 1);
}

TEST_CASE("rank, nullspace and solve") {
    RatMatrix a = from_rows({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
    CHECK(rank(a) == 2);
    RatMatrix ns = nullspace(a);
    REQUIRE(ns.cols() == 1);
    RatVector z = a * ns.column(0);
    for (auto& x : z) CHECK(x == 0);
    auto x = solve(a, RatVector{Rational(6), Rational(12), Rational(2)});
    REQUIRE(x);
    CHECK(a * *x == RatVector{Rational(6), Rational(12), Rational(2)});
    CHECK_FALSE(solve(a, RatVector{Rational(1), Rational(1), Rational(1)}));
}

TEST_CASE("inverse round trip on random integer matrices") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> dist(-5, 5);
    for (int trial = 0; trial < 20; ++trial) {
        RatMatrix a(5, 5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j) a(i, j) = dist(rng);
        auto inv = inverse(a);
        CHECK(inv.has_value() == (rank(a) == 5));
        if (inv) CHECK(a * *inv == RatMatrix::identity(5));
        CHECK(has_full_column_rank(a) == (rank(a) == 5));
    }
}

TEST_CASE("psd_check matches known matrices") {
    CHECK(psd_check(from_rows({{2, 1}, {1, 2}})).pd);
    auto r = psd_check(from_rows({{1, 1}, {1, 1}}));
    CHECK(r.psd);
    CHECK_FALSE(r.pd);
    CHECK(r.rank == 1);
    CHECK_FALSE(psd_check(from_rows({{1, 2}, {2, 1}})).psd);
    CHECK_FALSE(psd_check(from_rows({{0, 1}, {1, 0}})).psd);
    CHECK_FALSE(psd_check(from_rows({{1, 0}, {0, -1}})).psd);
    CHECK(psd_check(RatMatrix(3, 3)).psd);
}

TEST_CASE("psd_check agrees with Gram construction and sign flips") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dist(-3, 3);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 4, r = 1 + static_cast<std::size_t>(trial % 4);
        RatMatrix b(n, r);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < r; ++j) {
                b(i, j) = Rational(dist(rng), 1 + trial % 3);
                b(i, j).canonicalize();
            }
        RatMatrix g = b * b.transpose();
        auto rep = psd_check(g);
        CHECK(rep.psd);
        CHECK(rep.rank == rank(g));
        // pivots of the LDL^T factorization multiply to the determinant when PD
        if (rep.pd) {
            Rational prod = 1;
            for (auto& p : rep.pivots) prod *= p;
            CHECK(prod > 0);
        }
        if (rank(g) > 0) CHECK_FALSE(psd_check(g.scaled(-1)).psd);
    }
}

TEST_CASE("SemiEchelon tracks span membership") {
    SemiEchelon e(3);
    CHECK(e.try_add({Rational(1), Rational(1), Rational(0)}));
    CHECK(e.try_add({Rational(0), Rational(1), Rational(1)}));
    CHECK_FALSE(e.try_add({Rational(1), Rational(2), Rational(1)}));
    CHECK(e.in_span({Rational(2), Rational(0), Rational(-2)}));
    CHECK_FALSE(e.in_span({Rational(0), Rational(0), Rational(1)}));
    CHECK(e.rank() == 2);
}
