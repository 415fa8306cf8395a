#include "doctest.h"

#include <algorithm>
#include <numeric>

#include "finite_sos/errors.hpp"
#include "finite_sos/quotient.hpp"
#include "test_support.hpp"

using namespace finite_sos;
using testing_support::random_cube_poly;
using testing_support::random_lowest_blocks;
using testing_support::small_rational;

namespace {

Poly x(int n, int i) { return Poly::variable(n, i - 1); }

// Counts standard fillings among all n! placements of 1..n into the two rows.
long brute_force_standard_count(int n, int k) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 1);
    long count = 0;
    do {
        std::vector<int> r1(perm.begin(), perm.begin() + (n - k)), r2(perm.begin() + (n - k), perm.end());
        bool ok = std::is_sorted(r1.begin(), r1.end()) && std::is_sorted(r2.begin(), r2.end());
        for (int j = 0; j < k && ok; ++j) ok = r1[static_cast<std::size_t>(j)] < r2[static_cast<std::size_t>(j)];
        count += ok;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return count;
}

std::vector<Rational> cube_values(const Poly& p) {
    std::vector<Rational> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << p.n()); ++m) out.push_back(p.evaluate_cube(m));
    return out;
}

}  // namespace

TEST_CASE("standard tableaux counts against brute force") {
    CHECK(standard_tableaux(4, 2).size() == 2);
    CHECK(standard_tableaux(6, 2).size() == 9);
    for (int n = 0; n <= 7; ++n) {
        CHECK(standard_tableaux(n, 0).size() == 1);
        for (int k = 0; 2 * k <= n; ++k) {
            auto ts = standard_tableaux(n, k);
            CHECK(static_cast<long>(ts.size()) == brute_force_standard_count(n, k));
            CHECK(Integer(static_cast<long>(ts.size())) == binomial(n, k) - binomial(n, k - 1));
            CHECK(std::is_sorted(ts.begin(), ts.end(), [](auto& a, auto& b) { return a.row2 < b.row2; }));
        }
    }
    CHECK_THROWS_AS(standard_tableaux(4, 3), Error);
}

TEST_CASE("multiplicities add up to the cube size") {
    for (int n = 1; n <= 12; ++n) {
        Integer total = 0;
        for (int k = 0; 2 * k <= n; ++k) total += (n + 1 - 2 * k) * (binomial(n, k) - binomial(n, k - 1));
        CHECK(total == Integer(1) << n);
    }
}

TEST_CASE("polytabloid examples") {
    Tableau fig{{9, 2}, {1, 2, 3, 4, 5, 6, 7}, {8, 9}};
    Poly expected = x(9, 8) * x(9, 9) - x(9, 1) * x(9, 9) - x(9, 8) * x(9, 2) + x(9, 1) * x(9, 2);
    CHECK(polytabloid_poly(fig) == expected);
    CHECK(fig.is_standard());
    Tableau small{{4, 1}, {1, 3, 4}, {2}};
    CHECK(polytabloid_poly(small) == x(4, 2) - x(4, 1));
    CHECK(small.bracket() == "[[1,3,4],[2]]");
    TabloidSum single;
    single.add({6, 7, 8}, 1);
    CHECK(single.to_poly(8) == x(8, 6) * x(8, 7) * x(8, 8));
    // column group of size 2^k, all terms of degree k
    Tableau t3{{7, 3}, {1, 2, 3, 7}, {4, 5, 6}};
    CHECK(polytabloid(t3).terms().size() == 8);
    CHECK(polytabloid_poly(t3).degree() == 3);
}

TEST_CASE("isotypic basis shape") {
    auto b = isotypic_basis(2, 2, 0);
    std::vector<BlockKey> keys;
    for (auto& [key, polys] : b.blocks) {
        keys.push_back(key);
        CHECK(polys.size() == 1);
    }
    CHECK(keys == std::vector<BlockKey>{{0, 0}, {0, 1}, {0, 2}, {1, 0}});
    auto b9 = isotypic_basis(9, 4, 3);
    std::vector<int> per_k(5, 0);
    for (auto& [key, polys] : b9.blocks) ++per_k[static_cast<std::size_t>(key.first)];
    CHECK(per_k == std::vector<int>{5, 4, 3, 2, 1});
    for (int n = 1; n <= 7; ++n) {
        auto full = isotypic_basis(n, n, 1);
        for (int k = 0; 2 * k <= n; ++k) {
            int copies = 0;
            for (auto& [key, polys] : full.blocks) copies += key.first == k;
            CHECK(copies == n + 1 - 2 * k);
        }
        for (int d = 0; d <= n; ++d) CHECK(isotypic_basis(n, d, 0).total_dim() == hilbert_function(PointSet::cube(n), d));
    }
}

TEST_CASE("full isotypic evaluation matrix is invertible") {
    for (int n = 1; n <= 6; ++n) {
        auto basis = isotypic_basis(n, n, Rational(1, 3));
        RatMatrix ev(std::size_t{1} << n, basis.total_dim());
        std::size_t col = 0;
        for (auto& [key, polys] : basis.blocks)
            for (auto& p : polys) {
                auto vals = cube_values(p);
                for (std::size_t r = 0; r < vals.size(); ++r) ev(r, col) = vals[r];
                ++col;
                CHECK(p.is_cube_reduced());
            }
        CHECK(rank(ev) == ev.cols());
        CHECK(has_full_column_rank(ev));
    }
}

TEST_CASE("decompose examples") {
    auto b = isotypic_basis(3, 2, 1);
    auto dc = decompose(Poly::constant(3, 5), b);
    for (auto& [key, v] : dc.coords)
        for (auto& c : v) CHECK(c == (key == BlockKey{0, 0} ? 5 : 0));
    for (Rational t : {Rational(0), Rational(2), Rational(-7, 3)}) {
        auto b2 = isotypic_basis(2, 2, t);
        auto d2 = decompose(Poly::coordinate_sum(2), b2);
        CHECK(d2.coords.at({0, 0}) == RatVector{t});
        CHECK(d2.coords.at({0, 1}) == RatVector{Rational(-1)});
        CHECK(d2.coords.at({0, 2}) == RatVector{Rational(0)});
        CHECK(d2.coords.at({1, 0}) == RatVector{Rational(0)});
    }
    auto b4 = isotypic_basis(4, 2, 2);
    for (auto& T : standard_tableaux(4, 2)) {
        auto dc4 = decompose(polytabloid_poly(T), b4);
        for (auto& [key, v] : dc4.coords)
            if (key != BlockKey{2, 0})
                for (auto& c : v) CHECK(c == 0);
    }
    CHECK_THROWS_AS(decompose(x(3, 1) * x(3, 2) * x(3, 3), b), Error);
}

TEST_CASE("decompose then reassemble is the identity") {
    std::mt19937_64 rng(21);
    for (int n = 1; n <= 6; ++n) {
        auto basis = isotypic_basis(n, n, small_rational(rng));
        for (int trial = 0; trial < 50; ++trial) {
            Poly f = random_cube_poly(rng, n, n);
            CHECK(reassemble(decompose(f, basis), basis) == f.cube_reduced());
        }
    }
}

TEST_CASE("ell_order examples and lowest blocks") {
    const int n = 6;
    const Rational t = 2;
    Poly s = Poly::coordinate_sum(n), one = Poly::constant(n, 1);
    Poly ell = Poly::constant(n, t) - s;
    CHECK(ell_order((s - one * t).cube_mul(s - one * (t + 1)), t, 2) == 1);
    CHECK(ell_order(ell.cube_mul(ell), t, 2) == 2);
    CHECK(ell_order(one, t, 0) == 0);
    CHECK_THROWS_AS(ell_order(Poly(n), t, 1), Error);
    std::mt19937_64 rng(4);
    auto basis = isotypic_basis(n, 3, t);
    for (int trial = 0; trial < 20; ++trial) {
        Poly f = random_lowest_blocks(rng, basis, 3);
        if (f.is_zero()) continue;
        CHECK(ell_order(f, t, 3) == 0);
    }
}

TEST_CASE("vanishing examples") {
    Poly ell = Poly::constant(5, 2) - Poly::coordinate_sum(5);
    auto r = vanishing_check(ell, 2);
    CHECK(r.vanishes);
    REQUIRE(r.order);
    CHECK(*r.order == 1);
    Tableau fig{{9, 2}, {1, 2, 3, 4, 5, 6, 7}, {8, 9}};
    Poly q = polytabloid_poly(fig);
    CHECK_FALSE(vanishing_check(q, 3).vanishes);
    CHECK(q.evaluate_cube(0b111000000) == 1);
    CHECK_FALSE(vanishing_check(x(4, 1) - x(4, 2), 2).vanishes);
}

TEST_CASE("functions in the lowest blocks do not vanish on middle levels") {
    std::mt19937_64 rng(8);
    int checked = 0;
    for (int n = 2; n <= 7; ++n)
        for (int d = 0; 2 * d <= n; ++d)
            for (int L = d; L <= n - d; ++L) {
                auto basis = isotypic_basis(n, d, L);
                // the level-evaluation map on the lowest blocks is injective
                std::vector<RatVector> cols;
                std::vector<std::uint64_t> level;
                for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
                    if (std::popcount(m) == L) level.push_back(m);
                for (auto& [key, polys] : basis.blocks)
                    if (key.second == 0)
                        for (auto& p : polys) {
                            RatVector c;
                            for (auto m : level) c.push_back(p.evaluate_cube(m));
                            cols.push_back(c);
                        }
                CHECK(rank(RatMatrix::from_columns(cols, level.size())) == cols.size());
                Poly f = random_lowest_blocks(rng, basis, d);
                if (!f.is_zero()) CHECK_FALSE(vanishing_check(f, L).vanishes);
                ++checked;
            }
    CHECK(checked > 30);
}

TEST_CASE("symmetrize") {
    Poly s = Poly::coordinate_sum(3);
    CHECK(symmetrize(x(3, 1)) == s * Rational(1, 3));
    CHECK(symmetrize(x(3, 1) * x(3, 2)) == (x(3, 1) * x(3, 2) + x(3, 1) * x(3, 3) + x(3, 2) * x(3, 3)) * Rational(1, 3));
    Poly sym = s.cube_mul(s) - s * 4 + Poly::constant(3, 1);
    CHECK(symmetrize(sym) == sym.cube_reduced());
    CHECK(is_symmetric(sym));
    CHECK_FALSE(is_symmetric(x(3, 1)));
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 2 + trial % 5;
        Poly f = random_cube_poly(rng, n, n);
        Poly g = symmetrize(f);
        CHECK(is_symmetric(g));
        CHECK(symmetrize(g) == g);
        CHECK((symmetrize(f) == f.cube_reduced()) == is_symmetric(f));
        // averages over each level are preserved
        CHECK(level_averages(g) == level_averages(f));
    }
}

TEST_CASE("level indicators") {
    CHECK(level_indicator(1, 1) == x(1, 1));
    CHECK(level_indicator(2, 1) == x(2, 1) + x(2, 2) - x(2, 1) * x(2, 2) * 2);
    Poly one = Poly::constant(3, 1);
    CHECK(level_indicator(3, 0) == ((one - x(3, 1)) * (one - x(3, 2)) * (one - x(3, 3))));
    for (int n = 1; n <= 8; ++n)
        for (int L = 0; L <= n; ++L) {
            Poly chi = level_indicator(n, L);
            CHECK(chi.degree() == n);
            for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
                CHECK(chi.evaluate_cube(m) == (std::popcount(m) == L ? 1 : 0));
        }
}

TEST_CASE("invariant kernels") {
    for (int n = 1; n <= 9; ++n) {
        auto s0 = invariant_kernel(n, 0);
        for (auto& v : s0.values) CHECK(v == Rational(1, 1 << n));
    }
    CHECK(invariant_kernel(2, 1).values == std::vector<Rational>{0, Rational(1, 2), 0});
    // both routes agree; the closed form keeps the defining properties for larger n
    for (int n = 1; n <= 9; ++n)
        for (int k = 0; 2 * k <= n; ++k) CHECK(invariant_kernel_gram(n, k).values == invariant_kernel_closed_form(n, k).values);
    for (int n = 10; n <= 13; ++n)
        for (int k = 0; 2 * k <= n; ++k) {
            auto s = invariant_kernel_closed_form(n, k);
            Rational total = 0;
            for (int L = 0; L <= n; ++L) {
                CHECK(s.values[static_cast<std::size_t>(L)] >= 0);
                if (L < k || L > n - k) CHECK(s.values[static_cast<std::size_t>(L)] == 0);
                total += s.values[static_cast<std::size_t>(L)] * binomial(n, L);
            }
            CHECK(total == binomial(n, k) - binomial(n, k - 1));
        }
}
