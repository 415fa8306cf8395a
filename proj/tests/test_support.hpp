#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <set>

#include "finite_sos/cube_symmetry.hpp"
#include "finite_sos/point_set.hpp"
#include "finite_sos/poly.hpp"

namespace testing_support {

using namespace finite_sos;

inline Rational small_rational(std::mt19937_64& rng, int num_range = 5, int den_max = 3) {
    std::uniform_int_distribution<int> num(-num_range, num_range), den(1, den_max);
    Rational q(num(rng), den(rng));
    q.canonicalize();
    return q;
}

/// Random squarefree polynomial of degree <= d on {0,1}^n.
inline Poly random_cube_poly(std::mt19937_64& rng, int n, int d, int terms = 8) {
    Poly p(n);
    std::uniform_int_distribution<int> var(0, n - 1), deg(0, d);
    for (int t = 0; t < terms; ++t) {
        std::uint64_t mask = 0;
        int target = deg(rng);
        while (std::popcount(mask) < target) mask |= std::uint64_t{1} << var(rng);
        p.add_term(Monomial::from_mask(n, mask), small_rational(rng));
    }
    return p;
}

/// Random element of the sum of the blocks (k, 0) for k <= d.
inline Poly random_lowest_blocks(std::mt19937_64& rng, const IsotypicBasis& basis, int d) {
    Poly p(basis.n);
    for (const auto& [key, polys] : basis.blocks)
        if (key.second == 0 && key.first <= d)
            for (const auto& q : polys) p += q * small_rational(rng);
    return p;
}

inline PointSet random_point_set(std::mt19937_64& rng, int n, std::size_t count) {
    std::set<Point> seen;
    std::vector<Point> pts;
    while (pts.size() < count) {
        Point v;
        for (int i = 0; i < n; ++i) v.push_back(small_rational(rng, 4, 3));
        if (seen.insert(v).second) pts.push_back(v);
    }
    return PointSet(n, pts);
}

inline Poly random_poly(std::mt19937_64& rng, int n, int max_deg, int terms = 6) {
    std::uniform_int_distribution<int> deg(0, max_deg), var(0, n - 1);
    Poly p(n);
    for (int t = 0; t < terms; ++t) {
        Monomial m = Monomial::one(n);
        int d = deg(rng);
        for (int j = 0; j < d; ++j) ++m.exponents[static_cast<std::size_t>(var(rng))];
        p.add_term(m, small_rational(rng));
    }
    return p;
}

}  // namespace testing_support
