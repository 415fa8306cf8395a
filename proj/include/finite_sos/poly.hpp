#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "finite_sos/rational.hpp"

namespace finite_sos {

using Point = std::vector<Rational>;

/// Exponent vector. Ordered graded-lexicographically: total degree first,
/// then exponent vectors compared lexicographically, so 1 < x2 < x1.
struct Monomial {
    std::vector<int> exponents;

    Monomial() = default;
    explicit Monomial(std::vector<int> e) : exponents(std::move(e)) {}
    static Monomial one(int n) { return Monomial(std::vector<int>(static_cast<std::size_t>(n), 0)); }
    static Monomial variable(int n, int i);
    /// Squarefree monomial with support given by the bits of `mask` (bit i is x_{i+1}).
    static Monomial from_mask(int n, std::uint64_t mask);

    int n() const { return static_cast<int>(exponents.size()); }
    int degree() const;
    bool squarefree() const;
    bool divides(const Monomial& other) const;
    std::uint64_t support_mask() const;
    Monomial operator*(const Monomial& other) const;
    Rational evaluate(const Point& v) const;

    std::strong_ordering operator<=>(const Monomial& other) const;
    bool operator==(const Monomial& other) const = default;
};

/// Sparse polynomial with exact rational coefficients; zero coefficients are never stored.
class Poly {
public:
    using Terms = std::map<Monomial, Rational>;

    Poly() = default;
    explicit Poly(int n) : n_(n) {}
    static Poly constant(int n, const Rational& c);
    static Poly variable(int n, int i);  // x_{i+1}, 0-based index
    static Poly monomial(const Monomial& m, const Rational& c = 1);
    /// Sum of all variables.
    static Poly coordinate_sum(int n);

    int n() const { return n_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int degree() const;  // -1 for the zero polynomial
    Rational coefficient(const Monomial& m) const;

    void add_term(const Monomial& m, const Rational& c);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rational& c) const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly pow(int e) const;

    /// Replaces every x_i^e (e >= 1) by x_i: the representative on {0,1}^n.
    Poly cube_reduced() const;
    /// Product reduced modulo x_i^2 = x_i.
    Poly cube_mul(const Poly& o) const;
    bool is_cube_reduced() const;

    Rational evaluate(const Point& v) const;
    /// Value at the cube point whose coordinates are the bits of `mask`.
    Rational evaluate_cube(std::uint64_t mask) const;

    bool operator==(const Poly& o) const = default;

    /// Human-readable form such as "x1*x2 - 1/2*x3 + 1".
    std::string str() const;

private:
    int n_ = 0;
    Terms terms_;
};

inline Poly operator*(const Rational& c, const Poly& p) { return p * c; }

}  // namespace finite_sos
