#include "finite_sos/poly.hpp"

#include <algorithm>
#include <numeric>

#include "finite_sos/errors.hpp"

namespace finite_sos {

Monomial Monomial::variable(int n, int i) {
    Monomial m = one(n);
    m.exponents.at(static_cast<std::size_t>(i)) = 1;
    return m;
}

Monomial Monomial::from_mask(int n, std::uint64_t mask) {
    Monomial m = one(n);
    for (int i = 0; i < n; ++i)
        if (mask >> i & 1U) m.exponents[static_cast<std::size_t>(i)] = 1;
    return m;
}

int Monomial::degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

bool Monomial::squarefree() const {
    return std::all_of(exponents.begin(), exponents.end(), [](int e) { return e <= 1; });
}

bool Monomial::divides(const Monomial& other) const {
    for (std::size_t i = 0; i < exponents.size(); ++i)
        if (exponents[i] > other.exponents[i]) return false;
    return true;
}

std::uint64_t Monomial::support_mask() const {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < exponents.size(); ++i)
        if (exponents[i] > 0) mask |= std::uint64_t{1} << i;
    return mask;
}

Monomial Monomial::operator*(const Monomial& other) const {
    if (n() != other.n()) throw Error(ErrorKind::InvalidArgument, "monomial dimension mismatch");
    Monomial out(exponents);
    for (std::size_t i = 0; i < exponents.size(); ++i) out.exponents[i] += other.exponents[i];
    return out;
}

Rational Monomial::evaluate(const Point& v) const {
    Rational out = 1;
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        for (int e = 0; e < exponents[i]; ++e) out *= v[i];
        if (out == 0) break;
    }
    return out;
}

std::strong_ordering Monomial::operator<=>(const Monomial& other) const {
    if (auto c = degree() <=> other.degree(); c != 0) return c;
    return exponents <=> other.exponents;
}

Poly Poly::constant(int n, const Rational& c) {
    Poly p(n);
    p.add_term(Monomial::one(n), c);
    return p;
}

Poly Poly::variable(int n, int i) { return monomial(Monomial::variable(n, i)); }

Poly Poly::monomial(const Monomial& m, const Rational& c) {
    Poly p(m.n());
    p.add_term(m, c);
    return p;
}

Poly Poly::coordinate_sum(int n) {
    Poly p(n);
    for (int i = 0; i < n; ++i) p.add_term(Monomial::variable(n, i), 1);
    return p;
}

int Poly::degree() const {
    int d = -1;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
}

Rational Poly::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (m.n() != n_) throw Error(ErrorKind::InvalidArgument, "monomial dimension mismatch");
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::operator+(const Poly& o) const {
    Poly out(*this);
    out += o;
    return out;
}

Poly Poly::operator-(const Poly& o) const {
    Poly out(*this);
    out -= o;
    return out;
}

Poly Poly::operator-() const { return *this * Rational(-1); }

Poly& Poly::operator+=(const Poly& o) {
    if (o.n_ != n_) throw Error(ErrorKind::InvalidArgument, "polynomial dimension mismatch");
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.n_ != n_) throw Error(ErrorKind::InvalidArgument, "polynomial dimension mismatch");
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
}

Poly Poly::operator*(const Poly& o) const {
    if (o.n_ != n_) throw Error(ErrorKind::InvalidArgument, "polynomial dimension mismatch");
    Poly out(n_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) out.add_term(m1 * m2, c1 * c2);
    return out;
}

Poly Poly::operator*(const Rational& c) const {
    Poly out(n_);
    if (c == 0) return out;
    out.terms_ = terms_;
    for (auto& [m, x] : out.terms_) x *= c;
    return out;
}

Poly Poly::pow(int e) const {
    Poly out = constant(n_, 1);
    for (int i = 0; i < e; ++i) out = out * *this;
    return out;
}

Poly Poly::cube_reduced() const {
    Poly out(n_);
    for (const auto& [m, c] : terms_) {
        Monomial r(m.exponents);
        for (auto& e : r.exponents) e = std::min(e, 1);
        out.add_term(r, c);
    }
    return out;
}

Poly Poly::cube_mul(const Poly& o) const {
    if (o.n_ != n_) throw Error(ErrorKind::InvalidArgument, "polynomial dimension mismatch");
    Poly out(n_);
    for (const auto& [m1, c1] : terms_)
        for (const auto& [m2, c2] : o.terms_) {
            Monomial r(m1.exponents);
            for (std::size_t i = 0; i < r.exponents.size(); ++i)
                r.exponents[i] = std::min(1, r.exponents[i] + m2.exponents[i]);
            out.add_term(r, c1 * c2);
        }
    return out;
}

bool Poly::is_cube_reduced() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) { return t.first.squarefree(); });
}

Rational Poly::evaluate(const Point& v) const {
    if (static_cast<int>(v.size()) != n_) throw Error(ErrorKind::InvalidArgument, "point dimension mismatch");
    Rational out = 0;
    for (const auto& [m, c] : terms_) out += c * m.evaluate(v);
    return out;
}

Rational Poly::evaluate_cube(std::uint64_t mask) const {
    Rational out = 0;
    for (const auto& [m, c] : terms_)
        if ((m.support_mask() & ~mask) == 0) out += c;
    return out;
}

std::string Poly::str() const {
    if (terms_.empty()) return "0";
    std::string out;
    // highest degree first reads naturally
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = abs(c);
        if (out.empty()) {
            if (c < 0) out += "-";
        } else {
            out += c < 0 ? " - " : " + ";
        }
        std::string mono;
        for (int i = 0; i < m.n(); ++i) {
            int e = m.exponents[static_cast<std::size_t>(i)];
            if (e == 0) continue;
            if (!mono.empty()) mono += "*";
            mono += "x" + std::to_string(i + 1);
            if (e > 1) mono += "^" + std::to_string(e);
        }
        if (mono.empty()) {
            out += a.get_str();
        } else {
            if (a != 1) out += a.get_str() + "*";
            out += mono;
        }
    }
    return out;
}

}  // namespace finite_sos
