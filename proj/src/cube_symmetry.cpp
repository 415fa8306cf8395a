#include "finite_sos/cube_symmetry.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>

#include "finite_sos/errors.hpp"

namespace finite_sos {

namespace {

// Squarefree monomials of degree <= d as bitmasks, in graded order.
std::vector<std::uint64_t> masks_up_to(int n, int d) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
        if (std::popcount(m) <= d) out.push_back(m);
    std::stable_sort(out.begin(), out.end(),
                     [](std::uint64_t a, std::uint64_t b) { return std::popcount(a) < std::popcount(b); });
    return out;
}

void check_cube_dimension(int n) {
    if (n < 0 || n > 24) throw Error(ErrorKind::InvalidArgument, "cube dimension out of range");
}

Rational rat(const Integer& num, const Integer& den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
}

}  // namespace

bool Tableau::is_valid() const {
    const int n = shape.n, k = shape.k;
    if (k < 0 || 2 * k > n) return false;
    if (static_cast<int>(row1.size()) != n - k || static_cast<int>(row2.size()) != k) return false;
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (const auto* row : {&row1, &row2})
        for (int x : *row) {
            if (x < 1 || x > n || seen[static_cast<std::size_t>(x)]) return false;
            seen[static_cast<std::size_t>(x)] = true;
        }
    return true;
}

bool Tableau::is_standard() const {
    if (!is_valid()) return false;
    if (!std::is_sorted(row1.begin(), row1.end()) || !std::is_sorted(row2.begin(), row2.end())) return false;
    for (std::size_t j = 0; j < row2.size(); ++j)
        if (row2[j] <= row1[j]) return false;
    return true;
}

std::string Tableau::bracket() const {
    auto row = [](const std::vector<int>& r) {
        std::string s = "[";
        for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
        return s + "]";
    };
    return "[" + row(row1) + "," + row(row2) + "]";
}

std::vector<Tableau> standard_tableaux(int n, int k) {
    if (n < 0 || k < 0 || 2 * k > n)
        throw Error(ErrorKind::InvalidShape, "shape (" + std::to_string(n - k) + "," + std::to_string(k) + ") is not a partition");
    std::vector<Tableau> out;
    std::vector<int> row2(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) row2[static_cast<std::size_t>(j)] = j + 1;
    while (true) {
        Tableau T{{n, k}, {}, row2};
        for (int x = 1; x <= n; ++x)
            if (!std::binary_search(row2.begin(), row2.end(), x)) T.row1.push_back(x);
        if (T.is_standard()) out.push_back(std::move(T));
        // next k-subset in lexicographic order
        int j = k - 1;
        while (j >= 0 && row2[static_cast<std::size_t>(j)] == n - k + j + 1) --j;
        if (j < 0) break;
        ++row2[static_cast<std::size_t>(j)];
        for (int i = j + 1; i < k; ++i) row2[static_cast<std::size_t>(i)] = row2[static_cast<std::size_t>(i) - 1] + 1;
    }
    return out;
}

void TabloidSum::add(Key row2, const Rational& c) {
    std::sort(row2.begin(), row2.end());
    auto [it, inserted] = terms_.try_emplace(std::move(row2), c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly TabloidSum::to_poly(int n) const {
    Poly p(n);
    for (const auto& [key, c] : terms_) {
        Monomial m = Monomial::one(n);
        for (int x : key) m.exponents.at(static_cast<std::size_t>(x) - 1) = 1;
        p.add_term(m, c);
    }
    return p;
}

TabloidSum polytabloid(const Tableau& T) {
    if (!T.is_valid()) throw Error(ErrorKind::InvalidShape, "invalid tableau " + T.bracket());
    const std::size_t k = T.row2.size();
    TabloidSum out;
    // each column transposition swaps row1[j] and row2[j]
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
        TabloidSum::Key key;
        for (std::size_t j = 0; j < k; ++j) key.push_back((s >> j & 1U) ? T.row1[j] : T.row2[j]);
        out.add(std::move(key), std::popcount(s) % 2 ? -1 : 1);
    }
    return out;
}

Poly polytabloid_poly(const Tableau& T) { return polytabloid(T).to_poly(T.shape.n); }

Poly IsotypicBasis::ell() const { return Poly::constant(n, level_param) - Poly::coordinate_sum(n); }

std::size_t IsotypicBasis::total_dim() const {
    std::size_t s = 0;
    for (const auto& [key, polys] : blocks) s += polys.size();
    return s;
}

IsotypicBasis isotypic_basis(int n, int d, const Rational& t) {
    check_cube_dimension(n);
    if (d < 0 || d > n) throw Error(ErrorKind::InvalidArgument, "degree cap must lie in 0..n");
    IsotypicBasis basis{n, d, t, {}};
    const Poly ell = basis.ell();
    for (int k = 0; 2 * k <= n && k <= d; ++k) {
        std::vector<Poly> current;
        for (const auto& T : standard_tableaux(n, k)) current.push_back(polytabloid_poly(T));
        for (int i = 0; i <= n - 2 * k && k + i <= d; ++i) {
            if (i > 0)
                for (auto& p : current) p = ell.cube_mul(p);
            basis.blocks[{k, i}] = current;
        }
    }
    return basis;
}

DecompCoords decompose(const Poly& f, const IsotypicBasis& basis) {
    const Poly g = f.cube_reduced();
    if (g.n() != basis.n) throw Error(ErrorKind::InvalidArgument, "dimension mismatch");
    if (g.degree() > basis.degree_cap)
        throw Error(ErrorKind::DegreeCapExceeded, "degree " + std::to_string(g.degree()) + " exceeds cap " +
                                                      std::to_string(basis.degree_cap));
    const auto masks = masks_up_to(basis.n, basis.degree_cap);
    std::map<std::uint64_t, std::size_t> row_of;
    for (std::size_t r = 0; r < masks.size(); ++r) row_of[masks[r]] = r;
    RatMatrix a(masks.size(), basis.total_dim());
    std::size_t col = 0;
    for (const auto& [key, polys] : basis.blocks)
        for (const auto& p : polys) {
            for (const auto& [m, c] : p.terms()) a(row_of.at(m.support_mask()), col) = c;
            ++col;
        }
    RatVector rhs(masks.size());
    for (const auto& [m, c] : g.terms()) rhs[row_of.at(m.support_mask())] = c;
    auto x = solve(a, rhs);
    if (!x) throw Error(ErrorKind::InternalConsistency, "isotypic basis does not span");
    DecompCoords out;
    col = 0;
    for (const auto& [key, polys] : basis.blocks) {
        RatVector v(x->begin() + static_cast<std::ptrdiff_t>(col),
                    x->begin() + static_cast<std::ptrdiff_t>(col + polys.size()));
        out.coords[key] = std::move(v);
        col += polys.size();
    }
    return out;
}

Poly reassemble(const DecompCoords& coords, const IsotypicBasis& basis) {
    Poly p(basis.n);
    for (const auto& [key, v] : coords.coords) {
        const auto& polys = basis.blocks.at(key);
        for (std::size_t j = 0; j < v.size(); ++j)
            if (v[j] != 0) p += polys[j] * v[j];
    }
    return p;
}

int ell_order(const Poly& f, const Rational& t, int d) {
    if (f.cube_reduced().is_zero()) throw Error(ErrorKind::ZeroPolynomial, "ell_order of the zero function");
    DecompCoords dc = decompose(f, isotypic_basis(f.n(), d, t));
    int best = -1;
    for (const auto& [key, v] : dc.coords)
        if (std::any_of(v.begin(), v.end(), [](const Rational& x) { return x != 0; }))
            if (best < 0 || key.second < best) best = key.second;
    return best;
}

VanishingResult vanishing_check(const Poly& f, int t_level) {
    const int n = f.n();
    check_cube_dimension(n);
    if (t_level < 0 || t_level > n) throw Error(ErrorKind::InvalidArgument, "level out of range");
    const Poly g = f.cube_reduced();
    VanishingResult res;
    res.vanishes = true;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n) && res.vanishes; ++m)
        if (std::popcount(m) == t_level && g.evaluate_cube(m) != 0) res.vanishes = false;
    const int deg = g.degree();
    if (res.vanishes && !g.is_zero() && deg <= t_level && t_level <= n - deg) {
        res.lemma_applies = true;
        res.order = ell_order(g, t_level, deg);
        if (*res.order < 1)
            throw Error(ErrorKind::InternalConsistency,
                        "function vanishing on level " + std::to_string(t_level) + " is not divisible by l");
    }
    return res;
}

std::vector<Rational> level_averages(const Poly& f) {
    const int n = f.n();
    const Poly g = f.cube_reduced();
    std::vector<Rational> out(static_cast<std::size_t>(n) + 1);
    for (int L = 0; L <= n; ++L) {
        Rational s = 0;
        for (const auto& [m, c] : g.terms()) {
            int j = m.degree();
            if (j <= L) s += c * rat(binomial(n - j, L - j), 1);
        }
        out[static_cast<std::size_t>(L)] = s / binomial(n, L);
    }
    return out;
}

Poly symmetrize(const Poly& f) {
    const int n = f.n();
    check_cube_dimension(n);
    const auto a = level_averages(f);
    // coefficient of any x^m with |m| = j in sum_L a_L chi_L
    std::vector<Rational> b(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        for (int L = 0; L <= j; ++L) {
            Rational term = a[static_cast<std::size_t>(L)] * binomial(j, L);
            if ((j - L) % 2) term = -term;
            b[static_cast<std::size_t>(j)] += term;
        }
    Poly out(n);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
        if (b[static_cast<std::size_t>(std::popcount(m))] != 0)
            out.add_term(Monomial::from_mask(n, m), b[static_cast<std::size_t>(std::popcount(m))]);
    return out;
}

bool is_symmetric(const Poly& f) {
    const int n = f.n();
    const Poly g = f.cube_reduced();
    std::vector<std::optional<Rational>> coeff(static_cast<std::size_t>(n) + 1);
    std::vector<long> count(static_cast<std::size_t>(n) + 1, 0);
    for (const auto& [m, c] : g.terms()) {
        auto j = static_cast<std::size_t>(m.degree());
        if (coeff[j] && *coeff[j] != c) return false;
        coeff[j] = c;
        ++count[j];
    }
    for (int j = 0; j <= n; ++j)
        if (count[static_cast<std::size_t>(j)] != 0 && binomial(n, j) != count[static_cast<std::size_t>(j)])
            return false;
    return true;
}

std::vector<Rational> level_values(const Poly& f) {
    if (!is_symmetric(f)) throw Error(ErrorKind::NotSymmetric, "polynomial is not invariant under coordinate permutations");
    const int n = f.n();
    const Poly g = f.cube_reduced();
    std::vector<Rational> out;
    for (int L = 0; L <= n; ++L) out.push_back(g.evaluate_cube((std::uint64_t{1} << L) - 1));
    return out;
}

Poly level_indicator(int n, int t_level) {
    check_cube_dimension(n);
    if (t_level < 0 || t_level > n) throw Error(ErrorKind::InvalidArgument, "level out of range");
    Poly out(n);
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        int j = std::popcount(m);
        if (j < t_level) continue;
        Rational c(binomial(j, t_level));
        if ((j - t_level) % 2) c = -c;
        out.add_term(Monomial::from_mask(n, m), c);
    }
    if (out.degree() != n) throw Error(ErrorKind::InternalConsistency, "level indicator has degree below n");
    return out;
}

InvariantKernel invariant_kernel_gram(int n, int k) {
    if (k < 0 || 2 * k > n) throw Error(ErrorKind::InvalidShape, "k out of range");
    check_cube_dimension(n);
    const auto tableaux = standard_tableaux(n, k);
    const std::size_t dim = tableaux.size();
    auto eval = [&](std::uint64_t v) {
        std::vector<long> e(dim);
        for (std::size_t a = 0; a < dim; ++a) {
            long prod = 1;
            for (std::size_t j = 0; j < static_cast<std::size_t>(k) && prod != 0; ++j)
                prod *= static_cast<long>(v >> (tableaux[a].row2[j] - 1) & 1U) -
                        static_cast<long>(v >> (tableaux[a].row1[j] - 1) & 1U);
            e[a] = prod;
        }
        return e;
    };
    std::vector<long> gram(dim * dim, 0);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
        auto e = eval(v);
        for (std::size_t a = 0; a < dim; ++a)
            if (e[a] != 0)
                for (std::size_t b = 0; b < dim; ++b) gram[a * dim + b] += e[a] * e[b];
    }
    RatMatrix g(dim, dim);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = 0; b < dim; ++b) g(a, b) = gram[a * dim + b];
    auto inv = inverse(g);
    if (!inv) throw Error(ErrorKind::InternalConsistency, "polytabloid Gram matrix is singular");
    auto sandwich = [&](std::uint64_t v) {
        auto e = eval(v);
        RatVector ev(e.begin(), e.end());
        return dot(ev, *inv * ev);
    };
    InvariantKernel out{n, k, {}};
    for (int L = 0; L <= n; ++L) {
        std::uint64_t low = (std::uint64_t{1} << L) - 1;
        std::uint64_t high = low << (n - L);
        Rational s = sandwich(low);
        if (sandwich(high) != s) throw Error(ErrorKind::InternalConsistency, "kernel diagonal is not level-constant");
        out.values.push_back(s);
    }
    return out;
}

InvariantKernel invariant_kernel_closed_form(int n, int k) {
    if (k < 0 || 2 * k > n) throw Error(ErrorKind::InvalidShape, "k out of range");
    // Johnson scheme J(n,k): A_j relates k-sets meeting in k-j elements.
    auto b = [&](long j) { return Rational((k - j) * (n - k - j)); };
    auto c = [](long j) { return Rational(j * j); };
    auto a = [&](long j) -> Rational { return Rational(static_cast<long>(k) * (n - k)) - b(j) - c(j); };
    auto theta = [&](long i) { return Rational((k - i) * (n - k - i) - i); };
    const auto K = static_cast<std::size_t>(k);
    // primitive idempotent of the eigenvalue theta_k, in the basis A_0..A_k
    RatVector E(K + 1);
    E[0] = 1;
    for (long i = 0; i < k; ++i) {
        RatVector y(K + 1);
        for (std::size_t j = 0; j <= K; ++j) {
            if (E[j] == 0) continue;
            const long jj = static_cast<long>(j);
            if (j >= 1) y[j - 1] += E[j] * b(jj - 1);
            y[j] += E[j] * a(jj);
            if (j + 1 <= K) y[j + 1] += E[j] * c(jj + 1);
        }
        for (std::size_t j = 0; j <= K; ++j) E[j] = (y[j] - theta(i) * E[j]) / (theta(k) - theta(i));
    }
    std::vector<Rational> s(static_cast<std::size_t>(n) + 1);
    for (int L = k; L <= n; ++L)
        for (int j = 0; j <= k; ++j)
            s[static_cast<std::size_t>(L)] += E[static_cast<std::size_t>(j)] * binomial(L, k) * binomial(k, j) *
                                              binomial(L - k, j);
    Rational total = 0;
    for (int L = 0; L <= n; ++L) total += s[static_cast<std::size_t>(L)] * binomial(n, L);
    const Rational dim(binomial(n, k) - binomial(n, k - 1));
    InvariantKernel out{n, k, {}};
    for (auto& x : s) out.values.push_back(x * dim / total);
    return out;
}

InvariantKernel invariant_kernel(int n, int k) {
    return n <= 10 ? invariant_kernel_gram(n, k) : invariant_kernel_closed_form(n, k);
}

}  // namespace finite_sos
