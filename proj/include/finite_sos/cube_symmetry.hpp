#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "finite_sos/linalg.hpp"
#include "finite_sos/poly.hpp"

namespace finite_sos {

/// Partition (n-k, k); k = 0 stands for the one-row partition (n).
struct TwoRowShape {
    int n = 0;
    int k = 0;
};

/// Two-row filling of {1..n}; columns are (row1[j], row2[j]) for j < k.
struct Tableau {
    TwoRowShape shape;
    std::vector<int> row1;
    std::vector<int> row2;

    bool is_valid() const;
    bool is_standard() const;
    /// Bracket notation, e.g. [[1,3,4],[2]].
    std::string bracket() const;
};

/// Standard tableaux of shape (n-k, k), ordered lexicographically by row2.
std::vector<Tableau> standard_tableaux(int n, int k);

/// Formal combination of tabloids, each identified by its second row (a k-subset).
class TabloidSum {
public:
    using Key = std::vector<int>;

    void add(Key row2, const Rational& c);
    const std::map<Key, Rational>& terms() const { return terms_; }
    /// Image under the map sending the tabloid with second row m to x^m.
    Poly to_poly(int n) const;

private:
    std::map<Key, Rational> terms_;
};

/// e_T: signed sum of tabloids over the column group of T.
TabloidSum polytabloid(const Tableau& T);
Poly polytabloid_poly(const Tableau& T);

using BlockKey = std::pair<int, int>;  // (k, i)

/// Blocks H_{ki} = l^i * H_{k0} of R[C]_{<=d}, with l = t - sum x_j.
struct IsotypicBasis {
    int n = 0;
    int degree_cap = 0;
    Rational level_param;
    std::map<BlockKey, std::vector<Poly>> blocks;

    Poly ell() const;
    std::size_t total_dim() const;
};

IsotypicBasis isotypic_basis(int n, int d, const Rational& t);

struct DecompCoords {
    std::map<BlockKey, RatVector> coords;
};

/// Exact coordinates of f (as a function on {0,1}^n) in the isotypic basis.
DecompCoords decompose(const Poly& f, const IsotypicBasis& basis);
Poly reassemble(const DecompCoords& coords, const IsotypicBasis& basis);

/// Least i with a nonzero coordinate in some block (k, i): the order to which
/// l = t - sum x_j properly divides f.
int ell_order(const Poly& f, const Rational& t, int d);

struct VanishingResult {
    bool vanishes = false;
    bool lemma_applies = false;  // vanishes, f != 0 and deg f <= t_level <= n - deg f
    std::optional<int> order;    // ell_order when the lemma applies
};

/// Whether f vanishes on the level {sum x = t_level}; when the lemma applies,
/// also checks that l = t_level - sum x properly divides f and throws
/// InternalConsistency otherwise.
VanishingResult vanishing_check(const Poly& f, int t_level);

/// Average of f over each level, written in the level indicators.
Poly symmetrize(const Poly& f);
bool is_symmetric(const Poly& f);
/// Per-level values of a function on {0,1}^n given by a symmetric polynomial.
std::vector<Rational> level_values(const Poly& f);
/// Mean of f over each level; f need not be symmetric.
std::vector<Rational> level_averages(const Poly& f);

Poly level_indicator(int n, int t_level);

/// s_k on each level: the diagonal of the reproducing kernel of H_{k0} under
/// the counting inner product on {0,1}^n.
struct InvariantKernel {
    int n = 0;
    int k = 0;
    std::vector<Rational> values;
};

/// Gram-inverse sandwich over the polytabloid basis for small n, the
/// Johnson-scheme closed form otherwise.
InvariantKernel invariant_kernel(int n, int k);
InvariantKernel invariant_kernel_gram(int n, int k);
InvariantKernel invariant_kernel_closed_form(int n, int k);

}  // namespace finite_sos
