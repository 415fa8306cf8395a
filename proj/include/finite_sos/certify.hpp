#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "finite_sos/cube_symmetry.hpp"
#include "finite_sos/linalg.hpp"
#include "finite_sos/point_set.hpp"
#include "finite_sos/quotient.hpp"
#include "finite_sos/sdp.hpp"

namespace finite_sos {

enum class CertStatus { Feasible, Refuted, Undetermined };
const char* to_string(CertStatus s);

struct SearchOptions {
    double tol = 1e-9;
    long max_iter = 200000;
    std::uint64_t seed = 0;
    Integer den_bound = 1000000;
    /// Minimum Gram eigenvalue that operationalizes interior membership.
    Rational interior_eps = Rational(1, 10000);
    /// Zero threshold for sign counts of refutation weights.
    double tau = 1e-8;
};

/// f(v) = pi(v)^T G pi(v) on X. `gram` is exact when `exact` holds,
/// otherwise it is the rounded floating solution.
struct GramCertificate {
    QuotientBasis basis;
    RatMatrix gram;
    std::vector<Rational> residuals;
    bool exact = false;
    double min_eigenvalue = 0;
};

struct MultiplierCertificate {
    GramCertificate h_gram;   // h on the degree-d1 basis
    GramCertificate ph_gram;  // p*h on the degree-d2 basis
    Rational normalization;   // sum_v h(v)
};

/// Point weights mu separating p * Sigma_{<=2 d1} from Sigma_{<=2 d2}:
/// moment_hi - margin*D_hi >= 0 and -moment_lo - margin*D_lo >= 0, with mu
/// scaled to total variation 1 and D the moment matrices of the uniform
/// probability on X.
struct RefutationCertificate {
    int d1 = 0;
    int d2 = 0;
    std::vector<Rational> weights;  // aligned with the points of X
    RatMatrix moment_hi;
    RatMatrix moment_lo;
    Rational margin;            // exact, verified
    double solver_margin = 0;   // before rounding
    std::size_t m_plus = 0;
    std::size_t m_minus = 0;
    bool all_weights_clear_tau = false;
    bool signs_lemma_holds = false;  // m+ >= dim hi and m- >= dim lo
    std::size_t dim_hi = 0;
    std::size_t dim_lo = 0;
    bool exact = false;
    std::string method;
};

struct SosResult {
    CertStatus status = CertStatus::Undetermined;
    std::optional<GramCertificate> gram;
    std::optional<RefutationCertificate> refutation;
    std::string note;
};

struct RsosResult {
    CertStatus status = CertStatus::Undetermined;
    std::optional<MultiplierCertificate> certificate;
    std::optional<RefutationCertificate> refutation;
    std::string note;
};

SosResult is_k_sos(const PointSet& X, const Poly& f, int k, const SearchOptions& opts = {});
RsosResult is_rsos(const PointSet& X, const Poly& p, int d1, int d2, const SearchOptions& opts = {});
RsosResult refute_rsos(const PointSet& X, const Poly& p, int d1, int d2, const SearchOptions& opts = {});

/// rsos search with Gram floors H >= eps I (and G >= eps I when `strict_product`).
RsosResult interior_multiplier(const PointSet& X, const Poly& p, int d, const Rational& eps, bool strict_product,
                               const SearchOptions& opts = {});
/// Degree choice of the two interior-multiplier theorems for a quadratic p on
/// a cube subset: floor(n/2) when p > 0 on X, floor(n/2) + 1 otherwise.
int interior_multiplier_degree(const PointSet& X, const Poly& p);

// ---- symmetry reduction on {0,1}^n ----

/// Levels 0..n; blocks k = 0..min(d, n/2) of size m_k = min(d - k, n - 2k) + 1
/// in a basis of polynomials in the level that is orthogonal for the weights
/// C(n,L) s_k(L).
struct ReducedBlockBasis {
    int n = 0;
    int d = 0;
    std::vector<int> ks;
    std::vector<std::vector<std::vector<Rational>>> phi;  // phi[b][i][L]
    std::vector<std::vector<Rational>> s;                 // s[b][L] = s_k(L)
};

ReducedBlockBasis reduced_block_basis(int n, int d);

struct SymmetricReducedProblem {
    int n = 0;
    int d1 = 0;
    int d2 = 0;
    std::vector<InvariantKernel> kernels;
    std::vector<Rational> level_targets;  // p on levels
    std::vector<std::size_t> block_sizes_lo;
    std::vector<std::size_t> block_sizes_hi;
};

struct ReducedMultiplier {
    std::vector<RatMatrix> q_h;  // per k block, in the reduced basis
    std::vector<RatMatrix> q_g;
    std::vector<Rational> h_levels;
    std::vector<Rational> g_levels;
    /// Sizes of the SDP blocks actually solved, after facial reduction.
    std::vector<std::size_t> solved_block_sizes;
    bool exact = false;
};

struct ReducedRefutation {
    std::vector<Rational> level_weights;  // mu on every point of level L, total variation 1
    Rational margin;
    double solver_margin = 0;
    bool exact = false;
    std::size_t m_plus = 0;   // over cube points, weighted by level sizes
    std::size_t m_minus = 0;
    bool all_weights_clear_tau = false;
};

enum class SymmetricMode { Certify, Refute };

struct SymmetricResult {
    CertStatus status = CertStatus::Undetermined;
    SymmetricReducedProblem problem;
    std::optional<ReducedMultiplier> certificate;
    std::optional<ReducedRefutation> refutation;
    /// Unreduced cross-check (certify mode, n <= 5).
    std::optional<CertStatus> unreduced_status;
    std::string note;
};

SymmetricResult symmetric_rsos(int n, const Poly& f, int d1, int d2, SymmetricMode mode, const SearchOptions& opts = {});

struct LowerBoundRegion {
    bool applicable = false;
    std::string failed_hypothesis;
    int d1_max = -1;  // region: d1 <= d1_max, d2 <= d2_max
    int d2_max = -1;
    int sos_degree_max = -1;  // f is not d-sos for d <= this
    int ell_order = -1;
};

LowerBoundRegion rsos_lower_bound_region(int n, const Poly& f, int t);

// ---- named constructions ----

/// (sum x - k)(sum x - k - 1) with k = floor(n/2), reduced on the cube.
Poly laurent_quadratic(int n);
/// Same polynomial without cube reduction (ambient degree 2).
Poly laurent_quadratic_ambient(int n);

struct MaxcutValue {
    Rational q_value;
    long cut_value = 0;
};
MaxcutValue maxcut_deficit(int n, const Point& v);

/// Gram certificate over all monomials of degree <= k in the polynomial ring.
struct AmbientSosResult {
    CertStatus status = CertStatus::Undetermined;
    std::vector<Monomial> monomials;
    RatMatrix gram;
    bool exact = false;
    std::string note;
};
AmbientSosResult is_sos_ambient(const Poly& p, int k, const SearchOptions& opts = {});

struct GlobalQuartic {
    Poly p;
    Rational eps;
    Rational lambda;
    int k = 0;
    std::optional<RefutationCertificate> cube_refutation;
    /// Degree-4 Gram search for p itself.
    AmbientSosResult ambient;
    /// Gram certificate of multiplier * p in degree 6, multiplier = 1 + sum x_i^2.
    Poly multiplier;
    AmbientSosResult nonnegativity;
};
/// p = f + eps + lambda * sum (x_i^2 - x_i)^2 with lambda the smallest power of
/// two for which (1 + |x|^2) p gets a Gram certificate; throws SearchFailed.
GlobalQuartic global_quartic(int n, const SearchOptions& opts = {});
Poly cube_penalty(int n);

PointSet perturbed_cube(int n, const std::vector<Rational>& alpha);

}  // namespace finite_sos
