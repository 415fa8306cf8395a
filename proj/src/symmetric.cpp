#include <algorithm>
#include <cmath>

#include "certify_internal.hpp"
#include "finite_sos/certify.hpp"
#include "finite_sos/errors.hpp"

namespace finite_sos {

namespace {

Rational weighted_dot(const std::vector<Rational>& a, const std::vector<Rational>& b, const std::vector<Rational>& w) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += w[i] * a[i] * b[i];
    return s;
}

RatVector column_at(const std::vector<std::vector<Rational>>& phi, std::size_t level) {
    RatVector out;
    for (const auto& f : phi) out.push_back(f[level]);
    return out;
}

RatMatrix outer(const RatVector& a, const Rational& scale) {
    RatMatrix m(a.size(), a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) m(i, j) = scale * a[i] * a[j];
    return m;
}

Integer two_pow(int n) {
    Integer z = 1;
    mpz_mul_2exp(z.get_mpz_t(), z.get_mpz_t(), static_cast<mp_bitcnt_t>(n));
    return z;
}

// Blocks of the reduced moment matrix: one LMI block per k, with
// coefficient sign(-p) for the lower side.
void add_moment_blocks(LmiProblem& lp, const ReducedBlockBasis& rb, const std::vector<Rational>* p,
                       const std::string& tag) {
    const int n = rb.n;
    const Rational inv(1, two_pow(n));
    for (std::size_t b = 0; b < rb.ks.size(); ++b) {
        const std::size_t m = rb.phi[b].size();
        LmiProblem::Block blk{tag + std::to_string(rb.ks[b]), {}, RatMatrix(m, m)};
        for (int L = 0; L <= n; ++L) {
            const Rational w = Rational(binomial(n, L)) * rb.s[b][static_cast<std::size_t>(L)];
            const RatVector phi = column_at(rb.phi[b], static_cast<std::size_t>(L));
            const Rational sign = p ? Rational(-(*p)[static_cast<std::size_t>(L)]) : Rational(1);
            blk.coeffs.push_back(outer(phi, w * sign));
            blk.reference = blk.reference + outer(phi, w * inv);
        }
        lp.blocks.push_back(std::move(blk));
    }
}

}  // namespace

ReducedBlockBasis reduced_block_basis(int n, int d) {
    if (n < 1 || d < 0) throw Error(ErrorKind::InvalidArgument, "reduced basis needs n >= 1 and d >= 0");
    ReducedBlockBasis rb;
    rb.n = n;
    rb.d = d;
    const auto levels = static_cast<std::size_t>(n + 1);
    for (int k = 0; k <= std::min(d, n / 2); ++k) {
        const InvariantKernel ker = invariant_kernel(n, k);
        std::vector<Rational> w(levels);
        for (std::size_t L = 0; L < levels; ++L) {
            if (ker.values[L] < 0) throw Error(ErrorKind::InternalConsistency, "negative invariant kernel value");
            w[L] = Rational(binomial(n, static_cast<long>(L))) * ker.values[L];
        }
        const int m = std::min(d - k, n - 2 * k) + 1;
        std::vector<std::vector<Rational>> phi;
        std::vector<Rational> norms;
        for (int i = 0; i < m; ++i) {
            std::vector<Rational> v(levels);
            for (std::size_t L = 0; L < levels; ++L) {
                Rational x = 1;
                for (int e = 0; e < i; ++e) x *= static_cast<long>(L);
                v[L] = x;
            }
            for (std::size_t j = 0; j < phi.size(); ++j) {
                const Rational c = weighted_dot(v, phi[j], w) / norms[j];
                for (std::size_t L = 0; L < levels; ++L) v[L] -= c * phi[j][L];
            }
            Rational nn = weighted_dot(v, v, w);
            if (nn == 0) throw Error(ErrorKind::InternalConsistency, "degenerate level weights in reduced basis");
            // power-of-two scaling towards unit norm for the uniform measure
            const long e = std::lround(0.5 * std::log2(to_double(nn / Rational(two_pow(n)))));
            Rational scale = e >= 0 ? Rational(1, two_pow(static_cast<int>(e))) : Rational(two_pow(static_cast<int>(-e)));
            for (auto& x : v) x *= scale;
            nn *= scale * scale;
            phi.push_back(std::move(v));
            norms.push_back(nn);
        }
        rb.ks.push_back(k);
        rb.phi.push_back(std::move(phi));
        rb.s.push_back(ker.values);
    }
    return rb;
}

namespace {

std::optional<ReducedRefutation> reduced_refutation(const SymmetricReducedProblem& sp, const SearchOptions& opts,
                                                    std::string& message) {
    const int n = sp.n;
    const ReducedBlockBasis hi = reduced_block_basis(n, sp.d2);
    const ReducedBlockBasis lo = reduced_block_basis(n, sp.d1);
    LmiProblem lp;
    lp.num_vars = static_cast<std::size_t>(n + 1);
    add_moment_blocks(lp, hi, nullptr, "hi");
    add_moment_blocks(lp, lo, &sp.level_targets, "lo");
    auto lr = maximize_lmi_margin<Float50>(lp);
    message = lr.message;
    if (!lr.success) return std::nullopt;
    std::vector<Rational> sizes;
    for (int L = 0; L <= n; ++L) sizes.emplace_back(binomial(n, L));
    auto rounded = detail::round_lmi_weights<Float50>(lp, lr.y, sizes, opts.den_bound,
                                                      Integer("1" + std::string(45, '0')), 200);
    if (!rounded) {
        message = "level weights did not survive exact rounding";
        return std::nullopt;
    }
    ReducedRefutation rr;
    rr.level_weights = std::move(rounded->first);
    rr.margin = rounded->second;
    rr.solver_margin = static_cast<double>(lr.margin);
    rr.exact = true;
    rr.all_weights_clear_tau = true;
    for (int L = 0; L <= n; ++L) {
        const double w = to_double(rr.level_weights[static_cast<std::size_t>(L)]);
        const auto cnt = static_cast<std::size_t>(binomial(n, L).get_ui());
        if (w > opts.tau) rr.m_plus += cnt;
        else if (w < -opts.tau) rr.m_minus += cnt;
        if (std::abs(w) <= opts.tau) rr.all_weights_clear_tau = false;
    }
    return rr;
}

struct ReducedBlockVars {
    std::size_t kb = 0;       // index into the reduced basis
    RatMatrix face;           // N: reduced coordinates -> face coordinates
    std::size_t sdp_block = 0;
};

std::optional<ReducedMultiplier> reduced_certificate(const SymmetricReducedProblem& sp, const SearchOptions& opts,
                                                     std::string& message) {
    const int n = sp.n;
    const auto levels = static_cast<std::size_t>(n + 1);
    const ReducedBlockBasis rh = reduced_block_basis(n, sp.d1);
    const ReducedBlockBasis rg = reduced_block_basis(n, sp.d2);
    const auto& p = sp.level_targets;

    if (p[0] > 0 && std::all_of(p.begin(), p.end(), [&](const Rational& q) { return q == p[0]; })) {
        // h = 1 through the constant polynomial of block k = 0
        ReducedMultiplier rm;
        const Rational q = 1 / (rh.s[0][0] * rh.phi[0][0][0] * rh.phi[0][0][0]);
        const Rational qg = p[0] / (rg.s[0][0] * rg.phi[0][0][0] * rg.phi[0][0][0]);
        for (std::size_t b = 0; b < rh.ks.size(); ++b) rm.q_h.emplace_back(rh.phi[b].size(), rh.phi[b].size());
        for (std::size_t b = 0; b < rg.ks.size(); ++b) rm.q_g.emplace_back(rg.phi[b].size(), rg.phi[b].size());
        rm.q_h[0](0, 0) = q;
        rm.q_g[0](0, 0) = qg;
        for (std::size_t L = 0; L < levels; ++L) {
            rm.h_levels.push_back(rh.s[0][L] * rh.phi[0][0][L] * rh.phi[0][0][L] * q);
            rm.g_levels.push_back(rg.s[0][L] * rg.phi[0][0][L] * rg.phi[0][0][L] * qg);
            if (rm.h_levels[L] != 1 || rm.g_levels[L] != p[L])
                throw Error(ErrorKind::InternalConsistency, "constant multiplier does not reproduce p");
        }
        rm.exact = true;
        return rm;
    }

    SdpProblem prob;
    auto make_vars = [&](const ReducedBlockBasis& rb, bool strict, const char* tag) {
        std::vector<ReducedBlockVars> out;
        for (std::size_t b = 0; b < rb.ks.size(); ++b) {
            std::vector<RatVector> kill;
            for (std::size_t L = 0; L < levels; ++L) {
                const bool zero_here = strict ? p[L] <= 0 : p[L] < 0;
                if (zero_here && rb.s[b][L] != 0) kill.push_back(column_at(rb.phi[b], L));
            }
            RatMatrix face = detail::face_basis(kill, rb.phi[b].size());
            ReducedBlockVars v{b, face, 0};
            if (face.cols() > 0)
                v.sdp_block = prob.add_block(std::string(tag) + std::to_string(rb.ks[b]), face.cols());
            out.push_back(std::move(v));
        }
        return out;
    };
    const auto hv = make_vars(rh, false, "h");
    const auto gv = make_vars(rg, true, "g");
    if (prob.blocks.empty() ||
        std::none_of(hv.begin(), hv.end(), [](const ReducedBlockVars& v) { return v.face.cols() > 0; })) {
        message = "every invariant multiplier of this degree vanishes on the cube";
        return std::nullopt;
    }
    auto add_level = [&](SdpConstraint& c, const std::vector<ReducedBlockVars>& vars, const ReducedBlockBasis& rb,
                         std::size_t L, const Rational& scale) {
        for (const auto& v : vars) {
            if (v.face.cols() == 0 || rb.s[v.kb][L] == 0) continue;
            const RatVector w = v.face.transpose() * column_at(rb.phi[v.kb], L);
            SdpProblem::add_quadratic_form(c, v.sdp_block, w, scale * rb.s[v.kb][L]);
        }
    };
    for (std::size_t L = 0; L < levels; ++L) {
        if (p[L] <= 0) continue;
        SdpConstraint c;
        add_level(c, hv, rh, L, p[L]);
        add_level(c, gv, rg, L, -1);
        c.rhs = 0;
        if (!c.terms.empty()) prob.constraints.push_back(std::move(c));
    }
    SdpConstraint norm;
    for (std::size_t L = 0; L < levels; ++L) add_level(norm, hv, rh, L, Rational(binomial(n, static_cast<long>(L))));
    norm.rhs = Rational(two_pow(n));
    prob.constraints.push_back(std::move(norm));

    std::vector<std::optional<Rational>> fixed(prob.blocks.size());
    auto found = detail::search_primal(prob, fixed, opts);
    if (!found.cert) {
        message = found.note;
        return std::nullopt;
    }
    ReducedMultiplier rm;
    for (const auto& b : prob.blocks) rm.solved_block_sizes.push_back(b.dim);
    auto rebuild = [&](const std::vector<ReducedBlockVars>& vars, const ReducedBlockBasis& rb,
                       std::vector<RatMatrix>& qs, std::vector<Rational>& values) {
        values.assign(levels, Rational(0));
        for (const auto& v : vars) {
            const std::size_t m = rb.phi[v.kb].size();
            RatMatrix q = v.face.cols() > 0 ? detail::congruence(v.face, found.cert->block_matrices[v.sdp_block])
                                            : RatMatrix(m, m);
            for (std::size_t L = 0; L < levels; ++L) {
                const RatVector phi = column_at(rb.phi[v.kb], L);
                values[L] += rb.s[v.kb][L] * dot(phi, q * phi);
            }
            qs.push_back(std::move(q));
        }
    };
    rebuild(hv, rh, rm.q_h, rm.h_levels);
    rebuild(gv, rg, rm.q_g, rm.g_levels);
    Rational total = 0;
    for (std::size_t L = 0; L < levels; ++L) {
        if (p[L] * rm.h_levels[L] != rm.g_levels[L])
            throw Error(ErrorKind::InternalConsistency, "reduced certificate violates p*h = g on a level");
        total += Rational(binomial(n, static_cast<long>(L))) * rm.h_levels[L];
    }
    if (total != Rational(two_pow(n)))
        throw Error(ErrorKind::InternalConsistency, "reduced certificate violates the normalization");
    rm.exact = true;
    return rm;
}

}  // namespace

SymmetricResult symmetric_rsos(int n, const Poly& f, int d1, int d2, SymmetricMode mode, const SearchOptions& opts) {
    if (d1 < 0 || d2 < 0) throw Error(ErrorKind::InvalidArgument, "degrees must be nonnegative");
    if (f.n() != n) throw Error(ErrorKind::InvalidArgument, "polynomial arity differs from n");
    if (!is_symmetric(f)) throw Error(ErrorKind::NotSymmetric, "f is not invariant under permutations");
    SymmetricResult res;
    auto& sp = res.problem;
    sp.n = n;
    sp.d1 = d1;
    sp.d2 = d2;
    for (int k = 0; k <= std::min(std::max(d1, d2), n / 2); ++k) sp.kernels.push_back(invariant_kernel(n, k));
    sp.level_targets = level_values(f);
    for (int k = 0; k <= std::min(d1, n / 2); ++k)
        sp.block_sizes_lo.push_back(static_cast<std::size_t>(std::min(d1 - k, n - 2 * k) + 1));
    for (int k = 0; k <= std::min(d2, n / 2); ++k)
        sp.block_sizes_hi.push_back(static_cast<std::size_t>(std::min(d2 - k, n - 2 * k) + 1));

    std::string message;
    if (mode == SymmetricMode::Certify) {
        res.certificate = reduced_certificate(sp, opts, message);
        if (res.certificate) {
            res.status = CertStatus::Feasible;
        } else {
            res.note = message;
            res.refutation = reduced_refutation(sp, opts, message);
            if (res.refutation) res.status = CertStatus::Refuted;
            else res.note += "; " + message;
        }
        if (n <= 5) res.unreduced_status = is_rsos(PointSet::cube(n), f, d1, d2, opts).status;
    } else {
        res.refutation = reduced_refutation(sp, opts, message);
        if (res.refutation) res.status = CertStatus::Refuted;
        else res.note = message;
    }
    return res;
}

}  // namespace finite_sos
