#include "finite_sos/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Sparse>
#include "json.hpp"

#include "finite_sos/errors.hpp"

namespace finite_sos {

std::size_t SdpProblem::add_block(std::string name, std::size_t dim, std::optional<Rational> floor) {
    blocks.push_back({std::move(name), dim, std::move(floor)});
    return blocks.size() - 1;
}

void SdpProblem::add_quadratic_form(SdpConstraint& c, std::size_t block, const RatVector& w, const Rational& scale) {
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] == 0) continue;
        c.terms.push_back({block, i, i, scale * w[i] * w[i]});
        for (std::size_t j = i + 1; j < w.size(); ++j)
            if (w[j] != 0) c.terms.push_back({block, i, j, 2 * scale * w[i] * w[j]});
    }
}

void SdpProblem::validate() const {
    for (const auto& b : blocks)
        if (b.dim == 0) throw Error(ErrorKind::InvalidProblem, "block '" + b.name + "' has dimension 0");
    for (const auto& c : constraints)
        for (const auto& t : c.terms)
            if (t.block >= blocks.size() || t.row > t.col || t.col >= blocks[t.block].dim)
                throw Error(ErrorKind::InvalidProblem, "constraint entry out of range");
}

std::string SdpProblem::to_json() const {
    nlohmann::json j;
    j["blocks"] = nlohmann::json::array();
    for (const auto& b : blocks) {
        nlohmann::json jb{{"name", b.name}, {"dim", b.dim}};
        if (b.floor) jb["floor"] = to_string(*b.floor);
        j["blocks"].push_back(jb);
    }
    j["constraints"] = nlohmann::json::array();
    for (const auto& c : constraints) {
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : c.terms) terms.push_back({t.block, t.row, t.col, to_string(t.coeff)});
        j["constraints"].push_back({{"terms", terms}, {"rhs", to_string(c.rhs)}});
    }
    return j.dump();
}

const char* to_string(SdpStatus s) {
    switch (s) {
        case SdpStatus::Feasible: return "feasible";
        case SdpStatus::Infeasible: return "infeasible";
        case SdpStatus::Undetermined: return "undetermined";
    }
    return "?";
}

namespace {

// Upper-triangle coordinates of all blocks, concatenated.
struct Layout {
    std::vector<std::size_t> offset;
    std::size_t total = 0;

    explicit Layout(const SdpProblem& prob) {
        for (const auto& b : prob.blocks) {
            offset.push_back(total);
            total += b.dim * (b.dim + 1) / 2;
        }
    }
    static std::size_t tri(std::size_t dim, std::size_t r, std::size_t c) { return r * dim - r * (r - 1) / 2 + (c - r); }
    std::size_t index(const SdpProblem& prob, const SdpEntry& e) const {
        return offset[e.block] + tri(prob.blocks[e.block].dim, e.row, e.col);
    }
};

RatMatrix constraint_matrix(const SdpProblem& prob, const Layout& lay) {
    RatMatrix c(prob.constraints.size(), lay.total);
    for (std::size_t i = 0; i < prob.constraints.size(); ++i)
        for (const auto& t : prob.constraints[i].terms) c(i, lay.index(prob, t)) += t.coeff;
    return c;
}

std::vector<RatMatrix> unpack(const SdpProblem& prob, const Layout& lay, const RatVector& u) {
    std::vector<RatMatrix> out;
    for (std::size_t b = 0; b < prob.blocks.size(); ++b) {
        const std::size_t n = prob.blocks[b].dim;
        RatMatrix m(n, n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r; c < n; ++c) m(r, c) = m(c, r) = u[lay.offset[b] + Layout::tri(n, r, c)];
        out.push_back(std::move(m));
    }
    return out;
}

bool blocks_meet(const SdpProblem& prob, const std::vector<RatMatrix>& blocks, bool with_floors) {
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        RatMatrix m = blocks[b];
        if (with_floors && prob.blocks[b].floor)
            for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) -= *prob.blocks[b].floor;
        if (!psd_check(m).psd) return false;
    }
    return true;
}

struct PerturbedCheck {
    bool psd = false;
    bool floor_met = false;
};

// X = B + E with B of small height: lambda_min(X) >= lambda_min(B) - |E|_F
// (Weyl), so B - (f + c) I >= 0 with c >= |E|_F gives X - f I >= 0. The
// direct LDL^T of X is the fallback for small blocks.
PerturbedCheck perturbed_psd(const RatMatrix& base, const RatMatrix& exact, const Rational& floor) {
    PerturbedCheck out;
    const std::size_t n = base.rows();
    Rational sq = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            const Rational e = exact(i, j) - base(i, j);
            if (e != 0) sq += (i == j ? 1 : 2) * e * e;
        }
    Rational c = 0;
    if (sq != 0) {
        c = 1;
        const double target = std::sqrt(to_double(sq));
        while (to_double(c) < target) c *= 2;
        while (to_double(c) / 2 >= target && c / 2 * (c / 2) >= sq) c /= 2;
        while (c * c < sq) c *= 2;
    }
    auto shifted_psd = [&](const Rational& shift) {
        RatMatrix m = base;
        for (std::size_t i = 0; i < n; ++i) m(i, i) -= shift;
        return psd_check(m).psd;
    };
    if (shifted_psd(floor + c)) {
        out.psd = out.floor_met = true;
        return out;
    }
    if (floor > 0 && shifted_psd(c)) {
        out.psd = true;
        return out;
    }
    if (n <= 16) {
        out.psd = psd_check(exact).psd;
        if (out.psd && floor != 0) {
            RatMatrix m = exact;
            for (std::size_t i = 0; i < n; ++i) m(i, i) -= floor;
            out.floor_met = psd_check(m).psd;
        } else {
            out.floor_met = out.psd;
        }
    }
    return out;
}

// Constraint rows in svec coordinates (off-diagonal entries scaled by
// sqrt(2), so Euclidean projection is the Frobenius one).
struct AffineMap {
    const SdpProblem& prob;
    const Layout& lay;
    Eigen::SparseMatrix<double> a;
    Eigen::VectorXd b;
    Eigen::LDLT<Eigen::MatrixXd> aat;

    AffineMap(const SdpProblem& p, const Layout& l, const std::vector<std::size_t>& rows) : prob(p), lay(l) {
        const double sqrt2 = std::sqrt(2.0);
        const auto m = static_cast<Eigen::Index>(rows.size());
        a.resize(m, static_cast<Eigen::Index>(lay.total));
        b.resize(m);
        std::vector<Eigen::Triplet<double>> trip;
        for (Eigen::Index i = 0; i < m; ++i) {
            const auto& c = prob.constraints[rows[static_cast<std::size_t>(i)]];
            for (const auto& t : c.terms)
                trip.emplace_back(i, static_cast<Eigen::Index>(lay.index(prob, t)),
                                  to_double(t.coeff) / (t.row == t.col ? 1.0 : sqrt2));
            b(i) = to_double(c.rhs);
        }
        a.setFromTriplets(trip.begin(), trip.end());
        aat.compute(Eigen::MatrixXd(a * a.transpose()));
    }
    void project(Eigen::VectorXd& x) const {
        if (b.size() == 0) return;
        Eigen::VectorXd r = a * x - b;
        x -= a.transpose() * aat.solve(r);
    }
    double residual(const Eigen::VectorXd& x) const { return b.size() == 0 ? 0.0 : (a * x - b).cwiseAbs().maxCoeff(); }
    void to_blocks(const Eigen::VectorXd& x, std::vector<Eigen::MatrixXd>& out) const {
        const double sqrt2 = std::sqrt(2.0);
        for (std::size_t bi = 0; bi < prob.blocks.size(); ++bi) {
            const std::size_t n = prob.blocks[bi].dim;
            auto& mat = out[bi];
            mat.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = r; c < n; ++c) {
                    double v = x(static_cast<Eigen::Index>(lay.offset[bi] + Layout::tri(n, r, c)));
                    if (r != c) v /= sqrt2;
                    mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v;
                    mat(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)) = v;
                }
        }
    }
    void from_blocks(const std::vector<Eigen::MatrixXd>& in, Eigen::VectorXd& x) const {
        const double sqrt2 = std::sqrt(2.0);
        x.resize(static_cast<Eigen::Index>(lay.total));
        for (std::size_t bi = 0; bi < prob.blocks.size(); ++bi) {
            const std::size_t n = prob.blocks[bi].dim;
            const auto& mat = in[bi];
            for (std::size_t r = 0; r < n; ++r)
                for (std::size_t c = r; c < n; ++c) {
                    double v = 0.5 * (mat(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) +
                                      mat(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(r)));
                    x(static_cast<Eigen::Index>(lay.offset[bi] + Layout::tri(n, r, c))) = r == c ? v : v * sqrt2;
                }
        }
    }
};

double min_eigenvalue(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

}  // namespace

std::vector<Rational> exact_residuals(const SdpProblem& prob, const std::vector<RatMatrix>& blocks) {
    std::vector<Rational> out;
    for (const auto& c : prob.constraints) {
        Rational s = -c.rhs;
        for (const auto& t : c.terms) s += t.coeff * blocks[t.block](t.row, t.col);
        out.push_back(s);
    }
    return out;
}

SdpSolution solve_feasibility(const SdpProblem& prob, double tol, long max_iter, std::uint64_t seed) {
    if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
    prob.validate();
    const Layout lay(prob);
    SdpSolution sol;
    for (const auto& b : prob.blocks) sol.block_matrices.emplace_back(Eigen::MatrixXd::Zero(b.dim, b.dim));

    // Exact pre-pass: consistency, independent rows, and the single-point case.
    const RatMatrix cmat = constraint_matrix(prob, lay);
    RatVector rhs;
    for (const auto& c : prob.constraints) rhs.push_back(c.rhs);
    auto particular = solve(cmat, rhs);
    if (!particular) {
        sol.status = SdpStatus::Infeasible;
        return sol;
    }
    const std::vector<std::size_t> rows = independent_rows(cmat);
    if (rows.size() == lay.total) {
        auto blocks = unpack(prob, lay, *particular);
        bool ok = blocks_meet(prob, blocks, true);
        sol.status = ok ? SdpStatus::Feasible : SdpStatus::Infeasible;
        sol.min_block_eigenvalue = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            for (std::size_t r = 0; r < blocks[b].rows(); ++r)
                for (std::size_t c = 0; c < blocks[b].cols(); ++c)
                    sol.block_matrices[b](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = to_double(blocks[b](r, c));
            sol.min_block_eigenvalue = std::min(sol.min_block_eigenvalue, min_eigenvalue(sol.block_matrices[b]));
        }
        return sol;
    }

    const AffineMap aff(prob, lay, rows);
    auto project_affine = [&](Eigen::VectorXd& x) { aff.project(x); };
    auto to_blocks = [&](const Eigen::VectorXd& x) { aff.to_blocks(x, sol.block_matrices); };
    auto from_blocks = [&](Eigen::VectorXd& x) { aff.from_blocks(sol.block_matrices, x); };

    std::vector<double> floor(prob.blocks.size(), 0.0), target(prob.blocks.size());
    for (std::size_t bi = 0; bi < prob.blocks.size(); ++bi) {
        if (prob.blocks[bi].floor) floor[bi] = to_double(*prob.blocks[bi].floor);
        // clip a little inside the floor so iterates end up strictly feasible
        target[bi] = floor[bi] + 0.1 * std::abs(floor[bi]) + 10 * tol;
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1e-3);
    Eigen::VectorXd x(static_cast<Eigen::Index>(lay.total));
    for (std::size_t bi = 0; bi < prob.blocks.size(); ++bi) sol.block_matrices[bi].setIdentity();
    from_blocks(x);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += noise(rng);
    project_affine(x);

    std::vector<Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>> eig(prob.blocks.size());
    for (long it = 0; it < max_iter; ++it) {
        sol.iterations = it + 1;
        to_blocks(x);
        double worst = std::numeric_limits<double>::infinity();
        bool ok = true;
        for (std::size_t bi = 0; bi < prob.blocks.size(); ++bi) {
            eig[bi].compute(sol.block_matrices[bi]);
            double lmin = eig[bi].eigenvalues().minCoeff();
            worst = std::min(worst, lmin - floor[bi]);
            if (lmin < floor[bi] - tol) ok = false;
        }
        sol.min_block_eigenvalue = worst;
        if (ok) break;
        for (std::size_t bi = 0; bi < prob.blocks.size(); ++bi) {
            Eigen::VectorXd lam = eig[bi].eigenvalues().cwiseMax(target[bi]);
            sol.block_matrices[bi] = eig[bi].eigenvectors() * lam.asDiagonal() * eig[bi].eigenvectors().transpose();
        }
        from_blocks(x);
        project_affine(x);
    }
    to_blocks(x);
    sol.max_constraint_residual = aff.residual(x);
    double min_eig = std::numeric_limits<double>::infinity();
    bool psd_ok = true;
    for (std::size_t bi = 0; bi < prob.blocks.size(); ++bi) {
        double lmin = min_eigenvalue(sol.block_matrices[bi]);
        min_eig = std::min(min_eig, lmin);
        if (lmin < floor[bi] - tol) psd_ok = false;
    }
    sol.min_block_eigenvalue = min_eig;
    sol.status = psd_ok && sol.max_constraint_residual <= tol ? SdpStatus::Feasible : SdpStatus::Undetermined;
    return sol;
}

Eigen::MatrixXd project_psd(const Eigen::MatrixXd& m, double floor) {
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
    const Eigen::VectorXd lam = es.eigenvalues().cwiseMax(floor);
    return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<Eigen::MatrixXd> project_affine(const SdpProblem& prob, const std::vector<Eigen::MatrixXd>& blocks) {
    prob.validate();
    if (blocks.size() != prob.blocks.size()) throw Error(ErrorKind::InvalidArgument, "wrong number of blocks");
    const Layout lay(prob);
    const RatMatrix cmat = constraint_matrix(prob, lay);
    RatVector rhs;
    for (const auto& c : prob.constraints) rhs.push_back(c.rhs);
    if (!solve(cmat, rhs)) throw Error(ErrorKind::InvalidProblem, "constraints are inconsistent");
    const AffineMap aff(prob, lay, independent_rows(cmat));
    Eigen::VectorXd x;
    aff.from_blocks(blocks, x);
    aff.project(x);
    std::vector<Eigen::MatrixXd> out(blocks.size());
    aff.to_blocks(x, out);
    return out;
}

ExactCertificate round_and_verify(const SdpSolution& sol, const SdpProblem& prob, const Integer& den_bound) {
    prob.validate();
    const Layout lay(prob);
    ExactCertificate cert;
    if (sol.block_matrices.size() != prob.blocks.size()) {
        cert.note = "solution has the wrong number of blocks";
        return cert;
    }
    RatVector u(lay.total);
    for (std::size_t bi = 0; bi < prob.blocks.size(); ++bi) {
        const std::size_t n = prob.blocks[bi].dim;
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = r; c < n; ++c) {
                double v = sol.block_matrices[bi](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
                if (!std::isfinite(v)) {
                    cert.note = "non-finite entry";
                    return cert;
                }
                // common denominator keeps the exact LDL^T below cheap
                Rational q(detail::floor_to_integer(v * den_bound.get_d() + 0.5), den_bound);
                q.canonicalize();
                u[lay.offset[bi] + Layout::tri(n, r, c)] = q;
            }
    }
    // Exact least-squares correction in the Frobenius metric: weights 1 on
    // diagonal coordinates and 2 off the diagonal.
    const RatMatrix cmat = constraint_matrix(prob, lay);
    const std::vector<std::size_t> rows = independent_rows(cmat);
    RatVector winv(lay.total, Rational(1, 2));
    for (std::size_t bi = 0; bi < prob.blocks.size(); ++bi)
        for (std::size_t r = 0; r < prob.blocks[bi].dim; ++r) winv[lay.offset[bi] + Layout::tri(prob.blocks[bi].dim, r, r)] = 1;
    const RatVector rounded = u;
    RatMatrix ci(rows.size(), lay.total);
    RatVector resid(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        Rational s = prob.constraints[rows[i]].rhs;
        for (std::size_t j = 0; j < lay.total; ++j) {
            ci(i, j) = cmat(rows[i], j);
            if (ci(i, j) != 0) s -= ci(i, j) * u[j];
        }
        resid[i] = s;
    }
    RatMatrix normal(rows.size(), rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = i; k < rows.size(); ++k) {
            Rational s = 0;
            for (std::size_t j = 0; j < lay.total; ++j)
                if (ci(i, j) != 0 && ci(k, j) != 0) s += ci(i, j) * winv[j] * ci(k, j);
            normal(i, k) = normal(k, i) = s;
        }
    auto lambda = solve(normal, resid);
    if (!lambda) throw Error(ErrorKind::InvalidProblem, "constraints are inconsistent");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if ((*lambda)[i] == 0) continue;
        for (std::size_t j = 0; j < lay.total; ++j)
            if (ci(i, j) != 0) u[j] += winv[j] * ci(i, j) * (*lambda)[i];
    }
    cert.block_matrices = unpack(prob, lay, u);
    for (const auto& r : exact_residuals(prob, cert.block_matrices))
        if (r != 0) throw Error(ErrorKind::InvalidProblem, "constraints are inconsistent");
    const auto base = unpack(prob, lay, rounded);
    cert.verified = true;
    cert.floors_met = true;
    for (std::size_t b = 0; b < prob.blocks.size(); ++b) {
        const Rational floor = prob.blocks[b].floor.value_or(Rational(0));
        const PerturbedCheck pc = perturbed_psd(base[b], cert.block_matrices[b], floor);
        cert.verified = cert.verified && pc.psd;
        cert.floors_met = cert.floors_met && pc.floor_met;
    }
    cert.floors_met = cert.verified && cert.floors_met;
    if (!cert.verified) cert.note = "rounded blocks are not positive semidefinite";
    return cert;
}

}  // namespace finite_sos
