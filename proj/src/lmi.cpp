#include "finite_sos/lmi.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include "finite_sos/errors.hpp"

namespace finite_sos {

template <class Scalar>
Scalar rational_to_scalar(const Rational& q) {
    if constexpr (std::is_floating_point_v<Scalar>) {
        return static_cast<Scalar>(q.get_d());
    } else {
        return Scalar(q.get_num().get_str()) / Scalar(q.get_den().get_str());
    }
}

namespace {

template <class Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <class Scalar>
Mat<Scalar> to_scalar(const RatMatrix& m) {
    Mat<Scalar> out(static_cast<Eigen::Index>(m.rows()), static_cast<Eigen::Index>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rational_to_scalar<Scalar>(m(i, j));
    return out;
}

}  // namespace

template <class Scalar>
LmiResult<Scalar> maximize_lmi_margin(const LmiProblem& prob, const LmiOptions& opts) {
    using std::abs;
    using std::sqrt;
    LmiResult<Scalar> res;
    const std::size_t nv = prob.num_vars;
    const std::size_t nb = prob.blocks.size();
    if (nv == 0 || nb == 0) {
        res.message = "empty problem";
        return res;
    }

    // Exact affine reparametrization y = y0 + N z.
    std::size_t entries = 0;
    for (const auto& b : prob.blocks) entries += b.reference.rows() * (b.reference.rows() + 1) / 2;
    RatMatrix fmap(entries, nv);
    {
        std::size_t row = 0;
        for (const auto& b : prob.blocks) {
            const std::size_t m = b.reference.rows();
            for (std::size_t p = 0; p < m; ++p)
                for (std::size_t q = p; q < m; ++q, ++row)
                    for (std::size_t a = 0; a < nv; ++a) fmap(row, a) = b.coeffs[a](p, q);
        }
    }
    const RatMatrix kernel = nullspace(fmap);
    RatMatrix eq(1 + kernel.cols(), nv);
    RatVector eq_rhs(1 + kernel.cols());
    Rational nu = 0;
    for (const auto& b : prob.blocks) {
        auto dinv = inverse(b.reference);
        if (!dinv) throw Error(ErrorKind::InvalidProblem, "reference matrix of block '" + b.name + "' is singular");
        for (std::size_t a = 0; a < nv; ++a) {
            Rational tr = 0;
            const RatMatrix& f = b.coeffs[a];
            for (std::size_t p = 0; p < f.rows(); ++p)
                for (std::size_t q = 0; q < f.cols(); ++q)
                    if (f(q, p) != 0) tr += (*dinv)(p, q) * f(q, p);
            eq(0, a) += tr;
        }
        nu += static_cast<long>(b.reference.rows());
    }
    eq_rhs[0] = nu;
    for (std::size_t c = 0; c < kernel.cols(); ++c)
        for (std::size_t a = 0; a < nv; ++a) eq(1 + c, a) = kernel(a, c);
    auto y0_exact = solve(eq, eq_rhs);
    if (!y0_exact) {
        res.message = "trace normalization vanishes on the admissible subspace";
        return res;
    }
    const RatMatrix nbasis = nullspace(eq);
    const std::size_t nz = nbasis.cols();

    // Scalar data: constant part C_j = F_j(y0), directions G_{j,c} = F_j(N e_c).
    std::vector<Mat<Scalar>> cpart(nb), dref(nb);
    std::vector<std::vector<Mat<Scalar>>> dirs(nb);
    for (std::size_t j = 0; j < nb; ++j) {
        const auto& b = prob.blocks[j];
        const std::size_t m = b.reference.rows();
        RatMatrix c0(m, m);
        for (std::size_t a = 0; a < nv; ++a)
            if ((*y0_exact)[a] != 0) c0 = c0 + b.coeffs[a].scaled((*y0_exact)[a]);
        cpart[j] = to_scalar<Scalar>(c0);
        dref[j] = to_scalar<Scalar>(b.reference);
        for (std::size_t c = 0; c < nz; ++c) {
            RatMatrix g(m, m);
            for (std::size_t a = 0; a < nv; ++a)
                if (nbasis(a, c) != 0) g = g + b.coeffs[a].scaled(nbasis(a, c));
            dirs[j].push_back(to_scalar<Scalar>(g));
        }
    }
    const Scalar nu_s = rational_to_scalar<Scalar>(nu);

    Vec<Scalar> z = Vec<Scalar>::Zero(static_cast<Eigen::Index>(nz));
    Scalar t = -1;
    auto slack = [&](const Vec<Scalar>& zz, const Scalar& tt, std::size_t j) {
        Mat<Scalar> s = cpart[j] - tt * dref[j];
        for (std::size_t c = 0; c < nz; ++c)
            if (zz(static_cast<Eigen::Index>(c)) != 0) s += zz(static_cast<Eigen::Index>(c)) * dirs[j][c];
        return s;
    };
    auto interior = [&](const Vec<Scalar>& zz, const Scalar& tt) {
        for (std::size_t j = 0; j < nb; ++j) {
            Eigen::LLT<Mat<Scalar>> llt(slack(zz, tt, j));
            if (llt.info() != Eigen::Success) return false;
        }
        return true;
    };
    for (int i = 0; i < 400 && !interior(z, t); ++i) t *= 2;
    if (!interior(z, t)) {
        res.message = "no interior starting point";
        return res;
    }

    const Scalar eps = std::numeric_limits<Scalar>::epsilon();
    const Scalar gamma_max = Scalar(1) / sqrt(eps) * Scalar(1000);
    Scalar gamma = nu_s / (Scalar(1) + abs(t));
    const std::size_t dim = nz + 1;
    auto finish = [&](bool ok, const std::string& msg) {
        res.success = ok;
        res.message = msg;
        res.margin = t;
        res.upper_bound = t + nu_s / gamma;
        res.y.assign(nv, Scalar(0));
        for (std::size_t a = 0; a < nv; ++a) {
            Scalar v = rational_to_scalar<Scalar>((*y0_exact)[a]);
            for (std::size_t c = 0; c < nz; ++c)
                if (nbasis(a, c) != 0) v += rational_to_scalar<Scalar>(nbasis(a, c)) * z(static_cast<Eigen::Index>(c));
            res.y[a] = v;
        }
        return res;
    };

    while (res.newton_steps < opts.max_newton) {
        // centering by damped Newton
        for (int inner = 0; inner < 200 && res.newton_steps < opts.max_newton; ++inner) {
            ++res.newton_steps;
            Vec<Scalar> g = Vec<Scalar>::Zero(static_cast<Eigen::Index>(dim));
            Mat<Scalar> h = Mat<Scalar>::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
            g(static_cast<Eigen::Index>(nz)) = gamma;
            for (std::size_t j = 0; j < nb; ++j) {
                Mat<Scalar> s = slack(z, t, j);
                Eigen::LLT<Mat<Scalar>> llt(s);
                const auto m = s.rows();
                Mat<Scalar> sinv = llt.solve(Mat<Scalar>::Identity(m, m));
                std::vector<Mat<Scalar>> w(dim);
                for (std::size_t c = 0; c < nz; ++c) w[c] = sinv * dirs[j][c];
                w[nz] = -(sinv * dref[j]);
                for (std::size_t c = 0; c < dim; ++c) {
                    g(static_cast<Eigen::Index>(c)) += w[c].trace();
                    for (std::size_t d = c; d < dim; ++d) {
                        Scalar tr = w[c].cwiseProduct(w[d].transpose()).sum();
                        h(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(d)) += tr;
                        if (d != c) h(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(c)) += tr;
                    }
                }
            }
            Eigen::LDLT<Mat<Scalar>> hf(h);
            Vec<Scalar> step = hf.solve(g);
            Scalar lambda2 = g.dot(step);
            if (!(lambda2 >= Scalar(0))) lambda2 = abs(lambda2);
            Scalar lambda = sqrt(lambda2);
            Scalar alpha = lambda < Scalar(1) / 4 ? Scalar(1) : Scalar(1) / (Scalar(1) + lambda);
            Vec<Scalar> zn;
            Scalar tn;
            for (int bt = 0; bt < 60; ++bt) {
                zn = z + alpha * step.head(static_cast<Eigen::Index>(nz));
                tn = t + alpha * step(static_cast<Eigen::Index>(nz));
                if (interior(zn, tn)) break;
                alpha /= 2;
            }
            if (!interior(zn, tn)) return finish(false, "lost interiority in line search");
            z = zn;
            t = tn;
            if (lambda2 < Scalar(1e-8)) break;
        }
        const Scalar gap = nu_s / gamma;
        if (t > 0 && gap <= Scalar(opts.gap_fraction) * t) return finish(true, "positive margin");
        if (t + gap < 0) return finish(false, "maximal margin is negative");
        if (gamma > gamma_max) return finish(t > 0, t > 0 ? "positive margin at precision limit" : "precision limit reached");
        gamma *= 4;
    }
    return finish(t > 0, t > 0 ? "positive margin at step limit" : "step limit reached");
}

template double rational_to_scalar<double>(const Rational&);
template Float50 rational_to_scalar<Float50>(const Rational&);
template LmiResult<double> maximize_lmi_margin<double>(const LmiProblem&, const LmiOptions&);
template LmiResult<Float50> maximize_lmi_margin<Float50>(const LmiProblem&, const LmiOptions&);

}  // namespace finite_sos
