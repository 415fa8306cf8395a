#include "finite_sos/linalg.hpp"

#include <algorithm>
#include <cstdint>

#include "finite_sos/errors.hpp"

namespace finite_sos {

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

RatMatrix RatMatrix::from_columns(const std::vector<RatVector>& columns, std::size_t rows) {
    RatMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j)
        for (std::size_t i = 0; i < rows; ++i) m(i, j) = columns[j][i];
    return m;
}

RatVector RatMatrix::row(std::size_t i) const {
    return RatVector(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                     data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

RatVector RatMatrix::column(std::size_t j) const {
    RatVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& other) const {
    if (cols_ != other.rows_) throw Error(ErrorKind::InvalidArgument, "matrix product shape mismatch");
    RatMatrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const Rational& a = (*this)(i, k);
            if (a == 0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j)
                if (other(k, j) != 0) out(i, j) += a * other(k, j);
        }
    return out;
}

RatVector RatMatrix::operator*(const RatVector& v) const {
    if (cols_ != v.size()) throw Error(ErrorKind::InvalidArgument, "matrix-vector shape mismatch");
    RatVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if ((*this)(i, j) != 0 && v[j] != 0) out[i] += (*this)(i, j) * v[j];
    return out;
}

RatMatrix RatMatrix::operator+(const RatMatrix& other) const {
    RatMatrix out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] += other.data_[i];
    return out;
}

RatMatrix RatMatrix::operator-(const RatMatrix& other) const {
    RatMatrix out(*this);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] -= other.data_[i];
    return out;
}

RatMatrix RatMatrix::scaled(const Rational& c) const {
    RatMatrix out(*this);
    for (auto& x : out.data_) x *= c;
    return out;
}

bool RatMatrix::is_symmetric() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = i + 1; j < cols_; ++j)
            if ((*this)(i, j) != (*this)(j, i)) return false;
    return true;
}

void SemiEchelon::reduce(RatVector& v) const {
    // rows are normalized to 1 at their pivot
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (v[pivots_[r]] == 0) continue;
        Rational factor = v[pivots_[r]], tmp;
        for (const auto& [j, x] : rows_[r]) {
            mpq_mul(tmp.get_mpq_t(), factor.get_mpq_t(), x.get_mpq_t());
            mpq_sub(v[j].get_mpq_t(), v[j].get_mpq_t(), tmp.get_mpq_t());
        }
    }
}

bool SemiEchelon::store(RatVector& v) {
    auto it = std::find_if(v.begin(), v.end(), [](const Rational& x) { return x != 0; });
    if (it == v.end()) return false;
    std::size_t p = static_cast<std::size_t>(it - v.begin());
    Rational inv = 1 / v[p];
    SparseRow row;
    for (std::size_t j = p; j < dim_; ++j)
        if (v[j] != 0) row.emplace_back(j, v[j] * inv);
    rows_.push_back(std::move(row));
    pivots_.push_back(p);
    return true;
}

bool SemiEchelon::try_add(RatVector v) {
    if (v.size() != dim_) throw Error(ErrorKind::InvalidArgument, "SemiEchelon: length mismatch");
    reduce(v);
    return store(v);
}

bool SemiEchelon::try_add(const SparseRow& v) {
    for (const auto& [j, x] : v) work_.at(j) = x;
    reduce(work_);
    bool added = store(work_);
    for (auto& x : work_) x = 0;
    return added;
}

bool SemiEchelon::in_span(RatVector v) const {
    reduce(v);
    return std::all_of(v.begin(), v.end(), [](const Rational& x) { return x == 0; });
}

RrefResult rref(RatMatrix a) {
    RrefResult res;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t p = r;
        while (p < a.rows() && a(p, c) == 0) ++p;
        if (p == a.rows()) continue;
        if (p != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
        Rational inv = 1 / a(r, c);
        for (std::size_t j = c; j < a.cols(); ++j) a(r, j) *= inv;
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || a(i, c) == 0) continue;
            Rational f = a(i, c);
            for (std::size_t j = c; j < a.cols(); ++j)
                if (a(r, j) != 0) a(i, j) -= f * a(r, j);
        }
        res.pivot_cols.push_back(c);
        ++r;
    }
    res.reduced = std::move(a);
    return res;
}

std::size_t rank(const RatMatrix& a) {
    if (a.empty()) return 0;
    // row echelon on the side with fewer entries per vector
    const bool by_rows = a.cols() <= a.rows();
    SemiEchelon ech(by_rows ? a.cols() : a.rows());
    std::size_t n = by_rows ? a.rows() : a.cols();
    for (std::size_t i = 0; i < n && ech.rank() < ech.dim(); ++i)
        ech.try_add(by_rows ? a.row(i) : a.column(i));
    return ech.rank();
}

RatMatrix nullspace(const RatMatrix& a) {
    RrefResult rr = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto c : rr.pivot_cols) is_pivot[c] = true;
    std::vector<RatVector> basis;
    for (std::size_t f = 0; f < a.cols(); ++f) {
        if (is_pivot[f]) continue;
        RatVector x(a.cols());
        x[f] = 1;
        for (std::size_t r = 0; r < rr.pivot_cols.size(); ++r) x[rr.pivot_cols[r]] = -rr.reduced(r, f);
        basis.push_back(std::move(x));
    }
    return RatMatrix::from_columns(basis, a.cols());
}

std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b) {
    RatMatrix aug(a.rows(), a.cols() + 1);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
        aug(i, a.cols()) = b[i];
    }
    RrefResult rr = rref(std::move(aug));
    if (!rr.pivot_cols.empty() && rr.pivot_cols.back() == a.cols()) return std::nullopt;
    RatVector x(a.cols());
    for (std::size_t r = 0; r < rr.pivot_cols.size(); ++r) x[rr.pivot_cols[r]] = rr.reduced(r, a.cols());
    return x;
}

std::optional<RatMatrix> inverse(const RatMatrix& a) {
    if (a.rows() != a.cols()) return std::nullopt;
    const std::size_t n = a.rows();
    RatMatrix aug(n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
        aug(i, n + i) = 1;
    }
    RrefResult rr = rref(std::move(aug));
    if (rr.pivot_cols.size() < n || rr.pivot_cols[n - 1] != n - 1) return std::nullopt;
    RatMatrix inv(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv(i, j) = rr.reduced(i, n + j);
    return inv;
}

std::vector<std::size_t> independent_rows(const RatMatrix& a) {
    SemiEchelon ech(a.cols());
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < a.rows(); ++i)
        if (ech.try_add(a.row(i))) out.push_back(i);
    return out;
}

PsdReport psd_check(const RatMatrix& sym) {
    if (!sym.is_symmetric()) throw Error(ErrorKind::InvalidArgument, "psd_check: matrix not symmetric");
    const std::size_t n = sym.rows();
    PsdReport rep;
    // Clear denominators: PSD is invariant under positive scaling.
    Integer lcm = 1;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), sym(i, j).get_den_mpz_t());
    std::vector<Integer> m(n * n);
    auto at = [&](std::size_t i, std::size_t j) -> Integer& { return m[i * n + j]; };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Rational s = sym(i, j) * lcm;
            at(i, j) = s.get_num();
        }
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) perm[i] = i;
    Integer prev = 1;
    std::size_t k = 0;
    for (; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (at(i, i) > at(p, p)) p = i;
        if (at(p, p) < 0) return rep;
        if (at(p, p) == 0) {
            for (std::size_t i = k; i < n; ++i)
                for (std::size_t j = k; j < n; ++j)
                    if (at(i, j) != 0) return rep;
            break;
        }
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(at(p, j), at(k, j));
            for (std::size_t i = 0; i < n; ++i) std::swap(at(i, p), at(i, k));
            std::swap(perm[p], perm[k]);
        }
        const Integer& piv = at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) {
                Integer v = piv * at(i, j) - at(i, k) * at(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                at(i, j) = v;
                at(j, i) = v;
            }
        }
        Rational d(piv, prev * lcm);
        d.canonicalize();
        rep.pivots.push_back(d);
        rep.order.push_back(perm[k]);
        prev = piv;
    }
    rep.psd = true;
    rep.rank = k;
    rep.pd = (k == n);
    return rep;
}

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;
constexpr u64 kPrime = (u64{1} << 61) - 1;

u64 mulmod(u64 a, u64 b) {
    u128 r = static_cast<u128>(a) * b;
    u64 lo = static_cast<u64>(r & kPrime), hi = static_cast<u64>(r >> 61);
    u64 s = lo + hi;
    return s >= kPrime ? s - kPrime : s;
}

u64 powmod(u64 a, u64 e) {
    u64 r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

std::optional<u64> reduce_mod(const Rational& q) {
    Integer pz(static_cast<unsigned long>(kPrime >> 20));
    pz <<= 20;
    pz += static_cast<unsigned long>(kPrime & ((u64{1} << 20) - 1));
    Integer num = q.get_num() % pz, den = q.get_den() % pz;
    if (num < 0) num += pz;
    if (den == 0) return std::nullopt;
    auto to_u64 = [](const Integer& z) {
        u64 out = 0;
        mpz_export(&out, nullptr, -1, sizeof(u64), 0, 0, z.get_mpz_t());
        return out;
    };
    return mulmod(to_u64(num), powmod(to_u64(den), kPrime - 2));
}

}  // namespace

bool has_full_column_rank(const RatMatrix& a) {
    const std::size_t rows = a.rows(), cols = a.cols();
    if (cols > rows) return false;
    std::vector<u64> m(rows * cols);
    bool ok = true;
    for (std::size_t i = 0; i < rows && ok; ++i)
        for (std::size_t j = 0; j < cols; ++j) {
            auto v = reduce_mod(a(i, j));
            if (!v) { ok = false; break; }
            m[i * cols + j] = *v;
        }
    if (ok) {
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols; ++c) {
            std::size_t p = r;
            while (p < rows && m[p * cols + c] == 0) ++p;
            if (p == rows) break;
            for (std::size_t j = 0; j < cols; ++j) std::swap(m[p * cols + j], m[r * cols + j]);
            u64 inv = powmod(m[r * cols + c], kPrime - 2);
            for (std::size_t i = r + 1; i < rows; ++i) {
                u64 f = mulmod(m[i * cols + c], inv);
                if (f == 0) continue;
                for (std::size_t j = c; j < cols; ++j) {
                    u64 s = mulmod(f, m[r * cols + j]);
                    u64& t = m[i * cols + j];
                    t = t >= s ? t - s : t + kPrime - s;
                }
            }
            ++r;
        }
        if (r == cols) return true;
    }
    return rank(a) == cols;
}

RatVector operator-(const RatVector& a, const RatVector& b) {
    RatVector out(a);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

Rational dot(const RatVector& a, const RatVector& b) {
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
    return s;
}

}  // namespace finite_sos
