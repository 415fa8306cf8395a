#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "finite_sos/rational.hpp"

namespace finite_sos {

using RatVector = std::vector<Rational>;

/// Dense row-major matrix of exact rationals.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    static RatMatrix identity(std::size_t n);
    static RatMatrix from_columns(const std::vector<RatVector>& columns, std::size_t rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    RatVector row(std::size_t i) const;
    RatVector column(std::size_t j) const;

    RatMatrix transpose() const;
    RatMatrix operator*(const RatMatrix& other) const;
    RatVector operator*(const RatVector& v) const;
    RatMatrix operator+(const RatMatrix& other) const;
    RatMatrix operator-(const RatMatrix& other) const;
    RatMatrix scaled(const Rational& c) const;

    bool is_symmetric() const;
    bool operator==(const RatMatrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Rational> data_;
};

/// Incremental linear-independence tracker over vectors of a fixed length.
/// Rows are kept in semi-echelon form: each stored row is zero at the pivot
/// columns of all rows stored before it.
class SemiEchelon {
public:
    using SparseRow = std::vector<std::pair<std::size_t, Rational>>;

    explicit SemiEchelon(std::size_t dim) : dim_(dim), work_(dim) {}

    /// Adds `v` if it is independent of the stored rows; returns whether it was added.
    bool try_add(RatVector v);
    bool try_add(const SparseRow& v);
    bool in_span(RatVector v) const;
    std::size_t rank() const { return rows_.size(); }
    std::size_t dim() const { return dim_; }

private:
    void reduce(RatVector& v) const;
    bool store(RatVector& v);

    std::size_t dim_;
    RatVector work_;
    std::vector<SparseRow> rows_;
    std::vector<std::size_t> pivots_;
};

struct RrefResult {
    RatMatrix reduced;
    std::vector<std::size_t> pivot_cols;
};

RrefResult rref(RatMatrix a);
std::size_t rank(const RatMatrix& a);

/// Basis of {x : A x = 0}, one column per free variable.
RatMatrix nullspace(const RatMatrix& a);

/// Some solution of A x = b (free variables set to zero), or nullopt if inconsistent.
std::optional<RatVector> solve(const RatMatrix& a, const RatVector& b);

std::optional<RatMatrix> inverse(const RatMatrix& a);

/// Indices of a maximal set of linearly independent rows, chosen greedily top-down.
std::vector<std::size_t> independent_rows(const RatMatrix& a);

/// Exact semidefiniteness test of a symmetric matrix by fraction-free
/// symmetric Gaussian elimination with diagonal pivoting. `pivots` are the
/// LDL^T diagonal entries in pivot order.
struct PsdReport {
    bool psd = false;
    bool pd = false;
    std::size_t rank = 0;
    std::vector<Rational> pivots;
    std::vector<std::size_t> order;
};

PsdReport psd_check(const RatMatrix& sym);

/// True when the matrix has full column rank; decided modulo a 61-bit prime
/// first (full rank mod p implies full rank over Q) and exactly otherwise.
bool has_full_column_rank(const RatMatrix& a);

RatVector operator-(const RatVector& a, const RatVector& b);
Rational dot(const RatVector& a, const RatVector& b);

}  // namespace finite_sos
