#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "finite_sos/poly.hpp"

namespace finite_sos {

/// Finite list of pairwise distinct rational points in Q^n.
class PointSet {
public:
    PointSet() = default;
    /// Throws DuplicatePoint for repeated points, InvalidArgument for an empty
    /// list or wrong coordinate counts.
    PointSet(int n, std::vector<Point> points);

    /// {0,1}^n ordered by bitmask: point i has coordinate j equal to bit j of i.
    static PointSet cube(int n);

    int n() const { return n_; }
    std::size_t size() const { return points_.size(); }
    const std::vector<Point>& points() const { return points_; }
    const Point& operator[](std::size_t i) const { return points_[i]; }

    std::optional<std::size_t> index_of(const Point& v) const;
    bool contains(const Point& v) const { return index_of(v).has_value(); }

    bool is_cube_subset() const;
    /// Bitmask of a 0/1 point; throws NotACubePoint otherwise.
    static std::uint64_t cube_mask(const Point& v);
    static Point cube_point(int n, std::uint64_t mask);

    std::vector<Rational> evaluate(const Poly& p) const;

private:
    int n_ = 0;
    std::vector<Point> points_;
    std::map<Point, std::size_t> index_;
};

}  // namespace finite_sos
