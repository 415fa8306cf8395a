#include "finite_sos/point_set.hpp"

#include <string>

#include "finite_sos/errors.hpp"

namespace finite_sos {

PointSet::PointSet(int n, std::vector<Point> points) : n_(n), points_(std::move(points)) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative dimension");
    if (points_.empty()) throw Error(ErrorKind::InvalidArgument, "point set is empty");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (static_cast<int>(points_[i].size()) != n)
            throw Error(ErrorKind::InvalidArgument, "point " + std::to_string(i) + " has wrong dimension");
        if (!index_.emplace(points_[i], i).second)
            throw Error(ErrorKind::DuplicatePoint, "point " + std::to_string(i) + " repeats an earlier point");
    }
}

PointSet PointSet::cube(int n) {
    if (n < 0 || n > 24) throw Error(ErrorKind::InvalidArgument, "cube dimension out of range");
    std::vector<Point> pts;
    pts.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) pts.push_back(cube_point(n, mask));
    return PointSet(n, std::move(pts));
}

std::optional<std::size_t> PointSet::index_of(const Point& v) const {
    auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool PointSet::is_cube_subset() const {
    for (const auto& v : points_)
        for (const auto& x : v)
            if (x != 0 && x != 1) return false;
    return true;
}

std::uint64_t PointSet::cube_mask(const Point& v) {
    std::uint64_t mask = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] == 1) mask |= std::uint64_t{1} << i;
        else if (v[i] != 0) throw Error(ErrorKind::NotACubePoint, "coordinate is not 0 or 1");
    }
    return mask;
}

Point PointSet::cube_point(int n, std::uint64_t mask) {
    Point v(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(j)] = (mask >> j & 1U) ? 1 : 0;
    return v;
}

std::vector<Rational> PointSet::evaluate(const Poly& p) const {
    std::vector<Rational> out;
    out.reserve(points_.size());
    for (const auto& v : points_) out.push_back(p.evaluate(v));
    return out;
}

}  // namespace finite_sos
