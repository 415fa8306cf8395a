#pragma once

#include <string>
#include <string_view>

#include "json.hpp"

#include "finite_sos/certify.hpp"
#include "finite_sos/cube_symmetry.hpp"
#include "finite_sos/point_set.hpp"
#include "finite_sos/poly.hpp"

namespace finite_sos {

using Json = nlohmann::ordered_json;

/// {"n": int, "points": [["a/b", ...], ...]}. Coordinates may also be JSON
/// integers. Malformed input throws Parse with a line/column position.
PointSet parse_point_set(std::string_view text);
/// {"n": int, "terms": [{"exponents": [int...], "coeff": "a/b"}]}.
Poly parse_poly(std::string_view text);

Json point_set_json(const PointSet& X);
Json poly_json(const Poly& p);
Json point_json(const Point& v);

/// Numbers are tagged by provenance: {"exact": "a/b"} or {"approx": x}.
Json exact_value(const Rational& q);
Json approx_value(double x);
Json exact_matrix(const RatMatrix& m);

Json decomp_json(const DecompCoords& coords);

/// Certificate JSON with keys status, query, basis, gram or weights, margin,
/// exact, sign_counts, in that order. `with_data` controls whether Gram
/// matrices and weights are written out.
Json certificate_json(const SosResult& r, const PointSet& X, const Json& query, bool with_data);
Json certificate_json(const RsosResult& r, const PointSet& X, const Json& query, bool with_data);
Json certificate_json(const SymmetricResult& r, const Json& query, bool with_data);

}  // namespace finite_sos
