#include <doctest.h>

#include "finite_sos/errors.hpp"
#include "finite_sos/io.hpp"

using namespace finite_sos;

namespace {

std::string parse_error_message(std::string_view text) {
    try {
        parse_point_set(text);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Parse);
        return e.what();
    }
    FAIL("expected a parse error");
    return {};
}

}  // namespace

TEST_CASE("point set round trip") {
    const PointSet X(2, {{Rational(1, 2), 0}, {-3, Rational(7, 5)}});
    const Json j = point_set_json(X);
    CHECK(j.dump() == R"({"n":2,"points":[["1/2","0"],["-3","7/5"]]})");
    const PointSet Y = parse_point_set(j.dump());
    CHECK(Y.points() == X.points());
    const PointSet Z = parse_point_set(R"({"n":1,"points":[[2],["-4/6"]]})");
    CHECK(Z[1][0] == Rational(-2, 3));
}

TEST_CASE("polynomial round trip") {
    const Poly x = Poly::variable(2, 0), y = Poly::variable(2, 1);
    const Poly p = x * x * y - Poly::constant(2, Rational(3, 4)) * y + Poly::constant(2, 5);
    const Poly q = parse_poly(poly_json(p).dump(2));
    CHECK(q == p);
    const Poly r = parse_poly(R"({"n":2,"terms":[{"exponents":[1,0],"coeff":"1"},{"exponents":[1,0],"coeff":"-1"}]})");
    CHECK(r.is_zero());
}

TEST_CASE("parse errors carry a position") {
    CHECK(parse_error_message("{\"n\": 2,\n \"points\": [[0, 1],\n   [1 0]]}").find("line 3, column 7") != std::string::npos);
    CHECK(parse_error_message("{\"n\": 2, \"points\": [[0, 1], [1]]}").find("points[1]") != std::string::npos);
    CHECK(parse_error_message("{\"n\": 1, \"points\": [[\"1/0\"]]}").find("points[0][0]") != std::string::npos);
    CHECK(parse_error_message("{\"points\": []}").find("missing key \"n\"") != std::string::npos);
    CHECK_THROWS_AS(parse_poly(R"({"n":1,"terms":[{"exponents":[-1],"coeff":"1"}]})"), Error);
    CHECK_THROWS_AS(parse_poly(R"({"n":1,"terms":[{"exponents":[1]}]})"), Error);
}

TEST_CASE("numeric annotations") {
    CHECK(exact_value(Rational(-3, 2)).dump() == R"({"exact":"-3/2"})");
    CHECK(approx_value(0.5).dump() == R"({"approx":0.5})");
    RatMatrix m(1, 2);
    m(0, 1) = Rational(1, 3);
    CHECK(exact_matrix(m).dump() == R"({"exact":[["0","1/3"]]})");
}
