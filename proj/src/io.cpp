#include "finite_sos/io.hpp"

#include "finite_sos/errors.hpp"

namespace finite_sos {

namespace {

std::string position(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

Json parse_json(std::string_view text) {
    try {
        return Json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        std::string msg = e.what();
        // drop the library prefix "[json.exception.parse_error.101] parse error at line x, column y: "
        if (auto colon = msg.find(": "); colon != std::string::npos) msg = msg.substr(colon + 2);
        throw Error(ErrorKind::Parse, position(text, e.byte) + ": " + msg);
    }
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::Parse, where + ": " + what);
}

Rational rational_field(const Json& j, const std::string& where) {
    if (j.is_number_integer()) return Rational(j.dump());
    if (!j.is_string()) bad(where, "expected a rational string such as \"3/4\"");
    try {
        return parse_rational(j.get<std::string>());
    } catch (const Error& e) {
        bad(where, e.what());
    }
}

int int_field(const Json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) bad(where, std::string("missing key \"") + key + "\"");
    const Json& v = j.at(key);
    if (!v.is_number_integer()) bad(where + "." + key, "expected an integer");
    return v.get<int>();
}

const Json& array_field(const Json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) bad(where, std::string("missing key \"") + key + "\"");
    const Json& v = j.at(key);
    if (!v.is_array()) bad(where + "." + key, "expected an array");
    return v;
}

Json monomial_json(const Monomial& m) { return Json(m.exponents); }

}  // namespace

PointSet parse_point_set(std::string_view text) {
    const Json j = parse_json(text);
    if (!j.is_object()) bad("top level", "expected an object");
    const int n = int_field(j, "n", "top level");
    if (n < 1) bad("n", "must be positive");
    const Json& pts = array_field(j, "points", "top level");
    std::vector<Point> points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string where = "points[" + std::to_string(i) + "]";
        if (!pts[i].is_array() || pts[i].size() != static_cast<std::size_t>(n))
            bad(where, "expected an array of " + std::to_string(n) + " coordinates");
        Point v;
        for (std::size_t c = 0; c < pts[i].size(); ++c)
            v.push_back(rational_field(pts[i][c], where + "[" + std::to_string(c) + "]"));
        points.push_back(std::move(v));
    }
    return PointSet(n, std::move(points));
}

Poly parse_poly(std::string_view text) {
    const Json j = parse_json(text);
    if (!j.is_object()) bad("top level", "expected an object");
    const int n = int_field(j, "n", "top level");
    if (n < 1) bad("n", "must be positive");
    const Json& terms = array_field(j, "terms", "top level");
    Poly p(n);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string where = "terms[" + std::to_string(i) + "]";
        if (!terms[i].is_object()) bad(where, "expected an object");
        const Json& ex = array_field(terms[i], "exponents", where);
        if (ex.size() != static_cast<std::size_t>(n)) bad(where, "expected " + std::to_string(n) + " exponents");
        std::vector<int> e;
        for (const auto& x : ex) {
            if (!x.is_number_integer() || x.get<long>() < 0) bad(where, "exponents must be nonnegative integers");
            e.push_back(x.get<int>());
        }
        if (!terms[i].contains("coeff")) bad(where, "missing key \"coeff\"");
        p.add_term(Monomial(std::move(e)), rational_field(terms[i].at("coeff"), where + ".coeff"));
    }
    return p;
}

Json point_json(const Point& v) {
    Json a = Json::array();
    for (const auto& c : v) a.push_back(to_string(c));
    return a;
}

Json point_set_json(const PointSet& X) {
    Json pts = Json::array();
    for (const auto& v : X.points()) pts.push_back(point_json(v));
    return Json{{"n", X.n()}, {"points", pts}};
}

Json poly_json(const Poly& p) {
    Json terms = Json::array();
    for (const auto& [m, c] : p.terms()) terms.push_back(Json{{"exponents", m.exponents}, {"coeff", to_string(c)}});
    return Json{{"n", p.n()}, {"terms", terms}};
}

Json exact_value(const Rational& q) { return Json{{"exact", to_string(q)}}; }
Json approx_value(double x) { return Json{{"approx", x}}; }

Json exact_matrix(const RatMatrix& m) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(to_string(m(i, j)));
        rows.push_back(r);
    }
    return Json{{"exact", rows}};
}

Json decomp_json(const DecompCoords& coords) {
    Json blocks = Json::array();
    for (const auto& [key, v] : coords.coords) {
        Json c = Json::array();
        for (const auto& x : v) c.push_back(to_string(x));
        blocks.push_back(Json{{"k", key.first}, {"i", key.second}, {"coords", c}});
    }
    return Json{{"blocks", blocks}};
}

namespace {

Json basis_json(const QuotientBasis& b) {
    Json a = Json::array();
    for (const auto& m : b.basis_monomials) a.push_back(monomial_json(m));
    return a;
}

Json weights_json(const RefutationCertificate& r, const PointSet& X) {
    Json w = Json::object();
    for (std::size_t i = 0; i < X.size(); ++i) {
        std::string key = "(";
        for (std::size_t c = 0; c < X[i].size(); ++c) key += (c ? "," : "") + to_string(X[i][c]);
        w[key + ")"] = to_string(r.weights[i]);
    }
    return w;
}

void add_refutation(Json& j, const RefutationCertificate& r, const PointSet& X, bool with_data) {
    j["basis"] = Json{{"dim_lo", r.dim_lo}, {"dim_hi", r.dim_hi}};
    if (with_data) j["weights"] = Json{{"exact", weights_json(r, X)}};
    j["margin"] = exact_value(r.margin);
    j["exact"] = r.exact;
    j["sign_counts"] = Json{r.m_plus, r.m_minus};
    j["solver_margin"] = approx_value(r.solver_margin);
    j["all_weights_clear_tau"] = r.all_weights_clear_tau;
    j["signs_lemma_holds"] = r.signs_lemma_holds;
    j["method"] = r.method;
}

}  // namespace

Json certificate_json(const SosResult& r, const PointSet& X, const Json& query, bool with_data) {
    Json j{{"status", to_string(r.status)}, {"query", query}};
    if (r.gram) {
        j["basis"] = basis_json(r.gram->basis);
        if (with_data) j["gram"] = exact_matrix(r.gram->gram);
        j["margin"] = approx_value(r.gram->min_eigenvalue);
        j["exact"] = r.gram->exact;
    } else if (r.refutation) {
        add_refutation(j, *r.refutation, X, with_data);
    } else {
        j["exact"] = false;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json certificate_json(const RsosResult& r, const PointSet& X, const Json& query, bool with_data) {
    Json j{{"status", to_string(r.status)}, {"query", query}};
    if (r.certificate) {
        const auto& c = *r.certificate;
        j["basis"] = Json{{"h", basis_json(c.h_gram.basis)}, {"ph", basis_json(c.ph_gram.basis)}};
        if (with_data) j["gram"] = Json{{"h", exact_matrix(c.h_gram.gram)}, {"ph", exact_matrix(c.ph_gram.gram)}};
        j["margin"] = approx_value(c.h_gram.min_eigenvalue);
        j["exact"] = c.h_gram.exact && c.ph_gram.exact;
        j["normalization"] = exact_value(c.normalization);
        j["ph_min_eigenvalue"] = approx_value(c.ph_gram.min_eigenvalue);
    } else if (r.refutation) {
        add_refutation(j, *r.refutation, X, with_data);
    } else {
        j["exact"] = false;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

Json certificate_json(const SymmetricResult& r, const Json& query, bool with_data) {
    Json j{{"status", to_string(r.status)}, {"query", query}};
    j["basis"] = Json{{"block_sizes_lo", r.problem.block_sizes_lo}, {"block_sizes_hi", r.problem.block_sizes_hi}};
    if (r.certificate) {
        const auto& c = *r.certificate;
        if (with_data) {
            Json qh = Json::array(), qg = Json::array();
            for (const auto& m : c.q_h) qh.push_back(exact_matrix(m));
            for (const auto& m : c.q_g) qg.push_back(exact_matrix(m));
            j["gram"] = Json{{"h", qh}, {"ph", qg}};
        }
        j["exact"] = c.exact;
        j["solved_block_sizes"] = c.solved_block_sizes;
        Json hl = Json::array();
        for (const auto& v : c.h_levels) hl.push_back(to_string(v));
        j["h_levels"] = Json{{"exact", hl}};
    } else if (r.refutation) {
        const auto& f = *r.refutation;
        if (with_data) {
            Json w = Json::object();
            for (std::size_t L = 0; L < f.level_weights.size(); ++L) w["level " + std::to_string(L)] = to_string(f.level_weights[L]);
            j["weights"] = Json{{"exact", w}};
        }
        j["margin"] = exact_value(f.margin);
        j["exact"] = f.exact;
        j["sign_counts"] = Json{f.m_plus, f.m_minus};
        j["solver_margin"] = approx_value(f.solver_margin);
        j["all_weights_clear_tau"] = f.all_weights_clear_tau;
    } else {
        j["exact"] = false;
    }
    if (r.unreduced_status) j["unreduced_status"] = to_string(*r.unreduced_status);
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

}  // namespace finite_sos
