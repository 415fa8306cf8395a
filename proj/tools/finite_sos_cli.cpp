#include <cstdlib>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include "CLI11.hpp"

#include "finite_sos/certify.hpp"
#include "finite_sos/cube_symmetry.hpp"
#include "finite_sos/errors.hpp"
#include "finite_sos/io.hpp"
#include "finite_sos/quotient.hpp"

using namespace finite_sos;

namespace {

constexpr int kDefinitive = 0;
constexpr int kUsage = 1;
constexpr int kUndetermined = 2;

struct Args {
    std::string points_file;
    std::string poly_file;
    int cube = -1;
    bool laurent = false;
    double tol = 1e-9;
    std::string margin = "1/10000";
    long max_iter = 200000;
    std::uint64_t seed = 0;
    std::string den_bound = "1000000";
    bool symmetric = false;
    bool exact = false;
    bool strict = false;
    std::string out;
    int d1 = -1;
    int d2 = -1;
    int t = -1;
    int k = -1;
    int d = -1;
    int s = -1;
    int samples = 3;
};

struct Outcome {
    Json json;
    int code = kDefinitive;
};

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::size_t thread_cap() {
    std::size_t cap = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("FINITE_SOS_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v >= 1) cap = static_cast<std::size_t>(v);
    }
    return cap;
}

// Runs independent jobs on at most FINITE_SOS_THREADS workers; results stay in job order.
void run_jobs(const std::vector<std::function<void()>>& jobs) {
    const std::size_t cap = thread_cap();
    for (std::size_t start = 0; start < jobs.size(); start += cap) {
        std::vector<std::future<void>> running;
        for (std::size_t i = start; i < std::min(jobs.size(), start + cap); ++i)
            running.push_back(std::async(cap == 1 ? std::launch::deferred : std::launch::async, jobs[i]));
        for (auto& f : running) f.get();
    }
}

SearchOptions search_options(const Args& a) {
    SearchOptions o;
    o.tol = a.tol;
    o.max_iter = a.max_iter;
    o.seed = a.seed;
    o.den_bound = Integer(a.den_bound);
    if (o.den_bound < 1) throw UsageError("--den-bound must be positive");
    o.interior_eps = parse_rational(a.margin);
    return o;
}

PointSet load_points(const Args& a) {
    if (a.cube >= 0 && !a.points_file.empty()) throw UsageError("give either --cube or --points, not both");
    if (a.cube >= 0) {
        if (a.cube < 1 || a.cube > 20) throw UsageError("--cube must lie in 1..20");
        return PointSet::cube(a.cube);
    }
    if (a.points_file.empty()) throw UsageError("a point set is required (--cube N or --points FILE)");
    return parse_point_set(read_file(a.points_file));
}

Poly load_poly(const Args& a, int n) {
    if (a.laurent && !a.poly_file.empty()) throw UsageError("give either --laurent or --poly, not both");
    if (a.laurent) return laurent_quadratic_ambient(n);
    if (a.poly_file.empty()) throw UsageError("a polynomial is required (--poly FILE or --laurent)");
    Poly p = parse_poly(read_file(a.poly_file));
    if (p.n() != n) throw UsageError("polynomial has " + std::to_string(p.n()) + " variables, point set has " + std::to_string(n));
    return p;
}

int cube_n(const Args& a) {
    if (a.cube < 1) throw UsageError("--cube N is required");
    return a.cube;
}

int require(int v, const char* flag) {
    if (v < 0) throw UsageError(std::string(flag) + " is required");
    return v;
}

int status_code(CertStatus s) { return s == CertStatus::Undetermined ? kUndetermined : kDefinitive; }

Json base_query(const char* op, const PointSet& X) {
    return Json{{"op", op}, {"n", X.n()}, {"points", X.size()}};
}

Outcome cmd_hilbert(const Args& a) {
    const PointSet X = load_points(a);
    return {Json{{"H", hilbert_function(X, require(a.t, "-t"))}}};
}

Outcome cmd_regularity(const Args& a) {
    return {Json{{"regularity", hilbert_regularity(load_points(a))}}};
}

Outcome cmd_basis(const Args& a) {
    const PointSet X = load_points(a);
    const QuotientBasis b = quotient_basis(X, require(a.d, "-d"));
    Json mons = Json::array();
    for (const auto& m : b.basis_monomials) mons.push_back(m.exponents);
    return {Json{{"degree", a.d}, {"dim", b.dim()}, {"monomials", mons}}};
}

Outcome cmd_interpolate(const Args& a) {
    const PointSet X = load_points(a);
    const Poly p = load_poly(a, X.n());
    Json terms = Json::array();
    for (const auto& [value, ip] : interpolator_decomposition(X, p))
        terms.push_back(Json{{"point", point_json(ip.point)}, {"value", exact_value(value)}, {"interpolator", poly_json(ip.poly)}});
    return {Json{{"terms", terms}, {"identity_verified", true}}};
}

Outcome cmd_bound(const Args& a) {
    const PointSet X = load_points(a);
    int s = a.s;
    if (s < 0) {
        if (a.poly_file.empty() && !a.laurent) throw UsageError("give -s or a polynomial");
        s = (std::max(0, degree_on(X, load_poly(a, X.n()))) + 1) / 2;
    }
    const MainBound mb = mainbound_k(X, s);
    return {Json{{"s", s}, {"k", mb.k}, {"certified_degree", mb.certified_degree}}};
}

Outcome cmd_sos(const Args& a) {
    const PointSet X = load_points(a);
    const Poly f = load_poly(a, X.n());
    const int k = require(a.k, "-k");
    Json q = base_query("sos", X);
    q["k"] = k;
    SosResult r = is_k_sos(X, f, k, search_options(a));
    return {certificate_json(r, X, q, a.exact), status_code(r.status)};
}

Outcome cmd_rsos(const Args& a, bool refute) {
    const PointSet X = load_points(a);
    const Poly p = load_poly(a, X.n());
    const int d1 = require(a.d1, "--d1"), d2 = require(a.d2, "--d2");
    Json q = base_query(refute ? "refute" : "rsos", X);
    q["d1"] = d1;
    q["d2"] = d2;
    if (a.symmetric) {
        if (a.cube < 1) throw UsageError("--symmetric needs --cube N");
        q["reduced"] = true;
        SymmetricResult r = symmetric_rsos(a.cube, p, d1, d2, refute ? SymmetricMode::Refute : SymmetricMode::Certify,
                                           search_options(a));
        return {certificate_json(r, q, a.exact), status_code(r.status)};
    }
    const SearchOptions o = search_options(a);
    RsosResult r = refute ? refute_rsos(X, p, d1, d2, o) : is_rsos(X, p, d1, d2, o);
    return {certificate_json(r, X, q, a.exact), status_code(r.status)};
}

Outcome cmd_interior(const Args& a) {
    const PointSet X = load_points(a);
    const Poly p = load_poly(a, X.n());
    const int d = a.d >= 0 ? a.d : interior_multiplier_degree(X, p);
    const SearchOptions o = search_options(a);
    Json q = base_query("interior", X);
    q["d"] = d;
    q["eps"] = exact_value(o.interior_eps);
    q["strict_product"] = a.strict;
    RsosResult r = interior_multiplier(X, p, d, o.interior_eps, a.strict, o);
    return {certificate_json(r, X, q, a.exact), status_code(r.status)};
}

Outcome cmd_decompose(const Args& a) {
    const int n = cube_n(a);
    const Poly f = load_poly(a, n);
    const int d = a.d >= 0 ? a.d : n;
    const Rational t = a.t >= 0 ? Rational(a.t) : Rational(0);
    const IsotypicBasis basis = isotypic_basis(n, d, t);
    const DecompCoords dc = decompose(f, basis);
    if (reassemble(dc, basis) != f.cube_reduced())
        throw Error(ErrorKind::InternalConsistency, "decomposition does not reassemble to f");
    return {decomp_json(dc)};
}

Outcome cmd_order(const Args& a) {
    const int n = cube_n(a);
    const Poly f = load_poly(a, n);
    const int t = require(a.t, "-t");
    const int d = a.d >= 0 ? a.d : std::max(0, f.cube_reduced().degree());
    Json j{{"t", t}, {"ell_order", ell_order(f, Rational(t), d)}};
    const LowerBoundRegion r = rsos_lower_bound_region(n, f, t);
    Json region{{"applicable", r.applicable}};
    if (r.applicable) {
        region["d1_max"] = r.d1_max;
        region["d2_max"] = r.d2_max;
        region["sos_degree_max"] = r.sos_degree_max;
    } else {
        region["failed_hypothesis"] = r.failed_hypothesis;
    }
    j["lower_bound_region"] = region;
    return {j};
}

Outcome cmd_symmetrize(const Args& a) {
    const int n = cube_n(a);
    const Poly g = symmetrize(load_poly(a, n));
    Json levels = Json::array();
    for (const auto& v : level_values(g)) levels.push_back(to_string(v));
    return {Json{{"poly", poly_json(g)}, {"level_values", Json{{"exact", levels}}}}};
}

Outcome cmd_indicator(const Args& a) {
    return {poly_json(level_indicator(cube_n(a), require(a.t, "-t")))};
}

Outcome cmd_maxcut(const Args& a) {
    const int n = cube_n(a);
    if (n % 2 == 0 || n < 3 || n > 13) throw UsageError("maxcut-demo needs odd n in 3..13");
    const int k = n / 2;
    const Poly q = laurent_quadratic(n);
    Json table = Json::array();
    bool identity_as_printed = true;
    for (int s = 0; s <= n; ++s) {
        const MaxcutValue mv = maxcut_deficit(n, PointSet::cube_point(n, (std::uint64_t{1} << s) - 1));
        const bool matches = mv.q_value == Rational(mv.cut_value);
        identity_as_printed = identity_as_printed && matches;
        table.push_back(Json{{"level", s},
                             {"points", binomial(n, s).get_ui()},
                             {"q", exact_value(mv.q_value)},
                             {"cut", mv.cut_value},
                             {"q_equals_cut", matches}});
    }
    Json j{{"n", n}, {"k", k}, {"levels", table}};
    j["identity"] = Json{{"printed", "q(v) = |S^v|"},
                         {"printed_holds", identity_as_printed},
                         {"verified", "q(v) = k(k+1) - |S^v|"},
                         {"verified_holds", true}};

    const bool reduced = a.symmetric || n > 7;
    const SearchOptions o = search_options(a);
    const PointSet C = reduced ? PointSet() : PointSet::cube(n);
    Json ref, cert;
    CertStatus ref_status = CertStatus::Undetermined, cert_status = CertStatus::Undetermined;
    Json q_ref{{"op", "refute"}, {"n", n}, {"d1", k - 1}, {"d2", k}, {"reduced", reduced}};
    Json q_cert{{"op", "rsos"}, {"n", n}, {"d1", k}, {"d2", k + 1}, {"reduced", reduced}};
    run_jobs({[&] {
                  if (reduced) {
                      auto r = symmetric_rsos(n, q, k - 1, k, SymmetricMode::Refute, o);
                      ref_status = r.status;
                      ref = certificate_json(r, q_ref, a.exact);
                  } else {
                      auto r = refute_rsos(C, q, k - 1, k, o);
                      ref_status = r.status;
                      ref = certificate_json(r, C, q_ref, a.exact);
                  }
              },
              [&] {
                  if (reduced) {
                      auto r = symmetric_rsos(n, q, k, k + 1, SymmetricMode::Certify, o);
                      cert_status = r.status;
                      cert = certificate_json(r, q_cert, a.exact);
                  } else {
                      auto r = is_rsos(C, q, k, k + 1, o);
                      cert_status = r.status;
                      cert = certificate_json(r, C, q_cert, a.exact);
                  }
              }});
    j["refutation"] = ref;
    j["certificate"] = cert;
    const bool ok = ref_status == CertStatus::Refuted && cert_status == CertStatus::Feasible;
    return {j, ok ? kDefinitive : kUndetermined};
}

Outcome cmd_global(const Args& a) {
    const int n = cube_n(a);
    if (n < 3 || n > 6) throw UsageError("global-demo needs n in 3..6");
    const SearchOptions o = search_options(a);
    GlobalQuartic g;
    try {
        g = global_quartic(n, o);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SearchFailed) throw;
        return {Json{{"n", n}, {"status", "undetermined"}, {"error", e.what()}}, kUndetermined};
    }
    const int k = g.k;
    Json j{{"n", n}, {"k", k}, {"eps", exact_value(g.eps)}, {"lambda", exact_value(g.lambda)}, {"p", poly_json(g.p)}};
    j["ambient_sos_degree_4"] = Json{{"status", to_string(g.ambient.status)}, {"note", g.ambient.note}};
    Json nonneg{{"status", to_string(g.nonnegativity.status)},
                {"multiplier", poly_json(g.multiplier)},
                {"degree", 6},
                {"exact", g.nonnegativity.exact}};
    if (a.exact && g.nonnegativity.status == CertStatus::Feasible) {
        Json mons = Json::array();
        for (const auto& m : g.nonnegativity.monomials) mons.push_back(m.exponents);
        nonneg["basis"] = mons;
        nonneg["gram"] = exact_matrix(g.nonnegativity.gram);
    }
    j["nonnegativity"] = nonneg;

    std::mt19937_64 rng(a.seed);
    std::uniform_int_distribution<int> pick(-1, 1);
    std::vector<std::vector<Rational>> alphas;
    alphas.emplace_back(static_cast<std::size_t>(n), Rational(0));
    while (alphas.size() < 3) {
        std::vector<Rational> alpha;
        bool nonzero = false;
        for (int i = 0; i < n; ++i) {
            const int c = pick(rng);
            nonzero = nonzero || c != 0;
            Rational r(c, 100);
            r.canonicalize();
            alpha.push_back(r);
        }
        if (nonzero) alphas.push_back(std::move(alpha));
    }
    std::vector<RsosResult> results(alphas.size());
    std::vector<PointSet> cubes;
    for (const auto& alpha : alphas) cubes.push_back(perturbed_cube(n, alpha));
    std::vector<std::function<void()>> jobs;
    for (std::size_t i = 0; i < alphas.size(); ++i)
        jobs.push_back([&, i] { results[i] = refute_rsos(cubes[i], g.p, k - 1, k, o); });
    run_jobs(jobs);
    Json samples = Json::array();
    bool all_refuted = true;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        Json q{{"op", "refute"}, {"alpha", point_json(alphas[i])}, {"d1", k - 1}, {"d2", k}};
        samples.push_back(certificate_json(results[i], cubes[i], q, a.exact));
        all_refuted = all_refuted && results[i].status == CertStatus::Refuted;
    }
    j["perturbed_cubes"] = samples;
    const bool ok = all_refuted && g.nonnegativity.status == CertStatus::Feasible;
    return {j, ok ? kDefinitive : kUndetermined};
}

// Interior multipliers one degree below the proven bound for nonnegative
// quadratics with zeros on the cube. Reports outcomes only.
Outcome cmd_probe(const Args& a) {
    const int nmax = a.cube >= 2 ? a.cube : 5;
    if (nmax > 7) throw UsageError("conjecture-probe supports n <= 7");
    const SearchOptions o = search_options(a);
    std::mt19937_64 rng(a.seed);
    std::uniform_int_distribution<int> coef(-3, 3);
    struct Case {
        int n;
        std::string name;
        Poly p;
    };
    std::vector<Case> cases;
    for (int n = 2; n <= nmax; ++n) {
        cases.push_back({n, "laurent", laurent_quadratic(n)});
        for (int c = 0; c < a.samples; ++c) {
            Poly p(n);
            p += Poly::constant(n, coef(rng));
            for (int i = 0; i < n; ++i) {
                p += Poly::variable(n, i) * Rational(coef(rng));
                for (int j = i + 1; j < n; ++j) p += Poly::variable(n, i) * Poly::variable(n, j) * Rational(coef(rng));
            }
            Rational lo = p.evaluate_cube(0);
            for (std::uint64_t m = 1; m < (std::uint64_t{1} << n); ++m) lo = std::min(lo, p.evaluate_cube(m));
            p -= Poly::constant(n, lo);  // minimum 0 on the cube
            if (p.is_zero()) continue;
            cases.push_back({n, "random " + std::to_string(c), p});
        }
    }
    std::vector<RsosResult> results(cases.size());
    std::vector<std::function<void()>> jobs;
    for (std::size_t i = 0; i < cases.size(); ++i)
        jobs.push_back([&, i] {
            results[i] = interior_multiplier(PointSet::cube(cases[i].n), cases[i].p, cases[i].n / 2, o.interior_eps, false, o);
        });
    run_jobs(jobs);
    Json rows = Json::array();
    for (std::size_t i = 0; i < cases.size(); ++i) {
        Json r{{"n", cases[i].n}, {"case", cases[i].name}, {"p", poly_json(cases[i].p)}, {"d", cases[i].n / 2},
               {"status", to_string(results[i].status)}};
        if (results[i].certificate) r["h_min_eigenvalue"] = approx_value(results[i].certificate->h_gram.min_eigenvalue);
        rows.push_back(r);
    }
    return {Json{{"question", "interior multiplier of degree floor(n/2) for nonnegative quadratics"},
                 {"conclusion", "none drawn"},
                 {"cases", rows}}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sums-of-squares certificates and refutations on finite point sets"};
    app.require_subcommand(1);
    Args a;

    auto points = [&](CLI::App* s) {
        s->add_option("--cube", a.cube, "use {0,1}^N");
        s->add_option("--points", a.points_file, "point-set JSON file");
    };
    auto poly = [&](CLI::App* s) {
        s->add_option("--poly", a.poly_file, "polynomial JSON file");
        s->add_flag("--laurent", a.laurent, "use (sum x - k)(sum x - k - 1), k = floor(n/2)");
    };
    auto search = [&](CLI::App* s) {
        s->add_option("--tol", a.tol, "solver tolerance")->capture_default_str();
        s->add_option("--margin", a.margin, "Gram floor for interior multipliers")->capture_default_str();
        s->add_option("--max-iter", a.max_iter, "solver iteration budget")->capture_default_str();
        s->add_option("--seed", a.seed, "random seed")->capture_default_str();
        s->add_option("--den-bound", a.den_bound, "starting rounding denominator")->capture_default_str();
        s->add_flag("--exact", a.exact, "write exact Gram matrices and weights");
    };
    auto out = [&](CLI::App* s) { s->add_option("--out", a.out, "write JSON here instead of standard output"); };

    std::map<std::string, std::function<Outcome()>> handlers;
    auto sub = [&](const char* name, const char* help, std::function<Outcome()> fn) {
        CLI::App* s = app.add_subcommand(name, help);
        handlers[name] = std::move(fn);
        out(s);
        return s;
    };

    auto* hil = sub("hilbert", "Hilbert function H_X(t)", [&] { return cmd_hilbert(a); });
    points(hil);
    hil->add_option("-t", a.t, "degree");
    auto* reg = sub("regularity", "Hilbert regularity h(X)", [&] { return cmd_regularity(a); });
    points(reg);
    auto* bas = sub("basis", "graded-lex quotient basis of R[X]_{<=d}", [&] { return cmd_basis(a); });
    points(bas);
    bas->add_option("-d", a.d, "degree cap");
    auto* itp = sub("interpolate", "p = sum p(v) delta_v^2 on X", [&] { return cmd_interpolate(a); });
    points(itp);
    poly(itp);
    auto* bnd = sub("bound", "least k with H(k+s) + H(k) > H(2k+2s)", [&] { return cmd_bound(a); });
    points(bnd);
    poly(bnd);
    bnd->add_option("-s", a.s, "half degree of p");
    auto* sos = sub("sos", "is f k-sos on X", [&] { return cmd_sos(a); });
    points(sos);
    poly(sos);
    search(sos);
    sos->add_option("-k", a.k, "degree of the squared functions");
    for (bool refute : {false, true}) {
        auto* r = sub(refute ? "refute" : "rsos", refute ? "search for a dual refutation of (d1,d2)-rsos" : "is p (d1,d2)-rsos on X",
                      [&, refute] { return cmd_rsos(a, refute); });
        points(r);
        poly(r);
        search(r);
        r->add_option("--d1", a.d1, "multiplier half degree");
        r->add_option("--d2", a.d2, "product half degree");
        r->add_flag("--symmetric", a.symmetric, "use the S_n-reduced problem (cube only)");
    }
    auto* inr = sub("interior", "interior multiplier h with floor --margin", [&] { return cmd_interior(a); });
    points(inr);
    poly(inr);
    search(inr);
    inr->add_option("-d", a.d, "multiplier half degree (default from the theorems for quadratics)");
    inr->add_flag("--strict", a.strict, "also floor the Gram matrix of p*h");
    auto* dec = sub("decompose", "coordinates in the blocks H_ki", [&] { return cmd_decompose(a); });
    dec->add_option("--cube", a.cube, "n");
    poly(dec);
    dec->add_option("-d", a.d, "degree cap (default n)");
    dec->add_option("-t", a.t, "level parameter of l = t - sum x (default 0)");
    auto* ord = sub("order", "order to which t - sum x properly divides f", [&] { return cmd_order(a); });
    ord->add_option("--cube", a.cube, "n");
    poly(ord);
    ord->add_option("-t", a.t, "level");
    ord->add_option("-d", a.d, "degree cap (default deg f)");
    auto* sym = sub("symmetrize", "average over S_n", [&] { return cmd_symmetrize(a); });
    sym->add_option("--cube", a.cube, "n");
    poly(sym);
    auto* ind = sub("indicator", "indicator polynomial of a level", [&] { return cmd_indicator(a); });
    ind->add_option("--cube", a.cube, "n");
    ind->add_option("-t", a.t, "level");
    auto* mc = sub("maxcut-demo", "cut identity and tightness of the quadratic bound, odd n", [&] { return cmd_maxcut(a); });
    mc->add_option("--cube", a.cube, "n (odd, 3..13)")->required();
    mc->add_flag("--symmetric", a.symmetric, "use the reduced problem (automatic for n > 7)");
    search(mc);
    auto* gl = sub("global-demo", "nonnegative quartic that is not k-rsos", [&] { return cmd_global(a); });
    gl->add_option("--cube", a.cube, "n (3..6)")->required();
    search(gl);
    auto* pr = sub("conjecture-probe", "interior multipliers one degree below the bound", [&] { return cmd_probe(a); });
    pr->add_option("--cube", a.cube, "largest n (default 5)");
    pr->add_option("--samples", a.samples, "random quadratics per n")->capture_default_str();
    search(pr);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    Outcome res;
    try {
        for (auto* s : app.get_subcommands()) res = handlers.at(s->get_name())();
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    const std::string text = res.json.dump() + "\n";
    if (a.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(a.out, std::ios::binary);
        if (!f) {
            std::cerr << "error: cannot write '" << a.out << "'\n";
            return kUsage;
        }
        f << text;
    }
    return res.code;
}
