// jfk: JSON front end for the library. Reads one document (--input, default stdin),
// writes one JSON document to stdout. Exit 0 on success, 1 when a mathematical
// check fails (with a witness), 2 on bad input.

#include "jfk/io.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

using namespace jfk;
using jfk::io::json;

namespace {

const std::set<std::string> kMathFailures = {"NotPeriodic", "InconsistentCoefficients", "RelationFailed",
                                             "CheckFailed"};

struct Failure {
    json body;
};

json read_input(const std::string& path) {
    try {
        if (path == "-") return json::parse(std::cin);
        std::ifstream in(path);
        if (!in) throw Error("InvalidInput", "cannot open " + path);
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error("InvalidInput", std::string("malformed JSON: ") + e.what());
    }
}

const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw Error("InvalidInput", std::string("missing field '") + key + "'");
    return j.at(key);
}

bool is_hermitian(const json& j) { return j.is_object() && j.contains("hgram"); }

// Lattice, D, H from one document.
struct JacobiSetup {
    Discriminant disc;
    HorizontalData h;
};
JacobiSetup jacobi_setup(const json& j) {
    JacobiSetup s;
    s.disc = discriminant_group(io::zlattice_from(need(j, "lattice")));
    Fqm d = io::fqm_from(need(j, "D"));
    s.h = j.contains("H") ? io::horizontal_from(s.disc.fqm, d, j.at("H")) : make_horizontal(s.disc.fqm, d, {}, {});
    return s;
}

std::optional<Rational> opt_rational(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return io::rational_from(j.at(key));
}

ThetaExpansion theta_for(const JacobiSetup& s, const ModularFormData& f, const Rational& bound) {
    auto lo = f.min_n();
    return theta_expansion(s.disc.lattice, (lo && *lo < 0) ? bound - *lo : bound);
}

// ---- lattice ----

json lattice_info(const json& in) {
    json out;
    ZLattice l;
    if (is_hermitian(in)) {
        OLattice m = io::olattice_from(in);
        l = trace_form(m);
        out["d"] = m.d();
        out["o_rank"] = m.rank();
        out["even"] = m.is_even();
    } else {
        l = io::zlattice_from(in);
        out["even"] = l.is_even();
    }
    out["rank"] = l.rank();
    out["det"] = io::to_json(det(l.gram()));
    out["positive_definite"] = l.is_positive_definite();
    if (l.is_even() && det(l.gram()) != 0) {
        Discriminant disc = discriminant_group(l);
        out["discriminant"] = io::to_json(disc.fqm);
        out["sig_mod_8"] = gauss_sum(disc.fqm).sig_mod_8;
    }
    return out;
}

json lattice_dual(const json& in) {
    if (is_hermitian(in)) {
        DualData dd = dual_olattice(io::olattice_from(in));
        json cols = json::array();
        for (const auto& row : dd.hdual) {
            json r = json::array();
            for (const auto& x : row) r.push_back(io::to_json(x));
            cols.push_back(r);
        }
        return {{"hdual", cols}, {"dual_basis", io::to_json(dd.dual_basis)}};
    }
    return {{"dual_basis", io::to_json(dual_zlattice(io::zlattice_from(in)).dual_basis)}};
}

// ---- fqm ----

json fqm_info(const json& in) {
    Fqm a = io::fqm_from(in.contains("fqm") ? in.at("fqm") : in);
    json out = {{"size", a.size()}, {"level", a.level()}, {"nondegenerate", a.is_nondegenerate()}};
    if (a.is_nondegenerate()) out["sig_mod_8"] = gauss_sum(a).sig_mod_8;
    return out;
}

json fqm_perp(const json& in) {
    Fqm a = io::fqm_from(need(in, "fqm"));
    Subgroup s = io::subgroup_from(a, need(in, "subgroup"));
    Subgroup p = perp(a, s);
    return {{"perp", io::to_json(a, p)}, {"size", p.size()}};
}

json fqm_isotropic(const json& in) {
    Fqm a = io::fqm_from(in.contains("fqm") ? in.at("fqm") : in);
    json list = json::array();
    for (const auto& s : isotropic_subgroups(a)) list.push_back(io::to_json(a, s));
    return {{"count", list.size()}, {"subgroups", list}};
}

json fqm_horizontal(const json& in) {
    Fqm dm = io::fqm_from(need(in, "DM")), d = io::fqm_from(need(in, "D"));
    json list = json::array();
    for (const auto& h : horizontal_isotropic_subgroups(dm, d)) list.push_back(io::to_json(h));
    return {{"count", list.size()}, {"subgroups", list}};
}

json fqm_quotient(const json& in) {
    Fqm a = io::fqm_from(need(in, "fqm"));
    Subgroup k = io::subgroup_from(a, need(in, "K"));
    Subgroup p = in.contains("P") ? io::subgroup_from(a, in.at("P")) : perp(a, k);
    if (!is_isotropic(a, k)) throw Error("NotIsotropic", "K is not isotropic");
    return io::to_json(quotient(a, p, k).fqm);
}

json fqm_gauss(const json& in) {
    GaussSum g = gauss_sum(io::fqm_from(in.contains("fqm") ? in.at("fqm") : in));
    return {{"value", io::to_json(g.value)}, {"sig_mod_8", g.sig_mod_8}};
}

// ---- weil ----

IntMat2 parse_int_matrix(const std::string& s) {
    std::istringstream is(s);
    IntMat2 m;
    std::string tok;
    for (int i = 0; i < 4; ++i) {
        if (!(is >> tok)) throw Error("InvalidInput", "--matrix expects four integers 'a b c d'");
        m[i / 2][i % 2] = Integer(tok);
    }
    return m;
}

json weil_matrix(const json& in, const std::string& word, const std::string& matrix, const std::string& u11) {
    if (!u11.empty() || is_hermitian(in.contains("lattice") ? in.at("lattice") : in)) {
        const json& lj = in.contains("lattice") ? in.at("lattice") : in;
        HermitianContext h = make_hermitian_context(io::olattice_from(lj));
        if (!u11.empty()) {
            json mj;
            try {
                mj = json::parse(u11);
            } catch (const json::exception&) {
                throw Error("InvalidInput", "--u11 expects a JSON 2x2 matrix of {x, y} entries");
            }
            KMat2 m;
            for (int i = 0; i < 2; ++i)
                for (int k = 0; k < 2; ++k) m[i][k] = io::kelement_from(mj.at(i).at(k), h.m.d());
            return io::to_json(rho_of(m, h));
        }
        if (word.empty()) throw Error("InvalidInput", "give --word or --u11 for a Hermitian lattice");
        return io::to_json(rho_of(parse_word(word), h));
    }
    Fqm a = in.contains("fqm") ? io::fqm_from(in.at("fqm"))
            : in.contains("gram") ? discriminant_group(io::zlattice_from(in)).fqm
                                  : io::fqm_from(in);
    if (!matrix.empty()) return io::to_json(rho_of(parse_int_matrix(matrix), a));
    if (word.empty()) throw Error("InvalidInput", "give --word, --matrix or --u11");
    return io::to_json(rho_of(parse_word(word), a));
}

// ---- theta ----

json theta_expand(const json& in, const Rational& bound) {
    ThetaExpansion t = is_hermitian(in) ? theta_expansion(io::olattice_from(in), bound)
                                        : theta_expansion(io::zlattice_from(in), bound);
    json terms = json::array();
    for (const auto& term : t.terms)
        terms.push_back({{"lam", io::to_json(term.lam)}, {"coset", t.disc.fqm.elt(term.coset)},
                         {"norm", io::to_json(term.norm)}});
    json counts = json::array();
    for (const auto& [key, n] : t.counts())
        counts.push_back({{"norm", io::to_json(key.first)}, {"coset", t.disc.fqm.elt(key.second)}, {"count", n}});
    return {{"bound", io::to_json(bound)}, {"discriminant", io::to_json(t.disc.fqm)}, {"terms", terms},
            {"counts", counts}};
}

// ---- jacobi ----

json jacobi_build(const json& in) {
    JacobiSetup s = jacobi_setup(in);
    ModularFormData f = io::form_from(need(in, "F"));
    Rational bound = io::rational_from(need(in, "bound"));
    return io::to_json(build_jacobi(theta_for(s, f, bound), f, s.h, opt_rational(in, "window")));
}

void fail_if(bool bad, json body) {
    if (bad) throw Failure{std::move(body)};
}

json jacobi_check(const json& in) {
    JacobiExpansion phi = io::expansion_from(need(in, "expansion"));
    PeriodicityCheck p = check_periodicity(phi, io::qvec_from(need(in, "sigma")), io::qvec_from(need(in, "nu")));
    json out = io::to_json(p);
    fail_if(!p.ok, {{"error", "NotPeriodic"}, {"report", out}});
    return out;
}

json jacobi_pullup(const json& in) {
    JacobiSetup s = jacobi_setup(in);
    Subgroup i = io::subgroup_from(s.h.D, need(in, "I"));
    ModularFormData g = io::form_from(need(in, "G"));
    PullupReport r = verify_pullup(g, i, s.disc, s.h, io::rational_from(need(in, "bound")));
    json out = io::to_json(r);
    fail_if(!r.ok, {{"error", "CheckFailed"}, {"report", out}});
    return out;
}

json jacobi_descend_scalar(const json& in) {
    JacobiExpansion phi = io::expansion_from(need(in, "expansion"));
    Subgroup il = io::subgroup_from(phi.ctx->disc.fqm, need(in, "I_L"));
    return io::to_json(descend_scalar(phi, il), phi.ctx->h.D);
}

json jacobi_descend_vector(const json& in) {
    JacobiExpansion phi = io::expansion_from(need(in, "expansion"));
    std::vector<size_t> k, kappa;
    for (const auto& x : need(in, "k_gens")) k.push_back(phi.ctx->disc.fqm.index(io::elt_from(x)));
    for (const auto& x : need(in, "kappa_images")) kappa.push_back(phi.ctx->h.D.index(io::elt_from(x)));
    return io::to_json(descend_vector(phi, k, kappa), phi.ctx->h.D);
}

json jacobi_classify(const json& in) {
    ClassificationReport r = classify(io::expansion_from(in.contains("expansion") ? in.at("expansion") : in));
    return {{"weak", r.weak}, {"holomorphic", r.holomorphic}, {"cuspidal", r.cuspidal},
            {"window", io::to_json(r.window)}};
}

// Random F with n = q(delta) mod 1 on the recoverable range; checks both compositions.
json jacobi_roundtrip(const json& in, unsigned seed, int trials) {
    JacobiSetup s = jacobi_setup(in);
    Rational bound = io::rational_from(need(in, "bound"));
    auto ctx = make_jacobi_context(s.disc, s.h);
    auto bounds = recoverable_bounds(*ctx, bound);
    std::mt19937 rng(seed);
    ThetaExpansion t = theta_expansion(s.disc.lattice, bound);
    int passed = 0;
    for (int trial = 0; trial < trials; ++trial) {
        ModularFormData f;
        f.target = s.h.D;
        for (size_t d = 0; d < f.target.size(); ++d) {
            if (!bounds[d]) continue;
            for (Rational n = frac(f.target.q(d)); n <= *bounds[d]; n += 1)
                if (rng() % 3) f.set(n, d, Cyclotomic(Rational(static_cast<long>(rng() % 9) - 4)));
        }
        JacobiExpansion phi = build_jacobi(t, f, ctx, bound);
        ModularFormData back = theta_decompose(phi);
        JacobiExpansion again = build_jacobi(t, back, ctx, bound);
        bool ok = same_coefficients(f, back) && !first_difference(phi, again);
        fail_if(!ok, {{"error", "CheckFailed"}, {"trial", trial}, {"seed", seed}, {"F", io::to_json(f)}});
        ++passed;
    }
    return {{"seed", seed}, {"trials", trials}, {"passed", passed}};
}

// ---- matrix index ----

json mindex_validate(const json& in) {
    ValidatedIndex v = validate_psi(io::mindex_from(in.contains("index") ? in.at("index") : in));
    return {{"ok", true}, {"c", v.c}, {"SZ", io::to_json(v.SZ)}};
}

json mindex_build(const json& in) {
    return io::to_json(build_setting(validate_psi(io::mindex_from(in.contains("index") ? in.at("index") : in))));
}

json mindex_jacobi(const json& in) {
    MatrixIndexSetting s = build_setting(validate_psi(io::mindex_from(need(in, "index"))));
    Fqm d = io::fqm_from(need(in, "D"));
    HorizontalData h = in.contains("H") ? io::horizontal_from(s.disc.fqm, d, in.at("H"))
                                        : horizontal_from_subgroup(s.disc.fqm, d, trivial_subgroup(direct_sum(s.disc.fqm, d)));
    ModularFormData f = io::form_from(need(in, "F"));
    auto e = jacobi_matrix_index(f, h, s, io::rational_from(need(in, "bound")));
    return io::to_json(e, s);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact discriminant forms, Weil representations and Jacobi forms of lattice index"};
    app.require_subcommand(1);
    std::string input = "-";
    unsigned seed = 1;
    app.add_option("-i,--input", input, "JSON input file ('-' for stdin)");
    app.add_option("--seed", seed, "seed for randomized checks");

    std::function<json()> action;
    auto bind = [&](CLI::App* sub, std::function<json(const json&)> f) {
        sub->callback([&, f] { action = [&, f] { return f(read_input(input)); }; });
    };

    auto* lattice = app.add_subcommand("lattice", "lattice data")->require_subcommand(1);
    bind(lattice->add_subcommand("info", "rank, determinant, discriminant form"), lattice_info);
    bind(lattice->add_subcommand("dual", "dual basis"), lattice_dual);
    bind(lattice->add_subcommand("trace-form", "orthogonal trace form of a Hermitian lattice"),
         [](const json& in) { return io::to_json(trace_form(io::olattice_from(in))); });

    auto* fqm = app.add_subcommand("fqm", "finite quadratic modules")->require_subcommand(1);
    bind(fqm->add_subcommand("info", "size, level, signature"), fqm_info);
    bind(fqm->add_subcommand("perp", "orthogonal complement"), fqm_perp);
    bind(fqm->add_subcommand("isotropic", "all isotropic subgroups"), fqm_isotropic);
    bind(fqm->add_subcommand("horizontal", "horizontal isotropic subgroups of DM + D"), fqm_horizontal);
    bind(fqm->add_subcommand("quotient", "P/K"), fqm_quotient);
    bind(fqm->add_subcommand("gauss-sum", "Gauss sum and signature mod 8"), fqm_gauss);

    auto* weil = app.add_subcommand("weil", "Weil representation")->require_subcommand(1);
    auto* wm = weil->add_subcommand("matrix", "matrix of a group element");
    std::string word, matrix, u11;
    wm->add_option("--word", word, "word in S, T, T^-1, xiK");
    wm->add_option("--matrix", matrix, "SL2(Z) matrix 'a b c d'");
    wm->add_option("--u11", u11, "U(1,1) matrix as JSON [[{x,y},{x,y}],[...]]");
    bind(wm, [&](const json& in) { return weil_matrix(in, word, matrix, u11); });

    auto* theta = app.add_subcommand("theta", "theta series")->require_subcommand(1);
    auto* te = theta->add_subcommand("expand", "terms with lambda^2/2 <= bound");
    std::string bound = "3";
    te->add_option("--bound", bound, "exponent bound")->required();
    bind(te, [&](const json& in) { return theta_expand(in, parse_rational(bound)); });

    auto* jac = app.add_subcommand("jacobi", "Jacobi forms of lattice index")->require_subcommand(1);
    bind(jac->add_subcommand("build", "Phi from (L, D, H, F)"), jacobi_build);
    auto* dec = jac->add_subcommand("decompose", "F from Phi");
    bool with_bounds = false;
    dec->add_flag("--with-bounds", with_bounds, "include the recoverable bound of each component");
    bind(dec, [&](const json& in) {
        return io::to_json(theta_decompose(io::expansion_from(in.contains("expansion") ? in.at("expansion") : in)),
                           with_bounds);
    });
    bind(jac->add_subcommand("check-periodicity", "periodicity under sigma, nu"), jacobi_check);
    bind(jac->add_subcommand("verify-pullup", "compare Phi for up_I G with the combined arrow"), jacobi_pullup);
    bind(jac->add_subcommand("descend-scalar", "recover G over an over-lattice"), jacobi_descend_scalar);
    bind(jac->add_subcommand("descend-vector", "recover G from a lift kappa"), jacobi_descend_vector);
    bind(jac->add_subcommand("classify", "weak, holomorphic, cuspidal"), jacobi_classify);
    auto* rt = jac->add_subcommand("roundtrip", "randomized build/decompose check");
    int trials = 20;
    rt->add_option("--trials", trials, "number of random F");
    bind(rt, [&](const json& in) { return jacobi_roundtrip(in, seed, trials); });

    auto* mi = app.add_subcommand("mindex", "matrix index")->require_subcommand(1);
    bind(mi->add_subcommand("validate", "check (S, psi)"), mindex_validate);
    bind(mi->add_subcommand("build", "Omega, L, D_Omega, H_Omega"), mindex_build);
    bind(mi->add_subcommand("jacobi", "Jacobi form of matrix index"), mindex_jacobi);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    try {
        std::cout << action().dump(2) << "\n";
        return 0;
    } catch (const Failure& f) {
        std::cout << f.body.dump(2) << "\n";
        return 1;
    } catch (const Error& e) {
        std::cout << json{{"error", e.kind()}, {"message", e.what()}}.dump(2) << "\n";
        return kMathFailures.count(e.kind()) ? 1 : 2;
    } catch (const std::exception& e) {
        std::cout << json{{"error", "InvalidInput"}, {"message", e.what()}}.dump(2) << "\n";
        return 2;
    }
}
