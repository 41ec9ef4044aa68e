#include "jfk/io.hpp"

namespace jfk::io {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw Error("InvalidInput", what);
}

const json& field(const json& j, const char* key) {
    require(j.is_object() && j.contains(key), std::string("missing field '") + key + "'");
    return j.at(key);
}

json elt_json(const Elt& e) {
    json out = json::array();
    for (long x : e) out.push_back(x);
    return out;
}

json gens_json(const Fqm& a, const std::vector<size_t>& gens) {
    json out = json::array();
    for (size_t g : gens) out.push_back(elt_json(a.elt(g)));
    return out;
}

}  // namespace

json to_json(const Rational& r) { return to_string(r); }

Rational rational_from(const json& j) {
    if (j.is_number_integer()) return Rational(j.get<long>());
    require(j.is_string(), "expected a rational string");
    return parse_rational(j.get<std::string>());
}

json to_json(const QVec& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(to_json(x));
    return out;
}

json to_json(const QMat& m) {
    json out = json::array();
    for (const auto& row : m) out.push_back(to_json(row));
    return out;
}

QVec qvec_from(const json& j) {
    require(j.is_array(), "expected an array of rationals");
    QVec v;
    for (const auto& x : j) v.push_back(rational_from(x));
    return v;
}

QMat qmat_from(const json& j) {
    require(j.is_array(), "expected a matrix");
    QMat m;
    for (const auto& row : j) m.push_back(qvec_from(row));
    return m;
}

json to_json(const ZMat& m) {
    json out = json::array();
    for (const auto& row : m) {
        json r = json::array();
        for (const auto& x : row) r.push_back(to_string(x));
        out.push_back(r);
    }
    return out;
}

Elt elt_from(const json& j) {
    require(j.is_array(), "expected a residue vector");
    Elt e;
    for (const auto& x : j) {
        require(x.is_number_integer(), "residues must be integers");
        e.push_back(x.get<long>());
    }
    return e;
}

json to_json(const Cyclotomic& c) {
    Cyclotomic s = c.simplified();
    json coeffs = json::object();
    for (const auto& [k, v] : s.coeffs()) coeffs[std::to_string(k)] = to_json(v);
    return {{"order", s.order()}, {"coeffs", coeffs}};
}

Cyclotomic cyclotomic_from(const json& j) {
    if (j.is_string() || j.is_number_integer()) return Cyclotomic(rational_from(j));
    long order = field(j, "order").get<long>();
    require(order >= 1, "cyclotomic order must be positive");
    std::map<long, Rational> c;
    for (const auto& [k, v] : field(j, "coeffs").items()) c[std::stol(k)] = rational_from(v);
    return Cyclotomic::from_coeffs(order, c);
}

json to_json(const KElement& k) { return {{"x", to_json(k.x())}, {"y", to_json(k.y())}}; }

KElement kelement_from(const json& j, long d) {
    if (j.is_string() || j.is_number_integer()) return KElement(rational_from(j), 0, d);
    return KElement(rational_from(field(j, "x")), rational_from(field(j, "y")), d);
}

json to_json(const ZLattice& l) { return {{"rank", l.rank()}, {"gram", to_json(l.gram())}}; }

ZLattice zlattice_from(const json& j) { return ZLattice(qmat_from(field(j, "gram"))); }

json to_json(const OLattice& m) {
    json g = json::array();
    for (const auto& row : m.hgram()) {
        json r = json::array();
        for (const auto& x : row) r.push_back(to_json(x));
        g.push_back(r);
    }
    return {{"d", m.d()}, {"rank", m.rank()}, {"hgram", g}};
}

OLattice olattice_from(const json& j) {
    long d = field(j, "d").get<long>();
    KMat g;
    for (const auto& row : field(j, "hgram")) {
        KVec r;
        for (const auto& x : row) r.push_back(kelement_from(x, d));
        g.push_back(r);
    }
    return OLattice(d, g);
}

json to_json(const Fqm& a) {
    json orders = json::array();
    for (long n : a.orders()) orders.push_back(n);
    return {{"orders", orders}, {"qvals", to_json(a.qvals())}, {"gram", to_json(a.gram())}};
}

Fqm fqm_from(const json& j) {
    std::vector<long> orders;
    for (const auto& x : field(j, "orders")) orders.push_back(x.get<long>());
    QVec q = qvec_from(field(j, "qvals"));
    QMat g = j.contains("gram") ? qmat_from(j.at("gram")) : QMat{};
    if (!j.contains("gram")) {  // diagonal form
        g = q_zero(orders.size(), orders.size());
        for (size_t i = 0; i < orders.size(); ++i) g[i][i] = frac(2 * q[i]);
    }
    return Fqm(orders, q, g, !j.value("allow_degenerate", false));
}

json to_json(const Fqm& a, const Subgroup& s) { return {{"gens", gens_json(a, s.gens)}}; }

Subgroup subgroup_from(const Fqm& a, const json& j) {
    std::vector<Elt> gens;
    for (const auto& g : field(j, "gens")) {
        Elt e = elt_from(g);
        require(e.size() == a.rank(), "subgroup generator has the wrong length");
        gens.push_back(e);
    }
    return subgroup_closure(a, gens);
}

json to_json(const HorizontalData& h) {
    json img = json::array();
    for (size_t g : h.HM.gens) img.push_back(elt_json(h.D.elt(static_cast<size_t>(h.iota[g]))));
    return {{"hm_gens", gens_json(h.DM, h.HM.gens)}, {"iota_images", img}};
}

HorizontalData horizontal_from(const Fqm& dm, const Fqm& d, const json& j) {
    std::vector<Elt> g, img;
    for (const auto& x : field(j, "hm_gens")) g.push_back(elt_from(x));
    for (const auto& x : field(j, "iota_images")) img.push_back(elt_from(x));
    require(g.size() == img.size(), "hm_gens and iota_images differ in length");
    return make_horizontal(dm, d, g, img);
}

json to_json(const ModularFormData& f, bool with_bounds) {
    json entries = json::array();
    for (const auto& [key, c] : f.coeffs)
        entries.push_back({{"n", to_json(key.first)}, {"delta", elt_json(f.target.elt(key.second))}, {"coeff", to_json(c)}});
    json out = {{"target", to_json(f.target)}, {"weight", to_json(f.weight)}, {"entries", entries}};
    if (with_bounds && !f.complete_to.empty()) {
        json b = json::array();
        for (const auto& x : f.complete_to) b.push_back(x ? to_json(*x) : json(nullptr));
        out["complete_to"] = b;
    }
    return out;
}

ModularFormData form_from(const json& j) {
    ModularFormData f;
    f.target = fqm_from(field(j, "target"));
    if (j.contains("weight")) f.weight = rational_from(j.at("weight"));
    for (const auto& e : field(j, "entries")) {
        Elt d = elt_from(field(e, "delta"));
        require(d.size() == f.target.rank(), "delta has the wrong length");
        f.set(rational_from(field(e, "n")), f.target.index(d), cyclotomic_from(field(e, "coeff")));
    }
    return f;
}

json to_json(const JacobiExpansion& phi) {
    const auto& ctx = *phi.ctx;
    const Fqm& delta = ctx.dd.q.fqm;
    json entries = json::array();
    for (const auto& [k, c] : phi.coeffs)
        entries.push_back({{"m", to_json(k.m)}, {"lam", to_json(k.lam)}, {"beta", elt_json(delta.elt(k.beta))},
                           {"coeff", to_json(c)}});
    return {{"lattice", to_json(ctx.lattice)}, {"D", to_json(ctx.h.D)}, {"H", to_json(ctx.h)},
            {"window", to_json(phi.window)}, {"entries", entries}};
}

JacobiExpansion expansion_from(const json& j) {
    Discriminant disc = discriminant_group(zlattice_from(field(j, "lattice")));
    HorizontalData h = horizontal_from(disc.fqm, fqm_from(field(j, "D")), field(j, "H"));
    JacobiExpansion phi;
    phi.ctx = make_jacobi_context(disc, h);
    phi.window = rational_from(field(j, "window"));
    const Fqm& delta = phi.ctx->dd.q.fqm;
    for (const auto& e : field(j, "entries")) {
        Elt b = elt_from(field(e, "beta"));
        require(b.size() == delta.rank(), "beta has the wrong length");
        QVec lam = qvec_from(field(e, "lam"));
        require(lam.size() == disc.lattice.rank(), "lam has the wrong length");
        phi.add({rational_from(field(e, "m")), lam, delta.index(b)}, cyclotomic_from(field(e, "coeff")));
    }
    return phi;
}

json to_json(const CMatrix& m) {
    json rows = json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (size_t j = 0; j < m.cols(); ++j) r.push_back(to_json(m.at(i, j)));
        rows.push_back(r);
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", rows}};
}

MatrixIndexInput mindex_from(const json& j) {
    MatrixIndexInput in;
    if (j.contains("d") && !j.at("d").is_null()) {
        long d = j.at("d").get<long>();
        in.d = d;
        for (const auto& row : field(j, "S")) {
            KVec r;
            for (const auto& x : row) r.push_back(kelement_from(x, d));
            in.SH.push_back(r);
        }
    } else {
        in.S = qmat_from(field(j, "S"));
    }
    in.delta = fqm_from(field(j, "delta"));
    for (const auto& x : field(j, "psi_images")) in.psi_images.push_back(elt_from(x));
    return in;
}

json to_json(const MatrixIndexSetting& s) {
    const Fqm& dom = s.disc.fqm;
    json emb = json::array();
    for (size_t x : s.DOS.elements)
        emb.push_back({elt_json(dom.elt(x)), elt_json(s.v.input.delta.elt(static_cast<size_t>(s.psi_embedding[x])))});
    json out = {{"c", s.v.c},
                {"SZ", to_json(s.v.SZ)},
                {"omega_basis", to_json(s.omega_basis)},
                {"kernel_basis", to_json(s.kernel_basis)},
                {"l_basis", to_json(s.l_basis)},
                {"L", to_json(s.L)},
                {"D_Omega", to_json(dom)},
                {"D_Omega_S", to_json(dom, s.DOS)},
                {"H_Omega", to_json(dom, s.HOmega)},
                {"psi_embedding", emb}};
    if (s.M) out["M"] = to_json(*s.M);
    return out;
}

json to_json(const MatrixJacobiExpansion& e, const MatrixIndexSetting& s) {
    json entries = json::array();
    for (const auto& [k, c] : e.coeffs)
        entries.push_back({{"m", to_json(k.m)}, {"r", to_json(k.r)}, {"beta", elt_json(s.v.input.delta.elt(k.beta))},
                           {"coeff", to_json(c)}});
    return {{"window", to_json(e.window)}, {"entries", entries}};
}

json to_json(const Witness& w) {
    return {{"m", to_json(w.m)}, {"lam", to_json(w.lam)}, {"beta", w.beta}, {"detail", w.detail}};
}

json to_json(const PeriodicityCheck& p) {
    json out = {{"ok", p.ok}, {"loss", to_json(p.loss)}, {"window", to_json(p.window)}, {"compared", p.compared}};
    if (p.witness) out["witness"] = to_json(*p.witness);
    return out;
}

json to_json(const PullupReport& r) {
    json out = {{"ok", r.ok},
                {"special_case", r.special_case},
                {"special_map_ok", r.special_map_ok},
                {"dimensions_ok", r.dimensions_ok},
                {"window", to_json(r.window)},
                {"compared", r.compared},
                {"delta_size", r.delta_size},
                {"delta_bar_size", r.delta_bar_size}};
    if (r.witness) out["witness"] = to_json(*r.witness);
    return out;
}

json to_json(const Descent& d, const Fqm& parent) {
    return {{"I", to_json(parent, d.I)}, {"dbar", to_json(d.dbar.fqm)}, {"g", to_json(d.g, true)}};
}

}  // namespace jfk::io
