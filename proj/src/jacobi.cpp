#include "jfk/jacobi.hpp"

#include <algorithm>

namespace jfk {

namespace {

bool same_fqm(const Fqm& a, const Fqm& b) {
    return a.orders() == b.orders() && a.qvals() == b.qvals() && a.gram() == b.gram();
}

std::string vec_str(const QVec& v) {
    std::string s = "(";
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_string(v[i]);
    return s + ")";
}

Witness witness_at(const JacobiKey& k, std::string detail) { return {k.m, k.lam, k.beta, std::move(detail)}; }

std::string describe(const Witness& w) {
    return w.detail + " at m=" + to_string(w.m) + " lambda=" + vec_str(w.lam) + " beta=" + std::to_string(w.beta);
}

QVec zero_vec(size_t n) { return QVec(n, Rational(0)); }

Rational theta_bound_for(const Rational& window, const ModularFormData& f) {
    auto lo = f.min_n();
    return (lo && *lo < 0) ? window - *lo : window;
}

}  // namespace

void ModularFormData::set(const Rational& n, size_t delta, const Cyclotomic& c) {
    if (c.is_zero())
        coeffs.erase({n, delta});
    else
        coeffs[{n, delta}] = c;
}

Cyclotomic ModularFormData::get(const Rational& n, size_t delta) const {
    auto it = coeffs.find({n, delta});
    return it == coeffs.end() ? Cyclotomic() : it->second;
}

std::optional<Rational> ModularFormData::min_n() const {
    if (coeffs.empty()) return std::nullopt;
    Rational lo = coeffs.begin()->first.first;
    for (const auto& [k, v] : coeffs) lo = std::min(lo, k.first);
    return lo;
}

bool ModularFormData::support_matches_q() const {
    for (const auto& [k, v] : coeffs)
        if (frac(k.first - target.q(k.second)) != 0) return false;
    return true;
}

bool same_coefficients(const ModularFormData& a, const ModularFormData& b) {
    return same_fqm(a.target, b.target) && a.coeffs == b.coeffs;
}

bool operator<(const JacobiKey& a, const JacobiKey& b) {
    if (a.m != b.m) return a.m < b.m;
    if (a.lam != b.lam) return std::lexicographical_compare(a.lam.begin(), a.lam.end(), b.lam.begin(), b.lam.end());
    return a.beta < b.beta;
}

Cyclotomic JacobiExpansion::get(const JacobiKey& k) const {
    auto it = coeffs.find(k);
    return it == coeffs.end() ? Cyclotomic() : it->second;
}

void JacobiExpansion::add(const JacobiKey& k, const Cyclotomic& c) {
    if (c.is_zero()) return;
    auto it = coeffs.find(k);
    if (it == coeffs.end()) {
        coeffs.emplace(k, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) coeffs.erase(it);
}

std::optional<JacobiKey> first_difference(const JacobiExpansion& a, const JacobiExpansion& b) {
    auto ia = a.coeffs.begin(), ib = b.coeffs.begin();
    while (ia != a.coeffs.end() || ib != b.coeffs.end()) {
        if (ib == b.coeffs.end() || (ia != a.coeffs.end() && ia->first < ib->first)) return ia->first;
        if (ia == a.coeffs.end() || ib->first < ia->first) return ib->first;
        if (ia->second != ib->second) return ia->first;
        ++ia, ++ib;
    }
    if (a.window != b.window) return JacobiKey{std::min(a.window, b.window), {}, 0};
    return std::nullopt;
}

std::shared_ptr<const JacobiContext> make_jacobi_context(const Discriminant& disc, const HorizontalData& h) {
    if (!same_fqm(disc.fqm, h.DM)) throw Error("FqmMismatch", "H does not live on the discriminant form of the lattice");
    auto ctx = std::make_shared<JacobiContext>();
    ctx->lattice = disc.lattice;
    ctx->disc = disc;
    ctx->h = h;
    ctx->dd = quotient_delta(h);
    size_t nl = h.DM.size(), nd = h.D.size(), nb = ctx->dd.q.fqm.size();
    ctx->beta_of.assign(nl * nd, -1);
    ctx->dcomp.assign(nl * nb, -1);
    for (size_t l = 0; l < nl; ++l)
        for (size_t d = 0; d < nd; ++d) {
            size_t a = h.join(l, d);
            if (!ctx->dd.Hperp.contains(a)) continue;
            long b = ctx->dd.q.proj[a];
            ctx->beta_of[l * nd + d] = b;
            long& slot = ctx->dcomp[l * nb + static_cast<size_t>(b)];
            if (slot >= 0 && slot != static_cast<long>(d))
                throw Error("InternalError", "H is not horizontal: two D-parts in one class");
            slot = static_cast<long>(d);
        }
    return ctx;
}

JacobiExpansion build_jacobi(const ThetaExpansion& theta, const ModularFormData& f, const HorizontalData& h,
                             std::optional<Rational> window) {
    return build_jacobi(theta, f, make_jacobi_context(theta.disc, h), window);
}

JacobiExpansion build_jacobi(const ThetaExpansion& theta, const ModularFormData& f,
                             std::shared_ptr<const JacobiContext> ctx, std::optional<Rational> window) {
    if (!same_fqm(theta.disc.fqm, ctx->disc.fqm) || theta.lattice.gram() != ctx->lattice.gram())
        throw Error("FqmMismatch", "theta expansion and H refer to different lattices");
    if (!same_fqm(f.target, ctx->h.D)) throw Error("FqmMismatch", "F does not take values in C[D] for the D of H");
    auto lo = f.min_n();
    Rational w = theta.bound + ((lo && *lo < 0) ? *lo : Rational(0));
    if (window) {
        if (lo && *window > theta.bound + *lo)
            throw Error("InvalidInput", "requested window exceeds what the theta expansion covers");
        w = *window;
    }
    JacobiExpansion phi;
    phi.ctx = ctx;
    phi.window = w;
    size_t nd = ctx->h.D.size();
    std::vector<std::vector<std::pair<Rational, const Cyclotomic*>>> by_d(nd);
    for (const auto& [k, v] : f.coeffs) by_d[k.second].push_back({k.first, &v});
    for (const auto& term : theta.terms) {
        for (size_t d = 0; d < nd; ++d) {
            long b = ctx->beta_of[term.coset * nd + d];
            if (b < 0) continue;
            for (const auto& [n, c] : by_d[d]) {
                Rational m = term.norm + n;
                if (m > w) continue;
                phi.add({m, term.lam, static_cast<size_t>(b)}, *c);
            }
        }
    }
    return phi;
}

std::vector<std::optional<Rational>> recoverable_bounds(const JacobiContext& ctx, const Rational& window) {
    size_t nl = ctx.h.DM.size(), nd = ctx.h.D.size();
    // least norm in each class of D_L
    std::vector<Rational> least(nl);
    for (size_t l = 0; l < nl; ++l) {
        QVec c = ctx.disc.lift(l);
        Rational b = 1;
        while (true) {
            auto v = enumerate_short_vectors(ctx.lattice, c, b);
            if (!v.empty()) {
                least[l] = ctx.lattice.norm(v.front());
                for (const auto& x : v) least[l] = std::min(least[l], ctx.lattice.norm(x));
                break;
            }
            b *= 2;
        }
    }
    std::vector<std::optional<Rational>> out(nd);
    for (size_t d = 0; d < nd; ++d) {
        std::optional<Rational> nu;
        for (size_t l = 0; l < nl; ++l)
            if (ctx.beta_of[l * nd + d] >= 0 && (!nu || least[l] < *nu)) nu = least[l];
        if (nu) out[d] = window - *nu;
    }
    return out;
}

ModularFormData theta_decompose(const JacobiExpansion& phi) {
    const JacobiContext& ctx = *phi.ctx;
    size_t nb = ctx.dd.q.fqm.size();
    ModularFormData f;
    f.target = ctx.h.D;
    for (const auto& [k, c] : phi.coeffs) {
        if (k.m > phi.window) throw Error("InvalidInput", "coefficient outside the stated window");
        size_t l = ctx.disc.project(k.lam);
        long d = ctx.dcomp[l * nb + k.beta];
        if (d < 0)
            throw Error("InconsistentCoefficients",
                        describe(witness_at(k, "lambda class does not meet the Delta_H class")));
        Rational n = k.m - ctx.lattice.norm(k.lam);
        auto it = f.coeffs.find({n, static_cast<size_t>(d)});
        if (it != f.coeffs.end() && it->second != c)
            throw Error("InconsistentCoefficients", describe(witness_at(k, "two vectors of one coset disagree")));
        f.coeffs[{n, static_cast<size_t>(d)}] = c;
    }
    f.complete_to = recoverable_bounds(ctx, phi.window);
    if (f.coeffs.empty()) return f;
    // every vector of every coset must carry the recovered value
    ThetaExpansion theta = theta_expansion(ctx.lattice, theta_bound_for(phi.window, f));
    JacobiExpansion back = build_jacobi(theta, f, phi.ctx, phi.window);
    if (auto k = first_difference(back, phi))
        throw Error("InconsistentCoefficients", describe(witness_at(*k, "coefficient not of theta-decomposition shape")));
    return f;
}

PeriodicityCheck check_periodicity(const JacobiExpansion& phi, const QVec& sigma, const QVec& nu) {
    const JacobiContext& ctx = *phi.ctx;
    size_t s = ctx.disc.project(sigma), n = ctx.disc.project(nu);
    Subgroup hmperp = perp(ctx.h.DM, ctx.h.HM);
    if (!hmperp.contains(s) || !hmperp.contains(n))
        throw Error("NotInHMperp", "sigma and nu must have classes in the orthogonal complement of H_M");
    return check_periodicity_with(phi, sigma, nu, embed_in_delta(ctx.h, ctx.dd, s), embed_in_delta(ctx.h, ctx.dd, n));
}

PeriodicityCheck check_periodicity_with(const JacobiExpansion& phi, const QVec& sigma, const QVec& nu,
                                        size_t sigma_delta, size_t nu_delta) {
    const JacobiContext& ctx = *phi.ctx;
    const ZLattice& l = ctx.lattice;
    const Fqm& delta = ctx.dd.q.fqm;
    ctx.disc.project(sigma);
    ctx.disc.project(nu);
    PeriodicityCheck rep;
    Rational s2 = l.norm(sigma);
    rep.loss = s2;
    auto twist_src = [&](const QVec& lam) { return e_of(l.pair(lam, nu)); };
    auto twist_tgt = [&](size_t beta) { return e_of(delta.b(nu_delta, beta)); };
    auto compare = [&](const JacobiKey& src, const JacobiKey& tgt) {
        ++rep.compared;
        Cyclotomic lhs = phi.get(src) * twist_src(src.lam);
        Cyclotomic rhs = phi.get(tgt) * twist_tgt(src.beta);
        if (lhs == rhs) return true;
        rep.ok = false;
        rep.witness = witness_at(src, "periodicity fails; partner m=" + to_string(tgt.m) + " lambda=" + vec_str(tgt.lam) +
                                          " beta=" + std::to_string(tgt.beta));
        return false;
    };
    for (const auto& [k, c] : phi.coeffs) {
        Rational p = l.pair(k.lam, sigma);
        rep.loss = std::max(rep.loss, Rational((p < 0 ? Rational(-p) : p) + s2));
    }
    rep.window = phi.window - rep.loss;
    for (const auto& [k, c] : phi.coeffs) {
        JacobiKey tgt{k.m + l.pair(k.lam, sigma) + s2, add(k.lam, sigma), delta.add(k.beta, sigma_delta)};
        if (tgt.m <= phi.window && !compare(k, tgt)) return rep;
    }
    for (const auto& [k, c] : phi.coeffs) {
        QVec lam = sub(k.lam, sigma);
        JacobiKey src{k.m - l.pair(lam, sigma) - s2, lam, delta.sub(k.beta, sigma_delta)};
        if (src.m > phi.window || phi.coeffs.count(src)) continue;
        if (!compare(src, k)) return rep;
    }
    return rep;
}

ClassificationReport classify(const JacobiExpansion& phi) {
    ClassificationReport r;
    r.window = phi.window;
    for (const auto& [k, c] : phi.coeffs) {
        Rational n = k.m - phi.ctx->lattice.norm(k.lam);
        if (k.m < 0) r.weak = false;
        if (n < 0) r.holomorphic = false;
        if (n <= 0) r.cuspidal = false;
    }
    r.holomorphic = r.holomorphic && r.weak;
    r.cuspidal = r.cuspidal && r.holomorphic;
    return r;
}

ModularFormData uparrow(const ModularFormData& g, const Fqm& d, const Subgroup& i, const Quotient& dbar) {
    if (!same_fqm(g.target, dbar.fqm)) throw Error("FqmMismatch", "G does not take values in C[I-perp/I]");
    ModularFormData f;
    f.target = d;
    f.weight = g.weight;
    std::vector<std::vector<size_t>> fibre(dbar.fqm.size());
    for (size_t x = 0; x < d.size(); ++x)
        if (dbar.proj[x] >= 0) fibre[static_cast<size_t>(dbar.proj[x])].push_back(x);
    for (const auto& [k, v] : g.coeffs)
        for (size_t x : fibre[k.second]) f.coeffs[{k.first, x}] = v;
    if (!g.complete_to.empty()) {
        f.complete_to.assign(d.size(), std::nullopt);
        for (size_t x = 0; x < d.size(); ++x)
            if (dbar.proj[x] >= 0) f.complete_to[x] = g.complete_to[static_cast<size_t>(dbar.proj[x])];
    }
    (void)i;
    return f;
}

OverLattice over_lattice(const Discriminant& disc, const Subgroup& i_l) {
    size_t n = disc.lattice.rank();
    std::vector<QVec> gens;
    for (size_t j = 0; j < n; ++j) {
        QVec e = zero_vec(n);
        e[j] = 1;
        gens.push_back(e);
    }
    for (size_t x : i_l.gens) gens.push_back(disc.lift(x));
    Integer den = 1;
    for (const auto& v : gens)
        for (const auto& r : v) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), r.get_den_mpz_t());
    ZMat z(n, ZVec(gens.size()));
    for (size_t c = 0; c < gens.size(); ++c)
        for (size_t r = 0; r < n; ++r) z[r][c] = Rational(gens[c][r] * den).get_num();
    ZMat b = lattice_basis(z);
    OverLattice o;
    o.basis = q_zero(n, n);
    for (size_t r = 0; r < n; ++r)
        for (size_t c = 0; c < n; ++c) o.basis[r][c] = Rational(b[r][c]) / den;
    o.basis_inv = inverse(o.basis);
    o.lattice = ZLattice(mul(transpose(o.basis), mul(disc.lattice.gram(), o.basis)));
    if (!o.lattice.is_even()) throw Error("NotIsotropic", "I_L is not isotropic: the over-lattice is not even");
    return o;
}

namespace {

// Both sides of the up-arrow compatibility for G over D-bar = I-perp/I.
struct PullupData {
    JacobiExpansion rhs;  // combined arrow applied to Phi_Lambda
    CombinedArrow c;
    Subgroup I, I_L;
    size_t delta_bar_size = 0, hbar_size = 0, dlambda_size = 0;
    bool ident_ok = true;
};

PullupData pullup_rhs(const ModularFormData& g, const Subgroup& i_in_d, const Quotient& dbar,
                      const std::shared_ptr<const JacobiContext>& ctx, const Rational& window) {
    const HorizontalData& h = ctx->h;
    const Discriminant& disc = ctx->disc;
    PullupData pd;
    pd.I = i_in_d;
    pd.c = combined_arrow(h, ctx->dd, i_in_d);
    const Fqm& a = h.A;
    // I_L = iota^{-1}(I meet H_D)
    std::vector<size_t> il;
    for (size_t x : h.HM.elements)
        if (i_in_d.contains(static_cast<size_t>(h.iota[x]))) il.push_back(x);
    pd.I_L = subgroup_from_elements(h.DM, il);
    OverLattice lam = over_lattice(disc, pd.I_L);
    Discriminant dl = discriminant_group(lam.lattice);
    pd.dlambda_size = dl.fqm.size();
    auto to_dlambda = [&](size_t x) { return dl.project(mul(lam.basis_inv, disc.lift(x))); };
    // H-bar = (H meet I-perp) / I_H inside D_Lambda + D-bar
    std::vector<Elt> hm, io;
    for (size_t k : pd.c.K.gens) {
        long db = dbar.proj[h.part_d(k)];
        if (db < 0) throw Error("InternalError", "H meet I-perp has a D-part outside I-perp");
        hm.push_back(dl.fqm.elt(to_dlambda(h.part_m(k))));
        io.push_back(dbar.fqm.elt(static_cast<size_t>(db)));
    }
    HorizontalData hbar = make_horizontal(dl.fqm, dbar.fqm, hm, io);
    pd.hbar_size = hbar.H.size();
    auto ctxl = make_jacobi_context(dl, hbar);
    const Quotient& dbq = ctxl->dd.q;
    pd.delta_bar_size = dbq.fqm.size();
    // Delta_Hbar -> Bbar through lifts into A
    std::vector<size_t> ident(dbq.fqm.size());
    std::vector<char> hit(pd.c.Bbar.fqm.size(), 0);
    for (size_t b = 0; b < dbq.fqm.size(); ++b) {
        size_t sec = dbq.section[b];
        size_t xl = disc.project(mul(lam.basis, dl.lift(hbar.part_m(sec))));
        size_t xd = dbar.section[hbar.part_d(sec)];
        long col = pd.c.Bbar.proj[h.join(xl, xd)];
        if (col < 0 || hit[static_cast<size_t>(col)] || dbq.fqm.q(b) != pd.c.Bbar.fqm.q(static_cast<size_t>(col))) {
            pd.ident_ok = false;
            throw Error("CheckFailed", "Delta of H-bar does not match the subquotient J-perp/J");
        }
        hit[static_cast<size_t>(col)] = 1;
        ident[b] = static_cast<size_t>(col);
    }
    if (dbq.fqm.size() != pd.c.Bbar.fqm.size())
        throw Error("CheckFailed", "Delta of H-bar and J-perp/J differ in size");
    (void)a;
    std::vector<std::vector<std::pair<size_t, Cyclotomic>>> rows(pd.c.Bbar.fqm.size());
    for (size_t r = 0; r < pd.c.B.fqm.size(); ++r)
        for (size_t col = 0; col < pd.c.Bbar.fqm.size(); ++col)
            if (!pd.c.map.entry_is_zero(r, col)) rows[col].push_back({r, pd.c.map.at(r, col)});
    ThetaExpansion tl = theta_expansion(lam.lattice, theta_bound_for(window, g));
    JacobiExpansion phil = build_jacobi(tl, g, ctxl, window);
    pd.rhs.ctx = ctx;
    pd.rhs.window = window;
    for (const auto& [k, v] : phil.coeffs) {
        QVec lam_l = mul(lam.basis, k.lam);
        for (const auto& [r, e] : rows[ident[k.beta]]) pd.rhs.add({k.m, lam_l, r}, v * e);
    }
    return pd;
}

// Special shapes of I against H_D, with the map the combined arrow must reduce to.
int special_case(const HorizontalData& h, const Subgroup& i) {
    Subgroup hdperp = perp(h.D, h.HD);
    bool in_hd = is_subset(i, h.HD), in_perp = is_subset(i, hdperp);
    bool meets_hd = intersect(h.D, i, h.HD).size() > 1, meets_perp = intersect(h.D, i, hdperp).size() > 1;
    if (in_hd && in_perp) return 1;
    if (in_perp && !meets_hd) return 2;
    if (in_hd && !meets_perp) return 3;
    if (!meets_hd && !meets_perp) return 4;
    return 0;
}

bool special_map_ok(const DeltaData& dd, const CombinedArrow& c, int sc) {
    if (sc == 1 || sc == 2) {
        std::vector<size_t> g;
        for (size_t x : c.I.gens) g.push_back(static_cast<size_t>(c.B.proj[x]));
        Arrows ib = arrows(c.B.fqm, subgroup_closure(c.B.fqm, g));
        if (ib.delta.fqm.size() != c.Bbar.fqm.size()) return false;
        for (size_t al = 0; al < c.Bbar.fqm.size(); ++al) {
            long phi = ib.delta.proj[static_cast<size_t>(c.B.proj[c.Bbar.section[al]])];
            if (phi < 0) return false;
            for (size_t be = 0; be < c.B.fqm.size(); ++be)
                if (c.map.at(be, al) != ib.up.at(be, static_cast<size_t>(phi))) return false;
        }
        return true;
    }
    if (sc == 3 || sc == 4) {
        std::vector<char> used(c.B.fqm.size(), 0);
        for (size_t al = 0; al < c.Bbar.fqm.size(); ++al) {
            size_t ones = 0;
            for (size_t be = 0; be < c.B.fqm.size(); ++be) {
                if (c.map.entry_is_zero(be, al)) continue;
                if (c.map.at(be, al) != Cyclotomic(Rational(1)) || used[be]) return false;
                used[be] = 1;
                ++ones;
            }
            if (ones != 1) return false;
        }
        return true;
    }
    (void)dd;
    return true;
}

// G with F = up_I G, checked wherever F is known.
ModularFormData extract_g(const ModularFormData& f, const Quotient& dbar) {
    ModularFormData g;
    g.target = dbar.fqm;
    g.weight = f.weight;
    for (const auto& [k, v] : f.coeffs) {
        long db = dbar.proj[k.second];
        if (db < 0) throw Error("CheckFailed", "F has a component outside I-perp although the periodicity holds");
        auto it = g.coeffs.find({k.first, static_cast<size_t>(db)});
        if (it != g.coeffs.end() && it->second != v)
            throw Error("CheckFailed", "F is not constant on I-cosets although the periodicity holds");
        g.coeffs[{k.first, static_cast<size_t>(db)}] = v;
    }
    if (!f.complete_to.empty()) {
        g.complete_to.assign(dbar.fqm.size(), std::nullopt);
        for (size_t x = 0; x < f.target.size(); ++x) {
            long db = dbar.proj[x];
            if (db < 0 || !f.complete_to[x]) continue;
            auto& slot = g.complete_to[static_cast<size_t>(db)];
            if (!slot || *slot < *f.complete_to[x]) slot = f.complete_to[x];
        }
        // zeros of F inside the known range must be zeros of G as well
        for (const auto& [k, v] : g.coeffs)
            for (size_t x = 0; x < f.target.size(); ++x)
                if (dbar.proj[x] == static_cast<long>(k.second) && f.complete_to[x] && k.first <= *f.complete_to[x] &&
                    f.get(k.first, x) != v)
                    throw Error("CheckFailed", "F is not constant on I-cosets although the periodicity holds");
    }
    return g;
}

}  // namespace

PullupReport verify_pullup(const ModularFormData& g, const Subgroup& i_in_d, const Discriminant& disc,
                           const HorizontalData& h, const Rational& bound) {
    if (!is_isotropic(h.D, i_in_d)) throw Error("NotIsotropic", "I must be isotropic in D");
    auto ctx = make_jacobi_context(disc, h);
    Quotient dbar = quotient(h.D, perp(h.D, i_in_d), i_in_d);
    ModularFormData f = uparrow(g, h.D, i_in_d, dbar);
    ThetaExpansion tl = theta_expansion(disc.lattice, theta_bound_for(bound, g));
    JacobiExpansion lhs = build_jacobi(tl, f, ctx, bound);
    PullupData pd = pullup_rhs(g, i_in_d, dbar, ctx, bound);

    PullupReport rep;
    rep.window = bound;
    rep.compared = lhs.coeffs.size();
    rep.delta_size = ctx->dd.q.fqm.size();
    rep.delta_bar_size = pd.delta_bar_size;
    if (auto k = first_difference(lhs, pd.rhs)) {
        rep.ok = false;
        rep.witness = witness_at(*k, "the two sides differ");
    }
    rep.special_case = special_case(h, i_in_d);
    rep.special_map_ok = special_map_ok(ctx->dd, pd.c, rep.special_case);
    // |Delta_H| |H|^2 = |D_L||D| on both levels, and Delta_Hbar has the size of J-perp/J
    size_t hs = h.H.size();
    rep.dimensions_ok = rep.delta_size * hs * hs == h.DM.size() * h.D.size() &&
                        pd.delta_bar_size * pd.hbar_size * pd.hbar_size == pd.dlambda_size * dbar.fqm.size() &&
                        pd.delta_bar_size * pd.c.J.size() * pd.c.J.size() == h.A.size();
    rep.ok = rep.ok && rep.special_map_ok && rep.dimensions_ok;
    return rep;
}

Descent descend_scalar(const JacobiExpansion& phi, const Subgroup& i_l) {
    const JacobiContext& ctx = *phi.ctx;
    const HorizontalData& h = ctx.h;
    if (!is_isotropic(h.DM, i_l)) throw Error("InvalidInput", "I_L must be isotropic");
    if (!is_subset(i_l, h.HM)) throw Error("InvalidInput", "I_L must lie in H_L");
    size_t n = ctx.lattice.rank();
    for (size_t x : i_l.gens) {
        QVec s = ctx.disc.lift(x);
        for (const auto& chk : {check_periodicity_with(phi, s, zero_vec(n), 0, 0),
                                check_periodicity_with(phi, zero_vec(n), s, 0, 0)})
            if (!chk.ok) throw Error("NotPeriodic", describe(*chk.witness));
    }
    std::vector<size_t> ig;
    for (size_t x : i_l.gens) ig.push_back(static_cast<size_t>(h.iota[x]));
    Descent out;
    out.I = subgroup_closure(h.D, ig);
    out.dbar = quotient(h.D, perp(h.D, out.I), out.I);
    ModularFormData f = theta_decompose(phi);
    out.g = extract_g(f, out.dbar);
    PullupData pd = pullup_rhs(out.g, out.I, out.dbar, phi.ctx, phi.window);
    if (auto k = first_difference(phi, pd.rhs))
        throw Error("CheckFailed", describe(witness_at(*k, "reconstruction from G differs")));
    return out;
}

KappaLift validate_lift(const HorizontalData& h, const std::vector<size_t>& k_gens,
                        const std::vector<size_t>& kappa_images) {
    if (k_gens.size() != kappa_images.size()) throw Error("BadLift", "one image per generator of K_L is needed");
    const Fqm& dl = h.DM;
    KappaLift kl;
    kl.K = subgroup_closure(dl, k_gens);
    if (!is_subset(perp(dl, h.HM), kl.K)) throw Error("BadLift", "K_L must contain the complement of H_L");
    kl.kappa.assign(dl.size(), -1);
    kl.kappa[0] = 0;
    std::vector<size_t> queue{0};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        size_t x = queue[qi];
        for (size_t j = 0; j < k_gens.size(); ++j) {
            size_t y = dl.add(x, k_gens[j]);
            long img = static_cast<long>(h.D.add(static_cast<size_t>(kl.kappa[x]), kappa_images[j]));
            if (kl.kappa[y] < 0) {
                kl.kappa[y] = img;
                queue.push_back(y);
            } else if (kl.kappa[y] != img) {
                throw Error("BadLift", "the lift is not a homomorphism on K_L");
            }
        }
    }
    DeltaData dd = quotient_delta(h);
    Subgroup hlperp = perp(dl, h.HM);
    for (size_t x : kl.K.elements) {
        size_t k = static_cast<size_t>(kl.kappa[x]);
        size_t a = h.join(x, k);
        if (!dd.Hperp.contains(a)) throw Error("BadLift", "the lift leaves the orthogonal complement of H");
        if (h.D.q(k) != 0) throw Error("BadLift", "the lift does not preserve the quadratic form");
        if (x != 0 && h.H.contains(a)) throw Error("BadLift", "K_L does not embed into Delta_H");
        if (hlperp.contains(x) && k != 0) throw Error("BadLift", "the lift must be trivial on the complement of H_L");
    }
    return kl;
}

KappaLift lift_from_isotropic(const HorizontalData& h, const Subgroup& i_in_d) {
    const Fqm& a = h.A;
    Subgroup k = intersect(a, h.H, perp(a, h.embed_d(i_in_d)));
    std::vector<size_t> km;
    for (size_t x : k.elements) km.push_back(h.part_m(x));
    KappaLift kl;
    kl.K = perp(h.DM, subgroup_from_elements(h.DM, km));
    kl.kappa.assign(h.DM.size(), -1);
    DeltaData dd = quotient_delta(h);
    for (size_t x : kl.K.elements) {
        for (size_t i : i_in_d.elements)
            if (dd.Hperp.contains(h.join(x, i))) {
                if (kl.kappa[x] >= 0) throw Error("InvalidInput", "I meets the complement of H_D");
                kl.kappa[x] = static_cast<long>(i);
            }
        if (kl.kappa[x] < 0) throw Error("InvalidInput", "no lift of a K_L element into I");
    }
    return kl;
}

Descent descend_vector(const JacobiExpansion& phi, const std::vector<size_t>& k_gens,
                       const std::vector<size_t>& kappa_images) {
    const JacobiContext& ctx = *phi.ctx;
    const HorizontalData& h = ctx.h;
    KappaLift kl = validate_lift(h, k_gens, kappa_images);
    std::vector<size_t> iel;
    for (size_t x : kl.K.elements) iel.push_back(static_cast<size_t>(kl.kappa[x]));
    Descent out;
    out.I = subgroup_from_elements(h.D, iel);
    // consequences of the lift hypotheses
    if (!is_isotropic(h.D, out.I) || intersect(h.D, out.I, h.HD).size() != 1 ||
        intersect(h.D, out.I, perp(h.D, h.HD)).size() != 1)
        throw Error("CheckFailed", "the image of K_L is not isotropic or meets H_D or its complement");
    KappaLift back = lift_from_isotropic(h, out.I);
    if (!(back.K == kl.K) || back.kappa != kl.kappa) throw Error("CheckFailed", "K_L is not recovered from I and H");
    size_t n = ctx.lattice.rank();
    for (size_t x : k_gens) {
        QVec s = ctx.disc.lift(x);
        size_t sd = static_cast<size_t>(ctx.dd.q.proj[h.join(x, static_cast<size_t>(kl.kappa[x]))]);
        for (const auto& chk : {check_periodicity_with(phi, s, zero_vec(n), sd, 0),
                                check_periodicity_with(phi, zero_vec(n), s, 0, sd)})
            if (!chk.ok) throw Error("NotPeriodic", describe(*chk.witness));
    }
    out.dbar = quotient(h.D, perp(h.D, out.I), out.I);
    ModularFormData f = theta_decompose(phi);
    out.g = extract_g(f, out.dbar);
    PullupData pd = pullup_rhs(out.g, out.I, out.dbar, phi.ctx, phi.window);
    if (auto k = first_difference(phi, pd.rhs))
        throw Error("CheckFailed", describe(witness_at(*k, "reconstruction from G differs")));
    return out;
}

}  // namespace jfk
