// Acceptance run: one PASS/FAIL line per criterion, each with its time limit.

#include "jfk/jacobi.hpp"
#include "jfk/matrix_index.hpp"
#include "jfk/weil.hpp"

#include <bit>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace jfk;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Counts checks; the first failure is kept for the report.
struct Tally {
    size_t checks = 0;
    std::string first_failure;
    void operator()(bool ok, const std::string& what) {
        ++checks;
        if (!ok && first_failure.empty()) first_failure = what;
    }
    Outcome outcome(const std::string& summary) const {
        if (first_failure.empty()) return {true, summary + ", " + std::to_string(checks) + " checks"};
        return {false, "failed: " + first_failure};
    }
};

Fqm cyclic(long n, Rational q) { return Fqm({n}, {q}, {{frac(2 * q)}}); }
ZLattice lat(QMat g) { return ZLattice(std::move(g)); }

HorizontalData diagonal(const Fqm& dl) {
    std::vector<Elt> g;
    for (size_t i = 0; i < dl.rank(); ++i) {
        Elt e(dl.rank(), 0);
        e[i] = 1;
        g.push_back(e);
    }
    return make_horizontal(dl, dl.negated(), g, g);
}

ModularFormData random_form(std::mt19937& rng, const Fqm& d, const std::vector<std::optional<Rational>>& bounds,
                            const Rational& lo, int density = 2) {
    ModularFormData f;
    f.target = d;
    for (size_t x = 0; x < d.size(); ++x) {
        if (!bounds[x]) continue;
        for (Rational n = lo + frac(d.q(x) - lo); n <= *bounds[x]; n += 1)
            if (static_cast<int>(rng() % 3) < density)
                f.set(n, x, Cyclotomic(Rational(static_cast<long>(rng() % 7) - 3)));
    }
    return f;
}

std::vector<OLattice> hermitian_suite() {
    return {
        OLattice(4, {{KElement(1, 0, 4)}}),
        OLattice(3, {{KElement(1, 0, 3)}}),
        OLattice(4, {{KElement(2, 0, 4)}}),
        OLattice(4, {{KElement(1, 0, 4), KElement(qq(1, 2), qq(1, 4), 4)}, {KElement(qq(1, 2), qq(-1, 4), 4), KElement(1, 0, 4)}}),
        OLattice(3, {{KElement(1, 0, 3), KElement(0, qq(-1, 3), 3)}, {KElement(0, qq(1, 3), 3), KElement(1, 0, 3)}}),
    };
}

// ---- 1 ----
Outcome weil_relations() {
    Tally t;
    std::vector<Fqm> suite = enumerate_fqms(16);
    for (const QMat& g : std::vector<QMat>{{{2}}, {{2, 0}, {0, 2}}, {{2, 1}, {1, 2}}, {{4}}})
        suite.push_back(discriminant_group(lat(g)).fqm);
    suite.push_back(make_hermitian_context(OLattice(4, {{KElement(1, 0, 4)}})).disc.fqm);
    for (const auto& a : suite) {
        CMatrix s = rho_S(a), tm = rho_T(a);
        int sig = gauss_sum(a).sig_mod_8;
        CMatrix s2 = s * s, st = s * tm;
        t(s2 == parity_matrix(a).scaled(e_of(qq(-sig, 4))), "S^2 relation");
        t(st * st * st == s2, "(ST)^3 relation");
    }
    return t.outcome(std::to_string(suite.size()) + " modules");
}

// ---- 2 ----
Outcome extended_weil() {
    Tally t;
    size_t units = 0;
    for (const auto& m : hermitian_suite()) {
        HermitianContext h = make_hermitian_context(m);
        CMatrix tm = rho_T(h.disc.fqm), s = rho_S(h.disc.fqm);
        for (const auto& xi : roots_of_unity(m.d())) {
            CMatrix x = rho_xi(h, xi);
            t(x * tm == tm * x, "rho(xi) commutes with rho(T)");
            t(x * s == s * x, "rho(xi) commutes with rho(S)");
            ++units;
        }
    }
    return t.outcome(std::to_string(units) + " unit actions");
}

// ---- 3 ----
Outcome arrows_and_combined() {
    Tally t;
    size_t subgroups = 0;
    for (const auto& a : enumerate_fqms(16)) {
        CMatrix ta = rho_T(a), sa = rho_S(a);
        for (const auto& h : isotropic_subgroups(a)) {
            Arrows ar = arrows(a, h);
            CMatrix td = rho_T(ar.delta.fqm), sd = rho_S(ar.delta.fqm);
            t(ar.down * ta == td * ar.down && ar.down * sa == sd * ar.down, "down intertwines");
            t(ta * ar.up == ar.up * td && sa * ar.up == ar.up * sd, "up intertwines");
            ++subgroups;
        }
    }
    size_t cases[5] = {0, 0, 0, 0, 0};
    Fqm two({2, 2}, {qq(1, 4), qq(1, 4)}, {{qq(1, 2), 0}, {0, qq(1, 2)}});
    // (Z/8, x^2/16) from [8]: 4 is isotropic and orthogonal to itself, which case (i) needs
    for (const Fqm& dm : {cyclic(2, qq(1, 4)), two, cyclic(4, qq(1, 8)), cyclic(8, qq(1, 16))})
        for (const auto& d : enumerate_fqms(8))
            for (const auto& h : horizontal_isotropic_subgroups(dm, d)) {
                DeltaData dd = quotient_delta(h);
                Subgroup hd_perp = perp(h.D, h.HD);
                for (const auto& i : isotropic_subgroups(d)) {
                    CombinedArrow c = combined_arrow(h, dd, i);
                    t(c.map == combined_arrow_composite(h, c), "fiber formula equals the composite");
                    t(c.map.rank() == c.Bbar.fqm.size(), "combined arrow is injective");
                    size_t in_hd = intersect(d, i, h.HD).size(), in_hdp = intersect(d, i, hd_perp).size();
                    int kind = 0;
                    if (in_hd == i.size() && in_hdp == i.size()) kind = 1;
                    else if (in_hdp == i.size() && in_hd == 1) kind = 2;
                    else if (in_hd == i.size() && in_hdp == 1) kind = 3;
                    else if (in_hd == 1 && in_hdp == 1) kind = 4;
                    if (kind == 0 || i.size() == 1) continue;
                    ++cases[kind];
                    if (kind <= 2) {
                        // lift along I_B = (I + H)/H
                        std::vector<size_t> g;
                        for (size_t x : c.I.gens) g.push_back(static_cast<size_t>(c.B.proj[x]));
                        Arrows ib = arrows(c.B.fqm, subgroup_closure(c.B.fqm, g));
                        bool same = ib.delta.fqm.size() == c.Bbar.fqm.size();
                        for (size_t al = 0; same && al < c.Bbar.fqm.size(); ++al) {
                            size_t phi = static_cast<size_t>(ib.delta.proj[static_cast<size_t>(c.B.proj[c.Bbar.section[al]])]);
                            for (size_t be = 0; be < c.B.fqm.size(); ++be) same = same && c.map.at(be, al) == ib.up.at(be, phi);
                        }
                        t(same, "case (i)/(ii): combined arrow is the lift along I_B");
                    } else {
                        std::vector<char> used(c.B.fqm.size(), 0);
                        bool inj = true;
                        for (size_t al = 0; al < c.Bbar.fqm.size(); ++al) {
                            size_t ones = 0;
                            for (size_t be = 0; be < c.B.fqm.size(); ++be)
                                if (!c.map.entry_is_zero(be, al)) {
                                    inj = inj && c.map.at(be, al) == Cyclotomic(Rational(1)) && !used[be];
                                    used[be] = 1;
                                    ++ones;
                                }
                            inj = inj && ones == 1;
                        }
                        t(inj, "case (iii)/(iv): combined arrow permutes basis vectors injectively");
                    }
                }
            }
    for (int k = 1; k <= 4; ++k) t(cases[k] > 0, "special case " + std::to_string(k) + " constructed");
    std::ostringstream s;
    s << subgroups << " isotropic subgroups; special cases " << cases[1] << "/" << cases[2] << "/" << cases[3] << "/"
      << cases[4];
    return t.outcome(s.str());
}

// ---- 4 ----
Outcome pairing_and_dimensions() {
    Tally t;
    size_t modules = 0, pairs = 0, audits = 0;
    for (const auto& a : enumerate_fqms(64)) {
        ++modules;
        auto subs = all_subgroups(a);
        std::vector<uint64_t> mask(subs.size()), perp_mask(subs.size());
        auto to_mask = [](const Subgroup& s) {
            uint64_t m = 0;
            for (size_t e : s.elements) m |= uint64_t(1) << e;
            return m;
        };
        for (size_t k = 0; k < subs.size(); ++k) {
            mask[k] = to_mask(subs[k]);
            perp_mask[k] = to_mask(perp(a, subs[k]));
        }
        for (size_t x = 0; x < subs.size(); ++x)
            for (size_t y = 0; y < subs.size(); ++y) {
                size_t h = subs[x].size(), i = subs[y].size();
                size_t h_in = static_cast<size_t>(std::popcount(mask[x] & perp_mask[y]));
                size_t i_in = static_cast<size_t>(std::popcount(mask[y] & perp_mask[x]));
                // |H| / |H meet I-perp| = |I| / |I meet H-perp|, cross-multiplied
                t(h * i_in == i * h_in, "pairing sizes differ");
                if (i_in == 1) t(h == i * h_in, "size is |I| when I meets H-perp trivially");
                ++pairs;
            }
        // dimension bookkeeping: |H-perp/H| = |J-perp/J| |I|^2 / (|H| / |K|)^2 with K = H meet I-perp, J = I + K
        std::vector<size_t> iso;
        for (size_t k = 0; k < subs.size(); ++k)
            if (is_isotropic(a, subs[k])) iso.push_back(k);
        for (size_t x : iso)
            for (size_t y : iso) {
                if (std::popcount(mask[x] & mask[y]) != 1) continue;
                const Subgroup &hs = subs[x], &is = subs[y];
                Subgroup k = intersect(a, hs, perp(a, is));
                Subgroup j = sum(a, is, k);
                if (!is_isotropic(a, j)) continue;
                size_t delta_h = perp(a, hs).size() / hs.size();
                size_t delta_j = perp(a, j).size() / j.size();
                size_t up = is.size() * is.size(), down = (hs.size() / k.size()) * (hs.size() / k.size());
                t(delta_h * down == delta_j * up, "dimension audit");
                ++audits;
            }
    }
    return t.outcome(std::to_string(modules) + " modules, " + std::to_string(pairs) + " pairs, " +
                     std::to_string(audits) + " audits");
}

// ---- 5 ----
Outcome bijection() {
    Tally t;
    std::mt19937 rng(2024);
    struct Instance {
        ZLattice l;
        Fqm d;
        int h_choice;  // -1: diagonal, otherwise index into the horizontal list
    };
    std::vector<Instance> inst = {
        {lat({{2}}), Fqm(), -1},
        {lat({{2, -1}, {-1, 2}}), Fqm(), -1},
        {lat({{2, 0}, {0, 2}}), Fqm(), -1},
        {lat({{4}}), cyclic(4, qq(7, 8)), 1},
        {trace_form(OLattice(3, {{KElement(1, 0, 3)}})), cyclic(2, qq(3, 4)), 0},
    };
    Rational w = 3;
    size_t forms = 0;
    for (const auto& in : inst) {
        Discriminant disc = discriminant_group(in.l);
        HorizontalData h;
        if (in.h_choice < 0) {
            h = diagonal(disc.fqm);
        } else {
            auto all = horizontal_isotropic_subgroups(disc.fqm, in.d);
            h = all.at(std::min(all.size() - 1, static_cast<size_t>(in.h_choice)));
        }
        auto ctx = make_jacobi_context(disc, h);
        auto bounds = recoverable_bounds(*ctx, w);
        ThetaExpansion th = theta_expansion(in.l, w + 1);
        for (int k = 0; k < 20; ++k) {
            ModularFormData f = random_form(rng, h.D, bounds, -1);
            JacobiExpansion phi = build_jacobi(th, f, ctx, w);
            ModularFormData back = theta_decompose(phi);
            t(same_coefficients(back, f), "decompose(build(F)) = F");
            t(!first_difference(build_jacobi(th, back, ctx, w), phi).has_value(), "build(decompose(Phi)) = Phi");
            ++forms;
        }
    }
    return t.outcome(std::to_string(inst.size()) + " instances, " + std::to_string(forms) + " forms");
}

// ---- 6 ----
Outcome uparrow_compatibility() {
    Tally t;
    std::mt19937 rng(31);
    size_t cases[5] = {0, 0, 0, 0, 0}, runs = 0;
    std::vector<QMat> grams = {{{2}}, {{4}}, {{6}}, {{8}}, {{2, -1}, {-1, 2}}, {{2, 0}, {0, 2}}, {{2, 1}, {1, 4}}, {{2, 0}, {0, 4}}};
    auto ds = enumerate_fqms(16);
    for (const auto& g : grams) {
        Discriminant disc = discriminant_group(lat(g));
        for (const auto& d : ds)
            for (const auto& h : horizontal_isotropic_subgroups(disc.fqm, d))
                for (const auto& i : isotropic_subgroups(d)) {
                    Quotient dbar = quotient(d, perp(d, i), i);
                    ModularFormData gf = random_form(
                        rng, dbar.fqm, std::vector<std::optional<Rational>>(dbar.fqm.size(), Rational(3)), 0);
                    PullupReport r = verify_pullup(gf, i, disc, h, 3);
                    t(r.ok, "both sides coefficient-identical");
                    t(r.special_map_ok && r.dimensions_ok, "special-case map and dimension audit");
                    ++cases[r.special_case];
                    ++runs;
                }
    }
    std::ostringstream s;
    s << runs << " (H, I, G) instances; special cases " << cases[1] << "/" << cases[2] << "/" << cases[3] << "/"
      << cases[4];
    return t.outcome(s.str());
}

// ---- 7 ----
Outcome detection() {
    Tally t;
    std::mt19937 rng(17);
    Rational w = 3;
    {
        Discriminant disc = discriminant_group(lat({{8}}));
        HorizontalData h = diagonal(disc.fqm);
        auto ctx = make_jacobi_context(disc, h);
        Subgroup il = subgroup_closure(disc.fqm, std::vector<size_t>{4});
        Subgroup i = subgroup_closure(h.D, std::vector<size_t>{4});
        Quotient dbar = quotient(h.D, perp(h.D, i), i);
        ThetaExpansion th = theta_expansion(disc.lattice, w);
        for (int k = 0; k < 10; ++k) {
            ModularFormData g = random_form(rng, dbar.fqm, std::vector<std::optional<Rational>>(2, Rational(1)), 0, 3);
            Descent ds = descend_scalar(build_jacobi(th, uparrow(g, h.D, i, dbar), ctx, w), il);
            t(same_coefficients(ds.g, g), "scalar descent recovers G");
        }
        for (int k = 0; k < 10; ++k) {
            ModularFormData f = random_form(rng, h.D, std::vector<std::optional<Rational>>(8, Rational(1)), 0, 3);
            bool rejected = false;
            try {
                descend_scalar(build_jacobi(th, f, ctx, w), il);
            } catch (const Error& e) {
                rejected = e.kind() == "NotPeriodic";
            }
            t(rejected, "scalar descent rejects a generic F");
        }
    }
    {
        Discriminant disc = discriminant_group(lat({{2}}));
        Fqm d({2, 2}, {qq(1, 4), qq(3, 4)}, {{qq(1, 2), 0}, {0, qq(3, 2)}});
        size_t hidx = d.index({0, 1}), iidx = d.index({1, 1});
        HorizontalData h = make_horizontal(disc.fqm, d, {{1}}, {d.elt(hidx)});
        auto ctx = make_jacobi_context(disc, h);
        Subgroup i = subgroup_closure(d, std::vector<size_t>{iidx});
        Quotient dbar = quotient(d, perp(d, i), i);
        ThetaExpansion th = theta_expansion(disc.lattice, w);
        ModularFormData probe = random_form(rng, dbar.fqm, {Rational(2)}, 0, 3);
        t(verify_pullup(probe, i, disc, h, w).special_case == 4 && i.size() == 2, "instance is case (iv), |I| = 2");
        for (int k = 0; k < 10; ++k) {
            ModularFormData g = random_form(rng, dbar.fqm, {Rational(2)}, 0, 3);
            Descent ds = descend_vector(build_jacobi(th, uparrow(g, d, i, dbar), ctx, w), {1}, {iidx});
            t(same_coefficients(ds.g, g), "vector descent recovers G");
        }
        for (int k = 0; k < 10; ++k) {
            ModularFormData f = random_form(rng, d, std::vector<std::optional<Rational>>(4, Rational(2)), 0, 3);
            bool rejected = false;
            try {
                descend_vector(build_jacobi(th, f, ctx, w), {1}, {iidx});
            } catch (const Error& e) {
                rejected = e.kind() == "NotPeriodic";
            }
            t(rejected, "vector descent rejects a generic F");
        }
    }
    return t.outcome("20 recoveries, 20 rejections");
}

// ---- 8 ----
std::map<Rational, long> norm_counts(const ThetaExpansion& t) {
    std::map<Rational, long> out;
    for (const auto& term : t.terms) out[term.norm] += 1;
    return out;
}

Outcome matrix_index() {
    Tally t;
    {
        MatrixIndexInput in;
        in.S = {{qq(1, 4)}};
        in.delta = cyclic(2, qq(1, 4));
        in.psi_images = {{1}};
        auto s = build_setting(validate_psi(in));
        t(s.L.gram() == QMat{{Rational(2)}}, "S = [1/4]: L = A1");
        t(abs(s.omega_basis[0][0]) == 2, "S = [1/4]: Omega = 2Z");
        t(find_isomorphism(s.disc.fqm, in.delta).has_value(), "S = [1/4]: D_Omega = Delta");
        t(s.HOmega.size() == 1 && s.DOS.size() == 2, "S = [1/4]: H_Omega = 0");
        t(check_per_omega(s, theta_matrix_index(s, 4)), "S = [1/4]: perOmega at B = 4");
    }
    {
        MatrixIndexInput in;
        in.d = 4;
        in.SH = {{KElement(qq(1, 4), 0, 4)}};
        in.delta = Fqm({2, 2}, {qq(1, 4), qq(1, 4)}, {{qq(1, 2), 0}, {0, qq(1, 2)}});
        in.psi_images = {{1, 0}, {0, 1}};
        auto s = build_setting(validate_psi(in));
        ZLattice two = lat({{2, 0}, {0, 2}});
        t(det(s.L.gram()) == 4 && norm_counts(theta_matrix_index(s, 6)) == norm_counts(theta_expansion(two, 6)),
          "Hermitian: L = 2 I_2");
        t(s.M.has_value(), "Hermitian: free O-basis found");
        if (s.M) {
            ZLattice tf = trace_form(*s.M);
            t(tf.gram() == s.L.gram() || norm_counts(theta_expansion(tf, 6)) == norm_counts(theta_matrix_index(s, 6)),
              "Hermitian: trace form of M matches L");
        }
        t(find_isomorphism(s.disc.fqm, in.delta).has_value(), "Hermitian: D_Omega = Delta");
        t(s.HOmega.size() == 1, "Hermitian: H_Omega = 0");
        t(check_per_omega(s, theta_matrix_index(s, 4)), "Hermitian: perOmega at B = 4");
    }
    {
        std::mt19937 rng(21);
        QMat s = {{Rational(1), qq(1, 2)}, {qq(1, 2), Rational(1)}};
        MatrixIndexInput in;
        in.S = s;
        in.psi_images = {{}, {}};
        auto set = build_setting(validate_psi(in));
        HorizontalData h = diagonal(set.disc.fqm);
        auto bounds = recoverable_bounds(*make_jacobi_context(set.disc, h), 3);
        ModularFormData f = random_form(rng, h.D, bounds, -1);
        auto e = jacobi_matrix_index(f, h, set, 3);
        ZLattice free = lat({{2, 1}, {1, 2}});
        Discriminant fd = discriminant_group(free);
        HorizontalData fh = diagonal(fd.fqm);
        auto iso = find_isomorphism(h.D, fh.D);
        t(iso.has_value(), "integral S: discriminant forms agree");
        if (iso) {
            ModularFormData ff;
            ff.target = fh.D;
            for (const auto& [key, c] : f.coeffs) ff.set(key.first, (*iso)[key.second], c);
            auto lo = f.min_n();
            JacobiExpansion phi = build_jacobi(theta_expansion(free, 3 - std::min(Rational(0), lo.value_or(0))), ff, fh, Rational(3));
            std::map<std::pair<Rational, QVec>, Cyclotomic> want, got;
            for (const auto& [k, c] : phi.coeffs) want[{k.m, scale(2, mul(s, k.lam))}] = c;
            for (const auto& [k, c] : e.coeffs) got[{k.m, k.r}] = c;
            t(!want.empty() && got == want, "integral S: coefficient-for-coefficient agreement");
        }
        t(check_per_omega(set, theta_matrix_index(set, 4)), "integral S: perOmega at B = 4");
    }
    return t.outcome("orthogonal, Hermitian and integral settings");
}

// ---- 9 ----
std::vector<QVec> naive_short(const QMat& g, const QVec& c, const Rational& b) {
    size_t n = g.size();
    QMat gi = inverse(g);
    std::vector<long> lo(n), hi(n);
    for (size_t i = 0; i < n; ++i) {
        double r = std::sqrt(std::max(0.0, Rational(2 * b * gi[i][i]).get_d())) + 1;
        lo[i] = static_cast<long>(std::floor(-c[i].get_d() - r));
        hi[i] = static_cast<long>(std::ceil(-c[i].get_d() + r));
    }
    std::vector<QVec> out;
    std::vector<long> x = lo;
    while (true) {
        QVec v(n);
        for (size_t i = 0; i < n; ++i) v[i] = x[i] + c[i];
        if (bilinear(g, v, v) <= 2 * b) out.push_back(v);
        size_t p = 0;
        while (p < n && x[p] == hi[p]) x[p] = lo[p], ++p;
        if (p == n) break;
        ++x[p];
    }
    std::sort(out.begin(), out.end());
    return out;
}

Outcome enumeration() {
    Tally t;
    std::vector<QMat> grams = {
        {{2}}, {{4}}, {{8}}, {{2, 0}, {0, 2}}, {{2, -1}, {-1, 2}}, {{2, 1}, {1, 4}},
        {{2, -1, 0}, {-1, 2, -1}, {0, -1, 2}},
        {{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}},
    };
    for (const auto& m : hermitian_suite()) grams.push_back(trace_form(m).gram());
    size_t runs = 0;
    for (const auto& g : grams) {
        Discriminant disc = discriminant_group(lat(g));
        for (size_t coset = 0; coset < disc.fqm.size(); ++coset) {
            QVec c = disc.lift(coset);
            for (long b = 0; b <= 6; b += 2) {
                t(enumerate_short_vectors(lat(g), c, b) == naive_short(g, c, b), "Fincke-Pohst equals the box");
                ++runs;
            }
        }
    }
    for (const auto& m : hermitian_suite()) {
        ThetaExpansion h = theta_expansion(m, 6), o = theta_expansion(trace_form(m), 6);
        bool same = h.terms.size() == o.terms.size();
        for (size_t i = 0; same && i < h.terms.size(); ++i)
            same = h.terms[i].lam == o.terms[i].lam && h.terms[i].norm == o.terms[i].norm &&
                   h.terms[i].coset == o.terms[i].coset;
        t(same, "Hermitian expansion equals the trace-form expansion");
    }
    return t.outcome(std::to_string(grams.size()) + " Gram matrices, " + std::to_string(runs) + " enumerations");
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit;
        std::function<Outcome()> run;
    };
    std::vector<Criterion> all = {
        {"Weil relations", 60, weil_relations},
        {"unit action commutes with T and S", 5, extended_weil},
        {"arrow intertwining and combined arrow", 60, arrows_and_combined},
        {"pairing sizes and dimension audit", 120, pairing_and_dimensions},
        {"theta/Jacobi bijection", 120, bijection},
        {"up-arrow compatibility", 300, uparrow_compatibility},
        {"detection theorems", 120, detection},
        {"matrix index", 60, matrix_index},
        {"enumeration oracles", 60, enumeration},
    };
    int failed = 0;
    for (size_t k = 0; k < all.size(); ++k) {
        auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = all[k].run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool pass = o.ok && sec < all[k].limit;
        if (o.ok && !pass) o.detail += ", over the time limit";
        std::printf("%s %zu %s (%.2fs / %.0fs): %s\n", pass ? "PASS" : "FAIL", k + 1, all[k].name, sec, all[k].limit,
                    o.detail.c_str());
        std::fflush(stdout);
        if (!pass) ++failed;
    }
    return failed == 0 ? 0 : 1;
}
