#include "doctest.h"

#include "jfk/fqm.hpp"

#include <complex>
#include <map>
#include <set>

using namespace jfk;

namespace {

Fqm cyclic(long n, Rational q) { return Fqm({n}, {q}, {{frac(2 * q)}}); }

// Brute-force oracle for the perpendicular subgroup using exact rationals.
std::set<size_t> brute_perp(const Fqm& a, const Subgroup& h) {
    std::set<size_t> out;
    for (size_t x = 0; x < a.size(); ++x) {
        bool ok = true;
        for (size_t y : h.elements)
            if (frac(a.b(x, y)) != 0) ok = false;
        if (ok) out.insert(x);
    }
    return out;
}

std::complex<double> numeric_gauss(const Fqm& a) {
    std::complex<double> s = 0;
    for (size_t x = 0; x < a.size(); ++x) s += std::polar(1.0, 2 * M_PI * a.q(x).get_d());
    return s;
}

// Independent enumeration: all parameter choices on invariant-factor chains,
// deduplicated by isomorphism.
size_t brute_class_count(long max_order) {
    std::vector<std::vector<long>> chains;
    std::function<void(std::vector<long>, long)> gen = [&](std::vector<long> c, long prod) {
        chains.push_back(c);
        long last = c.empty() ? 1 : c.back();
        for (long n = std::max(2L, last); prod * n <= max_order; n += last)
            if (n % last == 0) {
                auto d = c;
                d.push_back(n);
                gen(d, prod * n);
            }
    };
    gen({}, 1);
    std::vector<Fqm> classes;
    for (const auto& c : chains) {
        size_t k = c.size();
        std::vector<std::vector<Rational>> qchoices(k);
        for (size_t i = 0; i < k; ++i)
            for (long t = 0; t < 2 * c[i]; ++t)
                if (c[i] % 2 == 0 || t % 2 == 0) qchoices[i].push_back(qq(t, 2 * c[i]));
        std::vector<std::pair<size_t, size_t>> offd;
        for (size_t i = 0; i < k; ++i)
            for (size_t j = i + 1; j < k; ++j) offd.emplace_back(i, j);
        std::vector<Rational> q(k);
        QMat g = q_zero(k, k);
        std::function<void(size_t)> pick_off;
        std::function<void(size_t)> pick_q = [&](size_t i) {
            if (i == k) {
                pick_off(0);
                return;
            }
            for (const auto& v : qchoices[i]) {
                q[i] = v;
                g[i][i] = frac(2 * v);
                pick_q(i + 1);
            }
        };
        pick_off = [&](size_t p) {
            if (p == offd.size()) {
                Fqm f(c, q, g, false);
                if (!f.is_nondegenerate()) return;
                for (const auto& h : classes)
                    if (find_isomorphism(f, h)) return;
                classes.push_back(f);
                return;
            }
            auto [i, j] = offd[p];
            for (long t = 0; t < c[i]; ++t) {
                g[i][j] = g[j][i] = qq(t, c[i]);
                pick_off(p + 1);
            }
        };
        pick_q(0);
    }
    return classes.size();
}

}  // namespace

TEST_CASE("construction validates the data") {
    CHECK_THROWS_AS(Fqm({2}, {qq(1, 3)}, {{qq(2, 3)}}), Error);
    CHECK_THROWS_AS(Fqm({2}, {Rational(0)}, {{Rational(0)}}), Error);  // degenerate
    CHECK_NOTHROW(Fqm({2}, {Rational(0)}, {{Rational(0)}}, false));
    CHECK_THROWS_AS(Fqm({2, 2}, {0, 0}, {{0, qq(1, 2)}, {0, 0}}), Error);
    Fqm a = cyclic(4, qq(1, 8));
    CHECK(a.size() == 4);
    CHECK(a.level() == 8);
    CHECK(a.q(Elt{2}) == qq(1, 2));
    CHECK(a.b(Elt{1}, Elt{3}) == qq(3, 4));
}

TEST_CASE("perp against brute force") {
    Fqm a = direct_sum(cyclic(4, qq(1, 8)), Fqm({2, 2}, {0, 0}, {{0, qq(1, 2)}, {qq(1, 2), 0}}));
    for (const auto& h : all_subgroups(a)) {
        Subgroup p = perp(a, h);
        CHECK(std::set<size_t>(p.elements.begin(), p.elements.end()) == brute_perp(a, h));
        CHECK(p.size() * h.size() == a.size());
        CHECK(perp(a, p) == h);
    }
}

TEST_CASE("subgroup counts") {
    // (Z/2)^2 has 5 subgroups, Z/4 has 3, (Z/2)^3 has 16.
    CHECK(all_subgroups(Fqm({2, 2}, {0, 0}, {{0, qq(1, 2)}, {qq(1, 2), 0}})).size() == 5);
    CHECK(all_subgroups(cyclic(4, qq(1, 8))).size() == 3);
    Fqm e = direct_sum(cyclic(2, qq(1, 4)), direct_sum(cyclic(2, qq(1, 4)), cyclic(2, qq(1, 4))));
    CHECK(all_subgroups(e).size() == 16);
    for (const auto& h : isotropic_subgroups(e)) CHECK(is_isotropic(e, h));
}

TEST_CASE("gauss sums") {
    GaussSum g = gauss_sum(cyclic(2, qq(1, 4)));
    CHECK(g.sig_mod_8 == 1);
    CHECK(g.value == Cyclotomic(Rational(1)) + e_of(qq(1, 4)));
    CHECK(gauss_sum(cyclic(3, qq(1, 3))).sig_mod_8 == 2);                                       // A2
    CHECK(gauss_sum(cyclic(2, qq(3, 4))).sig_mod_8 == 7);                                       // -A1
    CHECK(gauss_sum(Fqm({2, 2}, {0, 0}, {{0, qq(1, 2)}, {qq(1, 2), 0}})).sig_mod_8 == 0);      // U
    CHECK(gauss_sum(Fqm({2, 2}, {qq(1, 2), qq(1, 2)}, {{0, qq(1, 2)}, {qq(1, 2), 0}})).sig_mod_8 == 4);  // D4
    for (const auto& f : enumerate_fqms(12)) {
        GaussSum gs = gauss_sum(f);
        auto z = numeric_gauss(f);
        auto w = gs.value.approx();
        CHECK(std::abs(z.real() - w.first) < 1e-9);
        CHECK(std::abs(z.imag() - w.second) < 1e-9);
        double r = std::sqrt(static_cast<double>(f.size()));
        CHECK(std::abs(z - r * std::polar(1.0, 2 * M_PI * gs.sig_mod_8 / 8.0)) < 1e-9);
        CHECK((gauss_sum(f.negated()).sig_mod_8 + gs.sig_mod_8) % 8 == 0);
    }
}

TEST_CASE("quotients inherit q") {
    Fqm a = direct_sum(cyclic(4, qq(1, 8)), cyclic(4, qq(7, 8)));
    for (const auto& k : isotropic_subgroups(a)) {
        Subgroup p = perp(a, k);
        Quotient qt = quotient(a, p, k);
        CHECK(qt.fqm.size() * k.size() == p.size());
        for (size_t x : p.elements) {
            size_t y = static_cast<size_t>(qt.proj[x]);
            CHECK(qt.fqm.q(y) == a.q(x));
            for (size_t z : p.gens) CHECK(qt.proj[a.add(x, z)] == static_cast<long>(qt.fqm.add(y, qt.proj[z])));
        }
        for (size_t y = 0; y < qt.fqm.size(); ++y) CHECK(qt.proj[qt.section[y]] == static_cast<long>(y));
        // sig of P/K equals sig of A
        CHECK(gauss_sum(qt.fqm).sig_mod_8 == gauss_sum(a).sig_mod_8);
    }
}

TEST_CASE("isomorphism search") {
    Fqm u({2, 2}, {0, 0}, {{0, qq(1, 2)}, {qq(1, 2), 0}});
    Fqm v({2, 2}, {qq(1, 2), qq(1, 2)}, {{0, qq(1, 2)}, {qq(1, 2), 0}});
    CHECK_FALSE(find_isomorphism(u, v).has_value());
    CHECK(find_isomorphism(direct_sum(u, u), direct_sum(v, v)).has_value());
    CHECK_FALSE(find_isomorphism(cyclic(4, qq(1, 8)), cyclic(4, qq(5, 8))).has_value());
    CHECK(find_isomorphism(cyclic(5, qq(1, 5)), cyclic(5, qq(4, 5))).has_value());
    CHECK_FALSE(find_isomorphism(cyclic(5, qq(1, 5)), cyclic(5, qq(2, 5))).has_value());
    auto iso = find_isomorphism(u, u, {{1, 2}});
    REQUIRE(iso.has_value());
    CHECK((*iso)[1] == 2);
    for (size_t x = 0; x < u.size(); ++x) CHECK(u.q((*iso)[x]) == u.q(x));
}

TEST_CASE("enumeration agrees with the parameter sweep") {
    auto e = enumerate_fqms(8);
    CHECK(e.size() == brute_class_count(8));
    for (const auto& f : e) CHECK(f.is_nondegenerate());
    for (size_t i = 0; i < e.size(); ++i)
        for (size_t j = i + 1; j < e.size(); ++j) CHECK_FALSE(find_isomorphism(e[i], e[j]).has_value());
    CHECK(enumerate_fqms(16).size() == brute_class_count(16));
}

TEST_CASE("diagonal of D + D-bar is a self-dual isotropic subgroup") {
    for (const auto& d : enumerate_fqms(9)) {
        Fqm a = direct_sum(d, d.negated());
        std::vector<size_t> g;
        for (size_t i = 0; i < d.rank(); ++i) {
            Elt e(d.rank(), 0);
            e[i] = 1;
            g.push_back(d.index(e) * d.size() + d.index(e));
        }
        Subgroup diag = subgroup_closure(a, g);
        CHECK(diag.size() == d.size());
        CHECK(is_isotropic(a, diag));
        CHECK(perp(a, diag) == diag);
    }
}

TEST_CASE("horizontal subgroups and Delta_H") {
    Fqm dm = cyclic(4, qq(1, 8));
    Fqm d = direct_sum(cyclic(2, qq(3, 4)), cyclic(4, qq(7, 8)));
    // iota: 2 -> (1, 0) has q(2) = 1/2 and q(1,0) = 3/4: not isotropic
    CHECK_THROWS_AS(make_horizontal(dm, d, {{2}}, {{1, 0}}), Error);
    // iota(1) = (0,1) is fine
    HorizontalData h = make_horizontal(dm, d, {{1}}, {{0, 1}});
    CHECK(h.H.size() == 4);
    CHECK_THROWS_AS(make_horizontal(dm, d, {{2}}, {{0, 0}}), Error);  // not injective
    DeltaData dd = quotient_delta(h);
    CHECK(dd.q.fqm.size() * 16 == dm.size() * d.size());
    GaussSum ga = gauss_sum(h.A), gd = gauss_sum(dd.q.fqm);
    CHECK(ga.sig_mod_8 == gd.sig_mod_8);
    // sections land in H-perp with M-part in R
    std::set<size_t> r(dd.R.begin(), dd.R.end());
    for (size_t x = 0; x < dd.q.fqm.size(); ++x) {
        size_t s = dd.q.section[x];
        CHECK(dd.Hperp.contains(s));
        CHECK(r.count(h.part_m(s)) == 1);
    }
    // delta + sigma = r + h_M
    for (size_t delta = 0; delta < dm.size(); ++delta)
        for (size_t sigma = 0; sigma < dm.size(); ++sigma) {
            auto [rr, hh] = decompose_r_h(h, dd, delta, sigma);
            CHECK(r.count(rr) == 1);
            CHECK(h.H.contains(hh));
            CHECK(dm.add(rr, h.part_m(hh)) == dm.add(delta, sigma));
        }
    std::vector<size_t> bad = {0, 1};
    CHECK_THROWS_AS(quotient_delta(h, &bad), Error);
}

TEST_CASE("all horizontal subgroups and representative sets with I") {
    Fqm dm = cyclic(2, qq(1, 4));
    Fqm d = direct_sum(cyclic(2, qq(3, 4)), Fqm({2, 2}, {0, 0}, {{0, qq(1, 2)}, {qq(1, 2), 0}}));
    auto hs = horizontal_isotropic_subgroups(dm, d);
    CHECK(hs.size() >= 2);
    for (const auto& h : hs) {
        DeltaData dd = quotient_delta(h);
        CHECK(dd.q.fqm.size() * h.H.size() * h.H.size() == h.A.size());
        for (const auto& i : isotropic_subgroups(d)) {
            auto got = reps_with_I(h, i);
            // oracle: direct definition
            Subgroup iperp = perp(d, i);
            std::vector<size_t> hi_m;
            for (size_t x : h.H.elements)
                if (iperp.contains(h.part_d(x))) hi_m.push_back(h.part_m(x));
            CosetReps cr = coset_reps(dm, subgroup_from_elements(dm, hi_m));
            std::set<size_t> rs(cr.reps.begin(), cr.reps.end());
            std::vector<size_t> want;
            for (size_t beta : dd.Hperp.elements)
                if (rs.count(h.part_m(beta)) && iperp.contains(h.part_d(beta))) want.push_back(beta);
            CHECK(got == want);
        }
    }
}

TEST_CASE("translation and character relations") {
    Fqm a = direct_sum(cyclic(4, qq(1, 8)), cyclic(3, qq(1, 3)));
    std::vector<Cyclotomic> x(a.size());
    for (size_t i = 0; i < a.size(); ++i) x[i] = Cyclotomic(qq(static_cast<long>(i * 7 % 5) - 2, 1 + i % 3));
    for (size_t al = 0; al < a.size(); al += 5)
        for (size_t be = 0; be < a.size(); be += 7) {
            auto lhs = apply_t_chi(a, x, al, be);
            CHECK(lhs == apply_t_chi(a, apply_t_chi(a, x, al, 0), 0, be));
            // t_alpha chi_beta = e((alpha, beta)) chi_beta t_alpha
            auto tc = apply_t_chi(a, apply_t_chi(a, x, 0, be), al, 0);
            Cyclotomic ph = e_of(a.b(al, be));
            for (size_t i = 0; i < a.size(); ++i) CHECK(tc[i] == ph * lhs[i]);
        }
}

TEST_CASE("J structure on the discriminant of the Gaussian integers") {
    // 2 I_2 with J = [[0,-2],[2,0]]: J maps L* = L/2 into L, so it acts as zero on D.
    Fqm a({2, 2}, {qq(1, 4), qq(1, 4)}, {{qq(1, 2), 0}, {0, qq(1, 2)}});
    CHECK(is_valid_J(a, {{0, 0}, {0, 0}}, 4));
    CHECK_FALSE(is_valid_J(a, {{0, 1}, {1, 0}}, 4));
}

TEST_CASE("pairing quotients agree and count induced characters") {
    for (const auto& a : enumerate_fqms(16)) {
        auto subs = all_subgroups(a);
        for (const auto& h : subs)
            for (const auto& i : subs) {
                auto [left, right] = pairing_quotients(a, h, i);
                CHECK(left == right);
                // distinct characters of I coming from H
                std::set<std::vector<Rational>> chars;
                for (size_t x : h.elements) {
                    std::vector<Rational> c;
                    for (size_t y : i.elements) c.push_back(a.b(x, y));
                    chars.insert(c);
                }
                CHECK(chars.size() == left);
                if (intersect(a, i, perp(a, h)).size() == 1) CHECK(left == i.size());
            }
    }
}
