#include "doctest.h"

#include "jfk/weil.hpp"

#include <complex>
#include <random>

using namespace jfk;

namespace {

Fqm cyclic(long n, Rational q) { return Fqm({n}, {q}, {{frac(2 * q)}}); }

// Floating oracle for rho(S) built straight from the defining sum.
bool matches_numeric_S(const Fqm& a, const CMatrix& s) {
    int sig = gauss_sum(a).sig_mod_8;
    double n = static_cast<double>(a.size());
    std::complex<double> pre = std::polar(1.0 / std::sqrt(n), -2 * M_PI * sig / 8.0);
    for (size_t g = 0; g < a.size(); ++g)
        for (size_t d = 0; d < a.size(); ++d) {
            std::complex<double> want = pre * std::polar(1.0, -2 * M_PI * a.b(g, d).get_d());
            auto [re, im] = s.at(d, g).approx();
            if (std::abs(want - std::complex<double>(re, im)) > 1e-9) return false;
        }
    return true;
}

OLattice gaussian() { return OLattice(4, {{KElement(1, 0, 4)}}); }
OLattice eisenstein() { return OLattice(3, {{KElement(1, 0, 3)}}); }

}  // namespace

TEST_CASE("T and S on (Z/2, 1/4)") {
    Fqm a = cyclic(2, qq(1, 4));
    CMatrix t = rho_T(a);
    CHECK(t.at(0, 0) == Cyclotomic(Rational(1)));
    CHECK(t.at(1, 1) == e_of(qq(1, 4)));
    CHECK(t.at(0, 1).is_zero());
    CMatrix s = rho_S(a);
    Cyclotomic sqrt2 = e_of(qq(1, 8)) + e_of(qq(-1, 8));
    Cyclotomic c = e_of(qq(-1, 8)) * sqrt2 * qq(1, 2);
    CHECK(s.at(0, 0) == c);
    CHECK(s.at(0, 1) == c);
    CHECK(s.at(1, 1) == -c);
    CHECK(rho_S(Fqm()).at(0, 0) == Cyclotomic(Rational(1)));
}

TEST_CASE("Weil relations on small modules") {
    for (const auto& a : enumerate_fqms(12)) {
        CMatrix t = rho_T(a), s = rho_S(a);
        int sig = gauss_sum(a).sig_mod_8;
        CMatrix s2 = s * s;
        CHECK(s2 == parity_matrix(a).scaled(e_of(qq(-sig, 4))));
        CMatrix st = s * t;
        CHECK(st * st * st == s2);
        CHECK(s * s.conj_transpose() == CMatrix::identity(a.size()));
        CHECK(matches_numeric_S(a, s));
        // T has order dividing the level
        CMatrix tp = CMatrix::identity(a.size());
        for (long k = 0; k < a.level(); ++k) tp = tp * t;
        CHECK(tp == CMatrix::identity(a.size()));
        if (sig % 4 == 0) CHECK(s2 * s2 == CMatrix::identity(a.size()));
    }
}

TEST_CASE("contragredience of A and A-bar") {
    for (const auto& a : enumerate_fqms(8)) {
        Fqm b = a.negated();
        // rho_Abar(g) = conj(rho_A(g)) entrywise: check S and T
        CMatrix sa = rho_S(a), sb = rho_S(b);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < a.size(); ++j) {
                CHECK(sb.at(i, j) == sa.at(i, j).conj());
                CHECK(rho_T(b).at(i, j) == rho_T(a).at(i, j).conj());
            }
    }
}

TEST_CASE("SL2 factorization") {
    std::mt19937 rng(7);
    CHECK(factor_sl2({{{1, 0}, {0, 1}}}).empty());
    CHECK(factor_sl2({{{1, 1}, {0, 1}}}) == GroupWord{{Letter::T}});
    CHECK_THROWS_AS(factor_sl2({{{2, 0}, {0, 1}}}), Error);
    for (int t = 0; t < 50; ++t) {
        GroupWord w;
        for (int k = 0; k < 8; ++k) w.push_back({static_cast<Letter::Kind>(rng() % 3)});
        IntMat2 m = eval_sl2(w);
        CHECK(eval_sl2(factor_sl2(m)) == m);
    }
    CHECK(parse_word("S, T,T^-1,xi2") == GroupWord{{Letter::S}, {Letter::T}, {Letter::Tinv}, {Letter::Xi, 2}});
    CHECK(word_to_string(parse_word("S,T^-1")) == "S,T^-1");
    CHECK_THROWS_AS(parse_word("Q"), Error);
}

TEST_CASE("factorizations give the same matrix for even signature") {
    Fqm a = Fqm({2, 2}, {qq(1, 4), qq(1, 4)}, {{qq(1, 2), 0}, {0, qq(1, 2)}});
    GroupWord w = parse_word("S,S,S,T,S");
    CHECK(rho_of(w, a) == rho_of(eval_sl2(w), a));
    CHECK(rho_of(IntMat2{{{1, 0}, {0, 1}}}, a) == CMatrix::identity(4));
    CHECK_THROWS_AS(rho_of(eval_sl2(w), cyclic(2, qq(1, 4))), Error);
}

TEST_CASE("U(1,1) factorization") {
    long d = 4;
    KElement i(0, qq(1, 2), d), one(1, 0, d), zero(0, 0, d);
    U11Factor f = factor_u11({{{i, zero}, {zero, i}}}, d);
    CHECK(f.xi == i);
    CHECK(f.b == IntMat2{{{1, 0}, {0, 1}}});
    U11Factor g = factor_u11({{{i, i}, {zero, i}}}, d);
    CHECK(g.xi == i);
    CHECK(g.b == IntMat2{{{1, 1}, {0, 1}}});
    // -T factors with the root of argument 0
    U11Factor h = factor_u11({{{-one, -one}, {zero, -one}}}, d);
    CHECK(h.xi == one);
    CHECK(h.b == IntMat2{{{-1, -1}, {0, -1}}});
    CHECK_THROWS_AS(factor_u11({{{one, one}, {one, one}}}, d), Error);
    CHECK_THROWS_AS(factor_u11({{{KElement(qq(1, 3), 0, d), zero}, {zero, one}}}, d), Error);
}

TEST_CASE("unit action commutes with T and S") {
    for (const OLattice& m : {gaussian(), eisenstein(), OLattice(4, {{KElement(2, 0, 4)}}),
                              OLattice(3, {{KElement(1, 0, 3), KElement(0, qq(1, 3), 3)},
                                           {KElement(0, qq(-1, 3), 3), KElement(1, 0, 3)}})}) {
        HermitianContext h = make_hermitian_context(m);
        CMatrix t = rho_T(h.disc.fqm), s = rho_S(h.disc.fqm);
        for (const auto& xi : roots_of_unity(m.d())) {
            CMatrix x = rho_xi(h, xi);
            CHECK(x * t == t * x);
            CHECK(x * s == s * x);
        }
        // xi = -1 agrees with S^2
        KElement mone(-1, 0, m.d());
        CHECK(rho_xi(h, mone) == s * s);
        CHECK(rho_xi(h, KElement(1, 0, m.d())) == CMatrix::identity(h.disc.fqm.size()));
    }
    HermitianContext g = make_hermitian_context(gaussian());
    CHECK(g.disc.fqm.size() == 4);
    CHECK_THROWS_AS(rho_xi(g, KElement(2, 0, 4)), Error);
    // matrix input in U(1,1): xi * B
    KElement i(0, qq(1, 2), 4), zero(0, 0, 4);
    KMat2 it{{{i, i}, {zero, i}}};
    CHECK(rho_of(it, g) == rho_xi(g, i) * rho_T(g.disc.fqm));
}

TEST_CASE("arrow operators intertwine") {
    for (const auto& a : enumerate_fqms(16)) {
        if (a.size() < 4) continue;
        CMatrix ta = rho_T(a), sa = rho_S(a);
        for (const auto& h : isotropic_subgroups(a)) {
            Arrows ar = arrows(a, h);
            const Fqm& dl = ar.delta.fqm;
            CMatrix td = rho_T(dl), sd = rho_S(dl);
            CHECK(ar.down * ta == td * ar.down);
            CHECK(ar.down * sa == sd * ar.down);
            CHECK(ta * ar.up == ar.up * td);
            CHECK(sa * ar.up == ar.up * sd);
            CMatrix du = ar.down * ar.up;
            CHECK(du == CMatrix::identity(dl.size()).scaled(Cyclotomic(Rational(static_cast<long>(h.size())))));
        }
    }
    Fqm z4 = cyclic(4, qq(1, 8));
    CHECK_THROWS_AS(arrows(z4, subgroup_closure(z4, std::vector<size_t>{1})), Error);
}

TEST_CASE("combined arrow") {
    Fqm a1 = cyclic(2, qq(1, 4));
    Fqm two({2, 2}, {qq(1, 4), qq(1, 4)}, {{qq(1, 2), 0}, {0, qq(1, 2)}});
    size_t checked = 0, up_cases = 0, iota_cases = 0;
    for (const Fqm& dm : {a1, two}) {
        for (const auto& d : enumerate_fqms(8)) {
            for (const auto& h : horizontal_isotropic_subgroups(dm, d)) {
                DeltaData dd = quotient_delta(h);
                for (const auto& i : isotropic_subgroups(d)) {
                    CombinedArrow c = combined_arrow(h, dd, i);
                    CHECK(c.map == combined_arrow_composite(h, c));
                    CHECK(c.map.rank() == c.Bbar.fqm.size());
                    ++checked;
                    Subgroup hperp_i = intersect(h.A, c.I, dd.Hperp);
                    if (hperp_i.size() == c.I.size()) {
                        // I inside H-perp: the map is the lift along I_B = (I + H)/H
                        std::vector<size_t> g;
                        for (size_t x : c.I.gens) g.push_back(static_cast<size_t>(c.B.proj[x]));
                        Arrows ib = arrows(c.B.fqm, subgroup_closure(c.B.fqm, g));
                        REQUIRE(ib.delta.fqm.size() == c.Bbar.fqm.size());
                        for (size_t al = 0; al < c.Bbar.fqm.size(); ++al) {
                            size_t phi = static_cast<size_t>(
                                ib.delta.proj[static_cast<size_t>(c.B.proj[c.Bbar.section[al]])]);
                            for (size_t be = 0; be < c.B.fqm.size(); ++be)
                                CHECK(c.map.at(be, al) == ib.up.at(be, phi));
                        }
                        ++up_cases;
                    }
                    if (hperp_i.size() == 1) {
                        // I meets H-perp trivially: an injection of basis vectors
                        std::vector<char> used(c.B.fqm.size(), 0);
                        for (size_t al = 0; al < c.Bbar.fqm.size(); ++al) {
                            size_t ones = 0;
                            for (size_t be = 0; be < c.B.fqm.size(); ++be)
                                if (!c.map.entry_is_zero(be, al)) {
                                    CHECK(c.map.at(be, al) == Cyclotomic(Rational(1)));
                                    CHECK_FALSE(used[be]);
                                    used[be] = 1;
                                    ++ones;
                                }
                            CHECK(ones == 1);
                        }
                        ++iota_cases;
                    }
                }
            }
        }
    }
    CHECK(checked > 50);
    CHECK(up_cases > 10);
    CHECK(iota_cases > 10);
}
