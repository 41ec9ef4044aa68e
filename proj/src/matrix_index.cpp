#include "jfk/matrix_index.hpp"

#include <algorithm>
#include <numeric>

namespace jfk {

namespace {

Integer common_den(const QMat& a) {
    Integer den = 1;
    for (const auto& row : a)
        for (const auto& x : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    return den;
}

ZMat scaled_integer(const QMat& a, const Integer& den) {
    ZMat z(a.size(), ZVec(a.empty() ? 0 : a[0].size()));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) z[i][j] = Rational(a[i][j] * den).get_num();
    return z;
}

QVec column(const ZMat& m, size_t j) {
    QVec v(m.size());
    for (size_t i = 0; i < m.size(); ++i) v[i] = m[i][j];
    return v;
}

size_t psi_of(const ValidatedIndex& v, const ZVec& a) {
    const Fqm& delta = v.input.delta;
    long exp = 1;
    for (long n : delta.orders()) exp = std::lcm(exp, n);
    Elt acc(delta.rank(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        Integer r = a[i] % exp;
        long k = r.get_si();
        acc = delta.add(acc, delta.mul(k, delta.elt(v.psi[i])));
    }
    return delta.index(acc);
}

}  // namespace

ValidatedIndex validate_psi(const MatrixIndexInput& in) {
    ValidatedIndex v;
    v.input = in;
    if (!in.delta.is_nondegenerate()) throw Error("DegenerateDelta", "the target discriminant form is degenerate");
    if (in.d) {
        long d = *in.d;
        if (!is_order_discriminant(d)) throw Error("InvalidInput", "d is not the discriminant of an order");
        size_t c = in.SH.size();
        for (const auto& row : in.SH)
            if (row.size() != c) throw Error("InvalidInput", "S must be square");
        for (size_t i = 0; i < c; ++i)
            for (size_t j = 0; j < c; ++j)
                if (in.SH[i][j] != in.SH[j][i].conj()) throw Error("NotHermitian", "S is not Hermitian");
        v.c = 2 * c;
        // Z-basis vectors: e_i and w e_i as K-vectors
        KElement w = KElement::omega(d), one(1, 0, d);
        auto basis_entry = [&](size_t k) { return (k % 2) ? w : one; };
        v.SZ = q_zero(v.c, v.c);
        for (size_t k = 0; k < v.c; ++k)
            for (size_t l = 0; l < v.c; ++l)
                v.SZ[k][l] = (basis_entry(k).conj() * in.SH[k / 2][l / 2] * basis_entry(l)).x();
    } else {
        v.c = in.S.size();
        for (const auto& row : in.S)
            if (row.size() != v.c) throw Error("InvalidInput", "S must be square");
        if (!is_symmetric(in.S)) throw Error("InvalidInput", "S must be symmetric");
        v.SZ = in.S;
    }
    if (!is_positive_semidefinite(v.SZ)) throw Error("NotSemidefinite", "S is not positive semidefinite");
    if (in.psi_images.size() != v.c)
        throw Error("InvalidInput", "psi needs one image per generator (" + std::to_string(v.c) + ")");
    for (const auto& x : in.psi_images) {
        if (x.size() != in.delta.rank()) throw Error("InvalidInput", "psi image has the wrong length");
        v.psi.push_back(in.delta.index(x));
    }
    const Fqm& delta = in.delta;
    for (size_t i = 0; i < v.c; ++i) {
        if (frac(delta.q(v.psi[i]) - v.SZ[i][i]) != 0)
            throw Error("QuadraticMismatch", "q(psi e_" + std::to_string(i) + ") differs from S[" + std::to_string(i) +
                                                 "][" + std::to_string(i) + "] mod 1");
        for (size_t j = i + 1; j < v.c; ++j)
            if (frac(delta.b(v.psi[i], v.psi[j]) - 2 * v.SZ[i][j]) != 0)
                throw Error("QuadraticMismatch", "bilinear values of psi differ from 2S");
    }
    Integer den = common_den(v.SZ);
    ZMat ker = integer_kernel(scaled_integer(v.SZ, den), v.c);
    for (size_t j = 0; j < (ker.empty() ? 0 : ker[0].size()); ++j) {
        ZVec k(v.c);
        for (size_t i = 0; i < v.c; ++i) k[i] = ker[i][j];
        if (psi_of(v, k) != 0) throw Error("KernelNotKilled", "psi does not vanish on the integral kernel of S");
    }
    return v;
}

QVec MatrixIndexSetting::to_l_coords(const QVec& a) const {
    size_t r = l_basis.empty() ? 0 : l_basis[0].size();
    QVec rhs(r);
    QVec sa = mul(v.SZ, a);
    for (size_t i = 0; i < r; ++i) rhs[i] = 2 * dot(column(l_basis, i), sa);
    return r ? solve(L.gram(), rhs) : QVec{};
}

QVec MatrixIndexSetting::from_l_coords(const QVec& x) const {
    QVec a(v.c, Rational(0));
    for (size_t i = 0; i < x.size(); ++i) a = add(a, scale(x[i], column(l_basis, i)));
    return a;
}

MatrixIndexSetting build_setting(const ValidatedIndex& v) {
    MatrixIndexSetting s;
    s.v = v;
    size_t c = v.c;
    const Fqm& delta = v.input.delta;
    size_t k = delta.rank();
    // ker psi: integer kernel of [P | diag(n)], first c rows
    if (k == 0) {
        s.omega_basis = z_identity(c);
    } else {
        ZMat p(k, ZVec(c + k, 0));
        for (size_t i = 0; i < c; ++i) {
            Elt e = delta.elt(v.psi[i]);
            for (size_t j = 0; j < k; ++j) p[j][i] = e[j];
        }
        for (size_t j = 0; j < k; ++j) p[j][c + j] = delta.orders()[j];
        ZMat ker = integer_kernel(p, c + k);
        ZMat gens(c, ZVec(ker.empty() ? 0 : ker[0].size()));
        for (size_t i = 0; i < c; ++i) gens[i] = ker[i];
        s.omega_basis = lattice_basis(gens);
    }
    // split off ker S: M V = U^{-1} D with the last columns of V spanning the kernel
    Integer den = common_den(v.SZ);
    ZMat m = mul(scaled_integer(v.SZ, den), s.omega_basis);
    SmithForm sf = smith_normal_form(m);
    ZMat bv = mul(s.omega_basis, sf.V);
    size_t r = sf.rank;
    s.l_basis.assign(c, ZVec(r));
    s.kernel_basis.assign(c, ZVec(c - r));
    for (size_t i = 0; i < c; ++i) {
        for (size_t j = 0; j < r; ++j) s.l_basis[i][j] = bv[i][j];
        for (size_t j = r; j < c; ++j) s.kernel_basis[i][j - r] = bv[i][j];
    }
    QMat g = q_zero(r, r);
    for (size_t i = 0; i < r; ++i)
        for (size_t j = 0; j < r; ++j) g[i][j] = 2 * bilinear(v.SZ, column(s.l_basis, i), column(s.l_basis, j));
    s.L = ZLattice(g);
    if (!s.L.is_even()) throw Error("NotEvenQuotient", "the Gram matrix of Omega modulo ker S is not even");
    s.disc = discriminant_group(s.L);
    const Fqm& dom = s.disc.fqm;
    // D_{Omega,S} and the embedding into Delta
    std::vector<size_t> gens(c);
    for (size_t i = 0; i < c; ++i) {
        QVec e(c, Rational(0));
        e[i] = 1;
        gens[i] = s.disc.project(s.to_l_coords(e));
    }
    s.DOS = subgroup_closure(dom, gens);
    s.psi_embedding.assign(dom.size(), -1);
    s.psi_embedding[0] = 0;
    std::vector<size_t> queue{0};
    for (size_t qi = 0; qi < queue.size(); ++qi) {
        size_t x = queue[qi];
        for (size_t i = 0; i < c; ++i) {
            size_t y = dom.add(x, gens[i]);
            long img = static_cast<long>(delta.add(static_cast<size_t>(s.psi_embedding[x]), v.psi[i]));
            if (s.psi_embedding[y] < 0) {
                s.psi_embedding[y] = img;
                queue.push_back(y);
            } else if (s.psi_embedding[y] != img) {
                throw Error("CheckFailed", "psi does not factor through D_{Omega,S}");
            }
        }
    }
    std::vector<char> used(delta.size(), 0);
    for (size_t x : s.DOS.elements) {
        size_t y = static_cast<size_t>(s.psi_embedding[x]);
        if (used[y] || dom.q(x) != delta.q(y)) throw Error("CheckFailed", "D_{Omega,S} does not embed isometrically");
        used[y] = 1;
    }
    s.HOmega = perp(dom, s.DOS);
    if (!(perp(dom, s.HOmega) == s.DOS)) throw Error("CheckFailed", "D_{Omega,S} is not the complement of H_Omega");

    if (v.input.d) {
        long d = *v.input.d;
        size_t b = c / 2;
        // Omega must be an O-module
        QMat wm = k_mult_matrix(KElement::omega(d), b);
        QMat binv = inverse(to_rational(s.omega_basis));
        for (size_t j = 0; j < c; ++j)
            if (!is_integral(QMat{mul(binv, mul(wm, column(s.omega_basis, j)))}))
                throw Error("NotOModule", "ker psi is not stable under O");
        // multiplication by sqrt(-d) on L
        QMat sm = k_mult_matrix(KElement::sqrt_minus_d(d), b);
        QMat jq = q_zero(r, r);
        for (size_t j = 0; j < r; ++j) {
            QVec x = s.to_l_coords(mul(sm, column(s.l_basis, j)));
            for (size_t i = 0; i < r; ++i) jq[i][j] = x[i];
        }
        try {
            s.M = hermitian_from_bilinear(s.L, to_integer(jq), d).lattice;
        } catch (const Error& e) {
            if (e.kind() != "NotFree") throw;
            if (!is_maximal_order(d))
                throw Error("NotProvablyProjective", "no free O-basis found and O is not maximal");
        }
    }
    return s;
}

ThetaExpansion theta_matrix_index(const MatrixIndexSetting& s, const Rational& bound) {
    return theta_expansion(s.L, bound);
}

bool check_per_omega(const MatrixIndexSetting& s, const ThetaExpansion& t) {
    size_t c = s.v.c;
    for (size_t i = 0; i <= c; ++i)
        for (size_t j = 0; j <= c; ++j) {
            QVec u(c, Rational(0)), w(c, Rational(0));
            if (i < c) u[i] = 1;
            if (j < c) w[j] = 1;
            if (!apply_periodicity(t, s.to_l_coords(u), s.to_l_coords(w)).ok) return false;
        }
    return true;
}

Cyclotomic MatrixJacobiExpansion::get(const MatrixJacobiKey& k) const {
    auto it = coeffs.find(k);
    return it == coeffs.end() ? Cyclotomic() : it->second;
}

MatrixJacobiExpansion jacobi_matrix_index(const ModularFormData& f, const HorizontalData& h,
                                          const MatrixIndexSetting& s, const Rational& bound) {
    auto ctx = make_jacobi_context(s.disc, h);
    if (!(h.HM == s.HOmega))
        throw Error("HypothesisUnverified", "the M-part of H must be the complement of D_{Omega,S}");
    const Fqm& dh = ctx->dd.q.fqm;
    const Fqm& delta = s.v.input.delta;
    std::vector<std::pair<size_t, size_t>> fixed;
    for (size_t x : s.DOS.elements)
        fixed.push_back({embed_in_delta(h, ctx->dd, x), static_cast<size_t>(s.psi_embedding[x])});
    auto iso = find_isomorphism(dh, delta, fixed);
    if (!iso) throw Error("HypothesisUnverified", "Delta_H is not isomorphic to Delta compatibly with psi");
    MatrixJacobiExpansion out;
    out.delta_iso = *iso;
    auto lo = f.min_n();
    Rational tb = (lo && *lo < 0) ? bound - *lo : bound;
    out.phi = build_jacobi(theta_expansion(s.L, tb), f, ctx, bound);
    out.window = bound;
    for (const auto& [k, v] : out.phi.coeffs) {
        QVec r = scale(2, mul(s.v.SZ, s.from_l_coords(k.lam)));
        out.coeffs[{k.m, r, out.delta_iso[k.beta]}] = v;
    }
    return out;
}

bool check_matrix_periodicity(const MatrixJacobiExpansion& e, const MatrixIndexSetting& s, const ZVec& u,
                              const ZVec& v) {
    const Fqm& delta = s.v.input.delta;
    QVec uq(u.begin(), u.end()), vq(v.begin(), v.end());
    for (size_t i = 0; i < uq.size(); ++i) uq[i] = Rational(u[i]), vq[i] = Rational(v[i]);
    Rational usu = bilinear(s.v.SZ, uq, uq);
    QVec shift = scale(2, mul(s.v.SZ, uq));
    size_t pu = psi_of(s.v, u), pv = psi_of(s.v, v);
    auto check = [&](const MatrixJacobiKey& src) {
        MatrixJacobiKey tgt{src.m + dot(src.r, uq) + usu, add(src.r, shift), delta.add(src.beta, pu)};
        if (tgt.m > e.window || src.m > e.window) return true;
        return e.get(src) * e_of(dot(src.r, vq)) == e.get(tgt) * e_of(delta.b(pv, src.beta));
    };
    for (const auto& [k, c] : e.coeffs) {
        if (!check(k)) return false;
        MatrixJacobiKey src{Rational(0), sub(k.r, shift), delta.sub(k.beta, pu)};
        src.m = k.m - dot(src.r, uq) - usu;
        if (!check(src)) return false;
    }
    return true;
}

}  // namespace jfk
