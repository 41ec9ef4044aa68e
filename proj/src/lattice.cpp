#include "jfk/lattice.hpp"

#include <functional>

namespace jfk {

// ---------------------------------------------------------------- ZLattice

ZLattice::ZLattice(QMat gram) : gram_(std::move(gram)) {
    for (const auto& row : gram_)
        if (row.size() != gram_.size()) throw Error("InvalidLattice", "Gram matrix must be square");
    if (!is_symmetric(gram_)) throw Error("InvalidLattice", "Gram matrix must be symmetric");
}

bool ZLattice::is_even() const {
    for (size_t i = 0; i < rank(); ++i)
        for (size_t j = 0; j < rank(); ++j) {
            if (!is_integral(gram_[i][j])) return false;
            if (i == j && !is_integral(gram_[i][i] / 2)) return false;
        }
    return true;
}

// ---------------------------------------------------------------- OLattice

OLattice::OLattice(long d, KMat hgram) : d_(d), hgram_(std::move(hgram)) {
    if (!is_order_discriminant(d)) throw Error("InvalidLattice", "d is not the discriminant of an imaginary quadratic order");
    size_t n = hgram_.size();
    for (auto& row : hgram_) {
        if (row.size() != n) throw Error("InvalidLattice", "Hermitian Gram matrix must be square");
        for (auto& x : row) x = KElement(x.x(), x.y(), d);
    }
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            if (hgram_[i][j] != hgram_[j][i].conj()) throw Error("NotHermitian", "Gram matrix is not Hermitian");
            if (!hgram_[i][j].in_Dinv()) throw Error("NotInInverseDifferent", "pairing leaves the inverse different");
        }
}

bool OLattice::is_even() const {
    for (size_t i = 0; i < rank(); ++i)
        if (!is_integral(hgram_[i][i].x())) return false;
    return true;
}

KElement OLattice::pair(const KVec& a, const KVec& b) const {
    KElement s(0, 0, d_);
    for (size_t i = 0; i < rank(); ++i)
        for (size_t j = 0; j < rank(); ++j) s += b[i].conj() * hgram_[i][j] * a[j];
    return s;
}

// ---------------------------------------------------------------- trace form

QVec to_trace_coords(const KVec& v) {
    QVec t;
    for (const auto& c : v) {
        auto [m, n] = c.O_coords();
        t.push_back(m);
        t.push_back(n);
    }
    return t;
}

KVec from_trace_coords(const QVec& t, long d) {
    if (t.size() % 2 != 0) throw Error("InvalidInput", "trace coordinates have odd length");
    KVec v;
    for (size_t i = 0; i < t.size(); i += 2) v.push_back(KElement::from_O_coords(t[i], t[i + 1], d));
    return v;
}

QMat k_mult_matrix(const KElement& c, size_t b) {
    // c * 1 and c * w in the basis {1, w}
    long d = c.d();
    auto [m1, n1] = c.O_coords();
    auto [m2, n2] = (c * KElement::omega(d)).O_coords();
    QMat a = q_zero(2 * b, 2 * b);
    for (size_t i = 0; i < b; ++i) {
        a[2 * i][2 * i] = m1;
        a[2 * i + 1][2 * i] = n1;
        a[2 * i][2 * i + 1] = m2;
        a[2 * i + 1][2 * i + 1] = n2;
    }
    return a;
}

ZLattice trace_form(const OLattice& m) {
    size_t b = m.rank();
    long d = m.d();
    KElement basis[2] = {KElement(1, 0, d), KElement::omega(d)};
    QMat g = q_zero(2 * b, 2 * b);
    for (size_t i = 0; i < b; ++i)
        for (size_t j = 0; j < b; ++j)
            for (int al = 0; al < 2; ++al)
                for (int be = 0; be < 2; ++be)
                    // (x e_j, y e_i) = Tr(x conj(y) <e_j, e_i>)
                    g[2 * j + al][2 * i + be] = (basis[al] * basis[be].conj() * m.hgram()[i][j]).trace();
    return ZLattice(g);
}

// ---------------------------------------------------------------- Hermitian structure from J

namespace {

bool saturated_rank(const ZMat& cols_as_rows, size_t k) {
    // cols_as_rows: k vectors of length n; primitive of rank k iff all SNF factors are 1
    if (k == 0) return true;
    ZMat m = transpose(cols_as_rows);
    SmithForm sf = smith_normal_form(m);
    if (sf.rank != k) return false;
    for (size_t i = 0; i < k; ++i)
        if (abs(sf.diag[i]) != 1) return false;
    return true;
}

}  // namespace

HermitianFromBilinear hermitian_from_bilinear(const ZLattice& l, const ZMat& j, long d) {
    size_t n = l.rank();
    if (!is_order_discriminant(d)) throw Error("InvalidInput", "d is not an order discriminant");
    if (n % 2 != 0) throw Error("PairingNotCompatible", "rank must be even");
    if (j.size() != n) throw Error("InvalidInput", "J has the wrong size");
    QMat jq = to_rational(j);
    const QMat& g = l.gram();
    QMat jj = mul(jq, jq);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            if (jj[a][b] != (a == b ? Rational(-d) : Rational(0)))
                throw Error("PairingNotCompatible", "J^2 differs from -d");
    QMat jgj = mul(mul(transpose(jq), g), jq);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            if (jgj[a][b] != d * g[a][b]) throw Error("PairingNotCompatible", "(J x, J y) differs from d (x, y)");
    // w acts as (d + J) / 2
    QMat w = jq;
    for (size_t a = 0; a < n; ++a) {
        w[a][a] += d;
        for (size_t b = 0; b < n; ++b) w[a][b] /= 2;
    }
    if (!is_integral(w)) throw Error("NotOModule", "L is not stable under the order");
    ZMat wz = to_integer(w);

    // Greedy search for v_1..v_b with {v_i, w v_i} a Z-basis.
    std::vector<ZVec> chosen;
    std::vector<ZVec> candidates;
    for (size_t a = 0; a < n; ++a) {
        ZVec e(n, 0);
        e[a] = 1;
        candidates.push_back(e);
    }
    long box = n <= 6 ? 2 : 1;
    std::function<void(ZVec&, size_t)> gen = [&](ZVec& v, size_t pos) {
        if (pos == n) {
            bool nz = false;
            for (const auto& x : v) nz = nz || x != 0;
            if (nz) candidates.push_back(v);
            return;
        }
        for (long t = -box; t <= box; ++t) {
            v[pos] = t;
            gen(v, pos + 1);
        }
    };
    ZVec tmp(n, 0);
    gen(tmp, 0);
    while (chosen.size() < n) {
        bool found = false;
        for (const auto& v : candidates) {
            std::vector<ZVec> trial = chosen;
            trial.push_back(v);
            trial.push_back(mul(wz, v));
            if (saturated_rank(trial, trial.size())) {
                chosen = trial;
                found = true;
                break;
            }
        }
        if (!found) throw Error("NotFree", "no free O-basis found for this lattice");
    }
    ZMat basis = transpose(chosen);
    size_t b = n / 2;
    KMat h(b, KVec(b));
    KElement s = KElement::sqrt_minus_d(d);
    for (size_t r = 0; r < b; ++r)
        for (size_t c = 0; c < b; ++c) {
            // h[r][c] = <v_c, v_r> = (v_c, v_r)/2 - s (J v_c, v_r)/(2d)
            QVec vc = to_rational(ZMat{chosen[2 * c]})[0];
            QVec vr = to_rational(ZMat{chosen[2 * r]})[0];
            Rational p = bilinear(g, vc, vr);
            Rational pj = bilinear(g, mul(jq, vc), vr);
            h[r][c] = KElement(p / 2, 0, d) - KElement(pj / (2 * d), 0, d) * s;
        }
    return {OLattice(d, h), basis};
}

// ---------------------------------------------------------------- duals

DualData dual_zlattice(const ZLattice& l) { return {inverse(l.gram()), {}}; }

DualData dual_olattice(const OLattice& m) {
    size_t b = m.rank();
    long d = m.d();
    // inverse of H over K by Gauss-Jordan
    KMat a = m.hgram();
    KMat inv(b, KVec(b, KElement(0, 0, d)));
    for (size_t i = 0; i < b; ++i) inv[i][i] = KElement(1, 0, d);
    for (size_t col = 0; col < b; ++col) {
        size_t piv = col;
        while (piv < b && a[piv][col].is_zero()) ++piv;
        if (piv == b) throw Error("DegenerateGram", "Hermitian Gram matrix is singular");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        KElement f = a[col][col].inverse();
        for (size_t k = 0; k < b; ++k) {
            a[col][k] = a[col][k] * f;
            inv[col][k] = inv[col][k] * f;
        }
        for (size_t r = 0; r < b; ++r) {
            if (r == col || a[r][col].is_zero()) continue;
            KElement t = a[r][col];
            for (size_t k = 0; k < b; ++k) {
                a[r][k] -= t * a[col][k];
                inv[r][k] -= t * inv[col][k];
            }
        }
    }
    KElement sinv = KElement::sqrt_minus_d(d).inverse();
    KMat hdual(b, KVec(b));
    for (size_t i = 0; i < b; ++i)
        for (size_t jx = 0; jx < b; ++jx) hdual[i][jx] = inv[i][jx] * sinv;
    // Z-basis: columns c_j and w c_j in trace coordinates
    QMat zb = q_zero(2 * b, 2 * b);
    KElement w = KElement::omega(d);
    for (size_t jx = 0; jx < b; ++jx) {
        KVec c(b), cw(b);
        for (size_t i = 0; i < b; ++i) {
            c[i] = hdual[i][jx];
            cw[i] = hdual[i][jx] * w;
        }
        QVec t1 = to_trace_coords(c), t2 = to_trace_coords(cw);
        for (size_t i = 0; i < 2 * b; ++i) {
            zb[i][2 * jx] = t1[i];
            zb[i][2 * jx + 1] = t2[i];
        }
    }
    ZLattice tf = trace_form(m);
    QMat gi = inverse(tf.gram());
    if (b > 0) {
        QMat tr = mul(inverse(zb), gi);
        if (!is_integral(tr) || abs(det(tr)) != 1)
            throw Error("InternalError", "Hermitian dual differs from the dual of the trace form");
    }
    return {gi, hdual};
}

// ---------------------------------------------------------------- discriminant group

Discriminant discriminant_group(const ZLattice& l) {
    if (!l.is_even()) throw Error("NotEven", "lattice is not even");
    size_t n = l.rank();
    Discriminant out;
    out.lattice = l;
    if (n == 0) {
        out.fqm = Fqm();
        return out;
    }
    QMat gi = inverse(l.gram());  // throws DegenerateGram
    ZMat g = to_integer(l.gram());
    SmithForm sf = smith_normal_form(g);
    out.U = sf.U;
    std::vector<long> orders;
    for (size_t i = 0; i < n; ++i) {
        if (sf.diag[i] == 1) continue;
        if (!sf.diag[i].fits_slong_p()) throw Error("BudgetExceeded", "discriminant group too large");
        out.keep.push_back(i);
        orders.push_back(sf.diag[i].get_si());
        ZVec e(n, 0);
        for (size_t r = 0; r < n; ++r) e[r] = sf.Uinv[r][i];
        QVec y(n);
        for (size_t r = 0; r < n; ++r) y[r] = e[r];
        out.gen_lifts.push_back(mul(gi, y));
    }
    size_t k = orders.size();
    std::vector<Rational> qv(k);
    QMat gram = q_zero(k, k);
    for (size_t a = 0; a < k; ++a) {
        qv[a] = l.norm(out.gen_lifts[a]);
        for (size_t b = 0; b < k; ++b) gram[a][b] = l.pair(out.gen_lifts[a], out.gen_lifts[b]);
    }
    out.fqm = Fqm(orders, qv, gram, false);
    return out;
}

size_t Discriminant::project(const QVec& x) const {
    if (x.size() != lattice.rank()) throw Error("InvalidInput", "vector has the wrong length");
    if (lattice.rank() == 0) return 0;
    QVec y = mul(lattice.gram(), x);
    for (const auto& c : y)
        if (!is_integral(c)) throw Error("NotInDual", "vector is not in the dual lattice");
    Elt e(keep.size());
    for (size_t a = 0; a < keep.size(); ++a) {
        Integer s = 0;
        for (size_t c = 0; c < y.size(); ++c) s += U[keep[a]][c] * y[c].get_num();
        Integer r = s % fqm.orders()[a];
        e[a] = mod_l(r.get_si(), fqm.orders()[a]);
    }
    return fqm.index(e);
}

QVec Discriminant::lift(size_t idx) const {
    QVec x(lattice.rank(), Rational(0));
    Elt e = fqm.elt(idx);
    for (size_t a = 0; a < e.size(); ++a)
        for (size_t c = 0; c < x.size(); ++c) x[c] += e[a] * gen_lifts[a][c];
    return x;
}

// ---------------------------------------------------------------- complex components

std::pair<SplitPart, SplitPart> project_components(const QVec& lam, const QMat& j, long d) {
    QVec jl = mul(j, lam);
    SplitPart c{scale(qq(1, 2), lam), scale(qq(-1, 2 * d), jl)};
    SplitPart cb{scale(qq(1, 2), lam), scale(qq(1, 2 * d), jl)};
    return {c, cb};
}

}  // namespace jfk
