#include "jfk/theta.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace jfk {

namespace {

// G = R^t D R with R unit upper triangular.
void ldl(const QMat& g, QVec& dg, QMat& r) {
    size_t n = g.size();
    QMat a = g;
    dg.assign(n, 0);
    r = q_identity(n);
    for (size_t i = 0; i < n; ++i) {
        if (a[i][i] <= 0) throw Error("NotPositiveDefinite", "Gram matrix is not positive definite");
        dg[i] = a[i][i];
        for (size_t j = i + 1; j < n; ++j) r[i][j] = a[i][j] / a[i][i];
        for (size_t j = i + 1; j < n; ++j)
            for (size_t k = i + 1; k < n; ++k) a[j][k] -= a[j][i] * a[i][k] / a[i][i];
    }
}

bool vec_less(const QVec& a, const QVec& b) { return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end()); }

void sort_terms(std::vector<ThetaTerm>& t) {
    std::sort(t.begin(), t.end(), [](const ThetaTerm& a, const ThetaTerm& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        return vec_less(a.lam, b.lam);
    });
}

Integer common_denominator(const std::vector<ThetaTerm>& t) {
    Integer d = 1;
    for (const auto& x : t) mpz_lcm(d.get_mpz_t(), d.get_mpz_t(), x.norm.get_den_mpz_t());
    return d;
}

}  // namespace

std::vector<QVec> enumerate_short_vectors(const ZLattice& l, const QVec& coset, const Rational& bound) {
    size_t n = l.rank();
    if (coset.size() != n) throw Error("InvalidInput", "coset offset has the wrong length");
    std::vector<QVec> out;
    if (bound < 0) return out;
    if (n == 0) {
        out.push_back({});
        return out;
    }
    QVec dg;
    QMat r;
    ldl(l.gram(), dg, r);
    Rational total = 2 * bound;  // v^t G v <= 2B
    QVec v(n);
    std::function<void(size_t, const Rational&)> rec = [&](size_t i1, const Rational& rem) {
        size_t i = i1 - 1;
        // s = sum_{j>i} R_ij v_j; need dg_i (v_i + s)^2 <= rem with v_i = x + c_i
        Rational s = 0;
        for (size_t j = i + 1; j < n; ++j) s += r[i][j] * v[j];
        Rational u = coset[i] + s;
        double rad = std::sqrt(std::max(0.0, Rational(rem / dg[i]).get_d()));
        double center = -u.get_d();
        long lo = static_cast<long>(std::floor(center - rad)) - 1;
        long hi = static_cast<long>(std::ceil(center + rad)) + 1;
        for (long x = lo; x <= hi; ++x) {
            Rational w = x + u;
            Rational used = dg[i] * w * w;
            if (used > rem) continue;
            v[i] = x + coset[i];
            if (i == 0)
                out.push_back(v);
            else
                rec(i, rem - used);
        }
    };
    rec(n, total);
    std::sort(out.begin(), out.end(), vec_less);
    return out;
}

std::map<std::pair<Rational, size_t>, long> ThetaExpansion::counts() const {
    std::map<std::pair<Rational, size_t>, long> c;
    for (const auto& t : terms) ++c[{t.norm, t.coset}];
    return c;
}

const ThetaTerm* ThetaExpansion::find(const QVec& lam) const {
    for (const auto& t : terms)
        if (t.lam == lam) return &t;
    return nullptr;
}

ThetaExpansion theta_expansion(const ZLattice& l, const Rational& bound) {
    if (!l.is_even()) throw Error("NotEven", "theta expansion needs an even lattice");
    if (!l.is_positive_definite()) throw Error("NotPositiveDefinite", "theta expansion needs a definite lattice");
    ThetaExpansion t;
    t.lattice = l;
    t.disc = discriminant_group(l);
    t.bound = bound;
    for (size_t g = 0; g < t.disc.fqm.size(); ++g) {
        QVec c = t.disc.lift(g);
        for (auto& v : enumerate_short_vectors(l, c, bound)) {
            Rational nm = l.norm(v);
            t.terms.push_back({std::move(v), g, nm});
        }
    }
    sort_terms(t.terms);
    t.denominator = common_denominator(t.terms);
    return t;
}

ThetaExpansion theta_expansion(const OLattice& m, const Rational& bound) {
    ZLattice tf = trace_form(m);
    if (!m.is_even()) throw Error("NotEven", "theta expansion needs an even lattice");
    if (!tf.is_positive_definite()) throw Error("NotPositiveDefinite", "theta expansion needs a definite lattice");
    long d = m.d();
    size_t b = m.rank();
    DualData dd = dual_olattice(m);
    KElement w = KElement::omega(d);
    // Z-basis of the Hermitian dual: c_j, w c_j
    std::vector<KVec> basis;
    for (size_t j = 0; j < b; ++j) {
        KVec c(b), cw(b);
        for (size_t i = 0; i < b; ++i) {
            c[i] = dd.hdual[i][j];
            cw[i] = dd.hdual[i][j] * w;
        }
        basis.push_back(c);
        basis.push_back(cw);
    }
    QMat g = q_zero(2 * b, 2 * b);
    for (size_t i = 0; i < 2 * b; ++i)
        for (size_t j = 0; j < 2 * b; ++j) g[i][j] = m.pair(basis[i], basis[j]).trace();
    ThetaExpansion t;
    t.lattice = tf;
    t.disc = discriminant_group(tf);
    t.bound = bound;
    for (const auto& z : enumerate_short_vectors(ZLattice(g), QVec(2 * b, 0), bound)) {
        KVec y(b, KElement(0, 0, d));
        for (size_t k = 0; k < 2 * b; ++k)
            for (size_t i = 0; i < b; ++i) y[i] += z[k] * basis[k][i];
        KElement nm = m.pair(y, y);
        QVec lam = to_trace_coords(y);
        t.terms.push_back({lam, t.disc.project(lam), nm.x()});
    }
    sort_terms(t.terms);
    t.denominator = common_denominator(t.terms);
    return t;
}

PeriodicityReport apply_periodicity(const ThetaExpansion& t, const QVec& sigma, const QVec& nu) {
    const ZLattice& l = t.lattice;
    PeriodicityReport rep;
    size_t sclass = t.disc.project(sigma);
    t.disc.project(nu);  // validates nu in L*
    Rational s2 = l.norm(sigma);
    rep.loss = s2;
    for (const auto& term : t.terms) {
        Rational p = l.pair(term.lam, sigma);
        Rational a = p < 0 ? Rational(-p) : p;
        if (a + s2 > rep.loss) rep.loss = a + s2;
        ThetaTerm n{add(term.lam, sigma), t.disc.fqm.add(term.coset, sclass), term.norm + p + s2};
        rep.transformed.push_back(n);
        rep.phases.push_back(e_of(l.pair(term.lam, nu)));
    }
    rep.window = t.bound - rep.loss;
    // transformed terms inside the window must be exactly the original terms there
    std::vector<ThetaTerm> a, b;
    for (const auto& x : rep.transformed)
        if (x.norm <= rep.window) a.push_back(x);
    for (const auto& x : t.terms)
        if (x.norm <= rep.window) b.push_back(x);
    sort_terms(a);
    rep.compared = b.size();
    if (a.size() != b.size()) {
        rep.ok = false;
        rep.failure = "term counts differ inside the window";
        return rep;
    }
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].lam != b[i].lam || a[i].norm != b[i].norm || a[i].coset != b[i].coset) {
            rep.ok = false;
            rep.failure = "term mismatch at norm " + to_string(b[i].norm);
            return rep;
        }
        if (l.norm(a[i].lam) != a[i].norm) {
            rep.ok = false;
            rep.failure = "exponent bookkeeping differs from the Gram norm";
            return rep;
        }
    }
    return rep;
}

bool heat_check(const ThetaExpansion& t) {
    const QMat& g = t.lattice.gram();
    QMat gi = t.lattice.rank() ? inverse(g) : QMat{};
    for (const auto& term : t.terms) {
        QVec y = mul(g, term.lam);
        if (bilinear(gi, y, y) != 2 * term.norm) return false;
    }
    return true;
}

}  // namespace jfk
