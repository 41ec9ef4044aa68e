#include "jfk/weil.hpp"

#include <sstream>

namespace jfk {

namespace {

constexpr size_t kMaxDim = 512;

long checked_add(long a, long b) {
    long r;
    if (__builtin_add_overflow(a, b, &r)) throw Error("Overflow", "matrix coefficient overflow");
    return r;
}

long checked_mul(long a, long b) {
    long r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error("Overflow", "matrix coefficient overflow");
    return r;
}

}  // namespace

// ---------------------------------------------------------------- CMatrix

CMatrix::CMatrix(size_t rows, size_t cols, long order) : rows_(rows), cols_(cols), order_(order) {
    if (rows > kMaxDim || cols > kMaxDim) throw Error("BudgetExceeded", "matrix dimension exceeds 512");
    if (order < 1) throw Error("DomainError", "order must be positive");
    data_.assign(rows * cols * static_cast<size_t>(order), 0);
}

CMatrix CMatrix::identity(size_t n) {
    CMatrix m(n, n, 1);
    for (size_t i = 0; i < n; ++i) m.add_term(i, i, 0);
    return m;
}

void CMatrix::add_term(size_t i, size_t j, long k, long coeff) {
    long& c = cell(i, j, mod_l(k, order_));
    c = checked_add(c, coeff);
}

Cyclotomic CMatrix::at(size_t i, size_t j) const {
    std::vector<long> v(data_.begin() + (i * cols_ + j) * order_, data_.begin() + (i * cols_ + j + 1) * order_);
    return Cyclotomic::from_group_ring(order_, v) * scale_;
}

bool CMatrix::entry_is_zero(size_t i, size_t j) const {
    std::vector<long> v(data_.begin() + (i * cols_ + j) * order_, data_.begin() + (i * cols_ + j + 1) * order_);
    return Cyclotomic::from_group_ring(order_, v).is_zero() || scale_.is_zero();
}

CMatrix CMatrix::embed(long order) const {
    if (order % order_ != 0) throw Error("DomainError", "embedding requires order | target");
    if (order == order_) return *this;
    CMatrix m(rows_, cols_, order);
    m.scale_ = scale_;
    long step = order / order_;
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            for (long k = 0; k < order_; ++k) m.cell(i, j, k * step) = cell(i, j, k);
    return m;
}

CMatrix CMatrix::scaled(const Cyclotomic& c) const {
    CMatrix m = *this;
    m.scale_ = scale_ * c;
    return m;
}

CMatrix CMatrix::conj_transpose() const {
    CMatrix m(cols_, rows_, order_);
    m.scale_ = scale_.conj();
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j)
            for (long k = 0; k < order_; ++k) m.cell(j, i, mod_l(-k, order_)) = cell(i, j, k);
    return m;
}

CMatrix CMatrix::operator*(const CMatrix& o) const {
    if (cols_ != o.rows_) throw Error("DimensionMismatch", "matrix product dimensions differ");
    long n = lcm_l(order_, o.order_);
    const CMatrix a = embed(n);
    const CMatrix b = o.embed(n);
    CMatrix r(rows_, o.cols_, n);
    r.scale_ = scale_ * o.scale_;
    for (size_t i = 0; i < rows_; ++i)
        for (size_t k = 0; k < cols_; ++k)
            for (long s = 0; s < n; ++s) {
                long x = a.cell(i, k, s);
                if (x == 0) continue;
                for (size_t j = 0; j < o.cols_; ++j)
                    for (long t = 0; t < n; ++t) {
                        long y = b.cell(k, j, t);
                        if (y == 0) continue;
                        long& c = r.cell(i, j, (s + t) % n);
                        c = checked_add(c, checked_mul(x, y));
                    }
            }
    return r;
}

bool operator==(const CMatrix& a, const CMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    long n = lcm_l(a.order_, b.order_);
    CMatrix x = a.embed(n), y = b.embed(n);
    bool same_scale = a.scale_ == b.scale_;
    for (size_t i = 0; i < a.rows_; ++i)
        for (size_t j = 0; j < a.cols_; ++j) {
            if (same_scale) {
                std::vector<long> d(n);
                for (long k = 0; k < n; ++k) d[k] = x.cell(i, j, k) - y.cell(i, j, k);
                if (!Cyclotomic::from_group_ring(n, d).is_zero()) return false;
            } else if (x.at(i, j) != y.at(i, j)) {
                return false;
            }
        }
    return true;
}

size_t CMatrix::rank() const {
    std::vector<std::vector<Cyclotomic>> m(rows_, std::vector<Cyclotomic>(cols_));
    for (size_t i = 0; i < rows_; ++i)
        for (size_t j = 0; j < cols_; ++j) m[i][j] = at(i, j);
    size_t r = 0;
    for (size_t c = 0; c < cols_ && r < rows_; ++c) {
        size_t p = r;
        while (p < rows_ && m[p][c].is_zero()) ++p;
        if (p == rows_) continue;
        std::swap(m[p], m[r]);
        // invert the pivot via its norm: x^{-1} = prod of conjugates / norm is costly; use
        // cross-multiplication elimination instead, which keeps the row space.
        for (size_t i = r + 1; i < rows_; ++i) {
            if (m[i][c].is_zero()) continue;
            Cyclotomic f = m[i][c], g = m[r][c];
            for (size_t j = c; j < cols_; ++j) m[i][j] = m[i][j] * g - m[r][j] * f;
        }
        ++r;
    }
    return r;
}

// ---------------------------------------------------------------- generators

RepMatrix rho_T(const Fqm& a) {
    check_budget(a.size(), "Weil matrix");
    CMatrix m(a.size(), a.size(), a.den());
    for (size_t g = 0; g < a.size(); ++g) m.add_term(g, g, a.qn(g));
    return m;
}

RepMatrix rho_S(const Fqm& a, std::optional<int> sig_hint) {
    check_budget(a.size(), "Weil matrix");
    GaussSum gs = gauss_sum(a);
    CMatrix m(a.size(), a.size(), a.den());
    for (size_t g = 0; g < a.size(); ++g)
        for (size_t d = 0; d < a.size(); ++d) m.add_term(d, g, -a.bn(g, d));
    // e(-sig/8)/sqrt|A| = conj(g)/|A|
    Cyclotomic c = gs.value.conj() * qq(1, static_cast<long>(a.size()));
    if (sig_hint) c = c * e_of(qq(gs.sig_mod_8 - *sig_hint, 8));
    m.set_scale(c);
    return m;
}

RepMatrix parity_matrix(const Fqm& a) {
    CMatrix m(a.size(), a.size(), 1);
    for (size_t g = 0; g < a.size(); ++g) m.add_term(a.neg(g), g, 0);
    return m;
}

HermitianContext make_hermitian_context(const OLattice& m) {
    HermitianContext h;
    h.m = m;
    ZLattice tf = trace_form(m);
    h.disc = discriminant_group(tf);
    Inertia in = inertia(tf.gram());
    if (in.zero != 0) throw Error("DegenerateGram", "Hermitian Gram matrix is singular");
    h.b_plus = static_cast<long>(in.pos / 2);
    h.b_minus = static_cast<long>(in.neg / 2);
    return h;
}

RepMatrix rho_xi(const HermitianContext& h, const KElement& xi0) {
    long d = h.m.d();
    KElement xi(xi0.x(), xi0.y(), d);
    long k = root_index(xi);
    if (k < 0) throw Error("NotRootOfUnity", "xi is not a root of unity in O");
    long nroots = static_cast<long>(roots_of_unity(d).size());
    const Fqm& a = h.disc.fqm;
    QMat act = k_mult_matrix(xi.conj(), h.m.rank());
    CMatrix m(a.size(), a.size(), 1);
    for (size_t g = 0; g < a.size(); ++g) {
        QVec y = mul(act, h.disc.lift(g));
        size_t img;
        try {
            img = h.disc.project(y);
        } catch (const Error&) {
            throw Error("ActionUndefined", "xi does not preserve the dual lattice");
        }
        m.add_term(img, g, 0);
    }
    m.set_scale(root_as_cyclotomic(d, mod_l(k * (h.b_minus - h.b_plus), nroots)));
    return m;
}

// ---------------------------------------------------------------- words

GroupWord parse_word(const std::string& s) {
    GroupWord w;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::string t;
        for (char c : tok)
            if (!isspace(static_cast<unsigned char>(c))) t += c;
        if (t.empty()) continue;
        if (t == "T") w.push_back({Letter::T});
        else if (t == "T^-1" || t == "Ti") w.push_back({Letter::Tinv});
        else if (t == "S") w.push_back({Letter::S});
        else if (t.rfind("xi", 0) == 0 && t.size() > 2) {
            try {
                w.push_back({Letter::Xi, std::stol(t.substr(2))});
            } catch (const std::exception&) {
                throw Error("InvalidWord", "bad root index in " + t);
            }
        } else
            throw Error("InvalidWord", "unknown letter " + t);
    }
    return w;
}

std::string word_to_string(const GroupWord& w) {
    std::string out;
    for (const auto& l : w) {
        if (!out.empty()) out += ",";
        switch (l.kind) {
            case Letter::T: out += "T"; break;
            case Letter::Tinv: out += "T^-1"; break;
            case Letter::S: out += "S"; break;
            case Letter::Xi: out += "xi" + std::to_string(l.root); break;
        }
    }
    return out;
}

namespace {

template <class M>
M mul2(const M& a, const M& b) {
    M r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
    return r;
}

IntMat2 letter_sl2(const Letter& l) {
    switch (l.kind) {
        case Letter::T: return {{{1, 1}, {0, 1}}};
        case Letter::Tinv: return {{{1, -1}, {0, 1}}};
        case Letter::S: return {{{0, -1}, {1, 0}}};
        default: throw Error("InvalidWord", "xi letters need an O-lattice context");
    }
}

}  // namespace

IntMat2 eval_sl2(const GroupWord& w) {
    IntMat2 r{{{1, 0}, {0, 1}}};
    for (const auto& l : w) r = mul2(r, letter_sl2(l));
    return r;
}

KMat2 eval_u11(const GroupWord& w, long d) {
    KElement one(1, 0, d), zero(0, 0, d);
    KMat2 r{{{one, zero}, {zero, one}}};
    auto roots = roots_of_unity(d);
    for (const auto& l : w) {
        KMat2 m;
        if (l.kind == Letter::Xi) {
            if (l.root < 0 || l.root >= static_cast<long>(roots.size()))
                throw Error("NotRootOfUnity", "root index out of range");
            m = {{{roots[l.root], zero}, {zero, roots[l.root]}}};
        } else {
            IntMat2 z = letter_sl2(l);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) m[i][j] = KElement(Rational(z[i][j]), 0, d);
        }
        r = mul2(r, m);
    }
    return r;
}

GroupWord factor_sl2(const IntMat2& m) {
    Integer a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
    if (a * d - b * c != 1) throw Error("BadDeterminant", "matrix does not have determinant 1");
    GroupWord w;
    auto push_t = [&](const Integer& n) {
        Integer k = n;
        for (; k > 0; --k) w.push_back({Letter::T});
        for (; k < 0; ++k) w.push_back({Letter::Tinv});
    };
    while (c != 0) {
        Integer n;
        mpz_fdiv_q(n.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
        // left-multiply by T^{-n}, then by S^{-1}; the word records the inverses
        a -= n * c;
        b -= n * d;
        push_t(n);
        Integer na = c, nb = d, nc = -a, nd = -b;
        a = na;
        b = nb;
        c = nc;
        d = nd;
        w.push_back({Letter::S});
    }
    if (a == 1) {
        push_t(b);
    } else {
        // [[-1, b], [0, -1]] = S^2 T^{-b}
        w.push_back({Letter::S});
        w.push_back({Letter::S});
        push_t(-b);
    }
    return w;
}

U11Factor factor_u11(const KMat2& a0, long d) {
    KMat2 a;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            a[i][j] = KElement(a0[i][j].x(), a0[i][j].y(), d);
            if (!a[i][j].in_O()) throw Error("NotIntegral", "entries must lie in O");
        }
    KElement one(1, 0, d), zero(0, 0, d);
    KMat2 j{{{zero, -one}, {one, zero}}};
    KMat2 astar{{{a[0][0].conj(), a[1][0].conj()}, {a[0][1].conj(), a[1][1].conj()}}};
    KMat2 p = mul2(mul2(a, j), astar);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            if (p[r][c] != j[r][c]) throw Error("NotUnitary", "matrix is not in U(1,1)");
    auto roots = roots_of_unity(d);
    for (size_t k = 0; k < roots.size(); ++k) {
        KElement inv = roots[k].conj();
        IntMat2 b;
        bool ok = true;
        for (int r = 0; r < 2 && ok; ++r)
            for (int c = 0; c < 2 && ok; ++c) {
                KElement e = inv * a[r][c];
                if (e.y() != 0 || !is_integral(e.x())) ok = false;
                else b[r][c] = e.x().get_num();
            }
        if (ok && b[0][0] * b[1][1] - b[0][1] * b[1][0] == 1) return {roots[k], static_cast<long>(k), b};
    }
    throw Error("NotUnitary", "matrix is not a root of unity times an element of SL2(Z)");
}

RepMatrix rho_of(const GroupWord& w, const Fqm& a) {
    RepMatrix t = rho_T(a), s = rho_S(a);
    RepMatrix r = CMatrix::identity(a.size());
    RepMatrix ti;
    bool have_ti = false;
    for (const auto& l : w) {
        switch (l.kind) {
            case Letter::T: r = r * t; break;
            case Letter::S: r = r * s; break;
            case Letter::Tinv:
                if (!have_ti) {
                    ti = t.conj_transpose();
                    have_ti = true;
                }
                r = r * ti;
                break;
            case Letter::Xi: throw Error("InvalidWord", "xi letters need an O-lattice context");
        }
    }
    return r;
}

RepMatrix rho_of(const GroupWord& w, const HermitianContext& h) {
    const Fqm& a = h.disc.fqm;
    RepMatrix t = rho_T(a), s = rho_S(a);
    RepMatrix ti = t.conj_transpose();
    RepMatrix r = CMatrix::identity(a.size());
    auto roots = roots_of_unity(h.m.d());
    for (const auto& l : w) {
        switch (l.kind) {
            case Letter::T: r = r * t; break;
            case Letter::S: r = r * s; break;
            case Letter::Tinv: r = r * ti; break;
            case Letter::Xi:
                if (l.root < 0 || l.root >= static_cast<long>(roots.size()))
                    throw Error("NotRootOfUnity", "root index out of range");
                r = r * rho_xi(h, roots[l.root]);
                break;
        }
    }
    return r;
}

RepMatrix rho_of(const IntMat2& m, const Fqm& a) {
    if (gauss_sum(a).sig_mod_8 % 2 != 0)
        throw Error("MetaplecticAmbiguity", "odd signature: only words define matrices on the metaplectic cover");
    return rho_of(factor_sl2(m), a);
}

RepMatrix rho_of(const KMat2& m, const HermitianContext& h) {
    U11Factor f = factor_u11(m, h.m.d());
    return rho_xi(h, f.xi) * rho_of(factor_sl2(f.b), h);
}

// ---------------------------------------------------------------- arrows

Arrows arrows(const Fqm& a, const Subgroup& h) {
    if (!is_isotropic(a, h)) throw Error("NotIsotropic", "arrow operators need an isotropic subgroup");
    Arrows r;
    r.H = h;
    r.Hperp = perp(a, h);
    r.delta = quotient(a, r.Hperp, h);
    size_t n = r.delta.fqm.size();
    r.up = CMatrix(a.size(), n, 1);
    r.down = CMatrix(n, a.size(), 1);
    for (size_t x : r.Hperp.elements) {
        size_t y = static_cast<size_t>(r.delta.proj[x]);
        r.up.add_term(x, y, 0);
        r.down.add_term(y, x, 0);
    }
    return r;
}

CombinedArrow combined_arrow(const HorizontalData& h, const DeltaData& dd, const Subgroup& i_in_d) {
    if (!is_isotropic(h.D, i_in_d)) throw Error("NotIsotropic", "I must be isotropic");
    const Fqm& a = h.A;
    CombinedArrow c;
    c.I = h.embed_d(i_in_d);
    Subgroup iperp = perp(a, c.I);
    c.K = intersect(a, h.H, iperp);
    c.J = sum(a, c.I, c.K);
    c.Jperp = perp(a, c.J);
    c.B = dd.q;
    c.Bbar = quotient(a, c.Jperp, c.J);
    std::vector<char> seen(c.B.fqm.size() * c.Bbar.fqm.size(), 0);
    c.map = CMatrix(c.B.fqm.size(), c.Bbar.fqm.size(), 1);
    for (size_t x : iperp.elements) {
        if (!dd.Hperp.contains(x)) continue;
        size_t r = static_cast<size_t>(c.B.proj[x]);
        size_t col = static_cast<size_t>(c.Bbar.proj[x]);
        char& s = seen[r * c.Bbar.fqm.size() + col];
        if (!s) {
            s = 1;
            c.map.add_term(r, col, 0);
        }
    }
    return c;
}

CMatrix combined_arrow_composite(const HorizontalData& h, const CombinedArrow& c) {
    const Fqm& a = h.A;
    Subgroup kperp = perp(a, c.K);
    Quotient abar = quotient(a, kperp, c.K);
    auto image = [&](const Subgroup& s) {
        std::vector<size_t> g;
        for (size_t x : s.gens) g.push_back(static_cast<size_t>(abar.proj[x]));
        return subgroup_closure(abar.fqm, g);
    };
    Arrows lift_i = arrows(abar.fqm, image(c.I));
    Arrows proj_h = arrows(abar.fqm, image(h.H));
    CMatrix comp = proj_h.down * lift_i.up;
    // identify Bbar with the quotient by I-bar, and B with the quotient by H/K
    std::vector<size_t> phi(c.Bbar.fqm.size()), psi(c.B.fqm.size());
    for (size_t al = 0; al < phi.size(); ++al)
        phi[al] = static_cast<size_t>(lift_i.delta.proj[static_cast<size_t>(abar.proj[c.Bbar.section[al]])]);
    for (size_t be = 0; be < psi.size(); ++be)
        psi[be] = static_cast<size_t>(proj_h.delta.proj[static_cast<size_t>(abar.proj[c.B.section[be]])]);
    CMatrix out(c.B.fqm.size(), c.Bbar.fqm.size(), 1);
    for (size_t be = 0; be < psi.size(); ++be)
        for (size_t al = 0; al < phi.size(); ++al) {
            Cyclotomic v = comp.at(psi[be], phi[al]);
            if (v.is_zero()) continue;
            if (!v.is_rational() || !is_integral(v.coeff(0)))
                throw Error("InternalError", "arrow composite has a non-integral entry");
            out.add_term(be, al, 0, v.coeff(0).get_num().get_si());
        }
    return out;
}

}  // namespace jfk
