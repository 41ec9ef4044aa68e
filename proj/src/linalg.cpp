#include "jfk/linalg.hpp"

#include <algorithm>
#include <utility>

namespace jfk {

QMat q_identity(size_t n) {
    QMat m = q_zero(n, n);
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

QMat q_zero(size_t rows, size_t cols) { return QMat(rows, QVec(cols, Rational(0))); }

QMat transpose(const QMat& a) {
    if (a.empty()) return {};
    QMat t = q_zero(a[0].size(), a.size());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

QMat mul(const QMat& a, const QMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    QMat c = q_zero(n, m);
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

QVec mul(const QMat& a, const QVec& v) {
    QVec out(a.size(), Rational(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

Rational dot(const QVec& a, const QVec& b) {
    Rational s = 0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

Rational bilinear(const QMat& g, const QVec& a, const QVec& b) { return dot(a, mul(g, b)); }

QVec add(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

QVec sub(const QVec& a, const QVec& b) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

QVec scale(const Rational& s, const QVec& a) {
    QVec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

namespace {

// Row echelon form in place; returns pivot columns and determinant sign changes.
std::vector<size_t> echelon(QMat& a, Rational* det_out) {
    size_t rows = a.size(), cols = rows ? a[0].size() : 0;
    std::vector<size_t> pivots;
    Rational det = 1;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) {
            det = 0;
            continue;
        }
        if (p != r) {
            std::swap(a[p], a[r]);
            det = -det;
        }
        det *= a[r][c];
        for (size_t i = r + 1; i < rows; ++i) {
            if (a[i][c] == 0) continue;
            Rational f = a[i][c] / a[r][c];
            for (size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    if (r < rows) det = 0;
    if (det_out) *det_out = det;
    return pivots;
}

}  // namespace

Rational det(QMat a) {
    if (a.empty()) return 1;
    Rational d;
    echelon(a, &d);
    return d;
}

size_t rank(QMat a) { return echelon(a, nullptr).size(); }

QMat inverse(const QMat& a) {
    size_t n = a.size();
    QMat m = a;
    QMat inv = q_identity(n);
    for (size_t c = 0; c < n; ++c) {
        size_t p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) throw Error("DegenerateGram", "matrix is singular");
        std::swap(m[p], m[c]);
        std::swap(inv[p], inv[c]);
        Rational piv = m[c][c];
        for (size_t j = 0; j < n; ++j) {
            m[c][j] /= piv;
            inv[c][j] /= piv;
        }
        for (size_t i = 0; i < n; ++i) {
            if (i == c || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (size_t j = 0; j < n; ++j) {
                m[i][j] -= f * m[c][j];
                inv[i][j] -= f * inv[c][j];
            }
        }
    }
    return inv;
}

bool is_integral(const QMat& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (!is_integral(x)) return false;
    return true;
}

bool is_symmetric(const QMat& a) {
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != a.size()) return false;
        for (size_t j = 0; j < i; ++j)
            if (a[i][j] != a[j][i]) return false;
    }
    return true;
}

Inertia inertia(const QMat& a0) {
    // Symmetric Gaussian elimination; 2x2 pivots are avoided by the congruence
    // trick of adding a row/column with a nonzero off-diagonal entry.
    QMat a = a0;
    size_t n = a.size();
    Inertia out;
    std::vector<bool> done(n, false);
    for (size_t step = 0; step < n; ++step) {
        size_t p = n;
        for (size_t i = 0; i < n; ++i)
            if (!done[i] && a[i][i] != 0) {
                p = i;
                break;
            }
        if (p == n) {
            // all remaining diagonal entries vanish
            size_t r = n, s = n;
            for (size_t i = 0; i < n && r == n; ++i)
                for (size_t j = 0; j < n; ++j)
                    if (!done[i] && !done[j] && i != j && a[i][j] != 0) {
                        r = i;
                        s = j;
                        break;
                    }
            if (r == n) {
                for (size_t i = 0; i < n; ++i)
                    if (!done[i]) ++out.zero;
                return out;
            }
            // x_r <- x_r + x_s makes the (r,r) entry 2 a_rs != 0
            for (size_t j = 0; j < n; ++j) a[r][j] += a[s][j];
            for (size_t i = 0; i < n; ++i) a[i][r] += a[i][s];
            p = r;
        }
        Rational piv = a[p][p];
        if (piv > 0)
            ++out.pos;
        else
            ++out.neg;
        done[p] = true;
        for (size_t i = 0; i < n; ++i) {
            if (done[i] || a[i][p] == 0) continue;
            Rational f = a[i][p] / piv;
            for (size_t j = 0; j < n; ++j) a[i][j] -= f * a[p][j];
        }
        for (size_t j = 0; j < n; ++j)
            if (!done[j]) a[p][j] = 0;
        for (size_t i = 0; i < n; ++i)
            if (!done[i]) a[i][p] = 0;
    }
    return out;
}

bool is_positive_definite(const QMat& a) {
    Inertia in = inertia(a);
    return in.neg == 0 && in.zero == 0;
}

bool is_positive_semidefinite(const QMat& a) { return inertia(a).neg == 0; }

ZMat to_integer(const QMat& a) {
    ZMat z(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        z[i].resize(a[i].size());
        for (size_t j = 0; j < a[i].size(); ++j) {
            if (!is_integral(a[i][j])) throw Error("DomainError", "matrix entry is not integral");
            z[i][j] = a[i][j].get_num();
        }
    }
    return z;
}

QMat to_rational(const ZMat& a) {
    QMat q(a.size());
    for (size_t i = 0; i < a.size(); ++i) {
        q[i].resize(a[i].size());
        for (size_t j = 0; j < a[i].size(); ++j) q[i][j] = Rational(a[i][j]);
    }
    return q;
}

ZMat z_identity(size_t n) {
    ZMat m(n, ZVec(n, 0));
    for (size_t i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

ZMat mul(const ZMat& a, const ZMat& b) {
    size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    ZMat c(n, ZVec(m, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
        }
    return c;
}

ZVec mul(const ZMat& a, const ZVec& v) {
    ZVec out(a.size(), 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    return out;
}

ZMat transpose(const ZMat& a) {
    if (a.empty()) return {};
    ZMat t(a[0].size(), ZVec(a.size(), 0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    return t;
}

SmithForm smith_normal_form(const ZMat& a0) {
    ZMat a = a0;
    size_t m = a.size(), n = m ? a[0].size() : 0;
    SmithForm sf;
    sf.U = z_identity(m);
    sf.Uinv = z_identity(m);
    sf.V = z_identity(n);

    auto row_add = [&](size_t i, size_t t, const Integer& q) {  // row_i -= q row_t
        for (size_t j = 0; j < n; ++j) a[i][j] -= q * a[t][j];
        for (size_t j = 0; j < m; ++j) sf.U[i][j] -= q * sf.U[t][j];
        for (size_t j = 0; j < m; ++j) sf.Uinv[j][t] += q * sf.Uinv[j][i];
    };
    auto row_swap = [&](size_t i, size_t t) {
        if (i == t) return;
        std::swap(a[i], a[t]);
        std::swap(sf.U[i], sf.U[t]);
        for (size_t j = 0; j < m; ++j) std::swap(sf.Uinv[j][i], sf.Uinv[j][t]);
    };
    auto row_neg = [&](size_t i) {
        for (size_t j = 0; j < n; ++j) a[i][j] = -a[i][j];
        for (size_t j = 0; j < m; ++j) sf.U[i][j] = -sf.U[i][j];
        for (size_t j = 0; j < m; ++j) sf.Uinv[j][i] = -sf.Uinv[j][i];
    };
    auto col_add = [&](size_t j, size_t t, const Integer& q) {  // col_j -= q col_t
        for (size_t i = 0; i < m; ++i) a[i][j] -= q * a[i][t];
        for (size_t i = 0; i < n; ++i) sf.V[i][j] -= q * sf.V[i][t];
    };
    auto col_swap = [&](size_t j, size_t t) {
        if (j == t) return;
        for (size_t i = 0; i < m; ++i) std::swap(a[i][j], a[i][t]);
        for (size_t i = 0; i < n; ++i) std::swap(sf.V[i][j], sf.V[i][t]);
    };

    size_t lim = std::min(m, n);
    size_t t = 0;
    for (; t < lim; ++t) {
        for (;;) {
            // smallest nonzero entry in the trailing block
            size_t pi = m, pj = n;
            for (size_t i = t; i < m; ++i)
                for (size_t j = t; j < n; ++j)
                    if (a[i][j] != 0 && (pi == m || abs(a[i][j]) < abs(a[pi][pj]))) {
                        pi = i;
                        pj = j;
                    }
            if (pi == m) goto finished;
            row_swap(t, pi);
            col_swap(t, pj);
            bool clean = true;
            for (size_t i = t + 1; i < m; ++i) {
                if (a[i][t] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a[i][t].get_mpz_t(), a[t][t].get_mpz_t());
                row_add(i, t, q);
                if (a[i][t] != 0) clean = false;
            }
            for (size_t j = t + 1; j < n; ++j) {
                if (a[t][j] == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a[t][j].get_mpz_t(), a[t][t].get_mpz_t());
                col_add(j, t, q);
                if (a[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility of the remaining block
            size_t bad = m;
            for (size_t i = t + 1; i < m && bad == m; ++i)
                for (size_t j = t + 1; j < n; ++j)
                    if (a[i][j] % a[t][t] != 0) {
                        bad = i;
                        break;
                    }
            if (bad == m) break;
            row_add(t, bad, Integer(-1));
        }
        if (a[t][t] < 0) row_neg(t);
    }
finished:
    sf.rank = t;
    sf.diag.assign(lim, 0);
    for (size_t i = 0; i < lim; ++i) sf.diag[i] = a[i][i];
    return sf;
}

ZMat integer_kernel(const ZMat& a, size_t cols) {
    if (a.empty()) return z_identity(cols);
    SmithForm sf = smith_normal_form(a);
    ZMat out(cols, ZVec());
    for (size_t j = sf.rank; j < cols; ++j)
        for (size_t i = 0; i < cols; ++i) out[i].push_back(sf.V[i][j]);
    return out;
}

ZMat lattice_basis(const ZMat& gens) {
    // gens: n x m with full row rank n. U G V = [D | 0] so G V = Uinv [D | 0].
    SmithForm sf = smith_normal_form(gens);
    size_t n = gens.size();
    if (sf.rank != n) throw Error("DomainError", "generators do not span a full-rank lattice");
    ZMat basis(n, ZVec(n, 0));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) basis[i][j] = sf.Uinv[i][j] * sf.diag[j];
    return basis;
}

QVec solve(const QMat& a, const QVec& b) { return mul(inverse(a), b); }

QMat rational_kernel(const QMat& a, size_t cols) {
    QMat m = a;
    size_t rows = m.size();
    std::vector<size_t> pivcol;
    size_t r = 0;
    for (size_t c = 0; c < cols && r < rows; ++c) {
        size_t p = r;
        while (p < rows && m[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        Rational piv = m[r][c];
        for (size_t j = 0; j < cols; ++j) m[r][j] /= piv;
        for (size_t i = 0; i < rows; ++i) {
            if (i == r || m[i][c] == 0) continue;
            Rational f = m[i][c];
            for (size_t j = 0; j < cols; ++j) m[i][j] -= f * m[r][j];
        }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<bool> is_piv(cols, false);
    for (size_t c : pivcol) is_piv[c] = true;
    QMat basis(cols, QVec());
    for (size_t f = 0; f < cols; ++f) {
        if (is_piv[f]) continue;
        QVec v(cols, Rational(0));
        v[f] = 1;
        for (size_t k = 0; k < pivcol.size(); ++k) v[pivcol[k]] = -m[k][f];
        for (size_t i = 0; i < cols; ++i) basis[i].push_back(v[i]);
    }
    return basis;
}

}  // namespace jfk
