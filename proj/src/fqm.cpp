#include "jfk/fqm.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace jfk {

size_t group_budget() {
    static const size_t budget = [] {
        const char* env = std::getenv("JFK_MAX_GROUP");
        if (env == nullptr || *env == '\0') return static_cast<size_t>(65536);
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || v == 0) return static_cast<size_t>(65536);
        return static_cast<size_t>(v);
    }();
    return budget;
}

void check_budget(size_t n, const char* what) {
    if (n > group_budget())
        throw Error("BudgetExceeded", std::string(what) + " of order " + std::to_string(n) +
                                          " exceeds the enumeration budget " + std::to_string(group_budget()));
}

// ---------------------------------------------------------------- Fqm

Fqm::Fqm() { build_tables(); }

Fqm::Fqm(std::vector<long> orders, std::vector<Rational> qvals, QMat gram, bool require_nondegenerate)
    : orders_(std::move(orders)), qvals_(std::move(qvals)), gram_(std::move(gram)) {
    size_t k = orders_.size();
    if (qvals_.size() != k || gram_.size() != k) throw Error("InvalidFqm", "orders, qvals and gram sizes differ");
    for (const auto& row : gram_)
        if (row.size() != k) throw Error("InvalidFqm", "gram must be square");
    for (long n : orders_)
        if (n < 1) throw Error("InvalidFqm", "generator orders must be positive");
    for (size_t i = 0; i < k; ++i) {
        qvals_[i] = frac(qvals_[i]);
        for (size_t j = 0; j < k; ++j) gram_[i][j] = frac(gram_[i][j]);
    }
    for (size_t i = 0; i < k; ++i) {
        for (size_t j = 0; j < k; ++j) {
            if (gram_[i][j] != gram_[j][i]) throw Error("InvalidFqm", "gram is not symmetric mod 1");
            if (!is_integral(gram_[i][j] * orders_[i]))
                throw Error("InvalidFqm", "pairing is not well defined on the generator orders");
        }
        if (frac(2 * qvals_[i]) != gram_[i][i]) throw Error("InvalidFqm", "gram diagonal must equal 2 q mod 1");
        Rational nn = Rational(orders_[i]) * orders_[i];
        if (!is_integral(nn * qvals_[i])) throw Error("InvalidFqm", "q is not well defined on the generator orders");
    }
    build_tables();
    if (require_nondegenerate && !is_nondegenerate()) throw Error("DegenerateForm", "bilinear form is degenerate");
}

void Fqm::build_tables() {
    size_t k = orders_.size();
    size_ = 1;
    for (long n : orders_) {
        size_ *= static_cast<size_t>(n);
        if (size_ > (static_cast<size_t>(1) << 40)) throw Error("BudgetExceeded", "group too large");
    }
    stride_.assign(k, 1);
    for (size_t i = k; i-- > 1;) stride_[i - 1] = stride_[i] * static_cast<size_t>(orders_[i]);
    Integer den = 1;
    for (size_t i = 0; i < k; ++i) {
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), qvals_[i].get_den_mpz_t());
        for (size_t j = 0; j < k; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), gram_[i][j].get_den_mpz_t());
    }
    if (!den.fits_slong_p() || den > 1000000000) throw Error("BudgetExceeded", "denominators too large");
    den_ = den.get_si();
    qnum_.assign(k, 0);
    bnum_.assign(k, std::vector<long>(k, 0));
    for (size_t i = 0; i < k; ++i) {
        qnum_[i] = Rational(qvals_[i] * den_).get_num().get_si();
        for (size_t j = 0; j < k; ++j) bnum_[i][j] = Rational(gram_[i][j] * den_).get_num().get_si();
    }
    qtable_.clear();
    if (size_ <= group_budget()) {
        qtable_.resize(size_);
        for (size_t idx = 0; idx < size_; ++idx) qtable_[idx] = qn_elt(elt(idx));
    }
}

Elt Fqm::elt(size_t idx) const {
    Elt x(orders_.size());
    for (size_t i = orders_.size(); i-- > 0;) {
        x[i] = static_cast<long>(idx % static_cast<size_t>(orders_[i]));
        idx /= static_cast<size_t>(orders_[i]);
    }
    return x;
}

Elt Fqm::reduce(Elt x) const {
    if (x.size() != orders_.size()) throw Error("InvalidElement", "element has the wrong number of components");
    for (size_t i = 0; i < x.size(); ++i) x[i] = mod_l(x[i], orders_[i]);
    return x;
}

size_t Fqm::index(const Elt& x0) const {
    Elt x = reduce(x0);
    size_t idx = 0;
    for (size_t i = 0; i < x.size(); ++i) idx += static_cast<size_t>(x[i]) * stride_[i];
    return idx;
}

Elt Fqm::add(const Elt& a, const Elt& b) const {
    Elt r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod_l(a[i] + b[i], orders_[i]);
    return r;
}

Elt Fqm::sub(const Elt& a, const Elt& b) const {
    Elt r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod_l(a[i] - b[i], orders_[i]);
    return r;
}

Elt Fqm::neg(const Elt& a) const {
    Elt r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod_l(-a[i], orders_[i]);
    return r;
}

Elt Fqm::mul(long k, const Elt& a) const {
    Elt r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = mod_l(k * a[i], orders_[i]);
    return r;
}

size_t Fqm::add(size_t a, size_t b) const {
    size_t out = 0;
    for (size_t i = orders_.size(); i-- > 0;) {
        size_t n = static_cast<size_t>(orders_[i]);
        size_t s = (a % n + b % n) % n;
        out += s * stride_[i];
        a /= n;
        b /= n;
    }
    return out;
}

size_t Fqm::neg(size_t a) const {
    size_t out = 0;
    for (size_t i = orders_.size(); i-- > 0;) {
        size_t n = static_cast<size_t>(orders_[i]);
        size_t s = (n - a % n) % n;
        out += s * stride_[i];
        a /= n;
    }
    return out;
}

size_t Fqm::sub(size_t a, size_t b) const { return add(a, neg(b)); }

long Fqm::qn_elt(const Elt& x) const {
    long s = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        s = mod_l(s + mod_l(x[i] * x[i] % den_ * qnum_[i], den_), den_);
        for (size_t j = i + 1; j < x.size(); ++j) {
            if (x[j] == 0 || bnum_[i][j] == 0) continue;
            s = mod_l(s + mod_l(x[i] * x[j] % den_ * bnum_[i][j], den_), den_);
        }
    }
    return s;
}

long Fqm::bn_elt(const Elt& x, const Elt& y) const {
    long s = 0;
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i] == 0) continue;
        for (size_t j = 0; j < y.size(); ++j) {
            if (y[j] == 0 || bnum_[i][j] == 0) continue;
            s = mod_l(s + mod_l(x[i] * y[j] % den_ * bnum_[i][j], den_), den_);
        }
    }
    return s;
}

long Fqm::qn(size_t idx) const { return qtable_.empty() ? qn_elt(elt(idx)) : qtable_[idx]; }
long Fqm::bn(size_t i, size_t j) const { return bn_elt(elt(i), elt(j)); }

Rational Fqm::q(const Elt& x) const { return qq(qn_elt(reduce(x)), den_); }
Rational Fqm::b(const Elt& x, const Elt& y) const { return qq(bn_elt(reduce(x), reduce(y)), den_); }

long Fqm::level() const {
    check_budget(size_, "level computation");
    long g = den_;
    for (size_t idx = 0; idx < size_; ++idx) g = gcd_l(g, qn(idx));
    return den_ / g;
}

long Fqm::order_of(size_t idx) const {
    Elt x = elt(idx);
    long o = 1;
    for (size_t i = 0; i < x.size(); ++i) o = lcm_l(o, orders_[i] / gcd_l(orders_[i], x[i]));
    return o;
}

bool Fqm::is_nondegenerate() const {
    check_budget(size_, "non-degeneracy check");
    size_t k = orders_.size();
    for (size_t idx = 1; idx < size_; ++idx) {
        Elt x = elt(idx);
        bool ok = false;
        for (size_t j = 0; j < k && !ok; ++j) {
            long s = 0;
            for (size_t i = 0; i < k; ++i) s = mod_l(s + x[i] * bnum_[i][j], den_);
            if (s != 0) ok = true;
        }
        if (!ok) return false;
    }
    return true;
}

Fqm Fqm::negated() const {
    std::vector<Rational> q(qvals_.size());
    for (size_t i = 0; i < q.size(); ++i) q[i] = -qvals_[i];
    QMat g = gram_;
    for (auto& row : g)
        for (auto& x : row) x = -x;
    return Fqm(orders_, q, g, false);
}

std::string Fqm::str() const {
    std::ostringstream os;
    os << "Fqm(orders=[";
    for (size_t i = 0; i < orders_.size(); ++i) os << (i ? "," : "") << orders_[i];
    os << "], q=[";
    for (size_t i = 0; i < qvals_.size(); ++i) os << (i ? "," : "") << to_string(qvals_[i]);
    os << "])";
    return os.str();
}

// ---------------------------------------------------------------- subgroups

Subgroup trivial_subgroup(const Fqm& a) {
    Subgroup s;
    s.elements = {0};
    s.member.assign(a.size(), 0);
    s.member[0] = 1;
    return s;
}

Subgroup whole_group(const Fqm& a) {
    check_budget(a.size(), "group");
    Subgroup s;
    s.elements.resize(a.size());
    for (size_t i = 0; i < a.size(); ++i) s.elements[i] = i;
    s.member.assign(a.size(), 1);
    for (size_t i = 0; i < a.rank(); ++i) {
        Elt e(a.rank(), 0);
        e[i] = 1;
        if (a.orders()[i] > 1) s.gens.push_back(a.index(e));
    }
    return s;
}

Subgroup subgroup_closure(const Fqm& a, const std::vector<size_t>& gens) {
    check_budget(a.size(), "subgroup closure");
    Subgroup s = trivial_subgroup(a);
    for (size_t g : gens) {
        if (g >= a.size()) throw Error("InvalidElement", "generator out of range");
        if (s.member[g]) continue;
        s.gens.push_back(g);
        std::vector<size_t> base = s.elements;
        size_t shift = g;
        while (!s.member[shift]) {
            for (size_t x : base) {
                size_t t = a.add(x, shift);
                s.member[t] = 1;
                s.elements.push_back(t);
            }
            shift = a.add(shift, g);
        }
    }
    std::sort(s.elements.begin(), s.elements.end());
    return s;
}

Subgroup subgroup_closure(const Fqm& a, const std::vector<Elt>& gens) {
    std::vector<size_t> idx;
    for (const auto& g : gens) idx.push_back(a.index(g));
    return subgroup_closure(a, idx);
}

Subgroup subgroup_from_elements(const Fqm& a, std::vector<size_t> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    Subgroup s = trivial_subgroup(a);
    // greedy generating set
    for (size_t x : elems) {
        if (s.member[x]) continue;
        std::vector<size_t> g = s.gens;
        g.push_back(x);
        s = subgroup_closure(a, g);
    }
    if (s.elements != elems) throw Error("NotSubgroup", "element set is not a subgroup");
    return s;
}

Subgroup perp(const Fqm& a, const Subgroup& h) {
    check_budget(a.size(), "perpendicular subgroup");
    const std::vector<size_t>& test = h.gens;
    std::vector<Elt> tv;
    for (size_t g : test) tv.push_back(a.elt(g));
    std::vector<size_t> out;
    for (size_t x = 0; x < a.size(); ++x) {
        bool ok = true;
        for (size_t g : test)
            if (a.bn(x, g) != 0) {
                ok = false;
                break;
            }
        if (ok) out.push_back(x);
    }
    return subgroup_from_elements(a, out);
}

Subgroup intersect(const Fqm& a, const Subgroup& x, const Subgroup& y) {
    std::vector<size_t> out;
    for (size_t e : x.elements)
        if (y.member[e]) out.push_back(e);
    return subgroup_from_elements(a, out);
}

Subgroup sum(const Fqm& a, const Subgroup& x, const Subgroup& y) {
    std::vector<size_t> g = x.gens;
    g.insert(g.end(), y.gens.begin(), y.gens.end());
    return subgroup_closure(a, g);
}

bool is_subset(const Subgroup& x, const Subgroup& y) {
    for (size_t e : x.elements)
        if (!y.member[e]) return false;
    return true;
}

bool is_isotropic(const Fqm& a, const Subgroup& h) {
    for (size_t e : h.elements)
        if (a.qn(e) != 0) return false;
    return true;
}

std::pair<size_t, size_t> pairing_quotients(const Fqm& a, const Subgroup& h, const Subgroup& i) {
    return {h.size() / intersect(a, h, perp(a, i)).size(), i.size() / intersect(a, i, perp(a, h)).size()};
}

namespace {

std::vector<Subgroup> enumerate_subgroups(const Fqm& a, bool isotropic_only) {
    check_budget(a.size(), "subgroup enumeration");
    std::vector<Subgroup> out;
    std::set<std::vector<size_t>> seen;
    std::vector<size_t> candidates;
    for (size_t x = 1; x < a.size(); ++x)
        if (!isotropic_only || a.qn(x) == 0) candidates.push_back(x);
    Subgroup triv = trivial_subgroup(a);
    seen.insert(triv.elements);
    out.push_back(triv);
    for (size_t pos = 0; pos < out.size(); ++pos) {
        for (size_t g : candidates) {
            const Subgroup& s = out[pos];
            if (s.member[g]) continue;
            if (isotropic_only) {
                bool orth = true;
                for (size_t h : s.gens)
                    if (a.bn(g, h) != 0) {
                        orth = false;
                        break;
                    }
                if (!orth) continue;
            }
            std::vector<size_t> gens = s.gens;
            gens.push_back(g);
            Subgroup t = subgroup_closure(a, gens);
            if (seen.insert(t.elements).second) out.push_back(std::move(t));
        }
    }
    return out;
}

}  // namespace

std::vector<Subgroup> all_subgroups(const Fqm& a) { return enumerate_subgroups(a, false); }
std::vector<Subgroup> isotropic_subgroups(const Fqm& a) { return enumerate_subgroups(a, true); }

CosetReps coset_reps(const Fqm& a, const Subgroup& s) {
    check_budget(a.size(), "coset representatives");
    CosetReps c;
    const size_t unset = static_cast<size_t>(-1);
    c.rep_of.assign(a.size(), unset);
    for (size_t x = 0; x < a.size(); ++x) {
        if (c.rep_of[x] != unset) continue;
        c.reps.push_back(x);
        for (size_t h : s.elements) c.rep_of[a.add(x, h)] = x;
    }
    return c;
}

// ---------------------------------------------------------------- quotients

namespace {

ZMat generator_lattice(const Fqm& a, const Subgroup& s) {
    // columns: lifts of the generators and the relations n_i e_i
    size_t k = a.rank();
    ZMat m(k, ZVec());
    for (size_t g : s.gens) {
        Elt x = a.elt(g);
        for (size_t i = 0; i < k; ++i) m[i].push_back(x[i]);
    }
    for (size_t j = 0; j < k; ++j)
        for (size_t i = 0; i < k; ++i) m[i].push_back(i == j ? a.orders()[i] : 0);
    return m;
}

}  // namespace

Quotient quotient(const Fqm& a, const Subgroup& p, const Subgroup& k, bool require_nondegenerate) {
    check_budget(a.size(), "quotient");
    if (!is_subset(k, p)) throw Error("NotSubgroup", "quotient requires K inside P");
    if (!is_isotropic(a, k)) throw Error("NotIsotropic", "quotient requires an isotropic K");
    for (size_t x : p.gens)
        for (size_t y : k.gens)
            if (a.bn(x, y) != 0) throw Error("NotIsotropic", "quotient requires P inside K-perp");
    size_t r = a.rank();
    Quotient out;
    if (r == 0) {
        out.fqm = Fqm();
        out.proj = {0};
        out.section = {0};
        return out;
    }
    ZMat bp = lattice_basis(generator_lattice(a, p));
    QMat bpinv = inverse(to_rational(bp));
    ZMat kg = generator_lattice(a, k);
    ZMat c = to_integer(mul(bpinv, to_rational(kg)));
    SmithForm sf = smith_normal_form(c);
    std::vector<size_t> keep;
    std::vector<long> orders;
    for (size_t i = 0; i < r; ++i) {
        if (sf.diag[i] == 0) throw Error("InternalError", "quotient of finite groups is infinite");
        if (sf.diag[i] != 1) {
            keep.push_back(i);
            orders.push_back(sf.diag[i].get_si());
        }
    }
    // generator lifts: bp * Uinv e_j
    ZMat lift = mul(bp, sf.Uinv);
    for (size_t j : keep) {
        Elt x(r);
        for (size_t i = 0; i < r; ++i) x[i] = mod_l(Integer(lift[i][j] % a.orders()[i]).get_si(), a.orders()[i]);
        out.gen_lifts.push_back(x);
    }
    size_t n = keep.size();
    std::vector<Rational> qv(n);
    QMat gram = q_zero(n, n);
    for (size_t i = 0; i < n; ++i) {
        qv[i] = a.q(out.gen_lifts[i]);
        for (size_t j = 0; j < n; ++j) gram[i][j] = a.b(out.gen_lifts[i], out.gen_lifts[j]);
    }
    out.fqm = Fqm(orders, qv, gram, require_nondegenerate);
    // projection: w = bp^{-1} x, coordinates (U w)_j mod d_j
    QMat proj_mat = mul(to_rational(sf.U), bpinv);
    out.proj.assign(a.size(), -1);
    out.section.assign(out.fqm.size(), static_cast<size_t>(-1));
    for (size_t x : p.elements) {
        Elt e = a.elt(x);
        QVec v(r);
        for (size_t i = 0; i < r; ++i) v[i] = e[i];
        QVec y = mul(proj_mat, v);
        Elt qe(n);
        for (size_t j = 0; j < n; ++j) {
            if (!is_integral(y[keep[j]])) throw Error("InternalError", "projection is not integral");
            Integer t = y[keep[j]].get_num() % orders[j];
            qe[j] = mod_l(t.get_si(), orders[j]);
        }
        size_t qi = out.fqm.index(qe);
        out.proj[x] = static_cast<long>(qi);
        if (out.section[qi] == static_cast<size_t>(-1)) out.section[qi] = x;
    }
    for (size_t s : out.section)
        if (s == static_cast<size_t>(-1)) throw Error("InternalError", "quotient projection is not surjective");
    return out;
}

Fqm direct_sum(const Fqm& a, const Fqm& b) {
    std::vector<long> orders = a.orders();
    orders.insert(orders.end(), b.orders().begin(), b.orders().end());
    std::vector<Rational> q = a.qvals();
    q.insert(q.end(), b.qvals().begin(), b.qvals().end());
    size_t ka = a.rank(), kb = b.rank();
    QMat g = q_zero(ka + kb, ka + kb);
    for (size_t i = 0; i < ka; ++i)
        for (size_t j = 0; j < ka; ++j) g[i][j] = a.gram()[i][j];
    for (size_t i = 0; i < kb; ++i)
        for (size_t j = 0; j < kb; ++j) g[ka + i][ka + j] = b.gram()[i][j];
    return Fqm(orders, q, g, false);
}

// ---------------------------------------------------------------- Gauss sums

GaussSum gauss_sum(const Fqm& a) {
    check_budget(a.size(), "Gauss sum");
    long den = a.den();
    std::vector<long> count(den, 0);
    for (size_t x = 0; x < a.size(); ++x) ++count[a.qn(x)];
    long order = lcm_l(den, 8);
    Cyclotomic g(Rational(0), order);
    for (long k = 0; k < den; ++k)
        if (count[k] != 0) g += Cyclotomic::zeta(den, k) * Rational(count[k]);
    g = g.embed(lcm_l(g.order(), 8) / g.order() * g.order());
    if (g * g.conj() != Cyclotomic(Rational(static_cast<long>(a.size()))))
        throw Error("DegenerateForm", "|Gauss sum|^2 differs from the group order");
    for (int s = 0; s < 8; ++s) {
        Cyclotomic c = g * e_of(qq(-s, 8));
        if (c != c.conj()) continue;
        if (c.approx().first > 0) return {g, s};
    }
    throw Error("InternalError", "Gauss sum has no eighth-root phase");
}

// ---------------------------------------------------------------- isomorphisms

std::optional<std::vector<size_t>> find_isomorphism(const Fqm& a, const Fqm& b,
                                                    const std::vector<std::pair<size_t, size_t>>& fixed) {
    if (a.size() != b.size()) return std::nullopt;
    check_budget(a.size(), "isomorphism search");
    std::vector<size_t> gens;
    std::vector<long> gord;
    for (size_t i = 0; i < a.rank(); ++i) {
        if (a.orders()[i] == 1) continue;
        Elt e(a.rank(), 0);
        e[i] = 1;
        gens.push_back(a.index(e));
        gord.push_back(a.orders()[i]);
    }
    std::vector<Rational> qb(b.size());
    std::vector<long> ordb(b.size());
    for (size_t y = 0; y < b.size(); ++y) {
        qb[y] = qq(b.qn(y), b.den());
        ordb[y] = b.order_of(y);
    }
    std::vector<std::vector<size_t>> cand(gens.size());
    for (size_t i = 0; i < gens.size(); ++i) {
        Rational qa = qq(a.qn(gens[i]), a.den());
        for (size_t y = 0; y < b.size(); ++y)
            if (ordb[y] == gord[i] && qb[y] == qa) cand[i].push_back(y);
        if (cand[i].empty()) return std::nullopt;
    }
    std::vector<size_t> img(gens.size());
    std::vector<size_t> table;
    std::function<bool(size_t)> rec = [&](size_t i) -> bool {
        if (i == gens.size()) {
            table.assign(a.size(), 0);
            std::vector<char> hit(b.size(), 0);
            for (size_t x = 0; x < a.size(); ++x) {
                Elt e = a.elt(x);
                size_t y = 0;
                size_t gi = 0;
                for (size_t c = 0; c < a.rank(); ++c) {
                    if (a.orders()[c] == 1) continue;
                    for (long t = 0; t < e[c]; ++t) y = b.add(y, img[gi]);
                    ++gi;
                }
                if (hit[y]) return false;
                hit[y] = 1;
                table[x] = y;
            }
            for (const auto& [s, t] : fixed)
                if (table[s] != t) return false;
            return true;
        }
        for (size_t y : cand[i]) {
            bool ok = true;
            for (size_t j = 0; j < i && ok; ++j)
                if (qq(b.bn(y, img[j]), b.den()) != qq(a.bn(gens[i], gens[j]), a.den())) ok = false;
            if (!ok) continue;
            img[i] = y;
            if (rec(i + 1)) return true;
        }
        return false;
    };
    if (rec(0)) return table;
    return std::nullopt;
}

namespace {

std::vector<Fqm> atoms(long max_order) {
    std::vector<Fqm> out;
    auto dedupe_push = [&](std::vector<Fqm>& bucket, Fqm f) {
        for (const auto& g : bucket)
            if (find_isomorphism(f, g)) return;
        bucket.push_back(std::move(f));
    };
    for (long p = 2; p <= max_order; ++p) {
        bool prime = true;
        for (long t = 2; t * t <= p; ++t)
            if (p % t == 0) prime = false;
        if (!prime) continue;
        for (long n = p; n <= max_order; n *= p) {
            std::vector<Fqm> bucket;
            if (p == 2) {
                for (long a = 1; a < 2 * n; a += 2) {
                    Rational q = qq(a, 2 * n);
                    dedupe_push(bucket, Fqm({n}, {q}, {{frac(2 * q)}}));
                }
                if (n * n <= max_order) {
                    Rational off = qq(1, n);
                    dedupe_push(bucket, Fqm({n, n}, {0, 0}, {{0, off}, {off, 0}}));
                    dedupe_push(bucket, Fqm({n, n}, {off, off}, {{frac(2 * off), off}, {off, frac(2 * off)}}));
                }
            } else {
                for (long t = 1; t < n; ++t) {
                    if (t % p == 0) continue;
                    Rational q = qq(t, n);
                    dedupe_push(bucket, Fqm({n}, {q}, {{frac(2 * q)}}));
                }
            }
            for (auto& f : bucket) out.push_back(std::move(f));
        }
    }
    return out;
}

std::vector<std::pair<long, Rational>> fingerprint(const Fqm& f) {
    std::vector<std::pair<long, Rational>> fp;
    for (size_t x = 0; x < f.size(); ++x) fp.emplace_back(f.order_of(x), qq(f.qn(x), f.den()));
    std::sort(fp.begin(), fp.end());
    return fp;
}

}  // namespace

std::vector<Fqm> enumerate_fqms(long max_order) {
    std::vector<Fqm> at = atoms(max_order);
    std::vector<Fqm> result;
    std::map<std::vector<std::pair<long, Rational>>, std::vector<size_t>> buckets;
    std::function<void(size_t, const Fqm&)> rec = [&](size_t start, const Fqm& cur) {
        auto fp = fingerprint(cur);
        auto& bucket = buckets[fp];
        bool dup = false;
        for (size_t idx : bucket)
            if (find_isomorphism(cur, result[idx])) {
                dup = true;
                break;
            }
        if (!dup) {
            bucket.push_back(result.size());
            result.push_back(cur);
        }
        for (size_t i = start; i < at.size(); ++i) {
            if (static_cast<long>(cur.size() * at[i].size()) > max_order) continue;
            rec(i, direct_sum(cur, at[i]));
        }
    };
    rec(0, Fqm());
    return result;
}

// ---------------------------------------------------------------- horizontal subgroups

Subgroup HorizontalData::embed_d(const Subgroup& s) const {
    std::vector<size_t> g;
    for (size_t x : s.gens) g.push_back(join(0, x));
    return subgroup_closure(A, g);
}

Subgroup HorizontalData::embed_m(const Subgroup& s) const {
    std::vector<size_t> g;
    for (size_t x : s.gens) g.push_back(join(x, 0));
    return subgroup_closure(A, g);
}

HorizontalData horizontal_from_subgroup(const Fqm& dm, const Fqm& d, const Subgroup& h) {
    HorizontalData hd;
    hd.DM = dm;
    hd.D = d;
    hd.A = direct_sum(dm, d);
    if (h.member.size() != hd.A.size()) throw Error("InvalidSubgroup", "subgroup does not live in D_M + D");
    hd.H = h;
    hd.iota.assign(dm.size(), -1);
    std::vector<size_t> hm, hdd;
    for (size_t x : h.elements) {
        size_t m = hd.part_m(x), e = hd.part_d(x);
        if (m == 0 && e != 0) throw Error("NotHomomorphism", "iota is not well defined (H meets D)");
        if (e == 0 && m != 0) throw Error("NotInjective", "iota is not injective (H meets D_M)");
        hd.iota[m] = static_cast<long>(e);
        hm.push_back(m);
        hdd.push_back(e);
    }
    hd.HM = subgroup_from_elements(dm, hm);
    hd.HD = subgroup_from_elements(d, hdd);
    for (size_t m : hd.HM.elements)
        if (frac(dm.q(m) + d.q(static_cast<size_t>(hd.iota[m]))) != 0)
            throw Error("NotIsotropic", "q(iota(x)) differs from -q(x)");
    if (!is_isotropic(hd.A, hd.H)) throw Error("InternalError", "horizontal isotropy criterion disagrees");
    return hd;
}

HorizontalData make_horizontal(const Fqm& dm, const Fqm& d, const std::vector<Elt>& hm_gens,
                               const std::vector<Elt>& iota_images) {
    if (hm_gens.size() != iota_images.size()) throw Error("InvalidInput", "one iota image per generator required");
    Fqm a = direct_sum(dm, d);
    std::vector<size_t> g;
    for (size_t i = 0; i < hm_gens.size(); ++i) g.push_back(dm.index(hm_gens[i]) * d.size() + d.index(iota_images[i]));
    return horizontal_from_subgroup(dm, d, subgroup_closure(a, g));
}

std::vector<HorizontalData> horizontal_isotropic_subgroups(const Fqm& dm, const Fqm& d) {
    Fqm a = direct_sum(dm, d);
    std::vector<HorizontalData> out;
    for (const auto& h : isotropic_subgroups(a)) {
        bool horizontal = true;
        for (size_t x : h.elements) {
            size_t m = x / d.size(), e = x % d.size();
            if ((m == 0) != (e == 0)) {
                horizontal = false;
                break;
            }
        }
        if (horizontal) out.push_back(horizontal_from_subgroup(dm, d, h));
    }
    return out;
}

DeltaData quotient_delta(const HorizontalData& h, const std::vector<size_t>* reps) {
    DeltaData dd;
    dd.Hperp = perp(h.A, h.H);
    dd.q = quotient(h.A, dd.Hperp, h.H, true);
    CosetReps def = coset_reps(h.DM, h.HM);
    if (reps == nullptr) {
        dd.R = def.reps;
        dd.rep_of = def.rep_of;
    } else {
        dd.R = *reps;
        std::sort(dd.R.begin(), dd.R.end());
        if (dd.R.size() != def.reps.size()) throw Error("BadRepresentatives", "wrong number of representatives");
        std::vector<size_t> by_coset(h.DM.size(), static_cast<size_t>(-1));
        for (size_t r : dd.R) {
            if (r >= h.DM.size()) throw Error("BadRepresentatives", "representative out of range");
            size_t c = def.rep_of[r];
            if (by_coset[c] != static_cast<size_t>(-1)) throw Error("BadRepresentatives", "two representatives share a coset");
            by_coset[c] = r;
        }
        dd.rep_of.assign(h.DM.size(), 0);
        for (size_t x = 0; x < h.DM.size(); ++x) dd.rep_of[x] = by_coset[def.rep_of[x]];
    }
    std::vector<char> in_r(h.DM.size(), 0);
    for (size_t r : dd.R) in_r[r] = 1;
    std::vector<size_t> sec(dd.q.fqm.size(), static_cast<size_t>(-1));
    for (size_t beta : dd.Hperp.elements) {
        if (!in_r[h.part_m(beta)]) continue;
        size_t qi = static_cast<size_t>(dd.q.proj[beta]);
        if (sec[qi] != static_cast<size_t>(-1)) throw Error("InternalError", "H-perp_R is not injective on Delta_H");
        sec[qi] = beta;
    }
    for (size_t s : sec)
        if (s == static_cast<size_t>(-1)) throw Error("InternalError", "H-perp_R is not surjective on Delta_H");
    dd.q.section = sec;
    return dd;
}

std::pair<size_t, size_t> decompose_r_h(const HorizontalData& h, const DeltaData& dd, size_t delta, size_t sigma) {
    size_t s = h.DM.add(delta, sigma);
    size_t r = dd.rep_of[s];
    size_t hm = h.DM.sub(s, r);
    if (h.iota[hm] < 0) throw Error("InternalError", "difference is not in H_M");
    return {r, h.join(hm, static_cast<size_t>(h.iota[hm]))};
}

std::vector<size_t> reps_with_I(const HorizontalData& h, const Subgroup& i_in_d, const std::vector<size_t>* r_i) {
    if (!is_isotropic(h.D, i_in_d)) throw Error("NotIsotropic", "I must be isotropic");
    Subgroup iperp = perp(h.D, i_in_d);
    std::vector<size_t> hi_m;
    for (size_t x : h.H.elements)
        if (iperp.contains(h.part_d(x))) hi_m.push_back(h.part_m(x));
    Subgroup him = subgroup_from_elements(h.DM, hi_m);
    CosetReps def = coset_reps(h.DM, him);
    std::vector<char> in_r(h.DM.size(), 0);
    if (r_i == nullptr) {
        for (size_t r : def.reps) in_r[r] = 1;
    } else {
        std::vector<char> seen(h.DM.size(), 0);
        if (r_i->size() != def.reps.size()) throw Error("BadRepresentatives", "wrong number of representatives");
        for (size_t r : *r_i) {
            if (r >= h.DM.size() || seen[def.rep_of[r]]) throw Error("BadRepresentatives", "invalid representative set");
            seen[def.rep_of[r]] = 1;
            in_r[r] = 1;
        }
    }
    Subgroup hperp = perp(h.A, h.H);
    std::vector<size_t> out;
    for (size_t beta : hperp.elements)
        if (in_r[h.part_m(beta)] && iperp.contains(h.part_d(beta))) out.push_back(beta);
    return out;
}

std::vector<Cyclotomic> apply_t_chi(const Fqm& a, const std::vector<Cyclotomic>& x, size_t alpha, size_t beta) {
    if (x.size() != a.size()) throw Error("InvalidInput", "vector length differs from the group order");
    std::vector<Cyclotomic> y(a.size());
    for (size_t g = 0; g < a.size(); ++g) {
        if (x[g].is_zero()) continue;
        size_t t = a.sub(g, alpha);
        y[t] += e_of(qq(a.bn(beta, t), a.den())) * x[g];
    }
    return y;
}

size_t embed_in_delta(const HorizontalData& h, const DeltaData& dd, size_t delta_m) {
    for (size_t g : h.HM.gens)
        if (h.DM.bn(delta_m, g) != 0) throw Error("NotInHMperp", "class is not in H_M-perp");
    long qi = dd.q.proj[h.join(delta_m, 0)];
    if (qi < 0) throw Error("InternalError", "embedded class is not in H-perp");
    return static_cast<size_t>(qi);
}

bool is_valid_J(const Fqm& a, const std::vector<Elt>& j_images, long d) {
    if (j_images.size() != a.rank()) return false;
    auto apply = [&](const Elt& x) {
        Elt y(a.rank(), 0);
        for (size_t i = 0; i < a.rank(); ++i) y = a.add(y, a.mul(x[i], j_images[i]));
        return y;
    };
    for (size_t i = 0; i < a.rank(); ++i)
        if (a.index(a.mul(a.orders()[i], j_images[i])) != 0) return false;
    check_budget(a.size(), "J validation");
    for (size_t idx = 0; idx < a.size(); ++idx) {
        Elt x = a.elt(idx);
        Elt jx = apply(x);
        if (a.index(apply(jx)) != a.index(a.mul(-d, x))) return false;
        if (frac(a.q(jx) - d * a.q(x)) != 0) return false;
    }
    return true;
}

}  // namespace jfk
