#include "jfk/exact.hpp"

#include <cmath>
#include <mutex>
#include <numeric>
#include <sstream>

namespace jfk {

Rational qq(long n, long d) {
    if (d == 0) throw Error("DomainError", "zero denominator");
    Rational r(n, 1);
    r /= d;
    return r;
}

Rational parse_rational(std::string_view s) {
    std::string t(s);
    while (!t.empty() && std::isspace(static_cast<unsigned char>(t.back()))) t.pop_back();
    size_t start = 0;
    while (start < t.size() && std::isspace(static_cast<unsigned char>(t[start]))) ++start;
    t = t.substr(start);
    if (t.empty()) throw Error("ParseError", "empty rational");
    if (t[0] == '+') t = t.substr(1);
    size_t slash = t.find('/');
    auto valid_int = [](const std::string& u) {
        if (u.empty()) return false;
        size_t i = (u[0] == '-') ? 1 : 0;
        if (i == u.size()) return false;
        for (; i < u.size(); ++i)
            if (!std::isdigit(static_cast<unsigned char>(u[i]))) return false;
        return true;
    };
    std::string a = slash == std::string::npos ? t : t.substr(0, slash);
    std::string b = slash == std::string::npos ? "1" : t.substr(slash + 1);
    if (!valid_int(a) || !valid_int(b) || b[0] == '-')
        throw Error("ParseError", "malformed rational '" + std::string(s) + "'");
    Integer den(b);
    if (den == 0) throw Error("ParseError", "zero denominator in '" + std::string(s) + "'");
    Rational r(Integer(a), den);
    r.canonicalize();
    return r;
}

std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::string to_string(const Integer& z) { return z.get_str(); }

Integer floor_q(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Integer ceil_q(const Rational& r) {
    Integer q;
    mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

Rational frac(const Rational& r) {
    Rational f = r - Rational(floor_q(r));
    f.canonicalize();
    return f;
}

bool is_integral(const Rational& r) { return r.get_den() == 1; }

long gcd_l(long a, long b) { return std::gcd(a, b); }
long lcm_l(long a, long b) { return std::lcm(a, b); }

long mod_l(long a, long m) {
    long r = a % m;
    return r < 0 ? r + m : r;
}

long euler_phi(long n) {
    long result = n;
    for (long p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            while (n % p == 0) n /= p;
            result -= result / p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

namespace {

using Poly = std::vector<Integer>;

Poly poly_divexact(const Poly& a, const Poly& b) {
    // b monic
    Poly r = a;
    size_t db = b.size() - 1;
    if (a.size() < b.size()) return {0};
    Poly q(a.size() - db, 0);
    for (size_t i = a.size(); i-- > db;) {
        Integer c = r[i];
        q[i - db] = c;
        if (c == 0) continue;
        for (size_t j = 0; j <= db; ++j) r[i - db + j] -= c * b[j];
    }
    return q;
}

std::mutex& cyclo_mutex() {
    static std::mutex m;
    return m;
}

std::map<long, Poly>& cyclo_cache() {
    static std::map<long, Poly> cache;
    return cache;
}

Poly compute_cyclotomic(long n) {
    // x^n - 1 divided by Phi_d for all proper divisors d of n.
    Poly p(n + 1, 0);
    p[0] = -1;
    p[n] = 1;
    for (long d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        p = poly_divexact(p, cyclotomic_polynomial(d));
    }
    return p;
}

}  // namespace

const std::vector<Integer>& cyclotomic_polynomial(long n) {
    if (n < 1) throw Error("DomainError", "cyclotomic order must be positive");
    {
        std::lock_guard<std::mutex> lock(cyclo_mutex());
        auto it = cyclo_cache().find(n);
        if (it != cyclo_cache().end()) return it->second;
    }
    Poly p = compute_cyclotomic(n);
    std::lock_guard<std::mutex> lock(cyclo_mutex());
    auto [it, inserted] = cyclo_cache().emplace(n, std::move(p));
    return it->second;
}

// ---------------------------------------------------------------- Cyclotomic

Cyclotomic::Cyclotomic() : order_(1), num_(1, 0), den_(1) {}

Cyclotomic::Cyclotomic(const Rational& r, long order) : order_(order) {
    if (order < 1) throw Error("DomainError", "cyclotomic order must be positive");
    num_.assign(euler_phi(order), 0);
    num_[0] = r.get_num();
    den_ = r.get_den();
}

Cyclotomic::Cyclotomic(long order, std::vector<Integer> num, Integer den)
    : order_(order), num_(std::move(num)), den_(std::move(den)) {
    reduce_poly(order_, num_);
    normalize();
}

void Cyclotomic::reduce_poly(long order, std::vector<Integer>& poly) {
    const Poly& phi = cyclotomic_polynomial(order);
    size_t deg = phi.size() - 1;
    for (size_t i = poly.size(); i-- > deg;) {
        if (poly[i] == 0) continue;
        Integer c = poly[i];
        for (size_t j = 0; j <= deg; ++j) poly[i - deg + j] -= c * phi[j];
    }
    poly.resize(deg, 0);
}

void Cyclotomic::normalize() {
    if (den_ < 0) {
        den_ = -den_;
        for (auto& c : num_) c = -c;
    }
    Integer g = den_;
    for (const auto& c : num_) {
        if (g == 1) break;
        if (c != 0) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    }
    bool all_zero = true;
    for (const auto& c : num_)
        if (c != 0) all_zero = false;
    if (all_zero) {
        den_ = 1;
        return;
    }
    if (g != 1) {
        for (auto& c : num_) mpz_divexact(c.get_mpz_t(), c.get_mpz_t(), g.get_mpz_t());
        mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
    }
}

Cyclotomic Cyclotomic::zeta(long order, long k) {
    if (order < 1) throw Error("DomainError", "cyclotomic order must be positive");
    k = mod_l(k, order);
    std::vector<Integer> poly(std::max<long>(k + 1, euler_phi(order)), 0);
    poly[k] = 1;
    return Cyclotomic(order, std::move(poly), 1);
}

bool Cyclotomic::is_zero() const {
    for (const auto& c : num_)
        if (c != 0) return false;
    return true;
}

bool Cyclotomic::is_rational() const {
    for (size_t i = 1; i < num_.size(); ++i)
        if (num_[i] != 0) return false;
    return true;
}

Rational Cyclotomic::coeff(long k) const {
    if (k < 0 || k >= static_cast<long>(num_.size())) return 0;
    Rational r(num_[k], den_);
    r.canonicalize();
    return r;
}

std::map<long, Rational> Cyclotomic::coeffs() const {
    std::map<long, Rational> out;
    for (size_t k = 0; k < num_.size(); ++k)
        if (num_[k] != 0) out.emplace(static_cast<long>(k), coeff(static_cast<long>(k)));
    return out;
}

Cyclotomic Cyclotomic::from_coeffs(long order, const std::map<long, Rational>& c) {
    if (order < 1) throw Error("DomainError", "cyclotomic order must be positive");
    Cyclotomic out(Rational(0), order);
    for (const auto& [k, v] : c) {
        if (k < 0 || k >= order) throw Error("DomainError", "cyclotomic exponent out of range");
        out += zeta(order, k) * v;
    }
    return out;
}

Cyclotomic Cyclotomic::from_group_ring(long order, const std::vector<long>& c, const Integer& den) {
    if (static_cast<long>(c.size()) != order) throw Error("DomainError", "group-ring vector has the wrong length");
    std::vector<Integer> poly(std::max<long>(order, euler_phi(order)), 0);
    for (long k = 0; k < order; ++k) poly[k] = c[k];
    return Cyclotomic(order, std::move(poly), den);
}

Cyclotomic Cyclotomic::embed(long m) const {
    if (m % order_ != 0) throw Error("DomainError", "embedding requires order | target");
    if (m == order_) return *this;
    long step = m / order_;
    std::vector<Integer> poly(static_cast<size_t>(step) * num_.size() + 1, 0);
    for (size_t k = 0; k < num_.size(); ++k) poly[k * step] = num_[k];
    return Cyclotomic(m, std::move(poly), den_);
}

Cyclotomic Cyclotomic::simplified() const {
    if (order_ != 1 && is_rational()) return Cyclotomic(coeff(0), 1);
    return *this;
}

Cyclotomic Cyclotomic::conj() const {
    std::vector<Integer> poly(order_ + 1, 0);
    for (size_t k = 0; k < num_.size(); ++k) poly[mod_l(-static_cast<long>(k), order_)] += num_[k];
    return Cyclotomic(order_, std::move(poly), den_);
}

std::pair<double, double> Cyclotomic::approx() const {
    double re = 0, im = 0;
    const double two_pi = 2.0 * std::acos(-1.0);
    for (size_t k = 0; k < num_.size(); ++k) {
        if (num_[k] == 0) continue;
        double c = Rational(num_[k], den_).get_d();
        double ang = two_pi * static_cast<double>(k) / static_cast<double>(order_);
        re += c * std::cos(ang);
        im += c * std::sin(ang);
    }
    return {re, im};
}

Cyclotomic Cyclotomic::operator-() const {
    Cyclotomic r = *this;
    for (auto& c : r.num_) c = -c;
    return r;
}

Cyclotomic& Cyclotomic::operator+=(const Cyclotomic& o) {
    if (o.order_ != order_) {
        long m = lcm_l(order_, o.order_);
        Cyclotomic a = embed(m);
        a += o.embed(m);
        return *this = a;
    }
    if (o.is_zero()) return *this;
    if (den_ == o.den_) {
        for (size_t k = 0; k < num_.size(); ++k) num_[k] += o.num_[k];
    } else {
        for (size_t k = 0; k < num_.size(); ++k) num_[k] = num_[k] * o.den_ + o.num_[k] * den_;
        den_ *= o.den_;
    }
    normalize();
    return *this;
}

Cyclotomic& Cyclotomic::operator-=(const Cyclotomic& o) { return *this += -o; }

Cyclotomic& Cyclotomic::operator*=(const Rational& r) {
    for (auto& c : num_) c *= r.get_num();
    den_ *= r.get_den();
    normalize();
    return *this;
}

Cyclotomic& Cyclotomic::operator*=(const Cyclotomic& o) {
    if (o.order_ != order_) {
        long m = lcm_l(order_, o.order_);
        Cyclotomic a = embed(m);
        a *= o.embed(m);
        return *this = a;
    }
    if (o.is_rational()) return *this *= o.coeff(0);
    if (is_rational()) {
        Rational r = coeff(0);
        *this = o;
        return *this *= r;
    }
    std::vector<Integer> prod(2 * num_.size(), 0);
    for (size_t i = 0; i < num_.size(); ++i) {
        if (num_[i] == 0) continue;
        for (size_t j = 0; j < o.num_.size(); ++j) {
            if (o.num_[j] == 0) continue;
            mpz_addmul(prod[i + j].get_mpz_t(), num_[i].get_mpz_t(), o.num_[j].get_mpz_t());
        }
    }
    reduce_poly(order_, prod);
    num_ = std::move(prod);
    den_ *= o.den_;
    normalize();
    return *this;
}

bool operator==(const Cyclotomic& a, const Cyclotomic& b) {
    if (a.order_ == b.order_) return a.den_ == b.den_ && a.num_ == b.num_;
    long m = lcm_l(a.order_, b.order_);
    Cyclotomic x = a.embed(m), y = b.embed(m);
    return x.den_ == y.den_ && x.num_ == y.num_;
}

std::string Cyclotomic::str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [k, v] : coeffs()) {
        if (!first) os << " + ";
        first = false;
        os << to_string(v);
        if (k != 0) os << "*z" << order_ << "^" << k;
    }
    if (first) os << "0";
    return os.str();
}

Cyclotomic e_of(const Rational& z) {
    Rational f = frac(z);
    long n = f.get_den().get_si();
    long k = f.get_num().get_si();
    return Cyclotomic::zeta(n, k);
}

std::pair<Cyclotomic, Cyclotomic> embed_common(const Cyclotomic& a, const Cyclotomic& b) {
    long m = lcm_l(a.order(), b.order());
    return {a.embed(m), b.embed(m)};
}

// ---------------------------------------------------------------- KElement

bool is_order_discriminant(long d) { return d > 0 && (d % 4 == 0 || d % 4 == 3); }

namespace {
bool squarefree(long n) {
    for (long p = 2; p * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}
}  // namespace

bool is_maximal_order(long d) {
    if (!is_order_discriminant(d)) return false;
    if (d % 4 == 3) return squarefree(d);
    long m = d / 4;
    return (m % 4 == 1 || m % 4 == 2) && squarefree(m);
}

KElement::KElement(Rational x, Rational y, long d) : x_(std::move(x)), y_(std::move(y)), d_(d) {
    x_.canonicalize();
    y_.canonicalize();
    if (d < 0) throw Error("DomainError", "d must be positive");
}

KElement KElement::from_O_coords(const Rational& m, const Rational& n, long d) {
    // m + n (d + s)/2
    return KElement(m + n * d / 2, n / 2, d);
}

void KElement::check_same(const KElement& o) const {
    if (d_ != 0 && o.d_ != 0 && d_ != o.d_) throw Error("DomainError", "mixing different quadratic fields");
}

std::pair<Rational, Rational> KElement::O_coords() const {
    Rational n = 2 * y_;
    Rational m = x_ - y_ * d_;
    return {m, n};
}

std::pair<Rational, Rational> KElement::Dinv_coords() const {
    // m / s + n (1 + s)/2 with 1/s = -s/d: x = n/2, y = -m/d + n/2.
    Rational n = 2 * x_;
    Rational m = d_ * (x_ - y_);
    return {m, n};
}

bool KElement::in_O() const {
    auto [m, n] = O_coords();
    return is_integral(m) && is_integral(n);
}

bool KElement::in_Dinv() const {
    auto [m, n] = Dinv_coords();
    return is_integral(m) && is_integral(n);
}

KElement KElement::inverse() const {
    Rational nm = norm();
    if (nm == 0) throw Error("DomainError", "inverse of zero in K");
    return KElement(x_ / nm, -y_ / nm, d_);
}

KElement& KElement::operator+=(const KElement& o) {
    check_same(o);
    if (d_ == 0) d_ = o.d_;
    x_ += o.x_;
    y_ += o.y_;
    return *this;
}

KElement& KElement::operator-=(const KElement& o) {
    check_same(o);
    if (d_ == 0) d_ = o.d_;
    x_ -= o.x_;
    y_ -= o.y_;
    return *this;
}

KElement& KElement::operator*=(const KElement& o) {
    check_same(o);
    if (d_ == 0) d_ = o.d_;
    Rational nx = x_ * o.x_ - d_ * y_ * o.y_;
    Rational ny = x_ * o.y_ + y_ * o.x_;
    x_ = nx;
    y_ = ny;
    return *this;
}

std::string KElement::str() const {
    return to_string(x_) + " + " + to_string(y_) + "*sqrt(-" + std::to_string(d_) + ")";
}

KOps k_ops(const KElement& a) { return {a.conj(), a.trace(), a.norm(), a.in_O(), a.in_Dinv()}; }

std::vector<KElement> roots_of_unity(long d) {
    if (d == 4) {
        return {KElement(1, 0, 4), KElement(0, Rational(1, 2), 4), KElement(-1, 0, 4),
                KElement(0, Rational(-1, 2), 4)};
    }
    if (d == 3) {
        std::vector<KElement> out;
        KElement z(Rational(1, 2), Rational(1, 2), 3);  // e(1/6)
        KElement p(1, 0, 3);
        for (int k = 0; k < 6; ++k) {
            out.push_back(p);
            p *= z;
        }
        return out;
    }
    return {KElement(1, 0, d), KElement(-1, 0, d)};
}

Cyclotomic root_as_cyclotomic(long d, long k) {
    long n = static_cast<long>(roots_of_unity(d).size());
    return e_of(qq(k, n));
}

long root_index(const KElement& xi) {
    auto roots = roots_of_unity(xi.d());
    for (size_t k = 0; k < roots.size(); ++k)
        if (roots[k] == xi) return static_cast<long>(k);
    return -1;
}

}  // namespace jfk
