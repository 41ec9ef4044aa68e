#pragma once

#include <gmpxx.h>

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace jfk {

using Integer = mpz_class;
using Rational = mpq_class;

// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

// Canonicalized n/d (gmpxx does not reduce two-argument constructions).
Rational qq(long n, long d);
Rational parse_rational(std::string_view s);
std::string to_string(const Rational& r);
std::string to_string(const Integer& z);

Integer floor_q(const Rational& r);
Integer ceil_q(const Rational& r);
// Representative of r mod 1 in [0, 1).
Rational frac(const Rational& r);
bool is_integral(const Rational& r);

long gcd_l(long a, long b);
long lcm_l(long a, long b);
long mod_l(long a, long m);
long euler_phi(long n);

// Integer coefficients of the n-th cyclotomic polynomial, lowest degree first.
const std::vector<Integer>& cyclotomic_polynomial(long n);

// Element of Q(zeta_N) stored as sum c_k zeta^k over the power basis
// k = 0..phi(N)-1, with a common positive denominator.
class Cyclotomic {
public:
    Cyclotomic();  // zero in Q(zeta_1)
    explicit Cyclotomic(const Rational& r, long order = 1);
    static Cyclotomic zeta(long order, long k);

    long order() const { return order_; }
    bool is_zero() const;
    bool is_rational() const;
    Rational coeff(long k) const;  // k in [0, phi(N))
    // Nonzero coefficients keyed by exponent.
    std::map<long, Rational> coeffs() const;
    static Cyclotomic from_coeffs(long order, const std::map<long, Rational>& c);
    // sum_k c[k] zeta^k for a group-ring vector of length order
    static Cyclotomic from_group_ring(long order, const std::vector<long>& c, const Integer& den = 1);

    // Same number viewed in Q(zeta_M); requires order() | M.
    Cyclotomic embed(long m) const;
    // Smallest-order form when the value is rational, otherwise unchanged.
    Cyclotomic simplified() const;
    Cyclotomic conj() const;
    // Floating value, used only for sign decisions on real numbers.
    std::pair<double, double> approx() const;

    Cyclotomic operator-() const;
    Cyclotomic& operator+=(const Cyclotomic& o);
    Cyclotomic& operator-=(const Cyclotomic& o);
    Cyclotomic& operator*=(const Cyclotomic& o);
    Cyclotomic& operator*=(const Rational& r);

    friend Cyclotomic operator+(Cyclotomic a, const Cyclotomic& b) { return a += b; }
    friend Cyclotomic operator-(Cyclotomic a, const Cyclotomic& b) { return a -= b; }
    friend Cyclotomic operator*(Cyclotomic a, const Cyclotomic& b) { return a *= b; }
    friend Cyclotomic operator*(Cyclotomic a, const Rational& r) { return a *= r; }
    friend Cyclotomic operator*(const Rational& r, Cyclotomic a) { return a *= r; }
    friend bool operator==(const Cyclotomic& a, const Cyclotomic& b);
    friend bool operator!=(const Cyclotomic& a, const Cyclotomic& b) { return !(a == b); }

    std::string str() const;

private:
    Cyclotomic(long order, std::vector<Integer> num, Integer den);
    void normalize();
    static void reduce_poly(long order, std::vector<Integer>& poly);

    long order_ = 1;
    std::vector<Integer> num_;
    Integer den_ = 1;
};

// e(z) = exp(2 pi i z) for rational z.
Cyclotomic e_of(const Rational& z);
std::pair<Cyclotomic, Cyclotomic> embed_common(const Cyclotomic& a, const Cyclotomic& b);

// d must be the discriminant magnitude of an imaginary quadratic order.
bool is_order_discriminant(long d);
// True when O is the maximal order of Q(sqrt(-d)).
bool is_maximal_order(long d);

// x + y sqrt(-d).
class KElement {
public:
    KElement() = default;
    KElement(Rational x, Rational y, long d);
    static KElement from_rational(const Rational& x, long d) { return KElement(x, 0, d); }
    // m + n w with w = (d + sqrt(-d)) / 2.
    static KElement from_O_coords(const Rational& m, const Rational& n, long d);
    static KElement omega(long d) { return from_O_coords(0, 1, d); }
    static KElement sqrt_minus_d(long d) { return KElement(0, 1, d); }

    const Rational& x() const { return x_; }
    const Rational& y() const { return y_; }
    long d() const { return d_; }

    KElement conj() const { return KElement(x_, -y_, d_); }
    Rational trace() const { return 2 * x_; }
    Rational norm() const { return x_ * x_ + d_ * y_ * y_; }
    bool is_zero() const { return x_ == 0 && y_ == 0; }
    bool is_rational() const { return y_ == 0; }
    // Coordinates (m, n) in the Z-basis {1, w}.
    std::pair<Rational, Rational> O_coords() const;
    // Coordinates in the Z-basis {1/sqrt(-d), (1 + sqrt(-d))/2} of the inverse different.
    std::pair<Rational, Rational> Dinv_coords() const;
    bool in_O() const;
    bool in_Dinv() const;
    KElement inverse() const;

    KElement operator-() const { return KElement(-x_, -y_, d_); }
    KElement& operator+=(const KElement& o);
    KElement& operator-=(const KElement& o);
    KElement& operator*=(const KElement& o);
    friend KElement operator+(KElement a, const KElement& b) { return a += b; }
    friend KElement operator-(KElement a, const KElement& b) { return a -= b; }
    friend KElement operator*(KElement a, const KElement& b) { return a *= b; }
    friend KElement operator*(const Rational& r, const KElement& a) { return KElement(r * a.x_, r * a.y_, a.d_); }
    friend KElement operator/(const KElement& a, const KElement& b) { return a * b.inverse(); }
    friend bool operator==(const KElement& a, const KElement& b) { return a.x_ == b.x_ && a.y_ == b.y_; }
    friend bool operator!=(const KElement& a, const KElement& b) { return !(a == b); }

    std::string str() const;

private:
    void check_same(const KElement& o) const;
    Rational x_ = 0;
    Rational y_ = 0;
    long d_ = 0;
};

struct KOps {
    KElement conj;
    Rational trace;
    Rational norm;
    bool in_O;
    bool in_Dinv;
};
KOps k_ops(const KElement& a);

// Roots of unity in O, ordered by argument: the k-th is e(k/|mu|).
std::vector<KElement> roots_of_unity(long d);
// The root e(k/|mu(O)|) as a cyclotomic number; k is its index in roots_of_unity.
Cyclotomic root_as_cyclotomic(long d, long k);
// Index of xi in roots_of_unity(d), or -1.
long root_index(const KElement& xi);

}  // namespace jfk
