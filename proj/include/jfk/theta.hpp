#pragma once

#include "jfk/exact.hpp"
#include "jfk/lattice.hpp"

#include <map>
#include <vector>

namespace jfk {

// Lattice vectors v = x + coset, x integral, with v^t G v / 2 <= B (Fincke-Pohst
// on the exact LDL^T form). Returned in lattice coordinates, sorted.
std::vector<QVec> enumerate_short_vectors(const ZLattice& l, const QVec& coset, const Rational& bound);

struct ThetaTerm {
    QVec lam;      // dual vector in lattice coordinates
    size_t coset;  // its class in D_L
    Rational norm;  // lambda^2 / 2
};

struct ThetaExpansion {
    ZLattice lattice;
    Discriminant disc;
    Rational bound;
    std::vector<ThetaTerm> terms;  // sorted by (norm, lam)
    Integer denominator = 1;       // common denominator of the exponents

    // (norm, coset) -> number of vectors
    std::map<std::pair<Rational, size_t>, long> counts() const;
    const ThetaTerm* find(const QVec& lam) const;
};

ThetaExpansion theta_expansion(const ZLattice& l, const Rational& bound);
// Enumerated through the Hermitian dual basis and Hermitian norms; terms are
// reported in trace coordinates so they compare with the orthogonal expansion.
ThetaExpansion theta_expansion(const OLattice& m, const Rational& bound);

struct PeriodicityReport {
    bool ok = true;
    Rational loss;    // max |(lambda, sigma)| + sigma^2/2 over the enumerated terms
    Rational window;  // bound - loss
    size_t compared = 0;
    std::vector<ThetaTerm> transformed;  // lambda + sigma with shifted norm and class
    std::vector<Cyclotomic> phases;      // e((lambda, nu)) per transformed term
    std::string failure;
};
// Checks that lambda -> lambda + sigma maps the truncated expansion onto itself
// within the window, with exponent shift (lambda, sigma) + sigma^2/2 and class shift.
PeriodicityReport apply_periodicity(const ThetaExpansion& t, const QVec& sigma, const QVec& nu);

// 2 * norm equals y^t G^{-1} y with y = G lambda, for every term.
bool heat_check(const ThetaExpansion& t);

}  // namespace jfk
