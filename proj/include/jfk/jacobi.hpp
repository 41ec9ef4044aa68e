#pragma once

#include "jfk/exact.hpp"
#include "jfk/fqm.hpp"
#include "jfk/lattice.hpp"
#include "jfk/theta.hpp"
#include "jfk/weil.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace jfk {

// Components f_delta = sum_n a_{n,delta} q^n of a C[D]-valued function, as
// exact finite data. complete_to[delta], when present, is the largest n up to
// which the component is known (absent entries below it are zero).
struct ModularFormData {
    Fqm target;
    std::map<std::pair<Rational, size_t>, Cyclotomic> coeffs;  // (n, delta) -> nonzero value
    Rational weight = 0;
    std::vector<std::optional<Rational>> complete_to;  // empty: exact polynomial data

    void set(const Rational& n, size_t delta, const Cyclotomic& c);
    Cyclotomic get(const Rational& n, size_t delta) const;
    std::optional<Rational> min_n() const;
    // n = q(delta) mod 1 on the support (the T-eigenvalue condition for rho_D).
    bool support_matches_q() const;
};
bool same_coefficients(const ModularFormData& a, const ModularFormData& b);

// Everything a Jacobi expansion over (L, H) refers to.
struct JacobiContext {
    ZLattice lattice;
    Discriminant disc;
    HorizontalData h;
    DeltaData dd;
    // beta_of[l * |D| + d]: class of (l, d) in Delta_H, or -1 outside H-perp
    std::vector<long> beta_of;
    // dcomp[l * |Delta| + beta]: the unique d with (l, d) in beta, or -1
    std::vector<long> dcomp;
};
std::shared_ptr<const JacobiContext> make_jacobi_context(const Discriminant& disc, const HorizontalData& h);

struct JacobiKey {
    Rational m;
    QVec lam;     // dual vector in lattice coordinates
    size_t beta;  // element of Delta_H
    friend bool operator<(const JacobiKey& a, const JacobiKey& b);
    friend bool operator==(const JacobiKey& a, const JacobiKey& b) {
        return a.m == b.m && a.lam == b.lam && a.beta == b.beta;
    }
};

// c_{m, lambda, beta} q^m zeta^lambda e_beta for every m <= window.
struct JacobiExpansion {
    std::shared_ptr<const JacobiContext> ctx;
    Rational window;
    std::map<JacobiKey, Cyclotomic> coeffs;

    Cyclotomic get(const JacobiKey& k) const;
    void add(const JacobiKey& k, const Cyclotomic& c);
};
// First key where two expansions over the same context differ, if any.
std::optional<JacobiKey> first_difference(const JacobiExpansion& a, const JacobiExpansion& b);

// Phi = down_H(Theta tensor F). The window defaults to theta.bound + min(0, min n of F),
// the largest window on which every coefficient is complete.
JacobiExpansion build_jacobi(const ThetaExpansion& theta, const ModularFormData& f, const HorizontalData& h,
                             std::optional<Rational> window = std::nullopt);
JacobiExpansion build_jacobi(const ThetaExpansion& theta, const ModularFormData& f,
                             std::shared_ptr<const JacobiContext> ctx, std::optional<Rational> window = std::nullopt);

// For each delta in D, the largest n for which a_{n,delta} is visible in a window W:
// W minus the least norm of a lambda whose class pairs with delta into H-perp.
std::vector<std::optional<Rational>> recoverable_bounds(const JacobiContext& ctx, const Rational& window);

// Recovers F over D from Phi; rebuilds and compares, so any coefficient that is
// not of theta-decomposition shape raises InconsistentCoefficients.
ModularFormData theta_decompose(const JacobiExpansion& phi);

struct Witness {
    Rational m;
    QVec lam;
    size_t beta = 0;
    std::string detail;
};

struct PeriodicityCheck {
    bool ok = true;
    Rational loss;    // max |(lambda, sigma)| + sigma^2/2 over the entries
    Rational window;  // window - loss
    size_t compared = 0;
    std::optional<Witness> witness;
};
// c_{m,l,b} e((l,nu)) = c_{m+(l,sigma)+sigma^2/2, l+sigma, b+sigma_D} e((nu_D, b)) whenever both
// exponents lie in the window. sigma_D, nu_D are the images in Delta_H of the classes
// of sigma and nu, which must lie in H_M-perp.
PeriodicityCheck check_periodicity(const JacobiExpansion& phi, const QVec& sigma, const QVec& nu);
// Same identity with explicit Delta_H images (used for the extended laws).
PeriodicityCheck check_periodicity_with(const JacobiExpansion& phi, const QVec& sigma, const QVec& nu,
                                        size_t sigma_delta, size_t nu_delta);

struct ClassificationReport {
    bool weak = true;         // m >= 0
    bool holomorphic = true;  // m >= |lambda|^2
    bool cuspidal = true;     // m > |lambda|^2
    Rational window;
};
ClassificationReport classify(const JacobiExpansion& phi);

// up_I G: f_delta = g_{delta + I} on I-perp, zero elsewhere.
ModularFormData uparrow(const ModularFormData& g, const Fqm& d, const Subgroup& i, const Quotient& dbar);

// Over-lattice Lambda of L with Lambda/L = I_L, in L coordinates.
struct OverLattice {
    ZLattice lattice;
    QMat basis;      // columns: Lambda basis in L coordinates
    QMat basis_inv;  // L coordinates -> Lambda coordinates
};
OverLattice over_lattice(const Discriminant& disc, const Subgroup& i_l);

struct PullupReport {
    bool ok = true;
    int special_case = 0;  // 1..4 for the four special shapes, 0 otherwise
    bool special_map_ok = true;
    bool dimensions_ok = true;
    Rational window;
    size_t compared = 0;
    size_t delta_size = 0, delta_bar_size = 0;
    std::optional<Witness> witness;
};
// Compares down_H(Theta_L tensor up_I G) with the combined arrow applied to
// down_Hbar(Theta_Lambda tensor G), over the same window.
PullupReport verify_pullup(const ModularFormData& g, const Subgroup& i_in_d, const Discriminant& disc,
                           const HorizontalData& h, const Rational& bound);

struct Descent {
    Subgroup I;     // inside D
    Quotient dbar;  // I-perp / I
    ModularFormData g;
};
// Lambda/L = I_L inside H_L: periodicity of the scalar components under Lambda.
Descent descend_scalar(const JacobiExpansion& phi, const Subgroup& i_l);

// K_L with a lift kappa: K_L -> D given on generators.
struct KappaLift {
    Subgroup K;
    std::vector<long> kappa;  // D_L index -> D index, -1 outside K
};
KappaLift validate_lift(const HorizontalData& h, const std::vector<size_t>& k_gens,
                        const std::vector<size_t>& kappa_images);
// The lift attached to an isotropic I with I meet H_D = I meet H_D-perp = 0.
KappaLift lift_from_isotropic(const HorizontalData& h, const Subgroup& i_in_d);
Descent descend_vector(const JacobiExpansion& phi, const std::vector<size_t>& k_gens,
                       const std::vector<size_t>& kappa_images);

}  // namespace jfk
