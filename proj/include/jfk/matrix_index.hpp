#pragma once

#include "jfk/exact.hpp"
#include "jfk/fqm.hpp"
#include "jfk/jacobi.hpp"
#include "jfk/lattice.hpp"
#include "jfk/theta.hpp"

#include <map>
#include <memory>
#include <optional>
#include <tuple>
#include <vector>

namespace jfk {

// Index data (S, psi). Orthogonal: S symmetric over Q on Z^c and one image per
// standard generator. Hermitian (d set): S Hermitian over K on O^c and images of
// the Z-basis e_0, w e_0, e_1, w e_1, ... of O^c.
struct MatrixIndexInput {
    std::optional<long> d;
    QMat S;   // orthogonal
    KMat SH;  // Hermitian
    Fqm delta;
    std::vector<Elt> psi_images;
};

struct ValidatedIndex {
    MatrixIndexInput input;
    size_t c = 0;  // Z-rank of the coefficient lattice
    QMat SZ;       // a^t SZ a equals a^t S a, resp. a^* S a, on Z-coordinates
    std::vector<size_t> psi;  // Delta index of the image of each Z-basis vector
};
ValidatedIndex validate_psi(const MatrixIndexInput& in);

struct MatrixIndexSetting {
    ValidatedIndex v;
    ZMat omega_basis;   // columns: Z-basis of ker psi
    ZMat kernel_basis;  // columns: Z-basis of ker psi meet ker S
    ZMat l_basis;       // columns: elements of ker psi projecting to a basis of L
    ZLattice L;         // Gram 2 w_i^t SZ w_j
    std::optional<OLattice> M;  // Hermitian case with a free O-basis
    Discriminant disc;          // D_Omega
    Subgroup DOS;               // D_{Omega,S}: the image of the integral vectors
    Subgroup HOmega;            // its orthogonal complement
    std::vector<long> psi_embedding;  // D_Omega index -> Delta index on D_{Omega,S}, -1 elsewhere

    // L coordinates of the image of a in Q^c / ker S.
    QVec to_l_coords(const QVec& a) const;
    // A representative in Q^c of a vector in L coordinates.
    QVec from_l_coords(const QVec& x) const;
};
MatrixIndexSetting build_setting(const ValidatedIndex& v);

// Theta_{S,Omega}: terms labelled by L coordinates; a^t S a is the stored norm.
ThetaExpansion theta_matrix_index(const MatrixIndexSetting& s, const Rational& bound);
// The Theta_{S,Omega} periodicity law for u, v running over the standard generators.
bool check_per_omega(const MatrixIndexSetting& s, const ThetaExpansion& t);

struct MatrixJacobiKey {
    Rational m;
    QVec r;       // 2 SZ a: coordinates dual to the standard Z-basis
    size_t beta;  // element of Delta
    friend bool operator<(const MatrixJacobiKey& a, const MatrixJacobiKey& b) {
        return std::tie(a.m, a.r, a.beta) < std::tie(b.m, b.r, b.beta);
    }
};
struct MatrixJacobiExpansion {
    Rational window;
    std::map<MatrixJacobiKey, Cyclotomic> coeffs;
    std::vector<size_t> delta_iso;  // Delta_H index -> Delta index
    JacobiExpansion phi;            // the same data over (L, H)
    Cyclotomic get(const MatrixJacobiKey& k) const;
};
// H is a horizontal subgroup of D_Omega + D with H_M = H_Omega; an isomorphism
// Delta_H -> Delta commuting with the embeddings of D_{Omega,S} is searched for.
MatrixJacobiExpansion jacobi_matrix_index(const ModularFormData& f, const HorizontalData& h,
                                          const MatrixIndexSetting& s, const Rational& bound);
// c_{m,r,b} e(r^t v) = c_{m + r^t u + u^t S u, r + 2 S u, b + psi u} e((psi v, b)) inside the window.
bool check_matrix_periodicity(const MatrixJacobiExpansion& e, const MatrixIndexSetting& s, const ZVec& u,
                              const ZVec& v);

}  // namespace jfk
