#pragma once

#include "jfk/exact.hpp"
#include "jfk/fqm.hpp"
#include "jfk/linalg.hpp"

#include <utility>
#include <vector>

namespace jfk {

// Z-lattice given by its Gram matrix (e_i, e_j). Indefinite forms are allowed;
// theta enumeration checks positivity itself.
class ZLattice {
public:
    ZLattice() = default;
    explicit ZLattice(QMat gram);

    size_t rank() const { return gram_.size(); }
    const QMat& gram() const { return gram_; }
    bool is_even() const;
    bool is_positive_definite() const { return jfk::is_positive_definite(gram_); }
    Rational pair(const QVec& a, const QVec& b) const { return bilinear(gram_, a, b); }
    Rational norm(const QVec& a) const { return pair(a, a) / 2; }  // lambda^2 / 2

private:
    QMat gram_;
};

using KVec = std::vector<KElement>;
using KMat = std::vector<KVec>;

// Hermitian O-lattice with a free O-basis; hgram[i][j] = <e_j, e_i>, linear in the first slot.
class OLattice {
public:
    OLattice() = default;
    OLattice(long d, KMat hgram);

    long d() const { return d_; }
    size_t rank() const { return hgram_.size(); }
    const KMat& hgram() const { return hgram_; }
    bool is_even() const;
    // <a, b> for coordinate vectors: b^* H a.
    KElement pair(const KVec& a, const KVec& b) const;

private:
    long d_ = 4;
    KMat hgram_;
};

// Trace coordinates: the Z-basis {e_i, w e_i} of an O-lattice, in the order e_0, w e_0, e_1, ...
ZLattice trace_form(const OLattice& m);
QVec to_trace_coords(const KVec& v);
KVec from_trace_coords(const QVec& t, long d);
// Matrix of multiplication by c on trace coordinates of rank b.
QMat k_mult_matrix(const KElement& c, size_t b);

// Hermitian structure on L from J (multiplication by sqrt(-d) on L).
// `basis` holds the chosen O-basis as columns of Z-coordinates in L; the trace
// form of `lattice` is basis^t G basis in the interleaved order.
struct HermitianFromBilinear {
    OLattice lattice;
    ZMat basis;  // 2b x 2b unimodular, columns v_0, w v_0, v_1, w v_1, ...
};
HermitianFromBilinear hermitian_from_bilinear(const ZLattice& l, const ZMat& j, long d);

struct DualData {
    QMat dual_basis;  // columns: Z-basis of L* in lattice coordinates (= G^{-1})
    KMat hdual;       // columns: O-basis of the Hermitian dual in K-coordinates (O-lattices only)
};
DualData dual_zlattice(const ZLattice& l);
// Asserts that the Hermitian dual agrees with the Z-dual of the trace form.
DualData dual_olattice(const OLattice& m);

// D_L = L*/L for an even non-degenerate lattice. Dual vectors are given in
// lattice coordinates (rational).
struct Discriminant {
    ZLattice lattice;
    Fqm fqm;
    std::vector<QVec> gen_lifts;  // dual vectors lifting the generators
    size_t project(const QVec& x) const;  // throws NotInDual
    QVec lift(size_t idx) const;         // sum of generator lifts with the residue coefficients

    ZMat U;                    // Smith transform applied to G x
    std::vector<size_t> keep;  // Smith positions with d_i > 1
};
Discriminant discriminant_group(const ZLattice& l);

// lambda = lambda_C + lambda_Cbar in V tensor K, each part written a + b sqrt(-d)
// with a, b in V (lattice coordinates).
struct SplitPart {
    QVec a, b;
};
std::pair<SplitPart, SplitPart> project_components(const QVec& lam, const QMat& j, long d);

}  // namespace jfk
