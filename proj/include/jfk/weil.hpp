#pragma once

#include "jfk/exact.hpp"
#include "jfk/fqm.hpp"
#include "jfk/lattice.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace jfk {

// Dense matrix over Q(zeta_N): scale * (integer matrix over the group ring Z[C_N]).
// Entries of Weil matrices are monomials in zeta_N, so products stay in machine
// integers; the Gauss-sum prefactor lives in the scale.
class CMatrix {
public:
    CMatrix() = default;
    CMatrix(size_t rows, size_t cols, long order);
    static CMatrix identity(size_t n);

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }
    long order() const { return order_; }
    const Cyclotomic& scale() const { return scale_; }
    void set_scale(Cyclotomic s) { scale_ = std::move(s); }

    // entry (i, j) += coeff * zeta_N^k
    void add_term(size_t i, size_t j, long k, long coeff = 1);
    Cyclotomic at(size_t i, size_t j) const;
    bool entry_is_zero(size_t i, size_t j) const;

    CMatrix embed(long order) const;
    CMatrix scaled(const Cyclotomic& c) const;
    CMatrix conj_transpose() const;
    CMatrix operator*(const CMatrix& o) const;
    friend bool operator==(const CMatrix& a, const CMatrix& b);
    friend bool operator!=(const CMatrix& a, const CMatrix& b) { return !(a == b); }
    size_t rank() const;  // over Q(zeta_N)

private:
    long& cell(size_t i, size_t j, long k) { return data_[(i * cols_ + j) * order_ + k]; }
    long cell(size_t i, size_t j, long k) const { return data_[(i * cols_ + j) * order_ + k]; }

    size_t rows_ = 0, cols_ = 0;
    long order_ = 1;
    Cyclotomic scale_ = Cyclotomic(Rational(1));
    std::vector<long> data_;
};

using RepMatrix = CMatrix;

RepMatrix rho_T(const Fqm& a);
RepMatrix rho_S(const Fqm& a, std::optional<int> sig_hint = std::nullopt);
// e_gamma -> e_{-gamma}
RepMatrix parity_matrix(const Fqm& a);

// D_M of an even O-lattice together with the data needed for the unit action.
struct HermitianContext {
    OLattice m;
    Discriminant disc;
    long b_plus = 0, b_minus = 0;  // O-ranks
};
HermitianContext make_hermitian_context(const OLattice& m);
// e_gamma -> xi^{b_- - b_+} e_{conj(xi) gamma}
RepMatrix rho_xi(const HermitianContext& h, const KElement& xi);

struct Letter {
    enum Kind { T, Tinv, S, Xi } kind;
    long root = 0;  // index into roots_of_unity(d) for Xi
    friend bool operator==(const Letter&, const Letter&) = default;
};
using GroupWord = std::vector<Letter>;
using IntMat2 = std::array<std::array<Integer, 2>, 2>;
using KMat2 = std::array<std::array<KElement, 2>, 2>;

GroupWord parse_word(const std::string& s);  // e.g. "S,T,T^-1,xi1"
std::string word_to_string(const GroupWord& w);
IntMat2 eval_sl2(const GroupWord& w);          // rejects Xi letters
KMat2 eval_u11(const GroupWord& w, long d);
GroupWord factor_sl2(const IntMat2& a);
struct U11Factor {
    KElement xi;
    long root = 0;
    IntMat2 b;
};
U11Factor factor_u11(const KMat2& a, long d);

RepMatrix rho_of(const GroupWord& w, const Fqm& a);
RepMatrix rho_of(const GroupWord& w, const HermitianContext& h);
// Matrix input; refused for odd signature where only the metaplectic cover acts.
RepMatrix rho_of(const IntMat2& m, const Fqm& a);
RepMatrix rho_of(const KMat2& m, const HermitianContext& h);

// Arrow operators for an isotropic H of A with Delta = H-perp / H.
struct Arrows {
    Subgroup H, Hperp;
    Quotient delta;
    CMatrix up;    // |A| x |Delta|
    CMatrix down;  // |Delta| x |A|
};
Arrows arrows(const Fqm& a, const Subgroup& h);

// Map C[Bbar] -> C[B] with B = H-perp/H and Bbar = J-perp/J for J = I + (H meet I-perp).
struct CombinedArrow {
    Subgroup I, K, J, Jperp;  // I and K = H meet I-perp as subgroups of A
    Quotient B;              // from the Delta_H data of the horizontal group
    Quotient Bbar;
    CMatrix map;  // |B| x |Bbar|
};
CombinedArrow combined_arrow(const HorizontalData& h, const DeltaData& dd, const Subgroup& i_in_d);
// The same map as the composite of a lift along I-bar and a projection along H/K.
CMatrix combined_arrow_composite(const HorizontalData& h, const CombinedArrow& c);

}  // namespace jfk
