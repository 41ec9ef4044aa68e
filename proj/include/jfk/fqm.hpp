#pragma once

#include "jfk/exact.hpp"
#include "jfk/linalg.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jfk {

using Elt = std::vector<long>;

// Enumeration cap on group orders, read once from JFK_MAX_GROUP (default 65536).
size_t group_budget();
void check_budget(size_t n, const char* what);

// Finite quadratic module on Z/n_1 + ... + Z/n_k. Elements are residue vectors;
// they are also addressed by a big-endian mixed-radix index, so index order is
// lexicographic order of residues.
class Fqm {
public:
    Fqm();  // trivial group
    Fqm(std::vector<long> orders, std::vector<Rational> qvals, QMat gram, bool require_nondegenerate = true);

    size_t rank() const { return orders_.size(); }
    const std::vector<long>& orders() const { return orders_; }
    const std::vector<Rational>& qvals() const { return qvals_; }
    const QMat& gram() const { return gram_; }
    size_t size() const { return size_; }

    Elt elt(size_t idx) const;
    size_t index(const Elt& x) const;  // reduces x first
    Elt reduce(Elt x) const;
    Elt add(const Elt& a, const Elt& b) const;
    Elt sub(const Elt& a, const Elt& b) const;
    Elt neg(const Elt& a) const;
    Elt mul(long k, const Elt& a) const;
    size_t add(size_t a, size_t b) const;
    size_t sub(size_t a, size_t b) const;
    size_t neg(size_t a) const;

    Rational q(const Elt& x) const;
    Rational b(const Elt& x, const Elt& y) const;
    Rational q(size_t i) const { return q(elt(i)); }
    Rational b(size_t i, size_t j) const { return b(elt(i), elt(j)); }
    // Values as numerators over den(): fast paths for enumeration.
    long den() const { return den_; }
    long qn(size_t idx) const;
    long bn(size_t i, size_t j) const;
    long level() const;  // order of the q-values in Q/Z
    long order_of(size_t idx) const;

    bool is_nondegenerate() const;
    Fqm negated() const;
    std::string str() const;

private:
    void build_tables();
    long qn_elt(const Elt& x) const;
    long bn_elt(const Elt& x, const Elt& y) const;

    std::vector<long> orders_;
    std::vector<Rational> qvals_;
    QMat gram_;
    size_t size_ = 1;
    std::vector<size_t> stride_;
    long den_ = 1;
    std::vector<long> qnum_;
    std::vector<std::vector<long>> bnum_;
    std::vector<long> qtable_;  // q numerators per index when size fits the budget
};

struct Subgroup {
    std::vector<size_t> elements;  // sorted indices
    std::vector<char> member;      // indicator over the parent
    std::vector<size_t> gens;

    size_t size() const { return elements.size(); }
    bool contains(size_t i) const { return member[i] != 0; }
    friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.elements == b.elements; }
};

Subgroup trivial_subgroup(const Fqm& a);
Subgroup whole_group(const Fqm& a);
Subgroup subgroup_closure(const Fqm& a, const std::vector<size_t>& gens);
Subgroup subgroup_closure(const Fqm& a, const std::vector<Elt>& gens);
Subgroup subgroup_from_elements(const Fqm& a, std::vector<size_t> elems);
Subgroup perp(const Fqm& a, const Subgroup& h);
Subgroup intersect(const Fqm& a, const Subgroup& x, const Subgroup& y);
Subgroup sum(const Fqm& a, const Subgroup& x, const Subgroup& y);
bool is_subset(const Subgroup& x, const Subgroup& y);
bool is_isotropic(const Fqm& a, const Subgroup& h);
// (|H| / |H meet I-perp|, |I| / |I meet H-perp|); the two always agree.
std::pair<size_t, size_t> pairing_quotients(const Fqm& a, const Subgroup& h, const Subgroup& i);
std::vector<Subgroup> all_subgroups(const Fqm& a);
std::vector<Subgroup> isotropic_subgroups(const Fqm& a);
// Lexicographically least member of each coset of s; rep_of maps every element to it.
struct CosetReps {
    std::vector<size_t> reps;
    std::vector<size_t> rep_of;
};
CosetReps coset_reps(const Fqm& a, const Subgroup& s);

// P/K for K inside P, with q inherited (requires K isotropic and K inside P-perp).
struct Quotient {
    Fqm fqm;
    std::vector<long> proj;       // parent index -> quotient index, -1 outside P
    std::vector<size_t> section;  // quotient index -> lexicographically least lift
    std::vector<Elt> gen_lifts;   // lifts of the quotient generators
};
Quotient quotient(const Fqm& a, const Subgroup& p, const Subgroup& k, bool require_nondegenerate = true);

Fqm direct_sum(const Fqm& a, const Fqm& b);

struct GaussSum {
    Cyclotomic value;
    int sig_mod_8 = 0;
};
GaussSum gauss_sum(const Fqm& a);

// Isomorphism of quadratic modules as a table over element indices. Pairs in
// `fixed` are prescribed (source index, target index).
std::optional<std::vector<size_t>> find_isomorphism(const Fqm& a, const Fqm& b,
                                                    const std::vector<std::pair<size_t, size_t>>& fixed = {});
// All non-degenerate modules of order at most max_order, one per isomorphism class.
std::vector<Fqm> enumerate_fqms(long max_order);

// Horizontal subgroup of D_M + D given by H_M and an injective iota: H_M -> D.
struct HorizontalData {
    Fqm DM, D, A;
    Subgroup H, HM, HD;
    std::vector<long> iota;  // D_M index -> D index, -1 outside H_M

    size_t join(size_t m, size_t d) const { return m * D.size() + d; }
    size_t part_m(size_t a) const { return a / D.size(); }
    size_t part_d(size_t a) const { return a % D.size(); }
    Subgroup embed_d(const Subgroup& s) const;  // s inside D, as a subgroup of A
    Subgroup embed_m(const Subgroup& s) const;
};
HorizontalData make_horizontal(const Fqm& dm, const Fqm& d, const std::vector<Elt>& hm_gens,
                               const std::vector<Elt>& iota_images);
// H given directly as a subgroup of D_M + D.
HorizontalData horizontal_from_subgroup(const Fqm& dm, const Fqm& d, const Subgroup& h);
std::vector<HorizontalData> horizontal_isotropic_subgroups(const Fqm& dm, const Fqm& d);

struct DeltaData {
    Quotient q;                  // H-perp / H
    std::vector<size_t> R;       // representatives of D_M / H_M
    std::vector<size_t> rep_of;  // D_M index -> its representative
    Subgroup Hperp;
};
DeltaData quotient_delta(const HorizontalData& h, const std::vector<size_t>* reps = nullptr);

// delta + sigma = r + h_M with r in R and h in H.
std::pair<size_t, size_t> decompose_r_h(const HorizontalData& h, const DeltaData& dd, size_t delta, size_t sigma);

// {beta in (D_M + I-perp) meet H-perp : beta_M in R_I}, R_I representatives of D_M / (H meet I-perp)_M.
std::vector<size_t> reps_with_I(const HorizontalData& h, const Subgroup& i_in_d,
                                const std::vector<size_t>* r_i = nullptr);

// chi_beta t_alpha on the group algebra: e_gamma -> e((beta, gamma - alpha)) e_{gamma - alpha}.
std::vector<Cyclotomic> apply_t_chi(const Fqm& a, const std::vector<Cyclotomic>& x, size_t alpha, size_t beta);
// Class of delta_M + 0 in Delta_H; requires delta_M in H_M-perp.
size_t embed_in_delta(const HorizontalData& h, const DeltaData& dd, size_t delta_m);

// Optional O-structure on D: J given on generators, validated by J^2 = -d and q(J x) = d q(x).
bool is_valid_J(const Fqm& a, const std::vector<Elt>& j_images, long d);

}  // namespace jfk
