#pragma once

#include "jfk/exact.hpp"

#include <vector>

namespace jfk {

using QVec = std::vector<Rational>;
using QMat = std::vector<QVec>;
using ZVec = std::vector<Integer>;
using ZMat = std::vector<ZVec>;

QMat q_identity(size_t n);
QMat q_zero(size_t rows, size_t cols);
QMat transpose(const QMat& a);
QMat mul(const QMat& a, const QMat& b);
QVec mul(const QMat& a, const QVec& v);
Rational dot(const QVec& a, const QVec& b);
// a^t G b
Rational bilinear(const QMat& g, const QVec& a, const QVec& b);
QVec add(const QVec& a, const QVec& b);
QVec sub(const QVec& a, const QVec& b);
QVec scale(const Rational& r, const QVec& a);

Rational det(QMat a);
size_t rank(QMat a);
// Throws Error("DegenerateGram") when singular.
QMat inverse(const QMat& a);
bool is_integral(const QMat& a);
bool is_symmetric(const QMat& a);
// Pivots of a symmetric LDL^T elimination with symmetric pivoting allowed.
// Returns (positive, negative, zero) counts.
struct Inertia {
    size_t pos = 0, neg = 0, zero = 0;
};
Inertia inertia(const QMat& a);
bool is_positive_definite(const QMat& a);
bool is_positive_semidefinite(const QMat& a);

ZMat to_integer(const QMat& a);  // requires integral entries
QMat to_rational(const ZMat& a);
ZMat z_identity(size_t n);
ZMat mul(const ZMat& a, const ZMat& b);
ZVec mul(const ZMat& a, const ZVec& v);
ZMat transpose(const ZMat& a);

// U * A * V = D with U, V unimodular and D diagonal, d_1 | d_2 | ..., d_i >= 0.
struct SmithForm {
    ZMat U, V, Uinv;
    ZVec diag;  // length min(rows, cols)
    size_t rank = 0;
};
SmithForm smith_normal_form(const ZMat& a);

// Columns of the result form a Z-basis of the integer kernel of A.
ZMat integer_kernel(const ZMat& a, size_t cols);
// Z-basis (as columns) of the lattice spanned by the given columns, assuming full row rank.
ZMat lattice_basis(const ZMat& gens);
// Solve A x = b over Q for square invertible A.
QVec solve(const QMat& a, const QVec& b);
// Basis (columns) of the rational kernel of A.
QMat rational_kernel(const QMat& a, size_t cols);

}  // namespace jfk
