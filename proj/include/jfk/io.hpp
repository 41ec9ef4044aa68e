#pragma once

// JSON documents for every module. Numbers are exact strings; maps are sorted,
// so dumping is deterministic.

#include "jfk/jacobi.hpp"
#include "jfk/matrix_index.hpp"
#include "jfk/weil.hpp"

#include "json.hpp"

namespace jfk::io {

using json = nlohmann::json;

json to_json(const Rational& r);
Rational rational_from(const json& j);  // accepts "p/q" strings and integers
json to_json(const QVec& v);
json to_json(const QMat& m);
QVec qvec_from(const json& j);
QMat qmat_from(const json& j);
json to_json(const ZMat& m);
Elt elt_from(const json& j);

json to_json(const Cyclotomic& c);
Cyclotomic cyclotomic_from(const json& j);  // also accepts a bare rational
json to_json(const KElement& k);
KElement kelement_from(const json& j, long d);

json to_json(const ZLattice& l);
ZLattice zlattice_from(const json& j);
json to_json(const OLattice& m);
OLattice olattice_from(const json& j);

json to_json(const Fqm& a);
Fqm fqm_from(const json& j);
json to_json(const Fqm& a, const Subgroup& s);  // {gens}
Subgroup subgroup_from(const Fqm& a, const json& j);

json to_json(const HorizontalData& h);  // {hm_gens, iota_images}
HorizontalData horizontal_from(const Fqm& dm, const Fqm& d, const json& j);

json to_json(const ModularFormData& f, bool with_bounds = false);
ModularFormData form_from(const json& j);

// {lattice, D, H, window, entries}; beta is a residue vector of Delta_H.
json to_json(const JacobiExpansion& phi);
JacobiExpansion expansion_from(const json& j);

json to_json(const CMatrix& m);

MatrixIndexInput mindex_from(const json& j);
json to_json(const MatrixIndexSetting& s);
json to_json(const MatrixJacobiExpansion& e, const MatrixIndexSetting& s);

json to_json(const Witness& w);
json to_json(const PeriodicityCheck& p);
json to_json(const PullupReport& r);
json to_json(const Descent& d, const Fqm& parent);  // I as generators in parent

}  // namespace jfk::io
