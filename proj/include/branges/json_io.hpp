#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "branges/assoc.hpp"
#include "branges/debranges.hpp"
#include "branges/factor.hpp"
#include "branges/spectral.hpp"

namespace branges::io {

using json = nlohmann::json;

// Complex numbers are [re, im] pairs everywhere.
json to_json(Complex z);
Complex complex_from_json(const json& j);
json to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, int n);
json to_json(const Vector& v);
Vector vector_from_json(const json& j);
json to_json(const std::vector<Complex>& zs);
std::vector<Complex> complex_list_from_json(const json& j);

/// {"n": n, "coeffs": [C_0, ..., C_d]} with each C_k a list of rows. For
/// n = 1 the coefficients may also be given as bare [re, im] pairs.
json to_json(const MatPoly& p);
MatPoly matpoly_from_json(const json& j);

/// {"n": n, "E_minus": MatPoly, "E_plus": MatPoly}.
json to_json(const DBOperator& e);
DBOperator dboperator_from_json(const json& j);

/// {"points": [[re, im], ...], "vectors": [[[re, im], ...], ...]}.
json combo_to_json(const KernelCombo& f);
KernelCombo combo_from_json(const json& j, const DBOperator& e);

json to_json(const ZeroRecord& r);
json to_json(const std::vector<ZeroRecord>& rs);
json to_json(const Projection& p);
json to_json(const ElemFactor& f);
json to_json(const FactorVerification& v);
json to_json(const Factorization& f);
json to_json(const RealFactorization& f);
json to_json(const JointFactorization& f);
json to_json(const CheckResult& c);
json to_json(const H1Report& r);
json to_json(const QuadResult& q);
json to_json(const InnerProductResult& r);
json to_json(const ProbeResult& p);
json to_json(const MembershipReport& r);
json to_json(const EmbedReport& r);
json to_json(const DivisionReport& r);
json to_json(const AssocReport& r);

/// Canonical input files of a fixture: (file name, content).
std::vector<std::pair<std::string, json>> fixture_files(const std::string& name);

/// json::parse wrapped to raise ParseError.
json parse(const std::string& text);

}  // namespace branges::io
