#include "branges/json_io.hpp"

#include "branges/fixtures.hpp"

namespace branges::io {

namespace {

template <class T>
T get_field(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad field '") + key + "': " + e.what());
    }
}

bool is_complex_pair(const json& j) { return j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number(); }

json optional_complex(const std::optional<Complex>& z) { return z ? to_json(*z) : json(nullptr); }

}  // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!is_complex_pair(j)) throw ParseError("complex numbers are [re, im] pairs");
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const Matrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) row.push_back(to_json(m(i, k)));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const json& j, int n) {
    if (n == 1 && (is_complex_pair(j) || j.is_number())) return Matrix::Constant(1, 1, complex_from_json(j));
    if (!j.is_array() || static_cast<int>(j.size()) != n) throw ParseError("matrix must have n rows");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != n) throw ParseError("matrix rows must have n entries");
        for (int k = 0; k < n; ++k) m(i, k) = complex_from_json(j[i][k]);
    }
    return m;
}

json to_json(const Vector& v) {
    json a = json::array();
    for (int i = 0; i < v.size(); ++i) a.push_back(to_json(v(i)));
    return a;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("vectors are lists of [re, im] pairs");
    Vector v(static_cast<int>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<int>(i)) = complex_from_json(j[i]);
    return v;
}

json to_json(const std::vector<Complex>& zs) {
    json a = json::array();
    for (Complex z : zs) a.push_back(to_json(z));
    return a;
}

std::vector<Complex> complex_list_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected a list of [re, im] pairs");
    std::vector<Complex> out;
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

json to_json(const MatPoly& p) {
    json c = json::array();
    for (const auto& m : p.coeffs()) c.push_back(to_json(m));
    return {{"n", p.dim()}, {"coeffs", c}};
}

MatPoly matpoly_from_json(const json& j) {
    const int n = get_field<int>(j, "n");
    if (n <= 0) throw ParseError("n must be positive");
    const json& c = j.at("coeffs");
    if (!c.is_array() || c.empty()) throw ParseError("coeffs must be a non-empty list");
    std::vector<Matrix> coeffs;
    for (const auto& m : c) coeffs.push_back(matrix_from_json(m, n));
    return MatPoly(std::move(coeffs));
}

json to_json(const DBOperator& e) {
    const MatPoly* m = e.E_minus.as_poly();
    const MatPoly* p = e.E_plus.as_poly();
    if (!m || !p) throw DomainError("only polynomial de Branges operators serialize");
    return {{"n", e.dim()}, {"E_minus", to_json(*m)}, {"E_plus", to_json(*p)}};
}

DBOperator dboperator_from_json(const json& j) {
    const int n = get_field<int>(j, "n");
    if (!j.contains("E_minus") || !j.contains("E_plus")) throw ParseError("missing E_minus or E_plus");
    MatPoly m = matpoly_from_json(j.at("E_minus"));
    MatPoly p = matpoly_from_json(j.at("E_plus"));
    if (m.dim() != n || p.dim() != n) throw ParseError("component dimensions differ from n");
    return {std::move(m), std::move(p)};
}

json combo_to_json(const KernelCombo& f) {
    json v = json::array();
    for (const auto& u : f.vectors()) v.push_back(to_json(u));
    return {{"points", to_json(f.points())}, {"vectors", v}};
}

KernelCombo combo_from_json(const json& j, const DBOperator& e) {
    if (!j.is_object() || !j.contains("points") || !j.contains("vectors")) {
        throw ParseError("kernel combos need 'points' and 'vectors'");
    }
    std::vector<Vector> vs;
    for (const auto& u : j.at("vectors")) vs.push_back(vector_from_json(u));
    try {
        return KernelCombo(e, complex_list_from_json(j.at("points")), std::move(vs));
    } catch (const DimensionError& err) {
        throw ParseError(err.what());
    }
}

json to_json(const ZeroRecord& r) { return {{"z", to_json(r.z)}, {"mult", r.mult}, {"defect", r.defect}}; }

json to_json(const std::vector<ZeroRecord>& rs) {
    json a = json::array();
    for (const auto& r : rs) a.push_back(to_json(r));
    return a;
}

json to_json(const Projection& p) { return {{"rank", p.rank}, {"matrix", to_json(p.M)}}; }

json to_json(const ElemFactor& f) {
    return {{"z0", to_json(f.z0)},       {"zk", to_json(f.zk)}, {"order", f.order},
            {"mode", to_string(f.mode)}, {"rank", f.P.rank},    {"P", to_json(f.P.M)}};
}

json to_json(const FactorVerification& v) {
    return {{"max_resid", v.max_resid},
            {"grid_points", v.grid_points},
            {"min_ratio_at_zeros", v.min_ratio_at_zeros},
            {"det_variation", v.det_variation ? json(*v.det_variation) : json(nullptr)},
            {"deflated_rank", v.deflated_rank},
            {"zero_mult_sum", v.zero_mult_sum},
            {"pass", v.pass}};
}

json to_json(const Factorization& f) {
    json factors = json::array();
    for (const auto& e : f.factors) factors.push_back(to_json(e));
    json residual;
    if (const MatPoly* p = f.residual.as_poly()) {
        residual = to_json(*p);
    } else {
        residual = {{"kind", f.residual.kind_name()}};
    }
    Complex det_at_base = f.residual(f.base).partialPivLu().determinant();
    return {{"side", to_string(f.side)},
            {"mode", to_string(f.mode)},
            {"base", to_json(f.base)},
            {"factors", factors},
            {"deflated_points", to_json(f.deflated_points)},
            {"target_mult", f.target_mult},
            {"residual", residual},
            {"residual_kind", f.residual.kind_name()},
            {"residual_det_at_base", to_json(det_at_base)},
            {"verification", to_json(f.verification)}};
}

json to_json(const RealFactorization& f) {
    json j = to_json(f.fact);
    j["min_real_ratio"] = f.min_real_ratio;
    j["real_grid_points"] = f.real_grid_points;
    return j;
}

json to_json(const JointFactorization& f) {
    json factors = json::array();
    for (const auto& e : f.factors) factors.push_back(to_json(e));
    json e0;
    try {
        e0 = to_json(f.E0);
    } catch (const DomainError&) {
        e0 = {{"kind", f.E0.E_plus.kind_name()}};
    }
    return {{"base", to_json(f.base)},
            {"factors", factors},
            {"common_real_zeros", to_json(f.common_real_zeros)},
            {"E0", e0},
            {"max_range_mismatch", f.max_range_mismatch},
            {"max_resid", f.max_resid},
            {"min_real_ratio", f.min_real_ratio}};
}

json to_json(const CheckResult& c) {
    return {{"name", c.name},           {"pass", c.pass},   {"value", c.value}, {"threshold", c.threshold},
            {"margin", c.margin},       {"witness", optional_complex(c.witness)}, {"note", c.note}};
}

json to_json(const H1Report& r) {
    json checks = json::array();
    for (const auto& c : r.checks) checks.push_back(to_json(c));
    return {{"checks", checks}, {"common_real_zeros", to_json(r.common_real_zeros)}, {"pass", r.pass}};
}

json to_json(const QuadResult& q) {
    return {{"value", to_json(q.value)}, {"l1", q.l1},
            {"T", q.T},                  {"doublings", q.doublings},
            {"converged", q.converged},  {"unresolved", q.unresolved}};
}

json to_json(const InnerProductResult& r) {
    return {{"value", to_json(r.value)},
            {"quad", to_json(r.quad)},
            {"value_minus", optional_complex(r.value_minus)},
            {"discrepancy", r.discrepancy ? json(*r.discrepancy) : json(nullptr)}};
}

json to_json(const ProbeResult& p) {
    return {{"z", to_json(p.z)},
            {"value_norm", p.value_norm},
            {"reproduction", p.reproduction},
            {"annihilation", p.annihilation},
            {"pass", p.pass}};
}

json to_json(const MembershipReport& r) {
    json probes = json::array();
    for (const auto& p : r.probes) probes.push_back(to_json(p));
    return {{"half_plane", to_string(r.half_plane)},
            {"l2_norm", r.l2_norm},
            {"square_integrable", r.square_integrable},
            {"probes", probes},
            {"pass", r.pass},
            {"note", r.note}};
}

json to_json(const EmbedReport& r) {
    json samples = json::array();
    for (const auto& s : r.samples) {
        samples.push_back({{"norm_E0", s.norm_E0}, {"norm_E", s.norm_E}, {"residual", s.residual}, {"pass", s.pass}});
    }
    return {{"samples", samples},
            {"precondition_resid", r.precondition_resid},
            {"max_residual", r.max_residual},
            {"pass", r.pass}};
}

json to_json(const DivisionReport& r) {
    return {{"case", to_string(r.which)},
            {"alpha", to_json(r.alpha)},
            {"f_alpha_norm", r.f_alpha_norm},
            {"g_norm", r.g_norm ? json(*r.g_norm) : json(nullptr)},
            {"upper", r.upper ? to_json(*r.upper) : json(nullptr)},
            {"lower", r.lower ? to_json(*r.lower) : json(nullptr)},
            {"pass", r.pass},
            {"note", r.note}};
}

json to_json(const AssocReport& r) {
    json up = json::array();
    json lo = json::array();
    for (const auto& m : r.upper_checks) up.push_back(to_json(m));
    for (const auto& m : r.lower_checks) lo.push_back(to_json(m));
    json j = {{"S_kind", r.S_kind}, {"alpha", to_json(r.alpha)}, {"upper_checks", up},
              {"lower_checks", lo}, {"pass", r.pass}};
    if (!r.sub_reports.empty()) {
        json subs = json::array();
        for (const auto& s : r.sub_reports) subs.push_back(to_json(s));
        j["sub_reports"] = subs;
        j["precondition_resid"] = r.precondition_resid;
    }
    return j;
}

std::vector<std::pair<std::string, json>> fixture_files(const std::string& name) {
    if (name == "scalar-cayley") return {{"E.json", to_json(fixtures::scalar_cayley())}};
    if (name == "diag-2") return {{"E.json", to_json(fixtures::diag2())}};
    if (name == "joint-real-zero") {
        return {{"E.json", to_json(fixtures::joint_real_zero())},
                {"N.json", to_json(fixtures::joint_real_zero_factor())},
                {"E0.json", to_json(fixtures::joint_real_zero_reduced())}};
    }
    if (name == "nilpotent-jordan") return {{"A.json", to_json(fixtures::nilpotent_jordan())}};
    throw UnknownFixtureError("unknown fixture '" + name + "'");
}

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(e.what());
    }
}

}  // namespace branges::io
