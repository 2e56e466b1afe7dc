#include <sstream>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "branges/assoc.hpp"
#include "branges/cli.hpp"
#include "branges/factor.hpp"
#include "branges/json_io.hpp"

namespace py = pybind11;
using namespace branges;

namespace {

MatPoly poly(const std::vector<Matrix>& coeffs) { return MatPoly(coeffs); }

DBOperator op(const std::vector<Matrix>& e_minus, const std::vector<Matrix>& e_plus) {
    return DBOperator(poly(e_minus), poly(e_plus));
}

KernelCombo combo(const DBOperator& e, const std::vector<Complex>& points, const std::vector<Vector>& vectors) {
    return KernelCombo(e, points, vectors);
}

FactorMode mode_of(const std::string& s) {
    if (s == "plain") return FactorMode::Plain;
    if (s == "canonical") return FactorMode::Canonical;
    throw py::value_error("mode must be 'plain' or 'canonical'");
}

Side side_of(const std::string& s) {
    if (s == "left") return Side::Left;
    if (s == "right") return Side::Right;
    throw py::value_error("side must be 'left' or 'right'");
}

py::dict check_dict(const CheckResult& c) {
    py::dict d;
    d["name"] = c.name;
    d["pass"] = c.pass;
    d["value"] = c.value;
    d["threshold"] = c.threshold;
    d["witness"] = c.witness ? py::cast(*c.witness) : py::none();
    d["note"] = c.note;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Factorization of matrix polynomials and de Branges space checks";
    py::register_exception<Error>(m, "BrangesError", PyExc_RuntimeError);
    m.attr("__version__") = cli::kToolVersion;

    m.def(
        "zeros",
        [](const std::vector<Matrix>& coeffs) {
            py::list out;
            for (const auto& r : zeros(poly(coeffs))) out.append(py::make_tuple(r.z, r.mult, r.defect));
            return out;
        },
        py::arg("coeffs"), "Zeros of det A as (z, multiplicity, defect); coeffs are C_0 .. C_d.");

    m.def(
        "factor",
        [](const std::vector<Matrix>& coeffs, Complex base, const std::string& side, const std::string& mode) {
            const MatPoly a = poly(coeffs);
            const Factorization f = factor_global(a, base, side_of(side), mode_of(mode));
            py::list factors;
            for (const auto& e : f.factors) {
                py::dict d;
                d["zk"] = e.zk;
                d["rank"] = e.P.rank;
                d["order"] = e.order;
                d["projection"] = e.P.M;
                factors.append(d);
            }
            py::dict out;
            out["factors"] = factors;
            out["max_resid"] = f.verification.max_resid;
            out["min_ratio_at_zeros"] = f.verification.min_ratio_at_zeros;
            out["deflated_rank"] = f.deflated_rank();
            out["pass"] = f.verification.pass;
            return out;
        },
        py::arg("coeffs"), py::arg("base") = Complex(0.0), py::arg("side") = "left", py::arg("mode") = "plain");

    m.def(
        "validate_h1",
        [](const std::vector<Matrix>& e_minus, const std::vector<Matrix>& e_plus) {
            const H1Report r = validate_h1(op(e_minus, e_plus));
            py::list checks;
            for (const auto& c : r.checks) checks.append(check_dict(c));
            py::dict out;
            out["pass"] = r.pass;
            out["checks"] = checks;
            out["common_real_zeros"] = r.common_real_zeros;
            return out;
        },
        py::arg("e_minus"), py::arg("e_plus"));

    m.def(
        "kernel",
        [](const std::vector<Matrix>& e_minus, const std::vector<Matrix>& e_plus, Complex w, Complex z) {
            return kernel(op(e_minus, e_plus), w, z);
        },
        py::arg("e_minus"), py::arg("e_plus"), py::arg("w"), py::arg("z"));

    m.def(
        "gram",
        [](const std::vector<Matrix>& e_minus, const std::vector<Matrix>& e_plus, const std::vector<Complex>& points,
           const std::vector<Vector>& vectors) { return gram(op(e_minus, e_plus), points, vectors); },
        py::arg("e_minus"), py::arg("e_plus"), py::arg("points"), py::arg("vectors"));

    m.def(
        "inner_product",
        [](const std::vector<Matrix>& e_minus, const std::vector<Matrix>& e_plus, const std::vector<Complex>& f_points,
           const std::vector<Vector>& f_vectors, const std::vector<Complex>& g_points,
           const std::vector<Vector>& g_vectors) {
            const DBOperator e = op(e_minus, e_plus);
            const KernelCombo f = combo(e, f_points, f_vectors);
            const KernelCombo g = combo(e, g_points, g_vectors);
            const InnerProductResult q = inner_product_quadrature(f, g);
            py::dict out;
            out["quadrature"] = q.value;
            out["closed_form"] = inner_product_closed_form(f, g);
            out["doublings"] = q.quad.doublings;
            return out;
        },
        py::arg("e_minus"), py::arg("e_plus"), py::arg("f_points"), py::arg("f_vectors"), py::arg("g_points"),
        py::arg("g_vectors"), "Quadrature inner product of two kernel combinations and its closed form.");

    m.def(
        "associated",
        [](const std::vector<Matrix>& s, Complex alpha, const std::vector<Matrix>& e_minus,
           const std::vector<Matrix>& e_plus) {
            return associated_check(AssociatedQuery(poly(s), alpha, op(e_minus, e_plus))).pass;
        },
        py::arg("s"), py::arg("alpha"), py::arg("e_minus"), py::arg("e_plus"));

    m.def(
        "fixture",
        [](const std::string& name) {
            py::dict out;
            for (const auto& [file, content] : io::fixture_files(name)) out[py::str(file)] = content.dump();
            return out;
        },
        py::arg("name"), "Canonical fixture files as JSON text keyed by file name.");

    m.def(
        "run_cli",
        [](const std::vector<std::string>& args) {
            std::ostringstream out, err;
            const int code = cli::run(args, out, err);
            return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"), "Runs the command line front end; returns (exit code, stdout, stderr).");
}
