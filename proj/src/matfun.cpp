#include "branges/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <variant>

#include "branges/analytic.hpp"

namespace branges {

std::string to_string(Side s) { return s == Side::Left ? "left" : "right"; }
std::string to_string(FactorMode m) { return m == FactorMode::Plain ? "plain" : "canonical"; }

// ---------------------------------------------------------------- Projection

Projection Projection::zero(int n) { return {Matrix::Zero(n, n), 0}; }

Projection Projection::identity(int n) { return {Matrix::Identity(n, n), n}; }

Projection Projection::from_orthonormal(const Matrix& q, int n) {
    if (q.cols() == 0) return zero(n);
    return {q * q.adjoint(), static_cast<int>(q.cols())};
}

Projection Projection::from_matrix(const Matrix& m) {
    const Eigen::VectorXd s = singular_values(m);
    int r = 0;
    for (int i = 0; i < s.size(); ++i) r += s(i) > 0.5 ? 1 : 0;
    return {m, r};
}

bool Projection::is_valid(double tol) const {
    if (M.rows() != M.cols()) return false;
    const double scale = 1.0 + M.norm();
    if ((M * M - M).norm() > tol * scale) return false;
    if ((M - M.adjoint()).norm() > tol * scale) return false;
    const Eigen::VectorXd s = singular_values(M);
    int r = 0;
    for (int i = 0; i < s.size(); ++i) r += s(i) > 0.5 ? 1 : 0;
    return r == rank;
}

// ---------------------------------------------------------------- ElemFactor

Complex exp_partial_sum(Complex t, int m) {
    Complex acc = 0.0;
    for (int j = m; j >= 1; --j) acc = acc * t + 1.0 / static_cast<double>(j);
    return acc * t;
}

ElemFactor::ElemFactor(Complex z0_, Complex zk_, Projection p, int order_, FactorMode mode_)
    : z0(z0_), zk(zk_), P(std::move(p)), order(order_), mode(mode_) {
    if (zk == z0) throw DomainError("ElemFactor requires zk != z0");
    if (order < 1) throw DomainError("ElemFactor order must be positive");
}

Complex ElemFactor::scalar(Complex z) const {
    const Complex tz = t(z);
    if (mode == FactorMode::Plain) return 1.0 - tz;
    return (1.0 - tz) * std::exp(exp_partial_sum(tz, order));
}

Complex ElemFactor::scalar_derivative(Complex z) const {
    const Complex dt = 1.0 / (zk - z0);
    if (mode == FactorMode::Plain) return -dt;
    // d/dt [(1 - t) e^{g_m(t)}] = -t^m e^{g_m(t)} since g_m'(t) = (1 - t^m) / (1 - t).
    const Complex tz = t(z);
    return -std::pow(tz, order) * std::exp(exp_partial_sum(tz, order)) * dt;
}

Matrix ElemFactor::operator()(Complex z) const {
    const int n = dim();
    return Matrix::Identity(n, n) + (scalar(z) - 1.0) * P.M;
}

Matrix ElemFactor::derivative(Complex z) const { return scalar_derivative(z) * P.M; }

Matrix ElemFactor::inverse(Complex z) const {
    if (std::abs(z - zk) < 1e-12) throw SingularityError("inverse factor evaluated at its zero point");
    const int n = dim();
    if (mode == FactorMode::Plain) {
        return Matrix::Identity(n, n) - ((z - z0) / (z - zk)) * P.M;
    }
    const Complex tz = t(z);
    const Complex recip = std::exp(-exp_partial_sum(tz, order)) / (1.0 - tz);
    return Matrix::Identity(n, n) + (recip - 1.0) * P.M;
}

Matrix ElemFactor::inverse_derivative(Complex z) const {
    if (std::abs(z - zk) < 1e-12) throw SingularityError("inverse factor evaluated at its zero point");
    const Complex s = scalar(z);
    return (-scalar_derivative(z) / (s * s)) * P.M;
}

// ---------------------------------------------------------------- nodes

namespace detail {

struct PolyNode {
    MatPoly p;
};
struct ElemNode {
    ElemFactor f;
};
struct InverseNode {
    ElemFactor f;
};
struct ProductNode {
    MatFunList items;
};
struct SumNode {
    MatFunList items;
};
struct TwistNode {
    MatFun base;
    Projection P;
    Complex z0, zk;
    std::vector<Complex> coeffs;
    Side side;
};
struct DeflationNode {
    MatFun inner;
    Complex x, z0;
    Projection P;
    Side side;
    Matrix at_x;
    std::vector<Matrix> taylor;
};
struct DivDiffNode {
    MatFun inner;
    Complex alpha;
    Matrix at_alpha;
    std::vector<Matrix> taylor;
};
struct ReflectNode {
    MatFun inner;
};
struct DerivativeNode {
    MatFun inner;
};
struct FunctionNode {
    std::function<Matrix(Complex)> f;
    std::string label;
};
struct RemovableNode {
    MatFun inner;
    std::vector<Complex> points;
    std::vector<std::vector<Matrix>> taylor;
};

struct Node {
    int n;
    std::variant<PolyNode, ElemNode, InverseNode, ProductNode, SumNode, TwistNode, DeflationNode,
                 DivDiffNode, ReflectNode, DerivativeNode, FunctionNode, RemovableNode>
        v;
};

}  // namespace detail

namespace {

using detail::Node;

constexpr int kTaylorTerms = 12;

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double switch_radius(Complex x) { return kRemovableSwitch * (1.0 + std::abs(x)); }

Matrix numeric_derivative(const MatFun& f, Complex z) {
    auto c = taylor_coefficients([&](Complex w) { return f(w); }, z, taylor_radius(z), 2, 24);
    return c[1];
}

Complex twist_exponent(const detail::TwistNode& tw, Complex t) {
    Complex acc = 0.0;
    for (auto it = tw.coeffs.rbegin(); it != tw.coeffs.rend(); ++it) acc = acc * t + *it;
    return acc * t;
}

Complex twist_exponent_dt(const detail::TwistNode& tw, Complex t) {
    Complex acc = 0.0;
    for (int j = static_cast<int>(tw.coeffs.size()); j >= 1; --j) {
        acc = acc * t + static_cast<double>(j) * tw.coeffs[static_cast<std::size_t>(j - 1)];
    }
    return acc;
}

// Backward shift (inner(z) - inner(x)) / (z - x) from cached data.
Matrix shift_value(const MatFun& inner, Complex x, const Matrix& at_x, const std::vector<Matrix>& taylor,
                   Complex z) {
    const Complex h = z - x;
    if (std::abs(h) < switch_radius(x)) return taylor_shift_eval(taylor, h, 1);
    return (inner(z) - at_x) / h;
}

Matrix shift_derivative(const MatFun& inner, Complex x, const Matrix& at_x, const std::vector<Matrix>& taylor,
                        Complex z) {
    const Complex h = z - x;
    if (std::abs(h) < switch_radius(x)) {
        // d/dh sum_{j>=1} c_j h^{j-1} = sum_{j>=2} (j-1) c_j h^{j-2}
        std::vector<Matrix> d;
        for (std::size_t j = 1; j < taylor.size(); ++j) d.push_back(static_cast<double>(j - 1) * taylor[j]);
        return taylor_shift_eval(d, h, 1);
    }
    const Matrix dd = (inner(z) - at_x) / h;
    return (inner.eval_derivative(z) - dd) / h;
}

}  // namespace

// ---------------------------------------------------------------- MatFun

MatFun::MatFun(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

MatFun::MatFun(MatPoly p) : node_(std::make_shared<const Node>(Node{p.dim(), detail::PolyNode{std::move(p)}})) {}

MatFun MatFun::elem(ElemFactor f) {
    const int n = f.dim();
    return MatFun(std::make_shared<const Node>(Node{n, detail::ElemNode{std::move(f)}}));
}

MatFun MatFun::inverse(ElemFactor f) {
    const int n = f.dim();
    return MatFun(std::make_shared<const Node>(Node{n, detail::InverseNode{std::move(f)}}));
}

MatFun MatFun::product(MatFunList factors) {
    if (factors.empty()) throw DimensionError("empty product has no dimension");
    const int n = factors.front().dim();
    for (const auto& f : factors) {
        if (f.dim() != n) throw DimensionError("product factor dimension mismatch");
    }
    if (factors.size() == 1) return factors.front();
    return MatFun(std::make_shared<const Node>(Node{n, detail::ProductNode{std::move(factors)}}));
}

MatFun MatFun::sum(MatFunList terms) {
    if (terms.empty()) throw DimensionError("empty sum has no dimension");
    const int n = terms.front().dim();
    for (const auto& f : terms) {
        if (f.dim() != n) throw DimensionError("sum term dimension mismatch");
    }
    if (terms.size() == 1) return terms.front();
    return MatFun(std::make_shared<const Node>(Node{n, detail::SumNode{std::move(terms)}}));
}

MatFun MatFun::exp_twist(MatFun base, Projection p, Complex z0, Complex zk, std::vector<Complex> coeffs,
                         Side side) {
    const int n = base.dim();
    if (p.dim() != n) throw DimensionError("twist projection dimension mismatch");
    if (zk == z0) throw DomainError("twist requires zk != z0");
    return MatFun(std::make_shared<const Node>(
        Node{n, detail::TwistNode{std::move(base), std::move(p), z0, zk, std::move(coeffs), side}}));
}

MatFun MatFun::deflation(MatFun inner, Complex x, Complex z0, Projection p, Side side) {
    const int n = inner.dim();
    if (p.dim() != n) throw DimensionError("deflation projection dimension mismatch");
    if (const MatPoly* a = inner.as_poly()) {
        const MatPoly d = a->divided_difference(x);
        if (side == Side::Left) return MatPoly(*a - (p.M * d).times_linear(z0));
        return MatPoly(*a - (d * p.M).times_linear(z0));
    }
    Matrix at_x = inner(x);
    auto taylor = taylor_coefficients([&](Complex w) { return inner(w); }, x, taylor_radius(x), kTaylorTerms);
    return MatFun(std::make_shared<const Node>(
        Node{n, detail::DeflationNode{std::move(inner), x, z0, std::move(p), side, std::move(at_x), std::move(taylor)}}));
}

MatFun MatFun::function(int n, std::function<Matrix(Complex)> f, std::string label) {
    return MatFun(std::make_shared<const Node>(Node{n, detail::FunctionNode{std::move(f), std::move(label)}}));
}

MatFun MatFun::removable(MatFun inner, std::vector<Complex> points) {
    std::vector<Complex> unique;
    for (Complex p : points) {
        const bool seen = std::any_of(unique.begin(), unique.end(),
                                      [&](Complex q) { return std::abs(p - q) <= 1e-14 * (1.0 + std::abs(p)); });
        if (!seen) unique.push_back(p);
    }
    if (unique.empty()) return inner;
    std::vector<std::vector<Matrix>> taylor;
    for (Complex p : unique) {
        double radius = taylor_radius(p);
        for (Complex q : unique) {
            if (q != p) radius = std::min(radius, 0.4 * std::abs(p - q));
        }
        taylor.push_back(taylor_coefficients([&](Complex w) { return inner(w); }, p, radius, kTaylorTerms));
    }
    const int n = inner.dim();
    return MatFun(std::make_shared<const Node>(
        Node{n, detail::RemovableNode{std::move(inner), std::move(unique), std::move(taylor)}}));
}

MatFun::Kind MatFun::kind() const {
    return std::visit(Overloaded{
                          [](const detail::PolyNode&) { return Kind::Poly; },
                          [](const detail::ElemNode&) { return Kind::Elem; },
                          [](const detail::InverseNode&) { return Kind::Inverse; },
                          [](const detail::ProductNode&) { return Kind::Product; },
                          [](const detail::SumNode&) { return Kind::Sum; },
                          [](const detail::TwistNode&) { return Kind::ExpTwist; },
                          [](const detail::DeflationNode&) { return Kind::Deflation; },
                          [](const detail::DivDiffNode&) { return Kind::DividedDifference; },
                          [](const detail::ReflectNode&) { return Kind::Reflect; },
                          [](const detail::DerivativeNode&) { return Kind::Derivative; },
                          [](const detail::FunctionNode&) { return Kind::Function; },
                          [](const detail::RemovableNode&) { return Kind::Removable; },
                      },
                      node_->v);
}

std::string MatFun::kind_name() const {
    switch (kind()) {
        case Kind::Poly: return "matpoly";
        case Kind::Elem: return "elem_factor";
        case Kind::Inverse: return "inverse_factor";
        case Kind::Product: return "product";
        case Kind::Sum: return "sum";
        case Kind::ExpTwist: return "exp_twist";
        case Kind::Deflation: return "deflation";
        case Kind::DividedDifference: return "divided_difference";
        case Kind::Reflect: return "reflect";
        case Kind::Derivative: return "derivative";
        case Kind::Function: return std::get<detail::FunctionNode>(node_->v).label;
        case Kind::Removable: return "removable";
    }
    return "unknown";
}

int MatFun::dim() const { return node_->n; }

const MatPoly* MatFun::as_poly() const {
    if (const auto* p = std::get_if<detail::PolyNode>(&node_->v)) return &p->p;
    return nullptr;
}

Matrix MatFun::operator()(Complex z) const {
    const int n = node_->n;
    return std::visit(
        Overloaded{
            [&](const detail::PolyNode& p) -> Matrix { return p.p(z); },
            [&](const detail::ElemNode& e) -> Matrix { return e.f(z); },
            [&](const detail::InverseNode& e) -> Matrix { return e.f.inverse(z); },
            [&](const detail::ProductNode& p) -> Matrix {
                Matrix acc = p.items.front()(z);
                for (std::size_t i = 1; i < p.items.size(); ++i) acc = acc * p.items[i](z);
                return acc;
            },
            [&](const detail::SumNode& s) -> Matrix {
                Matrix acc = s.items.front()(z);
                for (std::size_t i = 1; i < s.items.size(); ++i) acc += s.items[i](z);
                return acc;
            },
            [&](const detail::TwistNode& tw) -> Matrix {
                const Complex t = (z - tw.z0) / (tw.zk - tw.z0);
                const Matrix w = Matrix::Identity(n, n) + (std::exp(twist_exponent(tw, t)) - 1.0) * tw.P.M;
                return tw.side == Side::Left ? Matrix(w * tw.base(z)) : Matrix(tw.base(z) * w);
            },
            [&](const detail::DeflationNode& d) -> Matrix {
                const Matrix dd = shift_value(d.inner, d.x, d.at_x, d.taylor, z);
                if (d.side == Side::Left) return d.inner(z) - (z - d.z0) * (d.P.M * dd);
                return d.inner(z) - (z - d.z0) * (dd * d.P.M);
            },
            [&](const detail::DivDiffNode& d) -> Matrix {
                return shift_value(d.inner, d.alpha, d.at_alpha, d.taylor, z);
            },
            [&](const detail::ReflectNode& r) -> Matrix { return r.inner(std::conj(z)).adjoint(); },
            [&](const detail::DerivativeNode& d) -> Matrix { return d.inner.eval_derivative(z); },
            [&](const detail::FunctionNode& f) -> Matrix { return f.f(z); },
            [&](const detail::RemovableNode& r) -> Matrix {
                for (std::size_t i = 0; i < r.points.size(); ++i) {
                    const Complex h = z - r.points[i];
                    if (std::abs(h) < switch_radius(r.points[i])) return taylor_shift_eval(r.taylor[i], h, 0);
                }
                return r.inner(z);
            },
        },
        node_->v);
}

Matrix MatFun::eval_derivative(Complex z) const {
    const int n = node_->n;
    return std::visit(
        Overloaded{
            [&](const detail::PolyNode& p) -> Matrix { return p.p.derivative()(z); },
            [&](const detail::ElemNode& e) -> Matrix { return e.f.derivative(z); },
            [&](const detail::InverseNode& e) -> Matrix { return e.f.inverse_derivative(z); },
            [&](const detail::ProductNode& p) -> Matrix {
                const std::size_t k = p.items.size();
                std::vector<Matrix> vals, ders;
                vals.reserve(k);
                ders.reserve(k);
                for (const auto& f : p.items) {
                    vals.push_back(f(z));
                    ders.push_back(f.eval_derivative(z));
                }
                Matrix total = Matrix::Zero(n, n);
                for (std::size_t i = 0; i < k; ++i) {
                    Matrix term = Matrix::Identity(n, n);
                    for (std::size_t j = 0; j < k; ++j) term = term * (j == i ? ders[j] : vals[j]);
                    total += term;
                }
                return total;
            },
            [&](const detail::SumNode& s) -> Matrix {
                Matrix acc = s.items.front().eval_derivative(z);
                for (std::size_t i = 1; i < s.items.size(); ++i) acc += s.items[i].eval_derivative(z);
                return acc;
            },
            [&](const detail::TwistNode& tw) -> Matrix {
                const Complex dt = 1.0 / (tw.zk - tw.z0);
                const Complex t = (z - tw.z0) * dt;
                const Complex e = std::exp(twist_exponent(tw, t));
                const Matrix w = Matrix::Identity(n, n) + (e - 1.0) * tw.P.M;
                const Matrix dw = (e * twist_exponent_dt(tw, t) * dt) * tw.P.M;
                if (tw.side == Side::Left) return dw * tw.base(z) + w * tw.base.eval_derivative(z);
                return tw.base.eval_derivative(z) * w + tw.base(z) * dw;
            },
            [&](const detail::DeflationNode& d) -> Matrix {
                const Matrix dd = shift_value(d.inner, d.x, d.at_x, d.taylor, z);
                const Matrix ddd = shift_derivative(d.inner, d.x, d.at_x, d.taylor, z);
                if (d.side == Side::Left) {
                    return d.inner.eval_derivative(z) - d.P.M * dd - (z - d.z0) * (d.P.M * ddd);
                }
                return d.inner.eval_derivative(z) - dd * d.P.M - (z - d.z0) * (ddd * d.P.M);
            },
            [&](const detail::DivDiffNode& d) -> Matrix {
                return shift_derivative(d.inner, d.alpha, d.at_alpha, d.taylor, z);
            },
            [&](const detail::ReflectNode& r) -> Matrix { return r.inner.eval_derivative(std::conj(z)).adjoint(); },
            [&](const detail::DerivativeNode&) -> Matrix { return numeric_derivative(*this, z); },
            [&](const detail::FunctionNode&) -> Matrix { return numeric_derivative(*this, z); },
            [&](const detail::RemovableNode& r) -> Matrix {
                for (std::size_t i = 0; i < r.points.size(); ++i) {
                    const Complex h = z - r.points[i];
                    if (std::abs(h) < switch_radius(r.points[i])) {
                        std::vector<Matrix> d;
                        for (std::size_t j = 1; j < r.taylor[i].size(); ++j) {
                            d.push_back(static_cast<double>(j) * r.taylor[i][j]);
                        }
                        return taylor_shift_eval(d, h, 0);
                    }
                }
                return r.inner.eval_derivative(z);
            },
        },
        node_->v);
}

std::vector<Complex> MatFun::singularities() const {
    std::vector<Complex> out;
    auto merge = [&](const MatFun& f) {
        auto s = f.singularities();
        out.insert(out.end(), s.begin(), s.end());
    };
    std::visit(Overloaded{
                   [&](const detail::InverseNode& e) { out.push_back(e.f.zk); },
                   [&](const detail::ProductNode& p) {
                       for (const auto& f : p.items) merge(f);
                   },
                   [&](const detail::SumNode& s) {
                       for (const auto& f : s.items) merge(f);
                   },
                   [&](const detail::TwistNode& tw) { merge(tw.base); },
                   [&](const detail::ReflectNode& r) {
                       for (Complex c : r.inner.singularities()) out.push_back(std::conj(c));
                   },
                   [&](const detail::DerivativeNode& d) { merge(d.inner); },
                   [](const auto&) {},
               },
               node_->v);
    return out;
}

MatFun derivative(const MatFun& f) {
    if (const MatPoly* p = f.as_poly()) return MatFun(p->derivative());
    return MatFun(std::make_shared<const Node>(Node{f.dim(), detail::DerivativeNode{f}}));
}

MatFun divided_difference(const MatFun& f, Complex alpha) {
    if (const MatPoly* p = f.as_poly()) return MatFun(p->divided_difference(alpha));
    Matrix at = f(alpha);
    auto taylor = taylor_coefficients([&](Complex w) { return f(w); }, alpha, taylor_radius(alpha), kTaylorTerms);
    return MatFun(std::make_shared<const Node>(
        Node{f.dim(), detail::DivDiffNode{f, alpha, std::move(at), std::move(taylor)}}));
}

MatFun adjoint_reflect(const MatFun& f) {
    const Node& node = f.node();
    if (const auto* p = std::get_if<detail::PolyNode>(&node.v)) return MatFun(p->p.adjoint_reflect());
    if (const auto* p = std::get_if<detail::ProductNode>(&node.v)) {
        MatFunList items;
        for (auto it = p->items.rbegin(); it != p->items.rend(); ++it) items.push_back(adjoint_reflect(*it));
        return MatFun::product(std::move(items));
    }
    if (const auto* s = std::get_if<detail::SumNode>(&node.v)) {
        MatFunList items;
        for (const auto& t : s->items) items.push_back(adjoint_reflect(t));
        return MatFun::sum(std::move(items));
    }
    auto reflect_factor = [](const ElemFactor& e) {
        return ElemFactor(std::conj(e.z0), std::conj(e.zk), e.P, e.order, e.mode);
    };
    if (const auto* e = std::get_if<detail::ElemNode>(&node.v)) return MatFun::elem(reflect_factor(e->f));
    if (const auto* e = std::get_if<detail::InverseNode>(&node.v)) return MatFun::inverse(reflect_factor(e->f));
    return MatFun(std::make_shared<const Node>(Node{f.dim(), detail::ReflectNode{f}}));
}

MatFun operator*(const MatFun& a, const MatFun& b) {
    if (a.as_poly() && b.as_poly()) return MatFun(*a.as_poly() * *b.as_poly());
    return MatFun::product({a, b});
}

}  // namespace branges
