#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "branges/core.hpp"
#include "branges/matpoly.hpp"

namespace branges {

enum class Side { Left, Right };
enum class FactorMode { Plain, Canonical };

std::string to_string(Side s);
std::string to_string(FactorMode m);

/// Orthogonal projection on C^n together with its rank.
struct Projection {
    Matrix M;
    int rank = 0;

    static Projection zero(int n);
    static Projection identity(int n);
    /// Projector Q Q^* onto the span of the orthonormal columns of Q.
    static Projection from_orthonormal(const Matrix& q, int n);
    /// Wraps a matrix, computing the rank from its singular values.
    static Projection from_matrix(const Matrix& m);

    int dim() const { return static_cast<int>(M.rows()); }
    /// Idempotent and Hermitian within tol, and rank matches the singular values.
    bool is_valid(double tol = 1e-10) const;
};

/// g_m(t) = sum_{j=1}^m t^j / j.
Complex exp_partial_sum(Complex t, int m);

/// One Weierstrass-type factor built on an orthogonal projection P.
///
/// With t = (z - z0) / (zk - z0) the factor equals I + (s(t) - 1) P, where
/// s(t) = 1 - t in plain mode and s(t) = (1 - t) exp(g_m(t)) in canonical
/// mode. The closed form is exact because P is idempotent.
struct ElemFactor {
    Complex z0;
    Complex zk;
    Projection P;
    int order = 1;
    FactorMode mode = FactorMode::Plain;

    ElemFactor(Complex z0, Complex zk, Projection p, int order = 1, FactorMode mode = FactorMode::Plain);

    int dim() const { return P.dim(); }
    Complex t(Complex z) const { return (z - z0) / (zk - z0); }
    /// Eigenvalue of the factor on the range of P.
    Complex scalar(Complex z) const;
    /// d s(t(z)) / dz.
    Complex scalar_derivative(Complex z) const;

    Matrix operator()(Complex z) const;
    Matrix derivative(Complex z) const;
    /// Exact inverse; SingularityError within 1e-12 of zk.
    Matrix inverse(Complex z) const;
    Matrix inverse_derivative(Complex z) const;
};

class MatFun;
using MatFunList = std::vector<MatFun>;

namespace detail {
struct Node;
}

/// Immutable matrix-valued function: a tree of polynomial leaves, elementary
/// factors and compositions. Copies share structure; evaluation is pure.
class MatFun {
public:
    enum class Kind {
        Poly,
        Elem,
        Inverse,
        Product,
        Sum,
        ExpTwist,
        Deflation,
        DividedDifference,
        Reflect,
        Derivative,
        Function,
        Removable,
    };

    MatFun(MatPoly p);  // NOLINT(google-explicit-constructor): polynomials are functions
    static MatFun elem(ElemFactor f);
    static MatFun inverse(ElemFactor f);
    static MatFun product(MatFunList factors);
    static MatFun sum(MatFunList terms);
    /// exp(q(t) P) applied on the given side of base, q(t) = sum_j coeffs[j-1] t^j,
    /// t = (z - z0) / (zk - z0).
    static MatFun exp_twist(MatFun base, Projection p, Complex z0, Complex zk,
                            std::vector<Complex> coeffs, Side side);
    /// The plain-mode inverse factor applied to inner, with the removable
    /// singularity at x resolved:
    ///   Left:  inner(z) - (z - z0) P (R_x inner)(z)
    ///   Right: inner(z) - (R_x inner)(z) P (z - z0)
    static MatFun deflation(MatFun inner, Complex x, Complex z0, Projection p, Side side);
    static MatFun function(int n, std::function<Matrix(Complex)> f, std::string label = "function");
    /// inner with removable singularities at the given points resolved by
    /// Taylor expansion from a small circle; inner is never evaluated within
    /// the switch radius of those points.
    static MatFun removable(MatFun inner, std::vector<Complex> points);

    Kind kind() const;
    std::string kind_name() const;
    int dim() const;
    const MatPoly* as_poly() const;

    Matrix operator()(Complex z) const;
    Matrix eval_derivative(Complex z) const;

    /// Zero points of InverseFactor nodes (points where evaluation throws).
    std::vector<Complex> singularities() const;

    const detail::Node& node() const { return *node_; }

private:
    explicit MatFun(std::shared_ptr<const detail::Node> node);
    std::shared_ptr<const detail::Node> node_;
    friend struct detail::Node;
    friend MatFun derivative(const MatFun& f);
    friend MatFun divided_difference(const MatFun& f, Complex alpha);
    friend MatFun adjoint_reflect(const MatFun& f);
};

/// Exact for polynomials; otherwise a node evaluating the closed-form
/// derivative (product rule, scalar calculus on projection eigenvalues).
MatFun derivative(const MatFun& f);
/// R_alpha f. Synthetic division for polynomials, two-branch numeric node otherwise.
MatFun divided_difference(const MatFun& f, Complex alpha);
/// g(z) = f(conj z)^*.
MatFun adjoint_reflect(const MatFun& f);

MatFun operator*(const MatFun& a, const MatFun& b);

}  // namespace branges
