#pragma once

#include <initializer_list>
#include <vector>

#include "branges/core.hpp"

namespace branges {

/// Matrix polynomial sum_k C_k z^k with square n x n complex coefficients.
///
/// Storage is normalized on construction: trailing coefficients whose norm is
/// below 1e-14 times the largest coefficient norm are dropped, so degree()
/// reports the index of the last meaningful coefficient. The zero polynomial
/// is stored as a single zero matrix.
class MatPoly {
public:
    MatPoly() : MatPoly(1) {}
    explicit MatPoly(int n);
    explicit MatPoly(std::vector<Matrix> coeffs);

    static MatPoly constant(const Matrix& c);
    static MatPoly identity(int n);
    /// Scalar (1 x 1) polynomial from coefficients in ascending order.
    static MatPoly scalar(std::initializer_list<Complex> coeffs);
    static MatPoly scalar(const std::vector<Complex>& coeffs);
    /// The linear polynomial (z - a) I.
    static MatPoly linear(int n, Complex a);
    /// Diagonal polynomial from scalar polynomials on the diagonal.
    static MatPoly diagonal(const std::vector<MatPoly>& entries);

    int dim() const { return n_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const Matrix& coeff(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
    const std::vector<Matrix>& coeffs() const { return coeffs_; }
    bool is_zero() const;

    /// Horner evaluation.
    Matrix operator()(Complex z) const;

    MatPoly derivative() const;
    /// Synthetic division by (z - alpha): returns Q with A(z) = (z - alpha) Q(z) + A(alpha).
    MatPoly divided_difference(Complex alpha) const;
    /// g(z) = f(conj z)^*: coefficients conjugate-transposed.
    MatPoly adjoint_reflect() const;
    /// Multiplication by the scalar factor (z - a).
    MatPoly times_linear(Complex a) const;

    MatPoly operator+(const MatPoly& rhs) const;
    MatPoly operator-(const MatPoly& rhs) const;
    MatPoly operator-() const;
    MatPoly operator*(const MatPoly& rhs) const;
    MatPoly operator*(Complex s) const;
    friend MatPoly operator*(const Matrix& m, const MatPoly& p);
    friend MatPoly operator*(const MatPoly& p, const Matrix& m);

    /// Largest coefficient spectral norm.
    double coeff_norm() const;

private:
    void normalize();

    int n_;
    std::vector<Matrix> coeffs_;
};

}  // namespace branges
