#include "branges/matpoly.hpp"

#include <algorithm>

namespace branges {

namespace {

void require_same_dim(const MatPoly& a, const MatPoly& b) {
    if (a.dim() != b.dim()) throw DimensionError("MatPoly dimension mismatch");
}

}  // namespace

MatPoly::MatPoly(int n) : n_(n), coeffs_{Matrix::Zero(n, n)} {
    if (n <= 0) throw DimensionError("MatPoly dimension must be positive");
}

MatPoly::MatPoly(std::vector<Matrix> coeffs) : n_(0), coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) throw DimensionError("MatPoly needs at least one coefficient");
    n_ = static_cast<int>(coeffs_.front().rows());
    if (n_ <= 0) throw DimensionError("MatPoly dimension must be positive");
    for (const auto& c : coeffs_) {
        if (c.rows() != n_ || c.cols() != n_) throw DimensionError("MatPoly coefficients must be n x n");
    }
    normalize();
}

MatPoly MatPoly::constant(const Matrix& c) { return MatPoly(std::vector<Matrix>{c}); }

MatPoly MatPoly::identity(int n) { return constant(Matrix::Identity(n, n)); }

MatPoly MatPoly::scalar(std::initializer_list<Complex> coeffs) {
    return scalar(std::vector<Complex>(coeffs));
}

MatPoly MatPoly::scalar(const std::vector<Complex>& coeffs) {
    std::vector<Matrix> m;
    m.reserve(coeffs.size());
    for (Complex c : coeffs) m.push_back(Matrix::Constant(1, 1, c));
    if (m.empty()) m.push_back(Matrix::Zero(1, 1));
    return MatPoly(std::move(m));
}

MatPoly MatPoly::linear(int n, Complex a) {
    return MatPoly(std::vector<Matrix>{-a * Matrix::Identity(n, n), Matrix::Identity(n, n)});
}

MatPoly MatPoly::diagonal(const std::vector<MatPoly>& entries) {
    const int n = static_cast<int>(entries.size());
    if (n == 0) throw DimensionError("diagonal needs at least one entry");
    int d = 0;
    for (const auto& e : entries) {
        if (e.dim() != 1) throw DimensionError("diagonal entries must be scalar");
        d = std::max(d, e.degree());
    }
    std::vector<Matrix> c(static_cast<std::size_t>(d + 1), Matrix::Zero(n, n));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k <= entries[i].degree(); ++k) c[k](i, i) = entries[i].coeff(k)(0, 0);
    }
    return MatPoly(std::move(c));
}

bool MatPoly::is_zero() const {
    return coeffs_.size() == 1 && coeffs_.front().isZero(0.0);
}

void MatPoly::normalize() {
    double max_norm = 0.0;
    for (const auto& c : coeffs_) max_norm = std::max(max_norm, spectral_norm(c));
    const double threshold = 1e-14 * max_norm;
    while (coeffs_.size() > 1 && spectral_norm(coeffs_.back()) <= threshold) coeffs_.pop_back();
}

Matrix MatPoly::operator()(Complex z) const {
    Matrix acc = coeffs_.back();
    for (int k = degree() - 1; k >= 0; --k) {
        acc *= z;
        acc += coeffs_[static_cast<std::size_t>(k)];
    }
    return acc;
}

MatPoly MatPoly::derivative() const {
    if (degree() == 0) return MatPoly(n_);
    std::vector<Matrix> d;
    d.reserve(coeffs_.size() - 1);
    for (int k = 1; k <= degree(); ++k) d.push_back(static_cast<double>(k) * coeffs_[k]);
    return MatPoly(std::move(d));
}

MatPoly MatPoly::divided_difference(Complex alpha) const {
    if (degree() == 0) return MatPoly(n_);
    // Synthetic division: q_{d-1} = c_d, q_{k-1} = c_k + alpha q_k.
    std::vector<Matrix> q(static_cast<std::size_t>(degree()), Matrix::Zero(n_, n_));
    q[degree() - 1] = coeffs_.back();
    for (int k = degree() - 1; k >= 1; --k) q[k - 1] = coeffs_[k] + alpha * q[k];
    return MatPoly(std::move(q));
}

MatPoly MatPoly::adjoint_reflect() const {
    std::vector<Matrix> c;
    c.reserve(coeffs_.size());
    for (const auto& m : coeffs_) c.push_back(m.adjoint());
    return MatPoly(std::move(c));
}

MatPoly MatPoly::times_linear(Complex a) const {
    std::vector<Matrix> c(coeffs_.size() + 1, Matrix::Zero(n_, n_));
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        c[k + 1] += coeffs_[k];
        c[k] -= a * coeffs_[k];
    }
    return MatPoly(std::move(c));
}

MatPoly MatPoly::operator+(const MatPoly& rhs) const {
    require_same_dim(*this, rhs);
    std::vector<Matrix> c(std::max(coeffs_.size(), rhs.coeffs_.size()), Matrix::Zero(n_, n_));
    for (std::size_t k = 0; k < coeffs_.size(); ++k) c[k] += coeffs_[k];
    for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) c[k] += rhs.coeffs_[k];
    return MatPoly(std::move(c));
}

MatPoly MatPoly::operator-(const MatPoly& rhs) const { return *this + (-rhs); }

MatPoly MatPoly::operator-() const {
    std::vector<Matrix> c;
    c.reserve(coeffs_.size());
    for (const auto& m : coeffs_) c.push_back(-m);
    return MatPoly(std::move(c));
}

MatPoly MatPoly::operator*(const MatPoly& rhs) const {
    require_same_dim(*this, rhs);
    std::vector<Matrix> c(coeffs_.size() + rhs.coeffs_.size() - 1, Matrix::Zero(n_, n_));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) c[i + j] += coeffs_[i] * rhs.coeffs_[j];
    }
    return MatPoly(std::move(c));
}

MatPoly MatPoly::operator*(Complex s) const {
    std::vector<Matrix> c;
    c.reserve(coeffs_.size());
    for (const auto& m : coeffs_) c.push_back(s * m);
    return MatPoly(std::move(c));
}

MatPoly operator*(const Matrix& m, const MatPoly& p) {
    std::vector<Matrix> c;
    c.reserve(p.coeffs_.size());
    for (const auto& k : p.coeffs_) c.push_back(m * k);
    return MatPoly(std::move(c));
}

MatPoly operator*(const MatPoly& p, const Matrix& m) {
    std::vector<Matrix> c;
    c.reserve(p.coeffs_.size());
    for (const auto& k : p.coeffs_) c.push_back(k * m);
    return MatPoly(std::move(c));
}

double MatPoly::coeff_norm() const {
    double m = 0.0;
    for (const auto& c : coeffs_) m = std::max(m, spectral_norm(c));
    return m;
}

}  // namespace branges
