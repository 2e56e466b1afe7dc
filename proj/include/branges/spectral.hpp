#pragma once

#include <vector>

#include "branges/core.hpp"
#include "branges/matfun.hpp"
#include "branges/matpoly.hpp"

namespace branges {

struct RankReport {
    int rank = 0;
    Eigen::VectorXd singular_values;  // nonincreasing
    double tol_used = 0.0;
};

struct ZeroRecord {
    Complex z;
    int mult = 1;
    int defect = 1;
};

/// sigma_max * n * sqrt(eps).
double default_rank_tol(const Matrix& m);

/// Numerical rank; tol < 0 selects default_rank_tol.
RankReport numerical_rank(const Matrix& m, double tol = -1.0);

/// Magnitude of the terms of A at z: sum_k ||C_k|| |z|^k.
double term_scale(const MatPoly& a, Complex z);

/// Magnitude of f near z: term_scale for polynomials, otherwise the largest
/// norm on a small circle around z.
double local_scale(const MatFun& f, Complex z);

/// Rank tolerance for f(z) measured against the local size of f rather than
/// against ||f(z)||, which vanishes at zeros of scalar functions.
/// n * sqrt(eps) * max(||f(z)||, local_scale(f, z)); user_tol >= 0 wins.
double rank_tol_at(const MatFun& f, Complex z, double user_tol = -1.0);

/// Orthogonal projector onto the left singular vectors with sigma <= tol.
Projection cokernel_projection(const Matrix& m, double tol = -1.0);
/// Orthogonal projector onto the right singular vectors with sigma <= tol.
Projection kernel_projection(const Matrix& m, double tol = -1.0);

/// Coefficients of det A(z) as a 1 x 1 polynomial, from n*d + 1 samples on a
/// scaled circle and an inverse DFT. Coefficients below 1e-10 of the largest
/// are discarded.
MatPoly det_poly(const MatPoly& a);

struct ZeroOptions {
    /// Absolute merge radius; negative selects 1e-8 * (1 + |z|).
    double cluster_radius = -1.0;
    /// Also merge clusters closer than the expected eps^(1/m) splitting of an
    /// m-fold eigenvalue, so Jordan-type zeros are not reported as pairs.
    bool multiplicity_aware = true;
    /// One Newton step on det A for simple roots.
    bool polish = true;
    /// Rank tolerance for the defect; negative selects default_rank_tol.
    double rank_tol = -1.0;
};

/// Finite zeros of det A via the block companion pencil (QZ). Throws
/// ZeroPolynomialError when det A vanishes identically.
std::vector<ZeroRecord> zeros(const MatPoly& a, const ZeroOptions& opts = {});

/// True if det A vanishes identically (A singular at seeded random points).
bool det_identically_zero(const MatPoly& a);

/// Strict weak order "a is nearer to z0 than b": modulus of the offset, then
/// principal argument, then (Re, Im).
bool nearer_to(Complex z0, Complex a, Complex b);

void sort_by_distance(std::vector<ZeroRecord>& zs, Complex z0);

}  // namespace branges
