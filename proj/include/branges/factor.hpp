#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "branges/dbop.hpp"
#include "branges/matfun.hpp"
#include "branges/spectral.hpp"

namespace branges {

struct FactorOptions {
    /// Rank tolerance for singularity decisions; negative selects default_rank_tol.
    double rank_tol = -1.0;
    ZeroOptions zero_opts;
    /// Zeros with |Im z| <= real_axis_tol * (1 + |z|) count as real.
    double real_axis_tol = 1e-6;
    /// Base point; when unset, factor_real and factor_joint search for one.
    std::optional<Complex> base;
    int verify_points = 100;
    unsigned verify_seed = 7;
};

/// One deflation: A = factor * residual (left) or A = residual * factor (right).
struct DeflationStep {
    ElemFactor factor;
    MatFun residual;
};

/// Removes the cokernel (left) or kernel (right) of A(x) with a factor of the
/// given order. Plain-mode residuals of polynomial inputs stay polynomial.
DeflationStep deflate_left(const MatFun& a, Complex x, Complex z0, FactorMode mode, int order = 1,
                           double rank_tol = -1.0);
DeflationStep deflate_right(const MatFun& a, Complex x, Complex z0, FactorMode mode, int order = 1,
                            double rank_tol = -1.0);

struct FactorVerification {
    /// max ||A(z) - reconstruction(z)|| / (1 + ||A(z)||) over the grid.
    double max_resid = 0.0;
    int grid_points = 0;
    /// min sigma_min / sigma_max of the residual at the deflated zeros.
    double min_ratio_at_zeros = 1.0;
    /// Relative spread of det(residual) over the grid; plain polynomial residuals only.
    std::optional<double> det_variation;
    int deflated_rank = 0;
    int zero_mult_sum = 0;
    bool pass = false;
};

struct Factorization {
    Side side = Side::Left;
    FactorMode mode = FactorMode::Plain;
    Complex base = 0.0;
    /// In deflation order.
    std::vector<ElemFactor> factors;
    MatFun residual{MatPoly(1)};
    /// Total multiplicity of the zeros targeted for deflation.
    int target_mult = 0;
    /// Distinct zero locations that were deflated.
    std::vector<Complex> deflated_points;
    FactorVerification verification;

    /// F_1 ... F_k for the left side, F_k ... F_1 for the right side.
    MatFun factor_product() const;
    Matrix factor_product(Complex z) const;
    /// factor_product * residual (left) or residual * factor_product (right).
    Matrix reconstruct(Complex z) const;
    int deflated_rank() const;
};

/// Reconstruction, residual-conditioning and determinant checks on a seeded
/// grid in |z - z0| <= 2 max |zk - z0|. The determinant of the residual is
/// checked for constancy only when all zeros were targeted.
FactorVerification verify_factorization(const Factorization& f, const MatPoly& a, const FactorOptions& opts = {},
                                        bool all_zeros = true);

Factorization factor_global(const MatPoly& a, Complex z0, Side side, FactorMode mode,
                            const FactorOptions& opts = {});

/// Base point with A(z0) well conditioned: the first of 0, 1, -1, i, -i with
/// sigma ratio >= 1e-3, else the best of those and 16 seeded random points.
Complex choose_base_point(const std::vector<MatPoly>& funcs);

struct RealFactorization {
    Factorization fact;
    /// Smallest sigma ratio of the residual on the real verification grid.
    double min_real_ratio = 0.0;
    int real_grid_points = 0;
};

/// Deflates the real zeros only (left side).
RealFactorization factor_real(const MatPoly& a, FactorMode mode, const FactorOptions& opts = {});

struct JointFactorization {
    MatFun N{MatPoly(1)};
    std::vector<ElemFactor> factors;
    DBOperator E0{MatPoly(1), MatPoly(1)};
    Complex base = 0.0;
    std::vector<Complex> common_real_zeros;
    /// max ||Pi_plus - Pi_minus|| over deflation steps.
    double max_range_mismatch = 0.0;
    /// max over the grid of ||E_pm - N E0_pm|| / (1 + ||E_pm||).
    double max_resid = 0.0;
    double min_real_ratio = 0.0;
};

/// Deflates the common real zeros of det E_plus and det E_minus with shared
/// projections. Requires polynomial components.
JointFactorization factor_joint(const DBOperator& e, FactorMode mode, const FactorOptions& opts = {});

/// G_N(z) = prod_{k=1}^N canonical factors of order k.
Matrix partial_product(const std::vector<std::pair<Complex, Projection>>& factors, Complex z0, int count,
                       Complex z);

struct TailBound {
    double mu = 0.0;
    int n = 0;
    double bound = 0.0;
};

/// exp(mu^(n+1) / (1 - mu)) - 1.
TailBound truncation_bound(double mu, int n);

struct InequalityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
};

/// 1 - (1 - mu) exp(g_n(mu)) against exp(mu^(n+1) / (1 - mu)) - 1.
InequalityCheck exponential_inequality(double mu, int n);

/// 1 + ||A_1 ... A_k - I|| against prod_j (1 + ||A_j - I||), spectral norms.
InequalityCheck norm_inequality(const std::vector<Matrix>& factors);

/// ||G_n(z)|| (exp(sum_{k=n+1}^s e_k) - exp(sum_{k=n+1}^r e_k)), e_k = mu_k^(k+1) / (1 - mu_k),
/// mu_k = |(z - z0) / (z_k - z0)|; requires n <= r <= s and mu_k < 1 for k > n.
double cauchy_estimate(const std::vector<std::pair<Complex, Projection>>& factors, Complex z0, Complex z, int n,
                       int r, int s);

}  // namespace branges
