#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "branges/dbop.hpp"
#include "branges/matfun.hpp"
#include "branges/quadrature.hpp"

namespace branges {

using VectorFunction = std::function<Vector(Complex)>;

// ---------------------------------------------------------------- H1 validation

struct GridSpec {
    int re_points = 15;
    int im_points = 15;
    double re_max = 10.0;
    double im_min = 1e-2;
    double im_max = 10.0;
    int real_points = 200;
    double real_max = 10.0;
    std::vector<double> refine_offsets{1e-3, 1e-2, 1e-1};

    /// re_points x im_points rectangle with log-spaced |Re z| and Im z > 0.
    std::vector<Complex> upper() const;
    std::vector<Complex> lower() const;
    /// Uniform real grid plus x +- offset around each refinement centre.
    std::vector<double> real(const std::vector<double>& centres = {}) const;
};

struct H1Tolerances {
    /// Invertibility on the half-plane grids: sigma ratio above this.
    double invertible_ratio = 1e-10;
    /// sigma_max(E_plus^-1 E_minus) <= 1 + schur_slack.
    double schur_slack = 1e-10;
    /// ||chi^* chi - I|| and ||chi chi^* - I|| <= inner_tol * n on the real grid.
    double inner_tol = 1e-8;
    /// Structural identities on the real line and under reflection, relative to ||E_plus||^2 + ||E_minus||^2.
    double identity_tol = 1e-8;
    /// Kernel diagonal eigenvalues >= -kernel_tol * ||K||.
    double kernel_tol = 1e-8;
    /// Real zeros of det E_plus and det E_minus must agree within this times (1 + |x|).
    double pole_radius = 1e-8;
    /// Douglas range equality ||Pi_plus - Pi_minus|| bound.
    double range_tol = 1e-6;
    /// Real grid points closer than this to a det root are skipped by the inner checks.
    double pole_exclusion = 1e-6;
};

struct CheckResult {
    std::string name;
    bool pass = true;
    /// Worst observed value of the checked quantity.
    double value = 0.0;
    /// Threshold the value is compared against.
    double threshold = 0.0;
    /// Signed slack; positive when passing.
    double margin = 0.0;
    std::optional<Complex> witness;
    std::string note;
};

struct H1Report {
    std::vector<CheckResult> checks;
    bool pass = true;
    /// Common real zeros (where both determinants vanish).
    std::vector<Complex> common_real_zeros;

    const CheckResult* find(const std::string& name) const;
};

/// Hypothesis H1 items, the structural identities, kernel diagonal positivity,
/// agreement of the real pole sets and the range equality at common zeros.
/// Failures are recorded in the report; nothing is thrown.
H1Report validate_h1(const DBOperator& e, const GridSpec& grid = {}, const H1Tolerances& tol = {});

/// Real zeros of det E_plus and det E_minus (polynomial components only).
std::vector<double> real_det_roots(const MatFun& f, double imag_tol = 1e-6);

// ---------------------------------------------------------------- kernel

inline constexpr double kConfluentRadius = 1e-8;

/// (E+(z) E+(w)^* - E-(z) E-(w)^*) / rho_w(z), confluent branch within 1e-8 of conj(w).
Matrix kernel(const DBOperator& e, Complex w, Complex z);

/// The section z -> K_w(z) of a polynomial de Branges operator as a matrix
/// polynomial, obtained by dividing the numerator by (z - conj w). Requires the
/// numerator to vanish at conj w (reflection identity); DomainError otherwise.
MatPoly kernel_section(const DBOperator& e, Complex w);

/// z -> K_w(z) as a matrix function: the polynomial section when available.
MatFun kernel_function(const DBOperator& e, Complex w);

/// Finite combination f(z) = sum_i K_{w_i}(z) u_i.
class KernelCombo {
public:
    KernelCombo(DBOperator e, std::vector<Complex> points, std::vector<Vector> vectors);
    static KernelCombo empty(const DBOperator& e);

    Vector operator()(Complex z) const;
    Vector derivative(Complex z) const;
    const std::vector<Complex>& points() const { return points_; }
    const std::vector<Vector>& vectors() const { return vectors_; }
    std::size_t size() const { return points_.size(); }
    int dim() const { return e_.dim(); }
    const DBOperator& op() const { return e_; }
    /// Coefficients of the vector polynomial when the sections are polynomial.
    const std::optional<std::vector<Vector>>& coefficients() const { return coeffs_; }
    VectorFunction as_function() const;

private:
    DBOperator e_;
    std::vector<Complex> points_;
    std::vector<Vector> vectors_;
    std::optional<std::vector<Vector>> coeffs_;
};

/// G[i][j] = <K_{z_j}(z_i) u_j, u_i> = u_i^* K_{z_j}(z_i) u_j.
Matrix gram(const DBOperator& e, const std::vector<Complex>& points, const std::vector<Vector>& vectors);

/// <f, g> = sum_j y_j^* f(v_j) for g = sum_j K_{v_j} y_j (reproducing property).
Complex inner_product_closed_form(const KernelCombo& f, const KernelCombo& g);

// ---------------------------------------------------------------- quadrature inner products

struct InnerProductResult {
    Complex value = 0.0;
    QuadResult quad;
    /// Same integral with E_minus^-1, when requested.
    std::optional<Complex> value_minus;
    std::optional<double> discrepancy;
};

/// integral over R of <E+(t)^-1 f(t), E+(t)^-1 g(t)> dt for arbitrary vector functions.
InnerProductResult inner_product_functions(const DBOperator& e, const VectorFunction& f, const VectorFunction& g,
                                           const QuadConfig& q = {}, bool cross_check = false);

/// Quadrature inner product of two kernel combinations. Throws ConvergenceError.
InnerProductResult inner_product_quadrature(const KernelCombo& f, const KernelCombo& g, const QuadConfig& q = {},
                                            bool cross_check = false);

/// |quadrature <f, K_w u> - <f(w), u>|.
double reproducing_check(const KernelCombo& f, Complex w, const Vector& u, const QuadConfig& q = {});

// ---------------------------------------------------------------- Hardy membership

enum class HalfPlane { Upper, Lower };
std::string to_string(HalfPlane h);

struct ProbeResult {
    Complex z;
    double value_norm = 0.0;
    double reproduction = 0.0;
    double annihilation = 0.0;
    bool pass = false;
};

struct MembershipReport {
    HalfPlane half_plane = HalfPlane::Upper;
    double l2_norm = 0.0;
    bool square_integrable = false;
    std::vector<ProbeResult> probes;
    bool pass = false;
    std::string note;
};

std::vector<Complex> default_probes(HalfPlane h);

/// Cauchy reproduction and conjugate-point annihilation at each probe. The L2
/// norm on R is computed first; a divergent or unresolved norm fails the
/// report without evaluating the Cauchy integrals. Cauchy integrals that do
/// not converge raise ConvergenceError.
MembershipReport hardy_membership(const VectorFunction& h, HalfPlane half, const std::vector<Complex>& probes,
                                  const QuadConfig& q = {}, const std::vector<double>& breaks = {});

// ---------------------------------------------------------------- embedding and products

struct EmbedSample {
    double norm_E0 = 0.0;
    double norm_E = 0.0;
    double residual = 0.0;
    bool pass = false;
};

struct EmbedReport {
    std::vector<EmbedSample> samples;
    double precondition_resid = 0.0;
    double max_residual = 0.0;
    bool pass = false;
};

/// Checks that f -> P f is isometric from B(E0) into B(E) on the samples.
/// FactorMismatchError unless E_pm = P E0_pm on a verification grid within 1e-8.
EmbedReport embed_check(const MatFun& p, const DBOperator& e0, const DBOperator& e,
                        const std::vector<KernelCombo>& samples, const QuadConfig& q = {});

struct ProductResult {
    DBOperator op;
    double commutation_resid = 0.0;
    /// max |K^{EF} - (E+ K^F E+(w)^* + F- K^E F-(w)^*)| relative, over the grid.
    double decomposition_resid = 0.0;
};

/// (E- F-, E+ F+). CommutationError when the commutation relations fail on the grid.
ProductResult product_operator(const DBOperator& e, const DBOperator& f, double tol = 1e-10);

enum class DivisionCase { NonReal, RealInvertible, PreconditionFailed };
std::string to_string(DivisionCase c);

struct DivisionReport {
    DivisionCase which = DivisionCase::NonReal;
    Complex alpha = 0.0;
    double f_alpha_norm = 0.0;
    std::optional<double> g_norm;
    std::optional<MembershipReport> upper;
    std::optional<MembershipReport> lower;
    bool pass = false;
    std::string note;
};

/// g(z) = f(z) / (z - alpha) with the derivative branch within 1e-6 of alpha.
VectorFunction divide_by_linear(const KernelCombo& f, Complex alpha);

/// NotAZeroError if |f(alpha)| > 1e-8 * scale.
DivisionReport divide_out_zero(const KernelCombo& f, Complex alpha, const QuadConfig& q = {});

}  // namespace branges
