#pragma once

#include <functional>
#include <vector>

#include "branges/core.hpp"

namespace branges {

struct QuadConfig {
    double T0 = 8.0;
    int max_doublings = 12;
    double rel_tol = 1e-6;
    int nodes_per_panel = 32;
    /// Local panel acceptance: |coarse - refined| <= panel_tol * local L1 mass.
    double panel_tol = 1e-10;
    int max_depth = 50;

    void validate() const;
};

struct QuadResult {
    Vector value;
    /// Integral of the norm of the integrand (the L1 mass), accumulated alongside.
    double l1 = 0.0;
    double T = 0.0;
    int doublings = 0;
    bool converged = false;
    /// Some panel hit the depth limit (non-integrable or unresolved behaviour).
    bool unresolved = false;
};

using RealIntegrand = std::function<Vector(double)>;

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};
const GaussRule& gauss_legendre(int nodes);

/// Adaptive Gauss-Legendre integral over [a, b], split at the given points.
QuadResult integrate_interval(const RealIntegrand& f, double a, double b, const std::vector<double>& breaks,
                              const QuadConfig& q);

/// Integral over the real line. The finite part [-T, T] is split at the
/// breakpoints; both tails are folded into one integral over s in (0, 1] via
/// t = +-T / s. T starts at max(T0, 2 (1 + max |break|)) and doubles until two
/// consecutive totals agree within rel_tol * max(|I|, 1e-6 * L1). Returns
/// converged = false after max_doublings; integrate_real_or_throw raises
/// ConvergenceError instead.
QuadResult integrate_real(const RealIntegrand& f, const std::vector<double>& breaks, const QuadConfig& q);
QuadResult integrate_real_or_throw(const RealIntegrand& f, const std::vector<double>& breaks, const QuadConfig& q);

}  // namespace branges
