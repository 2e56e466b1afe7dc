#pragma once

#include <string>
#include <vector>

#include "branges/debranges.hpp"

namespace branges {

/// An operator function S with S(alpha) invertible, tested against E.
struct AssociatedQuery {
    MatFun S;
    Complex alpha;
    DBOperator E;

    /// SingularityError unless sigma_min(S(alpha)) > 1e-10 sigma_max(S(alpha)).
    AssociatedQuery(MatFun s, Complex alpha, DBOperator e);
};

/// z -> (f(z) - S(z) S(alpha)^-1 f(alpha)) / (z - alpha).
class RSTransform {
public:
    RSTransform(AssociatedQuery q, VectorFunction f);
    RSTransform(AssociatedQuery q, const KernelCombo& f);

    /// Far branch is the quotient; within 1e-6 (1 + |alpha|) of alpha the
    /// Taylor expansion of the numerator is used.
    Vector operator()(Complex z) const;
    const AssociatedQuery& query() const { return q_; }
    VectorFunction as_function() const;

private:
    void init();

    AssociatedQuery q_;
    VectorFunction f_;
    Vector shift_;
    std::vector<Vector> taylor_;
};

Vector rs_apply(const RSTransform& t, Complex z);

struct AssocReport {
    std::string S_kind;
    Complex alpha = 0.0;
    /// One membership report per basis vector.
    std::vector<MembershipReport> upper_checks;
    std::vector<MembershipReport> lower_checks;
    bool pass = false;
    /// Base-space report for lifted queries.
    std::vector<AssocReport> sub_reports;
    double precondition_resid = 0.0;
};

/// For every basis vector u: E_plus^-1 S u / rho_i in H2 of the upper
/// half-plane and E_minus^-1 S u / rho_{-i} in H2 of the lower one. Probes are
/// given for the upper half-plane; their conjugates are used below.
AssocReport associated_check(const AssociatedQuery& q, const std::vector<Complex>& probes = default_probes(HalfPlane::Upper),
                             const QuadConfig& quad = {});

/// max over the samples of |R(alpha) f - R(beta) f - (alpha - beta) R(alpha) R(beta) f|.
double resolvent_identity_check(const AssociatedQuery& q, Complex beta, const VectorFunction& f,
                                const std::vector<Complex>& samples);
double resolvent_identity_check(const AssociatedQuery& q, Complex beta, const KernelCombo& f,
                                const std::vector<Complex>& samples);

/// Checks N S against E = N E0 after checking q0 against E0. FactorMismatchError
/// unless E_pm = N E0_pm on a grid within 1e-8.
AssocReport lift_associated(const MatFun& n, const AssociatedQuery& q0, const DBOperator& e,
                            const std::vector<Complex>& probes = default_probes(HalfPlane::Upper),
                            const QuadConfig& quad = {});

}  // namespace branges
