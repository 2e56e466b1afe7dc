#include "branges/assoc.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "branges/analytic.hpp"

namespace branges {

AssociatedQuery::AssociatedQuery(MatFun s, Complex a, DBOperator e) : S(std::move(s)), alpha(a), E(std::move(e)) {
    if (S.dim() != E.dim()) throw DimensionError("S and E dimensions differ");
    if (!(sigma_ratio(S(alpha)) > 1e-10)) throw SingularityError("S(alpha) is not invertible");
}

RSTransform::RSTransform(AssociatedQuery q, VectorFunction f) : q_(std::move(q)), f_(std::move(f)) { init(); }

RSTransform::RSTransform(AssociatedQuery q, const KernelCombo& f) : q_(std::move(q)), f_(f.as_function()) { init(); }

void RSTransform::init() {
    shift_ = q_.S(q_.alpha).fullPivLu().solve(f_(q_.alpha));
    const auto numerator = [this](Complex z) -> Vector { return f_(z) - q_.S(z) * shift_; };
    taylor_ = taylor_coefficients(numerator, q_.alpha, taylor_radius(q_.alpha), 16);
}

Vector RSTransform::operator()(Complex z) const {
    const Complex h = z - q_.alpha;
    if (std::abs(h) < kRemovableSwitch * (1.0 + std::abs(q_.alpha))) return taylor_shift_eval(taylor_, h, 1);
    return (f_(z) - q_.S(z) * shift_) / h;
}

VectorFunction RSTransform::as_function() const {
    return [self = *this](Complex z) { return self(z); };
}

Vector rs_apply(const RSTransform& t, Complex z) { return t(z); }

AssocReport associated_check(const AssociatedQuery& q, const std::vector<Complex>& probes, const QuadConfig& quad) {
    AssocReport rep;
    rep.S_kind = q.S.kind_name();
    rep.alpha = q.alpha;
    const int n = q.E.dim();
    std::vector<Complex> lower;
    for (Complex z : probes) lower.push_back(std::conj(z));
    const std::vector<double> bp = real_det_roots(q.E.E_plus);
    const std::vector<double> bm = real_det_roots(q.E.E_minus);
    const MatFun s = q.S;
    const MatFun ep = q.E.E_plus;
    const MatFun em = q.E.E_minus;
    rep.pass = true;
    for (int j = 0; j < n; ++j) {
        const Vector u = Vector::Unit(n, j);
        const VectorFunction hu = [=](Complex z) -> Vector {
            return ep(z).fullPivLu().solve(s(z) * u) / rho(kI, z);
        };
        const VectorFunction hl = [=](Complex z) -> Vector {
            return em(z).fullPivLu().solve(s(z) * u) / rho(-kI, z);
        };
        rep.upper_checks.push_back(hardy_membership(hu, HalfPlane::Upper, probes, quad, bp));
        rep.lower_checks.push_back(hardy_membership(hl, HalfPlane::Lower, lower, quad, bm));
        rep.pass = rep.pass && rep.upper_checks.back().pass && rep.lower_checks.back().pass;
    }
    return rep;
}

double resolvent_identity_check(const AssociatedQuery& q, Complex beta, const VectorFunction& f,
                                const std::vector<Complex>& samples) {
    const AssociatedQuery qb(q.S, beta, q.E);
    const RSTransform ra(q, f);
    const RSTransform rb(qb, f);
    const RSTransform rab(q, rb.as_function());
    double worst = 0.0;
    for (Complex z : samples) {
        worst = std::max(worst, (ra(z) - rb(z) - (q.alpha - beta) * rab(z)).norm());
    }
    return worst;
}

double resolvent_identity_check(const AssociatedQuery& q, Complex beta, const KernelCombo& f,
                                const std::vector<Complex>& samples) {
    return resolvent_identity_check(q, beta, f.as_function(), samples);
}

AssocReport lift_associated(const MatFun& n, const AssociatedQuery& q0, const DBOperator& e,
                            const std::vector<Complex>& probes, const QuadConfig& quad) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    double resid = 0.0;
    auto gap = [](const Matrix& a, const Matrix& b) {
        return spectral_norm(a - b) / (1.0 + std::max(spectral_norm(a), spectral_norm(b)));
    };
    for (int k = 0; k < 100; ++k) {
        const Complex z(u(rng), u(rng));
        const Matrix nz = n(z);
        resid = std::max({resid, gap(e.E_plus(z), nz * q0.E.E_plus(z)), gap(e.E_minus(z), nz * q0.E.E_minus(z))});
    }
    if (!(resid <= 1e-8)) throw FactorMismatchError("E is not N times E0 on the verification grid");
    AssocReport base = associated_check(q0, probes, quad);
    AssocReport rep = associated_check(AssociatedQuery(n * q0.S, q0.alpha, e), probes, quad);
    rep.precondition_resid = resid;
    rep.pass = rep.pass && base.pass;
    rep.sub_reports.push_back(std::move(base));
    return rep;
}

}  // namespace branges
