#include "branges/debranges.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "branges/analytic.hpp"
#include "branges/spectral.hpp"

namespace branges {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> logspace(double lo, double hi, int count) {
    std::vector<double> out;
    if (count == 1) return {lo};
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int k = 0; k < count; ++k) out.push_back(std::pow(10.0, a + (b - a) * k / (count - 1)));
    return out;
}

Vector solve(const Matrix& m, const Vector& v) { return m.fullPivLu().solve(v); }

double hermitian_min_eig(const Matrix& m) {
    const Matrix h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

CheckResult make_check(std::string name, double value, double threshold, bool upper_bound,
                       std::optional<Complex> witness) {
    CheckResult c;
    c.name = std::move(name);
    c.value = value;
    c.threshold = threshold;
    c.margin = upper_bound ? threshold - value : value - threshold;
    c.pass = std::isfinite(value) && c.margin >= 0.0;
    if (!c.pass) c.witness = witness;
    return c;
}

struct Worst {
    double value;
    std::optional<Complex> at;
    bool maximize;
    void see(double v, Complex z) {
        const bool worse = maximize ? !(v <= value) : !(v >= value);
        if (!at || worse) {
            value = v;
            at = z;
        }
    }
};

std::vector<ZeroRecord> poly_zeros(const MatFun& f) {
    const MatPoly* p = f.as_poly();
    if (!p) return {};
    try {
        return zeros(*p);
    } catch (const ZeroPolynomialError&) {
        return {};
    }
}

std::vector<ZeroRecord> real_zero_records(const MatFun& f, double imag_tol) {
    std::vector<ZeroRecord> out;
    for (const auto& r : poly_zeros(f)) {
        if (std::abs(r.z.imag()) <= imag_tol * (1.0 + std::abs(r.z))) out.push_back({Complex(r.z.real(), 0.0), r.mult, r.defect});
    }
    std::sort(out.begin(), out.end(), [](const ZeroRecord& a, const ZeroRecord& b) { return a.z.real() < b.z.real(); });
    return out;
}

bool near_any(double x, const std::vector<double>& pts, double radius) {
    return std::any_of(pts.begin(), pts.end(), [&](double p) { return std::abs(x - p) < radius * (1.0 + std::abs(p)); });
}

CheckResult invertibility_check(const std::string& name, const MatFun& f, const std::vector<Complex>& grid,
                                bool upper, double ratio_tol) {
    Worst w{kInf, std::nullopt, false};
    for (Complex z : grid) w.see(sigma_ratio(f(z)), z);
    CheckResult c = make_check(name, w.value, ratio_tol, false, w.at);
    for (const auto& r : poly_zeros(f)) {
        const double im = r.z.imag();
        const double tol = 1e-8 * (1.0 + std::abs(r.z));
        if ((upper && im > tol) || (!upper && im < -tol)) {
            c.pass = false;
            c.value = 0.0;
            c.margin = -ratio_tol;
            c.witness = r.z;
            c.note = "zero of det inside the half-plane";
            break;
        }
    }
    return c;
}

}  // namespace

// ---------------------------------------------------------------- grids

std::vector<Complex> GridSpec::upper() const {
    std::vector<double> re{0.0};
    const int side = (re_points - 1) / 2;
    for (double x : logspace(1e-2, re_max, std::max(side, 1))) {
        re.push_back(x);
        re.push_back(-x);
    }
    std::vector<Complex> out;
    for (double y : logspace(im_min, im_max, im_points)) {
        for (double x : re) out.emplace_back(x, y);
    }
    return out;
}

std::vector<Complex> GridSpec::lower() const {
    std::vector<Complex> out = upper();
    for (auto& z : out) z = std::conj(z);
    return out;
}

std::vector<double> GridSpec::real(const std::vector<double>& centres) const {
    std::vector<double> out;
    for (int k = 0; k < real_points; ++k) {
        out.push_back(real_points == 1 ? 0.0 : -real_max + 2.0 * real_max * k / (real_points - 1));
    }
    for (double c : centres) {
        for (double d : refine_offsets) {
            out.push_back(c - d);
            out.push_back(c + d);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

const CheckResult* H1Report::find(const std::string& name) const {
    for (const auto& c : checks) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::vector<double> real_det_roots(const MatFun& f, double imag_tol) {
    std::vector<double> out;
    for (const auto& r : real_zero_records(f, imag_tol)) out.push_back(r.z.real());
    return out;
}

// ---------------------------------------------------------------- H1

H1Report validate_h1(const DBOperator& e, const GridSpec& grid, const H1Tolerances& tol) {
    H1Report rep;
    const int n = e.dim();
    const auto& ep = e.E_plus;
    const auto& em = e.E_minus;
    const std::vector<Complex> up = grid.upper();
    const std::vector<Complex> lo = grid.lower();

    const auto real_p = real_zero_records(ep, 1e-6);
    const auto real_m = real_zero_records(em, 1e-6);
    std::vector<double> poles;
    for (const auto& r : real_p) poles.push_back(r.z.real());
    for (const auto& r : real_m) poles.push_back(r.z.real());
    const std::vector<double> real = grid.real(poles);

    rep.checks.push_back(invertibility_check("eplus_invertible_upper", ep, up, true, tol.invertible_ratio));
    rep.checks.push_back(invertibility_check("eminus_invertible_lower", em, lo, false, tol.invertible_ratio));

    {
        Worst w{0.0, std::nullopt, true};
        for (Complex z : up) {
            const Matrix p = ep(z);
            const double r = sigma_ratio(p);
            w.see(r < 1e-14 ? kInf : spectral_norm(p.fullPivLu().solve(em(z))), z);
        }
        rep.checks.push_back(make_check("schur_contraction", w.value, 1.0 + tol.schur_slack, true, w.at));
    }

    {
        Worst wi{0.0, std::nullopt, true};
        Worst wc{0.0, std::nullopt, true};
        const Matrix id = Matrix::Identity(n, n);
        for (double x : real) {
            if (near_any(x, poles, tol.pole_exclusion)) continue;
            const Matrix p = ep(x);
            if (sigma_ratio(p) < 1e-14) continue;
            const Matrix chi = p.fullPivLu().solve(em(x));
            wi.see(spectral_norm(chi.adjoint() * chi - id), x);
            wc.see(spectral_norm(chi * chi.adjoint() - id), x);
        }
        rep.checks.push_back(make_check("inner_on_real", wi.value, tol.inner_tol * n, true, wi.at));
        rep.checks.push_back(make_check("coinner_on_real", wc.value, tol.inner_tol * n, true, wc.at));
    }

    {
        Worst w{0.0, std::nullopt, false};
        for (Complex z : up) {
            const Matrix p = ep(z), m = em(z);
            const double scale = std::pow(spectral_norm(p), 2) + std::pow(spectral_norm(m), 2);
            w.see(hermitian_min_eig(p * p.adjoint() - m * m.adjoint()) / std::max(scale, 1e-300), z);
        }
        rep.checks.push_back(make_check("identity_upper_psd", w.value, -tol.identity_tol, false, w.at));
    }

    {
        Worst w{0.0, std::nullopt, true};
        for (double x : real) {
            const Matrix p = ep(x), m = em(x);
            const double scale = std::pow(spectral_norm(p), 2) + std::pow(spectral_norm(m), 2);
            w.see(spectral_norm(p * p.adjoint() - m * m.adjoint()) / std::max(scale, 1e-300), x);
        }
        rep.checks.push_back(make_check("identity_real", w.value, tol.identity_tol, true, w.at));
    }

    {
        Worst w{0.0, std::nullopt, true};
        auto see = [&](Complex z) {
            const Complex zc = std::conj(z);
            const Matrix p = ep(z), pc = ep(zc), m = em(z), mc = em(zc);
            const double scale = spectral_norm(p) * spectral_norm(pc) + spectral_norm(m) * spectral_norm(mc);
            w.see(spectral_norm(p * pc.adjoint() - m * mc.adjoint()) / std::max(scale, 1e-300), z);
        };
        for (Complex z : up) see(z);
        for (double x : real) see(x);
        rep.checks.push_back(make_check("identity_reflection", w.value, tol.identity_tol, true, w.at));
    }

    {
        Worst w{0.0, std::nullopt, false};
        auto see = [&](Complex z) {
            const Matrix k = kernel(e, z, z);
            const double scale = std::max(spectral_norm(k), 1e-300);
            w.see(hermitian_min_eig(k) / scale, z);
        };
        for (Complex z : up) see(z);
        for (Complex z : lo) see(z);
        for (double x : real) see(x);
        rep.checks.push_back(make_check("kernel_diagonal_psd", w.value, -tol.kernel_tol, false, w.at));
    }

    {
        CheckResult c;
        c.name = "pole_sets_agree";
        c.threshold = tol.pole_radius;
        if (!ep.as_poly() || !em.as_poly()) {
            c.note = "not polynomial; skipped";
        } else {
            double worst = 0.0;
            std::vector<bool> used(real_m.size(), false);
            for (const auto& rp : real_p) {
                double best = kInf;
                std::size_t at = 0;
                for (std::size_t j = 0; j < real_m.size(); ++j) {
                    const double d = std::abs(rp.z - real_m[j].z) / (1.0 + std::abs(rp.z));
                    if (!used[j] && d < best) {
                        best = d;
                        at = j;
                    }
                }
                if (best <= tol.pole_radius) {
                    used[at] = true;
                    rep.common_real_zeros.push_back(0.5 * (rp.z + real_m[at].z));
                }
                if (!(best <= worst)) {
                    worst = best;
                    c.witness = rp.z;
                }
            }
            for (std::size_t j = 0; j < real_m.size(); ++j) {
                if (!used[j]) {
                    worst = kInf;
                    c.witness = real_m[j].z;
                }
            }
            c.value = worst;
            c.margin = tol.pole_radius - worst;
            c.pass = worst <= tol.pole_radius;
            if (c.pass) c.witness.reset();
        }
        rep.checks.push_back(c);
    }

    {
        Worst w{0.0, std::nullopt, true};
        for (Complex x : rep.common_real_zeros) {
            const Projection pp = cokernel_projection(ep(x), rank_tol_at(ep, x));
            const Projection pm = cokernel_projection(em(x), rank_tol_at(em, x));
            w.see(spectral_norm(pp.M - pm.M), x);
        }
        CheckResult c = make_check("douglas_range", w.value, tol.range_tol, true, w.at);
        if (rep.common_real_zeros.empty()) c.note = "no common real zeros";
        rep.checks.push_back(c);
    }

    rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const CheckResult& c) { return c.pass; });
    return rep;
}

// ---------------------------------------------------------------- kernel

Matrix kernel(const DBOperator& e, Complex w, Complex z) {
    const Complex wc = std::conj(w);
    const Matrix pw = e.E_plus(w).adjoint();
    const Matrix mw = e.E_minus(w).adjoint();
    if (std::abs(z - wc) < kConfluentRadius) {
        return (e.E_plus.eval_derivative(wc) * pw - e.E_minus.eval_derivative(wc) * mw) / (-2.0 * kPi * kI);
    }
    return (e.E_plus(z) * pw - e.E_minus(z) * mw) / rho(w, z);
}

MatPoly kernel_section(const DBOperator& e, Complex w) {
    const MatPoly* p = e.E_plus.as_poly();
    const MatPoly* m = e.E_minus.as_poly();
    if (!p || !m) throw DomainError("kernel_section requires polynomial components");
    const Complex wc = std::conj(w);
    const Matrix pw = (*p)(w).adjoint();
    const Matrix mw = (*m)(w).adjoint();
    const MatPoly num = (*p) * pw - (*m) * mw;
    const double scale = spectral_norm((*p)(wc)) * spectral_norm(pw) + spectral_norm((*m)(wc)) * spectral_norm(mw);
    if (spectral_norm(num(wc)) > 1e-10 * std::max(scale, 1e-300)) {
        throw DomainError("kernel numerator does not vanish at conj(w)");
    }
    return num.divided_difference(wc) * (1.0 / (-2.0 * kPi * kI));
}

KernelCombo::KernelCombo(DBOperator e, std::vector<Complex> points, std::vector<Vector> vectors)
    : e_(std::move(e)), points_(std::move(points)), vectors_(std::move(vectors)) {
    if (points_.size() != vectors_.size()) throw DimensionError("kernel combo points and vectors differ in length");
    for (const auto& u : vectors_) {
        if (u.size() != e_.dim()) throw DimensionError("kernel combo vector has wrong dimension");
    }
    if (!e_.E_plus.as_poly() || !e_.E_minus.as_poly()) return;
    try {
        std::vector<Vector> c;
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const MatPoly s = kernel_section(e_, points_[i]);
            for (int k = 0; k <= s.degree(); ++k) {
                if (static_cast<int>(c.size()) <= k) c.push_back(Vector::Zero(e_.dim()));
                c[static_cast<std::size_t>(k)] += s.coeff(k) * vectors_[i];
            }
        }
        if (c.empty()) c.push_back(Vector::Zero(e_.dim()));
        coeffs_ = std::move(c);
    } catch (const DomainError&) {
        coeffs_.reset();
    }
}

KernelCombo KernelCombo::empty(const DBOperator& e) { return KernelCombo(e, {}, {}); }

Vector KernelCombo::operator()(Complex z) const {
    if (coeffs_) {
        Vector acc = Vector::Zero(e_.dim());
        for (auto it = coeffs_->rbegin(); it != coeffs_->rend(); ++it) acc = acc * z + *it;
        return acc;
    }
    Vector acc = Vector::Zero(e_.dim());
    for (std::size_t i = 0; i < points_.size(); ++i) acc += kernel(e_, points_[i], z) * vectors_[i];
    return acc;
}

Vector KernelCombo::derivative(Complex z) const {
    if (coeffs_) {
        Vector acc = Vector::Zero(e_.dim());
        for (int k = static_cast<int>(coeffs_->size()) - 1; k >= 1; --k) {
            acc = acc * z + static_cast<double>(k) * (*coeffs_)[static_cast<std::size_t>(k)];
        }
        return acc;
    }
    const auto c = taylor_coefficients([this](Complex s) -> Vector { return (*this)(s); }, z, taylor_radius(z), 2);
    return c[1];
}

VectorFunction KernelCombo::as_function() const {
    return [self = *this](Complex z) { return self(z); };
}

MatFun kernel_function(const DBOperator& e, Complex w) {
    if (e.E_plus.as_poly() && e.E_minus.as_poly()) {
        try {
            return kernel_section(e, w);
        } catch (const DomainError&) {
        }
    }
    return MatFun::function(e.dim(), [e, w](Complex z) { return kernel(e, w, z); }, "kernel");
}

Matrix gram(const DBOperator& e, const std::vector<Complex>& points, const std::vector<Vector>& vectors) {
    if (points.size() != vectors.size()) throw DimensionError("gram points and vectors differ in length");
    const auto p = static_cast<int>(points.size());
    Matrix g(p, p);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            g(i, j) = vectors[i].dot(kernel(e, points[j], points[i]) * vectors[j]);
        }
    }
    return g;
}

Complex inner_product_closed_form(const KernelCombo& f, const KernelCombo& g) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j < g.size(); ++j) acc += g.vectors()[j].dot(f(g.points()[j]));
    return acc;
}

// ---------------------------------------------------------------- quadrature inner products

namespace {

std::vector<double> breaks_of(const MatFun& f) { return real_det_roots(f, 1e-6); }

Complex weighted_integral(const MatFun& weight, const VectorFunction& f, const VectorFunction& g,
                          const std::vector<double>& breaks, const QuadConfig& q, QuadResult* out) {
    const RealIntegrand integrand = [&](double t) -> Vector {
        const Matrix w = weight(t);
        Vector v(1);
        v(0) = solve(w, g(t)).dot(solve(w, f(t)));
        return v;
    };
    QuadResult r = integrate_real_or_throw(integrand, breaks, q);
    const Complex value = r.value(0);
    if (out) *out = std::move(r);
    return value;
}

}  // namespace

InnerProductResult inner_product_functions(const DBOperator& e, const VectorFunction& f, const VectorFunction& g,
                                           const QuadConfig& q, bool cross_check) {
    InnerProductResult res;
    res.value = weighted_integral(e.E_plus, f, g, breaks_of(e.E_plus), q, &res.quad);
    if (cross_check) {
        res.value_minus = weighted_integral(e.E_minus, f, g, breaks_of(e.E_minus), q, nullptr);
        res.discrepancy = std::abs(*res.value_minus - res.value);
    }
    return res;
}

InnerProductResult inner_product_quadrature(const KernelCombo& f, const KernelCombo& g, const QuadConfig& q,
                                            bool cross_check) {
    if (f.size() == 0 || g.size() == 0) {
        InnerProductResult res;
        res.quad.value = Vector::Zero(1);
        res.quad.converged = true;
        if (cross_check) {
            res.value_minus = 0.0;
            res.discrepancy = 0.0;
        }
        return res;
    }
    return inner_product_functions(f.op(), f.as_function(), g.as_function(), q, cross_check);
}

double reproducing_check(const KernelCombo& f, Complex w, const Vector& u, const QuadConfig& q) {
    const KernelCombo k(f.op(), {w}, {u});
    const Complex quad = inner_product_quadrature(f, k, q).value;
    return std::abs(quad - u.dot(f(w)));
}

// ---------------------------------------------------------------- Hardy membership

std::string to_string(HalfPlane h) { return h == HalfPlane::Upper ? "upper" : "lower"; }

std::vector<Complex> default_probes(HalfPlane h) {
    std::vector<Complex> p{{0.0, 1.0}, {0.0, 2.0}, {1.0, 1.0}, {-1.0, 0.5}};
    if (h == HalfPlane::Lower) {
        for (auto& z : p) z = std::conj(z);
    }
    return p;
}

MembershipReport hardy_membership(const VectorFunction& h, HalfPlane half, const std::vector<Complex>& probes,
                                  const QuadConfig& q, const std::vector<double>& breaks) {
    MembershipReport rep;
    rep.half_plane = half;
    for (Complex z : probes) {
        if ((half == HalfPlane::Upper && !(z.imag() > 0.0)) || (half == HalfPlane::Lower && !(z.imag() < 0.0))) {
            throw DomainError("probe not inside the named half-plane");
        }
    }
    const RealIntegrand sq = [&](double t) -> Vector {
        Vector v(1);
        v(0) = h(t).squaredNorm();
        return v;
    };
    const QuadResult l2 = integrate_real(sq, breaks, q);
    rep.l2_norm = std::sqrt(std::abs(l2.value(0)));
    rep.square_integrable = l2.converged && std::isfinite(rep.l2_norm);
    if (!rep.square_integrable) {
        rep.pass = false;
        rep.note = "not square integrable on the real line";
        return rep;
    }
    const double sign = half == HalfPlane::Upper ? 1.0 : -1.0;
    rep.pass = true;
    for (Complex z : probes) {
        auto cauchy = [&](Complex c) -> Vector {
            const RealIntegrand f = [&](double t) -> Vector { return h(t) / (Complex(t) - c); };
            return integrate_real_or_throw(f, breaks, q).value / (2.0 * kPi * kI);
        };
        ProbeResult pr;
        pr.z = z;
        const Vector hz = h(z);
        pr.value_norm = hz.norm();
        pr.reproduction = (hz - sign * cauchy(z)).norm();
        pr.annihilation = cauchy(std::conj(z)).norm();
        const double thr = 1e-3 * (1.0 + pr.value_norm);
        pr.pass = pr.reproduction <= thr && pr.annihilation <= thr;
        rep.pass = rep.pass && pr.pass;
        rep.probes.push_back(pr);
    }
    return rep;
}

// ---------------------------------------------------------------- embedding and products

namespace {

std::vector<Complex> random_grid(int count, double radius, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-radius, radius);
    std::vector<Complex> out;
    for (int k = 0; k < count; ++k) out.emplace_back(u(rng), u(rng));
    return out;
}

double relative_gap(const Matrix& a, const Matrix& b) {
    return spectral_norm(a - b) / (1.0 + std::max(spectral_norm(a), spectral_norm(b)));
}

}  // namespace

EmbedReport embed_check(const MatFun& p, const DBOperator& e0, const DBOperator& e,
                        const std::vector<KernelCombo>& samples, const QuadConfig& q) {
    EmbedReport rep;
    for (Complex z : random_grid(100, 4.0, 11)) {
        rep.precondition_resid = std::max(rep.precondition_resid, relative_gap(e.E_plus(z), p(z) * e0.E_plus(z)));
        rep.precondition_resid = std::max(rep.precondition_resid, relative_gap(e.E_minus(z), p(z) * e0.E_minus(z)));
    }
    if (!(rep.precondition_resid <= 1e-8)) throw FactorMismatchError("E is not P times E0 on the verification grid");
    rep.pass = true;
    for (const auto& f : samples) {
        EmbedSample s;
        const VectorFunction ff = f.as_function();
        const VectorFunction pf = [&p, ff](Complex z) -> Vector { return p(z) * ff(z); };
        s.norm_E0 = std::sqrt(std::max(0.0, inner_product_functions(e0, ff, ff, q).value.real()));
        s.norm_E = std::sqrt(std::max(0.0, inner_product_functions(e, pf, pf, q).value.real()));
        s.residual = s.norm_E0 == 0.0 ? std::abs(s.norm_E) : std::abs(s.norm_E - s.norm_E0) / s.norm_E0;
        s.pass = s.residual <= 1e-3;
        rep.max_residual = std::max(rep.max_residual, s.residual);
        rep.pass = rep.pass && s.pass;
        rep.samples.push_back(s);
    }
    return rep;
}

ProductResult product_operator(const DBOperator& e, const DBOperator& f, double tol) {
    if (e.dim() != f.dim()) throw DimensionError("product of de Branges operators of different dimensions");
    const std::vector<Complex> grid = random_grid(40, 3.0, 23);
    double comm = 0.0;
    for (Complex z : grid) {
        const Matrix ep = e.E_plus(z), em = e.E_minus(z), fp = f.E_plus(z), fm = f.E_minus(z);
        comm = std::max({comm, relative_gap(fp * ep, ep * fp), relative_gap(fp * em, em * fp),
                         relative_gap(fm * ep, ep * fm), relative_gap(fm * em, em * fm)});
    }
    if (!(comm <= tol)) throw CommutationError("factors do not commute on the grid");
    ProductResult res{DBOperator(e.E_minus * f.E_minus, e.E_plus * f.E_plus), comm, 0.0};
    for (std::size_t k = 0; k + 1 < grid.size(); k += 2) {
        const Complex w = grid[k];
        const Complex z = grid[k + 1];
        const Matrix direct = kernel(res.op, w, z);
        const Matrix split = e.E_plus(z) * kernel(f, w, z) * e.E_plus(w).adjoint() +
                             f.E_minus(z) * kernel(e, w, z) * f.E_minus(w).adjoint();
        res.decomposition_resid = std::max(res.decomposition_resid, relative_gap(direct, split));
    }
    return res;
}

std::string to_string(DivisionCase c) {
    switch (c) {
        case DivisionCase::NonReal: return "non-real";
        case DivisionCase::RealInvertible: return "real-invertible";
        case DivisionCase::PreconditionFailed: return "precondition-failed";
    }
    return "unknown";
}

VectorFunction divide_by_linear(const KernelCombo& f, Complex alpha) {
    const auto c = taylor_coefficients(f, alpha, taylor_radius(alpha), 16);
    const double switch_radius = kRemovableSwitch * (1.0 + std::abs(alpha));
    return [f, alpha, c, switch_radius](Complex z) -> Vector {
        if (std::abs(z - alpha) < switch_radius) return taylor_shift_eval(c, z - alpha, 1);
        return f(z) / (z - alpha);
    };
}

DivisionReport divide_out_zero(const KernelCombo& f, Complex alpha, const QuadConfig& q) {
    DivisionReport rep;
    rep.alpha = alpha;
    const DBOperator& e = f.op();
    rep.f_alpha_norm = f(alpha).norm();
    double scale = 1.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        scale += spectral_norm(kernel(e, f.points()[i], alpha)) * f.vectors()[i].norm();
    }
    if (rep.f_alpha_norm > 1e-8 * scale) throw NotAZeroError("f does not vanish at alpha");

    const bool is_real = std::abs(alpha.imag()) <= 1e-12 * (1.0 + std::abs(alpha));
    if (!is_real) {
        rep.which = DivisionCase::NonReal;
    } else if (sigma_ratio(e.E_plus(alpha.real())) > 1e-10) {
        rep.which = DivisionCase::RealInvertible;
    } else {
        rep.which = DivisionCase::PreconditionFailed;
        rep.note = "real-point precondition failed: E_plus(alpha) is not invertible";
        return rep;
    }

    const VectorFunction g = divide_by_linear(f, alpha);
    std::vector<double> breaks = breaks_of(e.E_plus);
    if (is_real) breaks.push_back(alpha.real());
    rep.g_norm = std::sqrt(std::max(0.0, inner_product_functions(e, g, g, q).value.real()));
    const MatFun ep = e.E_plus;
    const MatFun em = e.E_minus;
    const VectorFunction hu = [ep, g](Complex z) -> Vector { return solve(ep(z), g(z)); };
    const VectorFunction hl = [em, g](Complex z) -> Vector { return solve(em(z), g(z)); };
    std::vector<double> lbreaks = breaks_of(em);
    if (is_real) lbreaks.push_back(alpha.real());
    rep.upper = hardy_membership(hu, HalfPlane::Upper, default_probes(HalfPlane::Upper), q, breaks);
    rep.lower = hardy_membership(hl, HalfPlane::Lower, default_probes(HalfPlane::Lower), q, lbreaks);
    rep.pass = std::isfinite(*rep.g_norm) && rep.upper->pass && rep.lower->pass;
    return rep;
}

}  // namespace branges
