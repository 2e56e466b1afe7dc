#include "branges/factor.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace branges {

namespace {

bool invertible_at(const MatFun& f, Complex z, double user_tol) {
    return numerical_rank(f(z), rank_tol_at(f, z, user_tol)).rank == f.dim();
}

std::vector<Complex> inverse_exp_coeffs(int order) {
    std::vector<Complex> c;
    for (int j = 1; j <= order; ++j) c.emplace_back(-1.0 / j, 0.0);
    return c;
}

// Inverse factor applied to `a` on the given side, with the removable singularity resolved.
MatFun divide_factor(const MatFun& a, const ElemFactor& f, Side side) {
    MatFun out = MatFun::deflation(a, f.zk, f.z0, f.P, side);
    if (f.mode == FactorMode::Canonical) {
        out = MatFun::exp_twist(out, f.P, f.z0, f.zk, inverse_exp_coeffs(f.order), side);
    }
    return out;
}

ElemFactor next_factor(const MatFun& a, Complex x, Complex z0, FactorMode mode, int order, double rank_tol,
                       Side side) {
    const Matrix ax = a(x);
    const double tol = rank_tol_at(a, x, rank_tol);
    const Projection p = side == Side::Left ? cokernel_projection(ax, tol) : kernel_projection(ax, tol);
    if (p.rank == 0) throw NotAZeroError("A(x) is numerically invertible");
    return ElemFactor(z0, x, p, mode == FactorMode::Plain ? 1 : order, mode);
}

DeflationStep deflate(const MatFun& a, Complex x, Complex z0, FactorMode mode, int order, double rank_tol,
                      Side side) {
    if (!invertible_at(a, z0, rank_tol)) throw BasePointSingularError("A(z0) is singular");
    ElemFactor f = next_factor(a, x, z0, mode, order, rank_tol, side);
    MatFun residual = divide_factor(a, f, side);
    return {std::move(f), std::move(residual)};
}

// G^{-1} A (left) or A G^{-1} (right) for the factors so far, evaluated from the
// original data so rounding does not accumulate through intermediate residuals.
MatFun residual_of(const MatFun& a, const std::vector<ElemFactor>& factors, Side side) {
    if (factors.empty()) return a;
    MatFunList items;
    std::vector<Complex> points;
    if (side == Side::Left) {
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) items.push_back(MatFun::inverse(*it));
        items.push_back(a);
    } else {
        items.push_back(a);
        for (const auto& f : factors) items.push_back(MatFun::inverse(f));
    }
    for (const auto& f : factors) points.push_back(f.zk);
    return MatFun::removable(MatFun::product(std::move(items)), std::move(points));
}

double sampling_radius(Complex z0, const std::vector<ElemFactor>& factors) {
    double r = std::max(0.5, std::abs(z0));
    for (const auto& f : factors) r = std::max(r, std::abs(f.zk));
    return 2.0 * r;
}

// Coefficients of a polynomial of known maximal degree from samples on a circle.
MatPoly interpolate_poly(const MatFun& f, int degree, double radius) {
    const int count = 2 * (degree + 1);
    std::vector<Matrix> samples;
    samples.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) samples.push_back(f(radius * std::polar(1.0, 2.0 * kPi * k / count)));
    std::vector<Matrix> coeffs;
    for (int j = 0; j <= degree; ++j) {
        Matrix acc = Matrix::Zero(f.dim(), f.dim());
        for (int k = 0; k < count; ++k) acc += std::polar(1.0, -2.0 * kPi * j * k / count) * samples[k];
        coeffs.push_back(acc / (static_cast<double>(count) * std::pow(radius, j)));
    }
    return MatPoly(std::move(coeffs));
}

MatFun finalize_residual(const MatFun& a, const std::vector<ElemFactor>& factors, Side side, FactorMode mode,
                         Complex z0) {
    MatFun r = residual_of(a, factors, side);
    const MatPoly* p = a.as_poly();
    if (mode == FactorMode::Plain && p && !factors.empty()) {
        return interpolate_poly(r, p->degree(), sampling_radius(z0, factors));
    }
    return r;
}

std::vector<Complex> verification_grid(Complex z0, const std::vector<Complex>& points, int count, unsigned seed) {
    double radius = std::max(0.5, std::abs(z0));
    for (Complex p : points) radius = std::max(radius, std::abs(p));
    radius *= 2.0;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Complex> grid;
    grid.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double r = radius * std::sqrt(u(rng));
        grid.push_back(std::polar(r, 2.0 * kPi * u(rng)));
    }
    return grid;
}

std::vector<double> real_grid(double half_width, int count) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) xs.push_back(-half_width + 2.0 * half_width * i / (count - 1));
    return xs;
}

double max_zero_modulus(const std::vector<ZeroRecord>& zs) {
    double m = 0.0;
    for (const auto& z : zs) m = std::max(m, std::abs(z.z));
    return m;
}

double min_ratio_on_real(const MatFun& f, double half_width, int count) {
    double worst = 1.0;
    for (double x : real_grid(half_width, count)) worst = std::min(worst, sigma_ratio(f(Complex(x, 0.0))));
    return worst;
}

bool is_real_zero(Complex z, double tol) { return std::abs(z.imag()) <= tol * (1.0 + std::abs(z)); }

// Real part of a numerically real zero when A is still singular there, else z itself.
Complex snap_real(const MatFun& a, Complex z, double rank_tol) {
    const Complex x(z.real(), 0.0);
    return invertible_at(a, x, rank_tol) ? z : x;
}

}  // namespace

DeflationStep deflate_left(const MatFun& a, Complex x, Complex z0, FactorMode mode, int order, double rank_tol) {
    return deflate(a, x, z0, mode, order, rank_tol, Side::Left);
}

DeflationStep deflate_right(const MatFun& a, Complex x, Complex z0, FactorMode mode, int order, double rank_tol) {
    return deflate(a, x, z0, mode, order, rank_tol, Side::Right);
}

MatFun Factorization::factor_product() const {
    const int n = residual.dim();
    if (factors.empty()) return MatPoly::identity(n);
    MatFunList items;
    for (const auto& f : factors) items.push_back(MatFun::elem(f));
    if (side == Side::Right) std::reverse(items.begin(), items.end());
    return MatFun::product(std::move(items));
}

Matrix Factorization::factor_product(Complex z) const {
    const int n = residual.dim();
    Matrix acc = Matrix::Identity(n, n);
    if (side == Side::Left) {
        for (const auto& f : factors) acc = acc * f(z);
    } else {
        for (auto it = factors.rbegin(); it != factors.rend(); ++it) acc = acc * (*it)(z);
    }
    return acc;
}

Matrix Factorization::reconstruct(Complex z) const {
    return side == Side::Left ? Matrix(factor_product(z) * residual(z)) : Matrix(residual(z) * factor_product(z));
}

int Factorization::deflated_rank() const {
    int r = 0;
    for (const auto& f : factors) r += f.P.rank;
    return r;
}

FactorVerification verify_factorization(const Factorization& f, const MatPoly& a, const FactorOptions& opts,
                                        bool all_zeros) {
    FactorVerification v;
    const auto grid = verification_grid(f.base, f.deflated_points, opts.verify_points, opts.verify_seed);
    for (Complex z : grid) {
        const Matrix az = a(z);
        const double r = (az - f.reconstruct(z)).norm() / (1.0 + az.norm());
        v.max_resid = std::max(v.max_resid, std::isfinite(r) ? r : INFINITY);
    }
    v.grid_points = static_cast<int>(grid.size());
    for (Complex x : f.deflated_points) v.min_ratio_at_zeros = std::min(v.min_ratio_at_zeros, sigma_ratio(f.residual(x)));
    if (all_zeros && f.mode == FactorMode::Plain && f.residual.as_poly()) {
        const Complex d0 = f.residual(f.base).determinant();
        double spread = 0.0;
        for (Complex z : grid) spread = std::max(spread, std::abs(f.residual(z).determinant() - d0));
        v.det_variation = spread / std::abs(d0);
    }
    v.deflated_rank = f.deflated_rank();
    v.zero_mult_sum = f.target_mult;
    v.pass = v.max_resid <= 1e-8 && v.min_ratio_at_zeros > 1e-8 && v.deflated_rank == v.zero_mult_sum &&
             (!v.det_variation || *v.det_variation <= 1e-6);
    return v;
}

Factorization factor_global(const MatPoly& a, Complex z0, Side side, FactorMode mode, const FactorOptions& opts) {
    if (det_identically_zero(a)) throw ZeroPolynomialError("det A vanishes identically");
    if (!invertible_at(a, z0, opts.rank_tol)) throw BasePointSingularError("A(z0) is singular");
    auto zs = zeros(a, opts.zero_opts);
    sort_by_distance(zs, z0);

    Factorization f;
    f.side = side;
    f.mode = mode;
    f.base = z0;
    f.residual = a;
    for (const auto& rec : zs) f.target_mult += rec.mult;

    int deflated = 0;
    for (const auto& rec : zs) {
        bool touched = false;
        int here = 0;
        MatFun current = residual_of(a, f.factors, side);
        while (here < rec.mult && !invertible_at(current, rec.z, opts.rank_tol)) {
            const int order = static_cast<int>(f.factors.size()) + 1;
            ElemFactor factor = next_factor(current, rec.z, z0, mode, order, opts.rank_tol, side);
            deflated += factor.P.rank;
            here += factor.P.rank;
            if (deflated > f.target_mult) throw IterationLimitError("deflated rank exceeds the determinant degree");
            f.factors.push_back(std::move(factor));
            current = residual_of(a, f.factors, side);
            touched = true;
        }
        if (touched) f.deflated_points.push_back(rec.z);
    }
    f.residual = finalize_residual(a, f.factors, side, mode, z0);
    f.verification = verify_factorization(f, a, opts);
    return f;
}

Complex choose_base_point(const std::vector<MatPoly>& funcs) {
    auto score = [&](Complex z) {
        double worst = 1.0;
        for (const auto& f : funcs) worst = std::min(worst, sigma_ratio(f(z)));
        return worst;
    };
    const std::vector<Complex> candidates{0.0, 1.0, -1.0, kI, -kI};
    for (Complex c : candidates) {
        if (score(c) >= 1e-3) return c;
    }
    Complex best = candidates.front();
    double best_score = score(best);
    auto consider = [&](Complex c) {
        const double s = score(c);
        if (s > best_score) {
            best = c;
            best_score = s;
        }
    };
    for (Complex c : candidates) consider(c);
    std::mt19937_64 rng(0xba5e);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 16; ++i) consider(Complex(u(rng), u(rng)));
    return best;
}

RealFactorization factor_real(const MatPoly& a, FactorMode mode, const FactorOptions& opts) {
    const Complex z0 = opts.base ? *opts.base : choose_base_point({a});
    if (!invertible_at(a, z0, opts.rank_tol)) throw BasePointSingularError("A(z0) is singular");
    auto zs = zeros(a, opts.zero_opts);
    const double span = 2.0 + max_zero_modulus(zs);
    std::vector<ZeroRecord> real;
    for (const auto& rec : zs) {
        if (is_real_zero(rec.z, opts.real_axis_tol)) real.push_back(rec);
    }
    sort_by_distance(real, z0);

    RealFactorization out;
    Factorization& f = out.fact;
    f.side = Side::Left;
    f.mode = mode;
    f.base = z0;
    f.residual = a;
    for (const auto& rec : real) f.target_mult += rec.mult;

    int deflated = 0;
    for (const auto& rec : real) {
        const Complex x = snap_real(residual_of(a, f.factors, Side::Left), rec.z, opts.rank_tol);
        bool touched = false;
        int here = 0;
        MatFun current = residual_of(a, f.factors, Side::Left);
        while (here < rec.mult && !invertible_at(current, x, opts.rank_tol)) {
            const int order = static_cast<int>(f.factors.size()) + 1;
            ElemFactor factor = next_factor(current, x, z0, mode, order, opts.rank_tol, Side::Left);
            deflated += factor.P.rank;
            here += factor.P.rank;
            if (deflated > f.target_mult) throw IterationLimitError("deflated rank exceeds the real zero count");
            f.factors.push_back(std::move(factor));
            current = residual_of(a, f.factors, Side::Left);
            touched = true;
        }
        if (touched) f.deflated_points.push_back(x);
    }
    f.residual = finalize_residual(a, f.factors, Side::Left, mode, z0);
    f.verification = verify_factorization(f, a, opts, false);
    out.real_grid_points = 1000;
    out.min_real_ratio = min_ratio_on_real(f.residual, span, out.real_grid_points);
    return out;
}

JointFactorization factor_joint(const DBOperator& e, FactorMode mode, const FactorOptions& opts) {
    const MatPoly* ep = e.E_plus.as_poly();
    const MatPoly* em = e.E_minus.as_poly();
    if (!ep || !em) throw DomainError("factor_joint requires polynomial E_plus and E_minus");
    const int n = e.dim();
    const Complex z0 = opts.base ? *opts.base : choose_base_point({*ep, *em});
    if (!invertible_at(*ep, z0, opts.rank_tol) || !invertible_at(*em, z0, opts.rank_tol)) {
        throw BasePointSingularError("E_plus(z0) or E_minus(z0) is singular");
    }

    auto real_zeros = [&](const MatPoly& p) {
        std::vector<ZeroRecord> out;
        for (const auto& rec : zeros(p, opts.zero_opts)) {
            if (is_real_zero(rec.z, opts.real_axis_tol)) out.push_back(rec);
        }
        return out;
    };
    const auto zp = real_zeros(*ep);
    auto zm = real_zeros(*em);
    std::vector<ZeroRecord> common;
    for (const auto& rp : zp) {
        auto it = std::find_if(zm.begin(), zm.end(), [&](const ZeroRecord& rm) {
            return std::abs(rm.z - rp.z) <= 1e-6 * (1.0 + std::abs(rp.z)) && rm.mult == rp.mult;
        });
        if (it == zm.end()) throw RangeMismatchError("real zeros of det E_plus and det E_minus differ");
        common.push_back({Complex((rp.z.real() + it->z.real()) / 2.0, 0.0), rp.mult, rp.defect});
        zm.erase(it);
    }
    if (!zm.empty()) throw RangeMismatchError("real zeros of det E_plus and det E_minus differ");
    sort_by_distance(common, z0);

    JointFactorization out;
    out.base = z0;
    MatFun rp = e.E_plus;
    MatFun rm = e.E_minus;
    int target = 0;
    for (const auto& c : common) target += c.mult;
    int deflated = 0;
    for (const auto& c : common) {
        const Complex x = c.z;
        out.common_real_zeros.push_back(x);
        int here = 0;
        while (here < c.mult) {
            const Matrix px = rp(x);
            const Matrix mx = rm(x);
            const double tp = rank_tol_at(rp, x, opts.rank_tol);
            const double tm = rank_tol_at(rm, x, opts.rank_tol);
            const bool sp = numerical_rank(px, tp).rank < n;
            const bool sm = numerical_rank(mx, tm).rank < n;
            if (!sp && !sm) break;
            if (sp != sm) throw RangeMismatchError("only one of E_plus, E_minus is singular at a real zero");
            const Projection pi_p = cokernel_projection(px, tp);
            const Projection pi_m = cokernel_projection(mx, tm);
            const double mismatch = spectral_norm(pi_p.M - pi_m.M);
            out.max_range_mismatch = std::max(out.max_range_mismatch, mismatch);
            if (mismatch > 1e-6) throw RangeMismatchError("cokernels of E_plus(x) and E_minus(x) differ");
            Matrix stacked(n, 2 * n);
            stacked << px, mx;
            const Projection p = cokernel_projection(stacked, std::max(tp, tm));
            if (p.rank == 0) throw RangeMismatchError("stacked block has full range at a common zero");
            const int order = static_cast<int>(out.factors.size()) + 1;
            ElemFactor f(z0, x, p, mode == FactorMode::Plain ? 1 : order, mode);
            deflated += p.rank;
            here += p.rank;
            if (deflated > target) throw IterationLimitError("deflated rank exceeds the common zero count");
            out.factors.push_back(std::move(f));
            rp = residual_of(e.E_plus, out.factors, Side::Left);
            rm = residual_of(e.E_minus, out.factors, Side::Left);
        }
    }
    rp = finalize_residual(e.E_plus, out.factors, Side::Left, mode, z0);
    rm = finalize_residual(e.E_minus, out.factors, Side::Left, mode, z0);
    if (out.factors.empty()) {
        out.N = MatPoly::identity(n);
    } else {
        MatFunList items;
        for (const auto& f : out.factors) items.push_back(MatFun::elem(f));
        out.N = MatFun::product(std::move(items));
    }
    out.E0 = DBOperator(rm, rp);

    std::vector<Complex> pts = out.common_real_zeros;
    const auto grid = verification_grid(z0, pts, opts.verify_points, opts.verify_seed);
    for (Complex z : grid) {
        const Matrix nz = out.N(z);
        const Matrix a = (*ep)(z);
        const Matrix b = (*em)(z);
        out.max_resid = std::max(out.max_resid, (a - nz * rp(z)).norm() / (1.0 + a.norm()));
        out.max_resid = std::max(out.max_resid, (b - nz * rm(z)).norm() / (1.0 + b.norm()));
    }
    double span = 2.0;
    for (const auto& r : zeros(*ep, opts.zero_opts)) span = std::max(span, 2.0 + std::abs(r.z));
    out.min_real_ratio = std::min(min_ratio_on_real(rp, span, 1000), min_ratio_on_real(rm, span, 1000));
    return out;
}

Matrix partial_product(const std::vector<std::pair<Complex, Projection>>& factors, Complex z0, int count,
                       Complex z) {
    if (count < 0 || count > static_cast<int>(factors.size())) throw DomainError("partial product index out of range");
    const int n = factors.empty() ? 1 : factors.front().second.dim();
    Matrix acc = Matrix::Identity(n, n);
    for (int k = 1; k <= count; ++k) {
        const auto& [zk, p] = factors[static_cast<std::size_t>(k - 1)];
        acc = acc * ElemFactor(z0, zk, p, k, FactorMode::Canonical)(z);
    }
    return acc;
}

TailBound truncation_bound(double mu, int n) {
    if (!(mu >= 0.0) || mu >= 1.0) throw DomainError("truncation bound requires 0 <= mu < 1");
    if (n < 0) throw DomainError("truncation bound requires n >= 0");
    return {mu, n, std::expm1(std::pow(mu, n + 1) / (1.0 - mu))};
}

InequalityCheck exponential_inequality(double mu, int n) {
    const TailBound b = truncation_bound(mu, n);
    InequalityCheck c;
    // log(1 - mu) + g_n(mu) = -sum_{j>n} mu^j / j, summed directly to avoid cancellation.
    double tail = 0.0;
    double power = std::pow(mu, n + 1);
    for (int j = n + 1; j < n + 100000 && power > 1e-18 * tail; ++j) {
        tail += power / j;
        power *= mu;
    }
    c.lhs = -std::expm1(-tail);
    c.rhs = b.bound;
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-12);
    return c;
}

InequalityCheck norm_inequality(const std::vector<Matrix>& factors) {
    if (factors.empty()) return {0.0, 1.0, true};
    const auto n = factors.front().rows();
    const Matrix id = Matrix::Identity(n, n);
    Matrix prod = id;
    double rhs = 1.0;
    for (const auto& a : factors) {
        prod = prod * a;
        rhs *= 1.0 + spectral_norm(a - id);
    }
    InequalityCheck c;
    c.lhs = 1.0 + spectral_norm(prod - id);
    c.rhs = rhs;
    c.holds = c.lhs <= c.rhs * (1.0 + 1e-12);
    return c;
}

double cauchy_estimate(const std::vector<std::pair<Complex, Projection>>& factors, Complex z0, Complex z, int n,
                       int r, int s) {
    if (!(0 <= n && n <= r && r <= s && s <= static_cast<int>(factors.size()))) {
        throw DomainError("cauchy estimate requires n <= r <= s <= number of factors");
    }
    auto exponent_sum = [&](int upto) {
        double acc = 0.0;
        for (int k = n + 1; k <= upto; ++k) {
            const double mu = std::abs((z - z0) / (factors[static_cast<std::size_t>(k - 1)].first - z0));
            if (mu >= 1.0) throw DomainError("cauchy estimate requires |z - z0| < |z_k - z0| beyond n");
            acc += std::pow(mu, k + 1) / (1.0 - mu);
        }
        return acc;
    };
    const double gn = spectral_norm(partial_product(factors, z0, n, z));
    return gn * (std::exp(exponent_sum(s)) - std::exp(exponent_sum(r)));
}

}  // namespace branges
