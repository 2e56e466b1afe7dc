#include "branges/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "branges/analytic.hpp"

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

namespace branges {

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& m) {
    return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

double resolve_tol(const Matrix& m, double tol) { return tol < 0.0 ? default_rank_tol(m) : tol; }

// (||C_0|| / ||C_d||)^(1/d), the modulus scale of the zeros.
double zero_scale(const MatPoly& a) {
    const int d = a.degree();
    if (d == 0) return 1.0;
    const double c0 = spectral_norm(a.coeff(0));
    const double cd = spectral_norm(a.coeff(d));
    if (c0 == 0.0 || cd == 0.0) return 1.0;
    return std::pow(c0 / cd, 1.0 / d);
}

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

struct Cluster {
    Complex sum = 0.0;
    int count = 0;
    Complex mean() const { return sum / static_cast<double>(count); }
};

std::vector<Cluster> cluster_roots(const std::vector<Complex>& roots, const ZeroOptions& opts) {
    auto radius = [&](Complex a, Complex b) {
        if (opts.cluster_radius >= 0.0) return opts.cluster_radius;
        return 1e-8 * (1.0 + std::max(std::abs(a), std::abs(b)));
    };
    const int k = static_cast<int>(roots.size());
    DisjointSet ds(k);
    for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j) {
            if (std::abs(roots[i] - roots[j]) <= radius(roots[i], roots[j])) ds.unite(i, j);
        }
    }
    std::vector<Cluster> out;
    std::vector<int> index(static_cast<std::size_t>(k), -1);
    for (int i = 0; i < k; ++i) {
        const int r = ds.find(i);
        if (index[r] < 0) {
            index[r] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[index[r]].sum += roots[i];
        out[index[r]].count += 1;
    }
    if (!opts.multiplicity_aware) return out;
    bool merged = true;
    while (merged) {
        merged = false;
        for (std::size_t a = 0; a < out.size() && !merged; ++a) {
            for (std::size_t b = a + 1; b < out.size() && !merged; ++b) {
                const int m = out[a].count + out[b].count;
                const Complex za = out[a].mean();
                const Complex zb = out[b].mean();
                const double scale = 1.0 + std::max(std::abs(za), std::abs(zb));
                const double thr = std::max(radius(za, zb), 100.0 * std::pow(kEps, 1.0 / m) * scale);
                if (std::abs(za - zb) <= thr) {
                    out[a].sum += out[b].sum;
                    out[a].count += out[b].count;
                    out.erase(out.begin() + static_cast<std::ptrdiff_t>(b));
                    merged = true;
                }
            }
        }
    }
    return out;
}

Complex newton_polish(const MatPoly& a, const MatPoly& da, Complex z) {
    const Matrix az = a(z);
    Eigen::FullPivLU<Matrix> lu(az);
    if (!lu.isInvertible()) return z;
    const Complex tr = lu.solve(da(z)).trace();
    if (tr == 0.0) return z;
    const Complex cand = z - 1.0 / tr;
    if (std::abs(cand - z) > 1e-3 * (1.0 + std::abs(z))) return z;
    const double before = sigma_ratio(az);
    const double after = sigma_ratio(a(cand));
    return after < before ? cand : z;
}

}  // namespace

double default_rank_tol(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return spectral_norm(m) * static_cast<double>(m.cols()) * std::sqrt(kEps);
}

RankReport numerical_rank(const Matrix& m, double tol) {
    RankReport r;
    r.singular_values = singular_values(m);
    r.tol_used = resolve_tol(m, tol);
    for (int i = 0; i < r.singular_values.size(); ++i) r.rank += r.singular_values(i) > r.tol_used ? 1 : 0;
    return r;
}

double term_scale(const MatPoly& a, Complex z) {
    double acc = 0.0;
    const double r = std::abs(z);
    for (int k = a.degree(); k >= 0; --k) acc = acc * r + spectral_norm(a.coeff(k));
    return acc;
}

double local_scale(const MatFun& f, Complex z) {
    if (const MatPoly* p = f.as_poly()) return term_scale(*p, z);
    const double r = taylor_radius(z);
    double s = 0.0;
    for (int l = 0; l < 8; ++l) s = std::max(s, spectral_norm(f(z + r * std::polar(1.0, 2.0 * kPi * l / 8))));
    return s;
}

double rank_tol_at(const MatFun& f, Complex z, double user_tol) {
    if (user_tol >= 0.0) return user_tol;
    const Matrix m = f(z);
    return static_cast<double>(f.dim()) * std::sqrt(kEps) * std::max(spectral_norm(m), local_scale(f, z));
}

Projection cokernel_projection(const Matrix& m, double tol) {
    const int n = static_cast<int>(m.rows());
    const double t = resolve_tol(m, tol);
    const auto svd = full_svd(m);
    const Eigen::VectorXd s = svd.singularValues();
    int first = 0;
    while (first < s.size() && s(first) > t) ++first;
    // Rows beyond the number of singular values (none for square m) also span the cokernel.
    return Projection::from_orthonormal(svd.matrixU().rightCols(n - first), n);
}

Projection kernel_projection(const Matrix& m, double tol) {
    const int n = static_cast<int>(m.cols());
    const double t = resolve_tol(m, tol);
    const auto svd = full_svd(m);
    const Eigen::VectorXd s = svd.singularValues();
    int first = 0;
    while (first < s.size() && s(first) > t) ++first;
    return Projection::from_orthonormal(svd.matrixV().rightCols(n - first), n);
}

MatPoly det_poly(const MatPoly& a) {
    const int n = a.dim();
    const int count = n * a.degree() + 1;
    const double r = zero_scale(a);
    std::vector<Complex> samples(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const Complex z = r * std::polar(1.0, 2.0 * kPi * k / count);
        samples[k] = a(z).partialPivLu().determinant();
    }
    std::vector<Complex> c(static_cast<std::size_t>(count));
    double cmax = 0.0;
    for (int j = 0; j < count; ++j) {
        Complex acc = 0.0;
        for (int k = 0; k < count; ++k) {
            acc += samples[k] * std::polar(1.0, -2.0 * kPi * static_cast<double>(j) * k / count);
        }
        c[j] = acc / (static_cast<double>(count) * std::pow(r, j));
        cmax = std::max(cmax, std::abs(c[j]));
    }
    for (auto& v : c) {
        if (std::abs(v) <= 1e-10 * cmax) v = 0.0;
    }
    while (c.size() > 1 && c.back() == 0.0) c.pop_back();
    return MatPoly::scalar(c);
}

bool det_identically_zero(const MatPoly& a) {
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double r = 1.0 + zero_scale(a);
    for (int k = 0; k < 7; ++k) {
        const Complex z(r * u(rng), r * u(rng));
        if (numerical_rank(a(z), rank_tol_at(a, z)).rank == a.dim()) return false;
    }
    return true;
}

std::vector<ZeroRecord> zeros(const MatPoly& a, const ZeroOptions& opts) {
    if (det_identically_zero(a)) throw ZeroPolynomialError("det A vanishes identically");
    const int n = a.dim();
    const int d = a.degree();
    if (d == 0) return {};

    const double gamma = zero_scale(a);
    std::vector<Matrix> c;
    double cmax = 0.0;
    for (int k = 0; k <= d; ++k) {
        c.push_back(a.coeff(k) * std::pow(gamma, k));
        cmax = std::max(cmax, spectral_norm(c.back()));
    }
    for (auto& m : c) m /= cmax;

    const int big = n * d;
    Matrix l0 = Matrix::Zero(big, big);
    Matrix l1 = Matrix::Identity(big, big);
    for (int i = 0; i + 1 < d; ++i) l0.block(i * n, (i + 1) * n, n, n) = Matrix::Identity(n, n);
    for (int k = 0; k < d; ++k) l0.block((d - 1) * n, k * n, n, n) = -c[k];
    l1.block((d - 1) * n, (d - 1) * n, n, n) = c[d];

    Vector alpha(big), beta(big);
    std::complex<double> dummy;
    const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', big, l0.data(), big, l1.data(), big,
                                          alpha.data(), beta.data(), &dummy, 1, &dummy, 1);
    if (info != 0) throw ConvergenceError("QZ iteration failed on the companion pencil");

    std::vector<Complex> roots;
    const double inf_limit = 1.0 / std::sqrt(kEps);
    for (int i = 0; i < big; ++i) {
        if (std::abs(beta(i)) * inf_limit <= std::abs(alpha(i))) continue;
        roots.push_back(gamma * alpha(i) / beta(i));
    }

    const MatPoly da = a.derivative();
    std::vector<ZeroRecord> out;
    for (const auto& cl : cluster_roots(roots, opts)) {
        ZeroRecord rec;
        rec.z = cl.mean();
        rec.mult = cl.count;
        if (opts.polish && rec.mult == 1) rec.z = newton_polish(a, da, rec.z);
        const int rank = numerical_rank(a(rec.z), rank_tol_at(a, rec.z, opts.rank_tol)).rank;
        rec.defect = std::clamp(n - rank, 1, rec.mult);
        out.push_back(rec);
    }
    return out;
}

bool nearer_to(Complex z0, Complex a, Complex b) {
    const double da = std::abs(a - z0);
    const double db = std::abs(b - z0);
    const double tie = 1e-12 * (1.0 + std::max(da, db));
    if (std::abs(da - db) > tie) return da < db;
    const double pa = std::arg(a - z0);
    const double pb = std::arg(b - z0);
    if (std::abs(pa - pb) > 1e-12) return pa < pb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

void sort_by_distance(std::vector<ZeroRecord>& zs, Complex z0) {
    std::stable_sort(zs.begin(), zs.end(),
                     [z0](const ZeroRecord& a, const ZeroRecord& b) { return nearer_to(z0, a.z, b.z); });
}

}  // namespace branges
