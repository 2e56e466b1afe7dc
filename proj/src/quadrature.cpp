#include "branges/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace branges {

void QuadConfig::validate() const {
    if (!(T0 > 0.0) || max_doublings <= 0 || !(rel_tol > 0.0) || nodes_per_panel <= 1 || !(panel_tol > 0.0) ||
        max_depth <= 0) {
        throw DomainError("quadrature configuration values must be positive");
    }
}

const GaussRule& gauss_legendre(int nodes) {
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[nodes];
    if (slot) return *slot;
    auto rule = std::make_unique<GaussRule>();
    rule->x.resize(static_cast<std::size_t>(nodes));
    rule->w.resize(static_cast<std::size_t>(nodes));
    const int half = (nodes + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (nodes + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 1; j <= nodes; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
            }
            dp = nodes * (z * p1 - p2) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p1 = 1.0, p2 = 0.0;
        for (int j = 1; j <= nodes; ++j) {
            const double p3 = p2;
            p2 = p1;
            p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
        }
        dp = nodes * (z * p1 - p2) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        rule->x[i] = -z;
        rule->x[nodes - 1 - i] = z;
        rule->w[i] = w;
        rule->w[nodes - 1 - i] = w;
    }
    slot = std::move(rule);
    return *slot;
}

namespace {

struct Panel {
    Vector value;
    double l1 = 0.0;
};

Panel gauss_panel(const RealIntegrand& f, double a, double b, const GaussRule& rule) {
    const double h = 0.5 * (b - a);
    const double c = 0.5 * (a + b);
    Panel p;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
        const Vector v = f(c + h * rule.x[i]);
        if (p.value.size() == 0) p.value = Vector::Zero(v.size());
        p.value += (rule.w[i] * h) * v;
        p.l1 += rule.w[i] * std::abs(h) * v.norm();
    }
    return p;
}

struct Adaptive {
    const RealIntegrand& f;
    const GaussRule& rule;
    const QuadConfig& q;
    double floor = 0.0;
    bool unresolved = false;

    Panel run(double a, double b, const Panel& whole, int depth) {
        const double m = 0.5 * (a + b);
        const Panel left = gauss_panel(f, a, m, rule);
        const Panel right = gauss_panel(f, m, b, rule);
        Panel both{left.value + right.value, left.l1 + right.l1};
        const double diff = (both.value - whole.value).norm();
        if (!std::isfinite(diff)) {
            unresolved = true;
            return both;
        }
        if (diff <= std::max(q.panel_tol * both.l1, floor)) return both;
        if (depth >= q.max_depth) {
            unresolved = true;
            return both;
        }
        Panel l = run(a, m, left, depth + 1);
        Panel r = run(m, b, right, depth + 1);
        return {l.value + r.value, l.l1 + r.l1};
    }
};

std::vector<double> cut_points(double a, double b, const std::vector<double>& breaks) {
    std::vector<double> pts{a};
    for (double x : breaks) {
        if (x > a && x < b) pts.push_back(x);
    }
    pts.push_back(b);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

QuadResult adaptive_pieces(const RealIntegrand& f, const std::vector<double>& pts, const QuadConfig& q) {
    const GaussRule& rule = gauss_legendre(q.nodes_per_panel);
    std::vector<Panel> coarse;
    double mass = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        coarse.push_back(gauss_panel(f, pts[i], pts[i + 1], rule));
        mass += coarse.back().l1;
    }
    Adaptive ad{f, rule, q, 1e-14 * mass};
    QuadResult out;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Panel p = ad.run(pts[i], pts[i + 1], coarse[i], 0);
        if (out.value.size() == 0) out.value = Vector::Zero(p.value.size());
        out.value += p.value;
        out.l1 += p.l1;
    }
    out.unresolved = ad.unresolved;
    return out;
}

void accumulate(QuadResult& into, const QuadResult& part) {
    if (into.value.size() == 0) into.value = Vector::Zero(part.value.size());
    into.value += part.value;
    into.l1 += part.l1;
    into.unresolved = into.unresolved || part.unresolved;
}

QuadResult total_at(const RealIntegrand& f, double T, const std::vector<double>& breaks, const QuadConfig& q) {
    QuadResult out = adaptive_pieces(f, cut_points(-T, T, breaks), q);
    const RealIntegrand folded = [&](double s) -> Vector {
        const double t = T / s;
        return (f(t) + f(-t)) * (T / (s * s));
    };
    accumulate(out, adaptive_pieces(folded, {0.0, 1.0}, q));
    out.T = T;
    return out;
}

}  // namespace

QuadResult integrate_interval(const RealIntegrand& f, double a, double b, const std::vector<double>& breaks,
                              const QuadConfig& q) {
    q.validate();
    QuadResult r = adaptive_pieces(f, cut_points(a, b, breaks), q);
    r.converged = !r.unresolved;
    return r;
}

QuadResult integrate_real(const RealIntegrand& f, const std::vector<double>& breaks, const QuadConfig& q) {
    q.validate();
    double reach = 0.0;
    for (double x : breaks) reach = std::max(reach, std::abs(x));
    double T = std::max(q.T0, breaks.empty() ? 0.0 : 2.0 * (1.0 + reach));
    QuadResult prev = total_at(f, T, breaks, q);
    for (int k = 1; k <= q.max_doublings; ++k) {
        T *= 2.0;
        QuadResult cur = total_at(f, T, breaks, q);
        cur.doublings = k;
        cur.unresolved = cur.unresolved || prev.unresolved;
        const double change = (cur.value - prev.value).norm();
        const double scale = std::max(cur.value.norm(), 1e-6 * cur.l1);
        if (std::isfinite(change) && change <= q.rel_tol * scale) {
            cur.converged = !cur.unresolved;
            return cur;
        }
        prev = std::move(cur);
    }
    prev.converged = false;
    return prev;
}

QuadResult integrate_real_or_throw(const RealIntegrand& f, const std::vector<double>& breaks, const QuadConfig& q) {
    QuadResult r = integrate_real(f, breaks, q);
    if (!r.converged) {
        throw ConvergenceError(r.unresolved ? "quadrature panels unresolved (integrand not integrable?)"
                                            : "quadrature did not converge within max_doublings");
    }
    return r;
}

}  // namespace branges
