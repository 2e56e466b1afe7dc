#pragma once

#include <cmath>
#include <vector>

#include "branges/core.hpp"

namespace branges {

/// Switch radius for two-branch evaluations of removable singularities.
inline constexpr double kRemovableSwitch = 1e-6;

/// Taylor coefficients c_0..c_{count-1} of an entire function about `center`,
/// by the trapezoidal rule on the circle |z - center| = radius. The rule is
/// spectrally accurate for entire integrands; `nodes` must exceed `count`.
/// Works for any callable returning an Eigen matrix or vector.
template <class F>
auto taylor_coefficients(const F& f, Complex center, double radius, int count, int nodes = 32)
    -> std::vector<decltype(f(center))> {
    using Value = decltype(f(center));
    std::vector<Value> samples;
    samples.reserve(static_cast<std::size_t>(nodes));
    for (int l = 0; l < nodes; ++l) {
        const double theta = 2.0 * kPi * l / nodes;
        samples.push_back(f(center + radius * std::polar(1.0, theta)));
    }
    std::vector<Value> coeffs;
    coeffs.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        Value acc = Value::Zero(samples[0].rows(), samples[0].cols());
        for (int l = 0; l < nodes; ++l) {
            const double theta = -2.0 * kPi * static_cast<double>(j) * l / nodes;
            acc += std::polar(1.0, theta) * samples[static_cast<std::size_t>(l)];
        }
        coeffs.push_back(acc / (static_cast<double>(nodes) * std::pow(radius, j)));
    }
    return coeffs;
}

/// Default circle radius for taylor_coefficients around a point.
inline double taylor_radius(Complex center) { return 0.05 * (1.0 + std::abs(center)); }

/// Evaluates sum_{j>=skip} c_j h^{j-skip}; with skip = 1 and c_0 = f(alpha)
/// this is the backward shift (f(z) - f(alpha)) / (z - alpha) near alpha.
template <class Value>
Value taylor_shift_eval(const std::vector<Value>& c, Complex h, int skip = 1) {
    Value acc = Value::Zero(c.front().rows(), c.front().cols());
    for (int j = static_cast<int>(c.size()) - 1; j >= skip; --j) {
        acc *= h;
        acc += c[static_cast<std::size_t>(j)];
    }
    return acc;
}

}  // namespace branges
