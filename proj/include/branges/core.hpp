#pragma once

#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace branges {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kEps = std::numeric_limits<double>::epsilon();

// Error hierarchy. Every failure raised by the library derives from Error so
// callers (notably the CLI) can map it to an exit code in one place.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define BRANGES_DEFINE_ERROR(Name)                 \
    class Name : public Error {                    \
    public:                                        \
        using Error::Error;                        \
    }

BRANGES_DEFINE_ERROR(SingularityError);
BRANGES_DEFINE_ERROR(ZeroPolynomialError);
BRANGES_DEFINE_ERROR(NotAZeroError);
BRANGES_DEFINE_ERROR(BasePointSingularError);
BRANGES_DEFINE_ERROR(IterationLimitError);
BRANGES_DEFINE_ERROR(RangeMismatchError);
BRANGES_DEFINE_ERROR(ConvergenceError);
BRANGES_DEFINE_ERROR(FactorMismatchError);
BRANGES_DEFINE_ERROR(CommutationError);
BRANGES_DEFINE_ERROR(DomainError);
BRANGES_DEFINE_ERROR(UnknownFixtureError);
BRANGES_DEFINE_ERROR(ParseError);
BRANGES_DEFINE_ERROR(DimensionError);

#undef BRANGES_DEFINE_ERROR

/// rho_w(z) = -2 pi i (z - conj(w)), the weight of the half-plane kernels.
inline Complex rho(Complex w, Complex z) { return -2.0 * kPi * kI * (z - std::conj(w)); }

inline Eigen::VectorXd singular_values(const Matrix& m) {
    if (m.size() == 0) return {};
    return Eigen::JacobiSVD<Matrix>(m).singularValues();
}

/// sigma_min / sigma_max, with 0 for the zero matrix.
inline double sigma_ratio(const Matrix& m) {
    const Eigen::VectorXd s = singular_values(m);
    if (s.size() == 0 || s(0) == 0.0) return 0.0;
    return s(s.size() - 1) / s(0);
}

inline double spectral_norm(const Matrix& m) {
    const Eigen::VectorXd s = singular_values(m);
    return s.size() == 0 ? 0.0 : s(0);
}

}  // namespace branges
