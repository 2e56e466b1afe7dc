#include "branges/fixtures.hpp"

namespace branges::fixtures {

namespace {

MatPoly scalar(std::initializer_list<Complex> c) { return MatPoly::scalar(c); }

}  // namespace

DBOperator scalar_cayley() { return {scalar({-kI, 1.0}), scalar({kI, 1.0})}; }

DBOperator diag2() {
    return {MatPoly::diagonal({scalar({-kI, 1.0}), scalar({-2.0 * kI, 1.0})}),
            MatPoly::diagonal({scalar({kI, 1.0}), scalar({2.0 * kI, 1.0})})};
}

DBOperator joint_real_zero() {
    // (z - 1)(z - i) and (z - 1)(z + i).
    return {scalar({kI, -1.0 - kI, 1.0}), scalar({-kI, -1.0 + kI, 1.0})};
}

MatPoly joint_real_zero_factor() { return scalar({1.0, -1.0}); }

DBOperator joint_real_zero_reduced() { return {scalar({kI, -1.0}), scalar({-kI, -1.0})}; }

MatPoly nilpotent_jordan() {
    Matrix c0 = Matrix::Zero(2, 2);
    c0(0, 1) = 1.0;
    return MatPoly(std::vector<Matrix>{c0, Matrix::Identity(2, 2)});
}

std::vector<std::string> names() { return {"scalar-cayley", "diag-2", "joint-real-zero", "nilpotent-jordan"}; }

}  // namespace branges::fixtures
