#pragma once

#include "branges/matfun.hpp"

namespace branges {

/// A pair (E_minus, E_plus) of matrix functions claiming to be a de Branges
/// operator. Whether it is one is decided by validate_h1.
struct DBOperator {
    MatFun E_minus;
    MatFun E_plus;

    DBOperator(MatFun e_minus, MatFun e_plus) : E_minus(std::move(e_minus)), E_plus(std::move(e_plus)) {
        if (E_minus.dim() != E_plus.dim()) throw DimensionError("E_minus and E_plus dimensions differ");
    }

    int dim() const { return E_plus.dim(); }
};

}  // namespace branges
