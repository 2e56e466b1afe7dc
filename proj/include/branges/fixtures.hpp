#pragma once

#include <string>
#include <vector>

#include "branges/dbop.hpp"
#include "branges/matpoly.hpp"

namespace branges::fixtures {

/// (E_minus, E_plus) = (z - i, z + i).
DBOperator scalar_cayley();
/// E_minus = diag(z - i, z - 2i), E_plus = diag(z + i, z + 2i).
DBOperator diag2();
/// E_pm = (z - 1)(z pm i), sharing the real zero 1.
DBOperator joint_real_zero();
/// The factor N = 1 - z and the reduced pair E0_pm = -(z pm i) of joint_real_zero.
MatPoly joint_real_zero_factor();
DBOperator joint_real_zero_reduced();
/// [[z, 1], [0, z]].
MatPoly nilpotent_jordan();

std::vector<std::string> names();

}  // namespace branges::fixtures
