#pragma once

#include <string>

#include "opspread/operator_mps.hpp"

namespace opspread {

/// Binary checkpoint for resuming long evolutions.
///
/// Layout (all integers and floats little-endian):
///   magic   "OPSMPS1\n" (8 bytes)
///   u32     format version (currently 1)
///   u64     L
///   u64[L+1] bond dimensions chi_0 .. chi_L
///   f64     norm_log
///   i32     canonical form (0 none, 1 left, 2 right, 3 mixed)
///   i32     center (-1 when none)
///   per site j, per physical index mu in (0,1,2,3):
///     f64[chi_{j} * chi_{j+1}] block in row-major order
void save_mps(const std::string& path, const OperatorMPS& mps);

OperatorMPS load_mps(const std::string& path);

}  // namespace opspread
