#pragma once

// Reference tensors and factors shared by the unit and acceptance
// suites.  File-based fixtures live in fixtures/.

#include <filesystem>
#include <string>

#include "gpcpd/cp.hpp"
#include "gpcpd/io.hpp"

#ifndef GPCPD_FIXTURE_DIR
#error "GPCPD_FIXTURE_DIR must be defined"
#endif

namespace refdata {

inline std::filesystem::path fixture(const std::string& name) {
  return std::filesystem::path(GPCPD_FIXTURE_DIR) / name;
}

inline gpcpd::DenseTensor genpoly_3x3x3() { return gpcpd::read_tensor(fixture("genpoly_3x3x3.json")); }
inline gpcpd::DenseTensor rank4_4x4x3() { return gpcpd::read_tensor(fixture("rank4_4x4x3.json")); }
inline gpcpd::DenseTensor rank5_5x4x3x3() { return gpcpd::read_tensor(fixture("rank5_5x4x3x3.json")); }
inline gpcpd::CPDecomposition rank4_4x4x3_factors() {
  return gpcpd::read_factors(fixture("rank4_4x4x3_factors.json"));
}
inline gpcpd::CPDecomposition rank5_5x4x3x3_factors() {
  return gpcpd::read_factors(fixture("rank5_5x4x3x3_factors.json"));
}

/// Reference rank-3 approximation of sqrt_sum_tensor(), rounded to 4 decimals.
inline gpcpd::CPDecomposition sqrt_sum_rank3_factors() {
  gpcpd::Matrix u1(5, 3), u2(5, 3), u3(4, 3);
  u1 << -0.4973, -7.6813, 11.7465, -0.2525, -6.9651, 12.4970, -0.0872, -6.0497, 13.2858, -0.0132, -5.0521, 14.1423,
      -0.0010, -4.0469, 15.0771;
  u2 << 1.0000, 1.0000, 1.0000, 0.5058, 0.9211, 1.0306, 0.1713, 0.8167, 1.0649, 0.0262, 0.7003, 1.1042, 0.0136,
      0.5807, 1.1490;
  u3 << 1.0000, 1.0000, 1.0000, 0.5075, 0.9289, 1.0216, 0.1756, 0.8323, 1.0469, 0.0399, 0.7231, 1.0771;
  return gpcpd::CPDecomposition({u1, u2, u3});
}

}  // namespace refdata
