#pragma once

#include <algorithm>
#include <cmath>

namespace psl {

/// Relative-plus-absolute comparison tolerance: |a-b| <= atol + rtol*max(|a|,|b|).
struct Tol {
  double atol = 1e-9;
  double rtol = 1e-9;

  bool near(double a, double b) const {
    return std::abs(a - b) <= atol + rtol * std::max(std::abs(a), std::abs(b));
  }
};

/// Residual of the scalar identity lhs == rhs, scaled by the largest term magnitude
/// (floored at 1 so small identities are judged absolutely).
inline double rel_residual(double lhs, double rhs) {
  const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
  return std::abs(lhs - rhs) / scale;
}

}  // namespace psl
