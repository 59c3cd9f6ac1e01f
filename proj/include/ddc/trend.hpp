#pragma once

#include <vector>

namespace ddc {

/// Ordinary least squares of a degree-1 or degree-2 polynomial.
struct TrendFit {
  std::vector<double> coeffs;  // ascending powers
  std::vector<double> std_errors;
  double r2 = 0;
  bool r2_defined = true;  // false when residual dof is zero
};

TrendFit polynomial_trend(const std::vector<double>& x,
                          const std::vector<double>& y, int degree);

}  // namespace ddc
