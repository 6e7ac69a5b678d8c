#pragma once

#include <complex>
#include <functional>

namespace fourierml {

struct DerivativeResult {
  std::complex<double> value;
  double error_estimate;  // absolute; from the extrapolation table

  bool stable(double rel_tol = 1e-3) const {
    return error_estimate <= rel_tol * std::abs(value);
  }
};

// n-th derivative of f at 0 from minimal-width central stencils evaluated at
// steps h, h/2, ..., h/2^{levels-1} and Richardson-extrapolated; the returned
// entry is the one with the smallest internal disagreement, Ridders-style.
// Supports 1 <= order <= 8.
DerivativeResult derivative_at_zero(int order,
                                    const std::function<std::complex<double>(double)>& f,
                                    double base_step, int levels = 5);

}  // namespace fourierml
