#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "fourierml/heston.hpp"

namespace fourierml {

// n-th root of the n-th moment read off the n-th derivative of a centred
// characteristic function at zero. Returns nullopt ("moment unavailable") when
// the derivative is unstable, has a non-trivial imaginary residual, or comes
// out non-positive. `scale` is the curvature scale (~ std dev of the law).
std::optional<double> moment_root_from_cf(
    int n, const std::function<std::complex<double>(double)>& cf, double scale);

// mu_n for the Heston centred log-return. n in {2, 4, 6, 8}.
std::optional<double> moment_root_mu_n(int n, double t, const HestonParams& p,
                                       const MarketContext& mkt);

// I_s = ((1/2pi) Int |u|^{s+1} |phi(u)| du)^{1/s} for a symmetric |phi| given
// through log|phi|. Integrates 2x the positive half-axis in log space; the
// upper limit doubles until the integrand falls 14 orders below its peak.
// Throws IntegralNonconvergentError if no decay by u_cap.
double integral_root_from_log_modulus(int s, const std::function<double(double)>& log_modulus,
                                      double rel_tol, double u_cap = 1e7);

// I_s for the Heston centred log-return.
double integral_root_i_s(int s, double t, const HestonParams& p, const MarketContext& mkt,
                         double rel_tol = 1e-6);

}  // namespace fourierml
