#include "fourierml/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fourierml/errors.hpp"
#include "fourierml/finite_diff.hpp"
#include "fourierml/quadrature.hpp"

namespace fourierml {

namespace {

using cd = std::complex<double>;

// i^{-n} for integer n >= 0
cd inv_i_pow(int n) {
  switch (n & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

constexpr double kStabilityRelTol = 1e-3;
constexpr double kStepFactor = 0.4;  // base step = 0.4 / scale

}  // namespace

std::optional<double> moment_root_from_cf(
    int n, const std::function<std::complex<double>(double)>& cf, double scale) {
  if (n < 2 || n > 8 || n % 2 != 0) {
    throw std::invalid_argument("moment_root_from_cf: n must be even in {2,...,8}");
  }
  if (!(scale > 0.0)) throw std::invalid_argument("moment_root_from_cf: scale must be > 0");

  DerivativeResult d;
  try {
    d = derivative_at_zero(n, cf, kStepFactor / scale);
  } catch (const CfOverflowError&) {
    return std::nullopt;
  } catch (const MomentUnavailableError&) {
    return std::nullopt;
  }

  const cd moment = inv_i_pow(n) * d.value;
  const double m = moment.real();
  if (!std::isfinite(m) || m <= 0.0) return std::nullopt;
  if (!d.stable(kStabilityRelTol)) return std::nullopt;
  if (std::abs(moment.imag()) > kStabilityRelTol * std::abs(m)) return std::nullopt;
  return std::pow(m, 1.0 / static_cast<double>(n));
}

std::optional<double> moment_root_mu_n(int n, double t, const HestonParams& p,
                                       const MarketContext& mkt) {
  p.validate();
  mkt.validate();
  if (!(t > 0.0)) throw std::invalid_argument("moment_root_mu_n: t must be > 0");

  double mu;
  try {
    mu = expected_log_price(t, p, mkt);
  } catch (const MomentUnavailableError&) {
    return std::nullopt;
  }
  const double scale = std::max(std::sqrt(std::max(variance_proxy(t, p), 0.0)), 1e-4);
  const cd neg_i{0.0, -1.0};
  auto centered = [&, mu](double u) {
    return cf_log_price(cd{u, 0.0}, t, p, mkt) * std::exp(neg_i * u * mu);
  };
  return moment_root_from_cf(n, centered, scale);
}

double integral_root_from_log_modulus(int s, const std::function<double(double)>& log_modulus,
                                      double rel_tol, double u_cap) {
  if (s < 1) throw std::invalid_argument("integral_root: s must be >= 1");
  if (!(rel_tol > 0.0)) throw std::invalid_argument("integral_root: rel_tol must be > 0");

  const double sp1 = static_cast<double>(s) + 1.0;
  auto log_f = [&](double u) { return sp1 * std::log(u) + log_modulus(u); };

  // expand the upper limit until the integrand is negligible vs its peak
  double peak = log_f(1.0);
  double u_peak = 1.0;
  double upper = 1.0;
  const double drop = std::log(1e-14);
  for (;;) {
    upper *= 2.0;
    if (upper > u_cap) throw IntegralNonconvergentError{};
    const double g = log_f(upper);
    if (g > peak) {
      peak = g;
      u_peak = upper;
    } else if (g < peak + drop && upper >= 4.0 * u_peak) {
      break;
    }
  }

  // scaled integrand, bounded by ~1 near the peak
  auto f = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double g = log_f(u) - peak;
    return g < -745.0 ? 0.0 : std::exp(g);
  };

  // dyadic panels; coarse pass sizes the per-panel tolerance
  std::vector<std::pair<double, double>> panels;
  panels.emplace_back(0.0, 1.0);
  for (double lo = 1.0; lo < upper; lo *= 2.0) panels.emplace_back(lo, std::min(lo * 2.0, upper));

  std::vector<double> coarse(panels.size());
  double coarse_total = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    coarse[i] = simpson_rule(f, panels[i].first, panels[i].second, 16);
    coarse_total += coarse[i];
  }
  if (!(coarse_total > 0.0)) coarse_total = 1.0;

  double total = 0.0;
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const double tol = 0.5 * rel_tol *
                       (coarse_total / static_cast<double>(panels.size()) + std::abs(coarse[i]));
    total += adaptive_simpson(f, panels[i].first, panels[i].second, tol);
  }

  // I_s = ((1/2pi) * 2 * total * e^peak)^{1/s}
  return std::exp((peak + std::log(total) - std::log(std::numbers::pi)) /
                  static_cast<double>(s));
}

double integral_root_i_s(int s, double t, const HestonParams& p, const MarketContext& mkt,
                         double rel_tol) {
  p.validate();
  mkt.validate();
  if (!(t > 0.0)) throw std::invalid_argument("integral_root_i_s: t must be > 0");
  return integral_root_from_log_modulus(
      s, [&](double u) { return log_cf_modulus(u, t, p, mkt); }, rel_tol);
}

}  // namespace fourierml
