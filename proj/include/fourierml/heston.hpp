#pragma once

#include <complex>

#include "fourierml/errors.hpp"

namespace fourierml {

struct HestonParams {
  double kappa;  // mean-reversion speed (1/years)
  double theta;  // long-run variance level
  double xi;     // volatility of variance
  double rho;    // spot/variance correlation
  double v0;     // initial variance

  bool valid() const;
  void validate() const;  // throws std::invalid_argument
};

// 2*kappa*theta >= xi^2 (keeps the variance process positive)
bool feller_holds(const HestonParams& p);

struct MarketContext {
  double s0;  // spot
  double r;   // continuously compounded short rate

  bool valid() const;
  void validate() const;
};

enum class OptionKind { put, call };

struct OptionSpec {
  double strike;
  double maturity;  // years
  OptionKind kind;

  bool valid() const;
  void validate() const;
};

// Characteristic function of log(S_t), evaluated at real or complex u.
// Throws CfOverflowError when the exponent or value is non-finite; callers
// probing moment existence rely on that signal.
std::complex<double> cf_log_price(std::complex<double> u, double t,
                                  const HestonParams& p, const MarketContext& mkt);

// log|phi_log(u)| for real u; equals log|phi_X(u)| since centring only
// changes the phase. Avoids the final exp so huge-|u| tails can be integrated
// in log space.
double log_cf_modulus(double u, double t, const HestonParams& p,
                      const MarketContext& mkt);

// E[log S_t], obtained numerically from the first derivative of the
// characteristic function at zero. Cached per (params, t, market); the cache
// is thread-safe. Throws MomentUnavailableError if differentiation fails.
double expected_log_price(double t, const HestonParams& p, const MarketContext& mkt);

// Characteristic function of the centred log-return X = log(S_t) - mu.
std::complex<double> cf_centered(std::complex<double> u, double t,
                                 const HestonParams& p, const MarketContext& mkt);

// Deterministic-variance proxy w = theta*t + (v0-theta)(1-e^{-kappa t})/kappa;
// sets the curvature scale used to pick differentiation steps.
double variance_proxy(double t, const HestonParams& p);

// Blow-up time of E[S_t^p]: finite iff the moment explodes at that horizon.
// Returns +inf when the moment exists for all t. Requires p >= 0.
double moment_explosion_time(double p, const HestonParams& params);

// Drops all cached expectations (used by benchmarks that time cold paths).
void clear_mu_cache();

}  // namespace fourierml
