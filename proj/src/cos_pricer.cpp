#include "fourierml/cos_pricer.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fourierml {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kMaxTerms = 1 << 26;

// e^{i k pi / 2} cycles through 1, i, -1, -i
cd quarter_turn(std::int64_t k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

void CosTuning::validate() const {
  if (!valid()) throw std::invalid_argument("CosTuning: need L > 0 and N >= 1");
  if (num_terms > kMaxTerms) throw std::invalid_argument("CosTuning: N unreasonably large");
}

void Tolerance::validate() const {
  if (!valid()) throw std::invalid_argument("Tolerance: need 0 < eps <= 1");
}

void BoundValues::validate() const {
  if (!valid()) throw std::invalid_argument("BoundValues: need mu_n, i_s > 0, even n >= 2, s >= 1");
}

std::vector<double> cosine_coeffs(const CosTuning& tuning, double t, const HestonParams& p,
                                  const MarketContext& mkt) {
  tuning.validate();
  const double L = tuning.half_width;
  const std::int64_t N = tuning.num_terms;
  const double mu = expected_log_price(t, p, mkt);
  const cd neg_i{0.0, -1.0};

  std::vector<double> c(static_cast<std::size_t>(N) + 1);
  c[0] = 1.0 / L;  // phi_X(0) = 1
  for (std::int64_t k = 1; k <= N; ++k) {
    const double u = static_cast<double>(k) * kPi / (2.0 * L);
    const cd phi = cf_log_price(cd{u, 0.0}, t, p, mkt) * std::exp(neg_i * u * mu);
    c[static_cast<std::size_t>(k)] = (phi * quarter_turn(k)).real() / L;
  }
  return c;
}

namespace detail {

double psi0(std::int64_t k, double d, double L) {
  if (k == 0) return d + L;
  const double kpi = static_cast<double>(k) * kPi;
  return 2.0 * L / kpi * std::sin(kpi * (d + L) / (2.0 * L));
}

double psi1(std::int64_t k, double d, double L) {
  const double kp = static_cast<double>(k) * kPi / (2.0 * L);
  const double a = kp * (d + L);
  return (std::exp(d) * (kp * std::sin(a) + std::cos(a)) - std::exp(-L)) / (1.0 + kp * kp);
}

}  // namespace detail

std::vector<double> payoff_coeffs_put(double strike, const CosTuning& tuning, double t,
                                      const HestonParams& p, const MarketContext& mkt) {
  tuning.validate();
  if (!(strike > 0.0)) throw std::invalid_argument("payoff_coeffs_put: strike must be > 0");
  const double L = tuning.half_width;
  const std::int64_t N = tuning.num_terms;
  const double mu = expected_log_price(t, p, mkt);
  const double d = std::min(std::log(strike) - mu, L);

  std::vector<double> v(static_cast<std::size_t>(N) + 1, 0.0);
  if (d <= -L) return v;  // payoff support entirely below the truncation range

  const double disc = std::exp(-mkt.r * t);
  const double emu = std::exp(mu);
  for (std::int64_t k = 0; k <= N; ++k) {
    v[static_cast<std::size_t>(k)] =
        disc * (strike * detail::psi0(k, d, L) - emu * detail::psi1(k, d, L));
  }
  return v;
}

double price_put_cos(const OptionSpec& spec, const CosTuning& tuning, const HestonParams& p,
                     const MarketContext& mkt) {
  spec.validate();
  if (spec.kind != OptionKind::put) throw std::invalid_argument("price_put_cos: spec must be a put");
  const std::vector<double> c = cosine_coeffs(tuning, spec.maturity, p, mkt);
  const std::vector<double> v = payoff_coeffs_put(spec.strike, tuning, spec.maturity, p, mkt);

  double acc = 0.5 * c[0] * v[0];  // first term carries weight 1/2
  for (std::size_t k = 1; k < c.size(); ++k) acc += c[k] * v[k];
  if (!std::isfinite(acc)) throw CfOverflowError{};
  return acc;
}

double price_call_cos(const OptionSpec& spec, const CosTuning& tuning, const HestonParams& p,
                      const MarketContext& mkt) {
  spec.validate();
  if (spec.kind != OptionKind::call) throw std::invalid_argument("price_call_cos: spec must be a call");
  OptionSpec put = spec;
  put.kind = OptionKind::put;
  return price_put_cos(put, tuning, p, mkt) + mkt.s0 -
         spec.strike * std::exp(-mkt.r * spec.maturity);
}

double truncation_range(const Tolerance& tol, double mu_n, int n, double strike, double r,
                        double t) {
  tol.validate();
  if (!(mu_n > 0.0) || n < 2 || n % 2 != 0) {
    throw std::invalid_argument("truncation_range: need mu_n > 0 and even n >= 2");
  }
  return mu_n * std::pow(2.0 * strike * std::exp(-r * t) / tol.eps, 1.0 / static_cast<double>(n));
}

double num_terms_raw(const Tolerance& tol, double i_s, int s, double L, double strike, double r,
                     double t) {
  tol.validate();
  if (!(i_s > 0.0) || s < 1 || !(L > 0.0)) {
    throw std::invalid_argument("num_terms: need i_s > 0, s >= 1, L > 0");
  }
  const double sd = static_cast<double>(s);
  const double log_inner = (sd + 2.5) * std::log(2.0) + (sd + 2.0) * std::log(L) - std::log(sd) -
                           (sd + 1.0) * std::log(kPi) + std::log(12.0 * strike) - r * t -
                           std::log(tol.eps);
  return std::exp(std::log(i_s) + log_inner / sd);
}

std::int64_t num_terms(const Tolerance& tol, double i_s, int s, double L, double strike, double r,
                       double t) {
  const double raw = num_terms_raw(tol, i_s, s, L, strike, r, t);
  if (!(raw < static_cast<double>(kMaxTerms))) {
    throw std::invalid_argument("num_terms: required N exceeds the supported maximum");
  }
  const auto n = static_cast<std::int64_t>(std::ceil(raw));
  return n < 1 ? 1 : n;
}

CosTuning tuning_from_bounds(const Tolerance& tol, const BoundValues& bounds, double strike,
                             double r, double t) {
  bounds.validate();
  const double L = truncation_range(tol, bounds.mu_n, bounds.n, strike, r, t);
  return {L, num_terms(tol, bounds.i_s, bounds.s, L, strike, r, t)};
}

}  // namespace fourierml
