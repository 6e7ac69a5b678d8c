#include "fourierml/heston.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <unordered_map>

#include "fourierml/finite_diff.hpp"

namespace fourierml {

namespace {

using cd = std::complex<double>;

bool finite(const cd& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// log(1+w) without cancellation for small |w|
cd log1p_c(const cd& w) {
  if (std::abs(w) < 1e-4) {
    return w * (1.0 - w * (0.5 - w * (1.0 / 3.0 - w * 0.25)));
  }
  return std::log(1.0 + w);
}

struct CfExponent {
  cd drift;      // iu (log s0 + r t), purely imaginary for real u
  cd body;       // theta/kappa and v0 terms; Re(body) = log|phi| for real u
};

// Exponent of the "little trap" characteristic function,
//   phi(u) = exp(iu(log S0 + rt))
//          * exp(theta kappa xi^-2 ((kappa - rho xi u i - d)t - 2 log((1-g e^{-dt})/(1-g))))
//          * exp(v0 xi^-2 (kappa - rho xi u i - d)(1-e^{-dt})/(1-g e^{-dt}))
// with d the principal root and g = (kappa - rho xi u i - d)/(kappa - rho xi u i + d).
// Evaluated in the algebraically identical form that replaces the difference
// kappa - rho xi u i - d by xi^2(-iu-u^2)/(kappa - rho xi u i + d): the direct
// subtraction loses all significant digits once xi^2|u|^2 << kappa^2 (the
// vanishing-vol-of-vol regime), where it feeds a xi^-2 amplifier.
CfExponent cf_exponent(cd u, double t, const HestonParams& p, const MarketContext& mkt) {
  const cd i{0.0, 1.0};
  const double xi2 = p.xi * p.xi;
  const cd mytmp = p.kappa - p.rho * p.xi * u * i;
  const cd iuu = -i * u - u * u;
  const cd d = std::sqrt(mytmp * mytmp - xi2 * iuu);
  const cd big = mytmp + d;
  const cd ghat = iuu / (big * big);
  const cd g = xi2 * ghat;
  const cd edt = std::exp(-d * t);

  // log((1 - g e^{-dt})/(1 - g)) / xi^2, with the xi^2 cancelled analytically
  // when the log argument is close to 1
  const cd w = g * (1.0 - edt) / (1.0 - g);
  cd logratio_over_xi2;
  if (std::abs(w) < 1e-4) {
    const cd series = 1.0 - w * (0.5 - w * (1.0 / 3.0 - w * 0.25));
    logratio_over_xi2 = ghat * (1.0 - edt) / (1.0 - g) * series;
  } else {
    logratio_over_xi2 = log1p_c(w) / xi2;
  }

  CfExponent e;
  e.drift = i * u * (std::log(mkt.s0) + mkt.r * t);
  e.body = p.theta * p.kappa * (iuu * t / big - 2.0 * logratio_over_xi2) +
           p.v0 * iuu * (1.0 - edt) / (big * (1.0 - g * edt));
  return e;
}

struct MuKey {
  std::array<std::uint64_t, 8> bits;
  bool operator==(const MuKey&) const = default;
};

struct MuKeyHash {
  std::size_t operator()(const MuKey& k) const {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t b : k.bits) {
      h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }
};

std::uint64_t bits_of(double x) {
  std::uint64_t b;
  std::memcpy(&b, &x, sizeof(b));
  return b;
}

std::mutex g_mu_mutex;
std::unordered_map<MuKey, double, MuKeyHash> g_mu_cache;

}  // namespace

bool HestonParams::valid() const {
  return std::isfinite(kappa) && kappa > 0.0 && std::isfinite(theta) && theta > 0.0 &&
         std::isfinite(xi) && xi > 0.0 && std::isfinite(rho) && rho >= -1.0 && rho <= 1.0 &&
         std::isfinite(v0) && v0 > 0.0;
}

void HestonParams::validate() const {
  if (!valid()) throw std::invalid_argument("HestonParams: need kappa,theta,xi,v0 > 0 and rho in [-1,1]");
}

bool feller_holds(const HestonParams& p) { return 2.0 * p.kappa * p.theta >= p.xi * p.xi; }

bool MarketContext::valid() const { return std::isfinite(s0) && s0 > 0.0 && std::isfinite(r); }

void MarketContext::validate() const {
  if (!valid()) throw std::invalid_argument("MarketContext: need s0 > 0 and finite r");
}

bool OptionSpec::valid() const {
  return std::isfinite(strike) && strike > 0.0 && std::isfinite(maturity) && maturity > 0.0;
}

void OptionSpec::validate() const {
  if (!valid()) throw std::invalid_argument("OptionSpec: need strike > 0 and maturity > 0");
}

std::complex<double> cf_log_price(std::complex<double> u, double t, const HestonParams& p,
                                  const MarketContext& mkt) {
  if (u == cd{0.0, 0.0}) return {1.0, 0.0};
  const CfExponent e = cf_exponent(u, t, p, mkt);
  const cd exponent = e.drift + e.body;
  if (!finite(exponent)) throw CfOverflowError{};
  const cd value = std::exp(exponent);
  if (!finite(value)) throw CfOverflowError{};
  return value;
}

double log_cf_modulus(double u, double t, const HestonParams& p, const MarketContext& mkt) {
  if (u == 0.0) return 0.0;
  const CfExponent e = cf_exponent(cd{u, 0.0}, t, p, mkt);
  const double m = e.body.real();
  if (!std::isfinite(m)) throw CfOverflowError{};
  return m;
}

double variance_proxy(double t, const HestonParams& p) {
  return p.theta * t + (p.v0 - p.theta) * (-std::expm1(-p.kappa * t)) / p.kappa;
}

double expected_log_price(double t, const HestonParams& p, const MarketContext& mkt) {
  const MuKey key{{bits_of(p.kappa), bits_of(p.theta), bits_of(p.xi), bits_of(p.rho),
                   bits_of(p.v0), bits_of(t), bits_of(mkt.s0), bits_of(mkt.r)}};
  {
    std::lock_guard<std::mutex> lock(g_mu_mutex);
    auto it = g_mu_cache.find(key);
    if (it != g_mu_cache.end()) return it->second;
  }

  const double sig = std::max(std::sqrt(std::max(variance_proxy(t, p), 0.0)), 1e-4);
  const double scale = std::max(1.0, std::abs(std::log(mkt.s0) + mkt.r * t) + sig);
  const auto f = [&](double u) { return cf_log_price(cd{u, 0.0}, t, p, mkt); };
  const DerivativeResult d = derivative_at_zero(1, f, 0.02 / scale);

  const cd neg_i{0.0, -1.0};
  const cd m = neg_i * d.value;
  const double mu = m.real();
  if (!std::isfinite(mu) || !d.stable(1e-6) ||
      std::abs(m.imag()) > 1e-8 * (1.0 + std::abs(mu))) {
    throw MomentUnavailableError{};
  }

  std::lock_guard<std::mutex> lock(g_mu_mutex);
  g_mu_cache.emplace(key, mu);
  return mu;
}

std::complex<double> cf_centered(std::complex<double> u, double t, const HestonParams& p,
                                 const MarketContext& mkt) {
  if (u == cd{0.0, 0.0}) return {1.0, 0.0};
  const double mu = expected_log_price(t, p, mkt);
  const cd i{0.0, 1.0};
  const cd value = cf_log_price(u, t, p, mkt) * std::exp(-i * u * mu);
  if (!finite(value)) throw CfOverflowError{};
  return value;
}

double moment_explosion_time(double p_order, const HestonParams& params) {
  if (!(p_order >= 0.0)) throw std::invalid_argument("moment_explosion_time: p must be >= 0");
  if (p_order <= 1.0) return std::numeric_limits<double>::infinity();

  // Riccati coefficients of the v0 exponent along u = -ip:
  //   D' = C + B D + A D^2, D(0) = 0
  const double A = 0.5 * params.xi * params.xi;
  const double B = params.rho * params.xi * p_order - params.kappa;
  const double C = 0.5 * p_order * (p_order - 1.0);
  const double disc = B * B - 4.0 * A * C;

  if (disc >= 0.0) {
    if (B < 0.0) return std::numeric_limits<double>::infinity();
    const double rd = std::sqrt(disc);
    if (rd == 0.0) return 2.0 / B;
    return std::log((B + rd) / (B - rd)) / rd;
  }
  const double rd = std::sqrt(-disc);
  return 2.0 / rd * (std::numbers::pi / 2.0 - std::atan(B / rd));
}

void clear_mu_cache() {
  std::lock_guard<std::mutex> lock(g_mu_mutex);
  g_mu_cache.clear();
}

}  // namespace fourierml
