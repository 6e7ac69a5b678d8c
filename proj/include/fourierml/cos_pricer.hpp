#pragma once

#include <cstdint>
#include <vector>

#include "fourierml/heston.hpp"

namespace fourierml {

struct CosTuning {
  double half_width;       // L: density truncated to [-L, L]
  std::int64_t num_terms;  // N: cosine terms beyond the k=0 one

  bool valid() const { return half_width > 0.0 && num_terms >= 1; }
  void validate() const;
};

struct Tolerance {
  double eps;  // price error budget, currency units

  bool valid() const { return eps > 0.0 && eps <= 1.0; }
  void validate() const;
};

// Inputs to the tuning formulas: mu_n (n-th root of the n-th centred moment)
// and I_s (s-th root of the weighted cf integral).
struct BoundValues {
  double mu_n;
  int n;
  double i_s;
  int s;

  bool valid() const {
    return mu_n > 0.0 && n >= 2 && n % 2 == 0 && i_s > 0.0 && s >= 1;
  }
  void validate() const;
};

// c_k = (1/L) Re{phi_X(k pi / 2L) e^{i k pi / 2}}, k = 0..N
std::vector<double> cosine_coeffs(const CosTuning& tuning, double t, const HestonParams& p,
                                  const MarketContext& mkt);

// Closed-form put payoff coefficients v_0..v_N; the all-zero sequence when the
// strike falls below the truncation range.
std::vector<double> payoff_coeffs_put(double strike, const CosTuning& tuning, double t,
                                      const HestonParams& p, const MarketContext& mkt);

// c0 v0 / 2 + sum_{k=1..N} c_k v_k
double price_put_cos(const OptionSpec& spec, const CosTuning& tuning, const HestonParams& p,
                     const MarketContext& mkt);

// put + S0 - K e^{-rT}; calls always route through the put for stability
double price_call_cos(const OptionSpec& spec, const CosTuning& tuning, const HestonParams& p,
                      const MarketContext& mkt);

// L = mu_n (2 K e^{-rT} / eps)^{1/n}
double truncation_range(const Tolerance& tol, double mu_n, int n, double strike, double r,
                        double t);

// N before rounding; evaluated in log space (L^{s+2} overflows doubles for
// s = 20 and L beyond ~40)
double num_terms_raw(const Tolerance& tol, double i_s, int s, double half_width, double strike,
                     double r, double t);

// ceil of the raw count, at least 1
std::int64_t num_terms(const Tolerance& tol, double i_s, int s, double half_width, double strike,
                       double r, double t);

// Convenience: both formulas at once.
CosTuning tuning_from_bounds(const Tolerance& tol, const BoundValues& bounds, double strike,
                             double r, double t);

namespace detail {
// Psi building blocks of the put coefficients, exposed for tests
double psi0(std::int64_t k, double d, double half_width);
double psi1(std::int64_t k, double d, double half_width);
}  // namespace detail

}  // namespace fourierml
