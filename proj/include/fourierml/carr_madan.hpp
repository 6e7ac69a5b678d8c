#pragma once

#include <cstdint>
#include <vector>

#include "fourierml/heston.hpp"

namespace fourierml {

struct CarrMadanTuning {
  double alpha;              // damping factor, > 0
  double upper_limit;        // M: integral truncated to (0, M)
  std::int64_t grid_points;  // N: Simpson panels, even

  bool valid() const {
    return alpha > 0.0 && upper_limit > 0.0 && grid_points >= 2 && grid_points % 2 == 0;
  }
  void validate() const;
};

// Re{ e^{-iv log K} phi_log(v - i(alpha+1)) / (alpha^2 + alpha - v^2 + i(2 alpha + 1) v) }
double cm_integrand(double v, double alpha, const OptionSpec& spec, const HestonParams& p,
                    const MarketContext& mkt);

// e^{-alpha log K} e^{-rT} / pi * Simpson_{0..M} of the damped integrand
double price_call_cm(const OptionSpec& spec, const CarrMadanTuning& tuning,
                     const HestonParams& p, const MarketContext& mkt);

// E[S_T^{1+alpha}] < infinity, decided by the closed-form moment explosion
// time plus a direct cf probe at -i(1+alpha) (overflow => inadmissible).
bool damping_admissible(double alpha, double t, const HestonParams& p, const MarketContext& mkt);

// Fixed candidate grid: 40 log-spaced damping factors on [0.05, 20].
const std::vector<double>& alpha_grid();

struct OptimalTuning {
  double alpha;
  std::int64_t grid_points;
};

struct SearchConfig {
  double target_eps = 1e-7;
  double upper_limit = 1200.0;
  std::int64_t n_start = 64;
  std::int64_t n_cap = std::int64_t{1} << 22;
};

// For every admissible alpha on the grid, the minimal even N (doubling, then
// bisection) whose Simpson price lands within target_eps of the reference;
// returns the pair with the smallest N, ties to the smaller alpha. Throws
// NoAdmissibleAlphaError when no grid alpha reaches the target.
OptimalTuning optimal_tuning_search(const OptionSpec& spec, const HestonParams& p,
                                    const MarketContext& mkt, double reference_price,
                                    const SearchConfig& cfg = {});

}  // namespace fourierml
