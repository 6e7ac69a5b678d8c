#include "fourierml/carr_madan.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fourierml/quadrature.hpp"

namespace fourierml {

namespace {

using cd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double prefactor(double alpha, const OptionSpec& spec, const MarketContext& mkt) {
  return std::exp(-alpha * std::log(spec.strike)) * std::exp(-mkt.r * spec.maturity) / kPi;
}

// Incremental Simpson state over (0, M): doubling the grid only evaluates the
// new odd-index nodes.
struct SimpsonDoubler {
  double upper;
  std::int64_t n = 0;
  double ends = 0.0;      // f(0) + f(M)
  double interior = 0.0;  // sum of f at interior nodes of the current grid
  double odd = 0.0;       // sum of f at odd-index nodes of the current grid

  template <typename F>
  void init(F&& f, std::int64_t n0) {
    n = n0;
    const double h = upper / static_cast<double>(n);
    ends = f(0.0) + f(upper);
    interior = 0.0;
    odd = 0.0;
    for (std::int64_t j = 1; j < n; ++j) {
      const double fx = f(h * static_cast<double>(j));
      interior += fx;
      if (j % 2 == 1) odd += fx;
    }
  }

  template <typename F>
  void double_grid(F&& f) {
    const std::int64_t n2 = n * 2;
    const double h2 = upper / static_cast<double>(n2);
    double fresh = 0.0;
    for (std::int64_t m = 0; m < n; ++m) {
      fresh += f(h2 * static_cast<double>(2 * m + 1));
    }
    odd = fresh;
    interior += fresh;
    n = n2;
  }

  double value() const {
    const double h = upper / static_cast<double>(n);
    return h / 3.0 * (ends + 4.0 * odd + 2.0 * (interior - odd));
  }
};

}  // namespace

void CarrMadanTuning::validate() const {
  if (!valid()) {
    throw std::invalid_argument("CarrMadanTuning: need alpha > 0, M > 0, even N >= 2");
  }
}

double cm_integrand(double v, double alpha, const OptionSpec& spec, const HestonParams& p,
                    const MarketContext& mkt) {
  if (!(alpha > 0.0)) throw std::invalid_argument("cm_integrand: alpha must be > 0");
  const cd i{0.0, 1.0};
  const cd u{v, -(alpha + 1.0)};
  const cd phi = cf_log_price(u, spec.maturity, p, mkt);
  const cd num = std::exp(-i * v * std::log(spec.strike)) * phi;
  const cd den = alpha * alpha + alpha - v * v + i * (2.0 * alpha + 1.0) * v;
  const double out = (num / den).real();
  if (!std::isfinite(out)) throw CfOverflowError{};
  return out;
}

double price_call_cm(const OptionSpec& spec, const CarrMadanTuning& tuning,
                     const HestonParams& p, const MarketContext& mkt) {
  spec.validate();
  tuning.validate();
  if (spec.kind != OptionKind::call) {
    throw std::invalid_argument("price_call_cm: spec must be a call");
  }
  const double integral = simpson_rule(
      [&](double v) { return cm_integrand(v, tuning.alpha, spec, p, mkt); }, 0.0,
      tuning.upper_limit, tuning.grid_points);
  const double price = prefactor(tuning.alpha, spec, mkt) * integral;
  if (!std::isfinite(price)) throw CfOverflowError{};
  return price;
}

bool damping_admissible(double alpha, double t, const HestonParams& p,
                        const MarketContext& mkt) {
  if (!(alpha > 0.0)) throw std::invalid_argument("damping_admissible: alpha must be > 0");
  p.validate();
  mkt.validate();
  if (!(t < moment_explosion_time(1.0 + alpha, p))) return false;
  try {
    (void)cf_log_price(cd{0.0, -(1.0 + alpha)}, t, p, mkt);
  } catch (const CfOverflowError&) {
    return false;
  }
  return true;
}

const std::vector<double>& alpha_grid() {
  static const std::vector<double> grid = [] {
    std::vector<double> g(40);
    const double lo = std::log(0.05);
    const double hi = std::log(20.0);
    for (int i = 0; i < 40; ++i) {
      g[static_cast<std::size_t>(i)] = std::exp(lo + (hi - lo) * i / 39.0);
    }
    return g;
  }();
  return grid;
}

OptimalTuning optimal_tuning_search(const OptionSpec& spec, const HestonParams& p,
                                    const MarketContext& mkt, double reference_price,
                                    const SearchConfig& cfg) {
  spec.validate();
  if (spec.kind != OptionKind::call) {
    throw std::invalid_argument("optimal_tuning_search: spec must be a call");
  }
  if (!std::isfinite(reference_price)) {
    throw std::invalid_argument("optimal_tuning_search: reference price must be finite");
  }

  double best_alpha = 0.0;
  std::int64_t best_n = std::numeric_limits<std::int64_t>::max();

  for (const double alpha : alpha_grid()) {
    if (!damping_admissible(alpha, spec.maturity, p, mkt)) continue;

    const double pref = prefactor(alpha, spec, mkt);
    auto f = [&](double v) { return cm_integrand(v, alpha, spec, p, mkt); };
    auto priced_at = [&](std::int64_t n) {
      return pref * simpson_rule(f, 0.0, cfg.upper_limit, n);
    };

    std::int64_t n_pass = 0;
    try {
      SimpsonDoubler sd{cfg.upper_limit};
      sd.init(f, cfg.n_start);
      std::vector<double> errs;
      for (;;) {
        if (sd.n > cfg.n_cap) break;
        if (sd.n > best_n) break;  // cannot beat the incumbent any more
        const double err = std::abs(pref * sd.value() - reference_price);
        errs.push_back(err);
        if (err <= cfg.target_eps) {
          // confirm with the plain rule so search and pricing agree bit for bit
          if (std::abs(priced_at(sd.n) - reference_price) <= cfg.target_eps) {
            n_pass = sd.n;
            break;
          }
        }
        // quadrature error stalled far above target: truncation floor, give up
        if (errs.size() >= 4 && err > 1e4 * cfg.target_eps) {
          const std::size_t e = errs.size();
          if (errs[e - 1] > 0.5 * errs[e - 2] && errs[e - 2] > 0.5 * errs[e - 3] &&
              errs[e - 3] > 0.5 * errs[e - 4]) {
            break;
          }
        }
        sd.double_grid(f);
      }
    } catch (const CfOverflowError&) {
      continue;
    }
    if (n_pass == 0) continue;

    // minimal even N in (n_pass/2, n_pass]
    std::int64_t lo = n_pass / 2;
    std::int64_t hi = n_pass;
    if (lo < 2) lo = 0;
    while (hi - lo > 2) {
      std::int64_t mid = (lo + hi) / 2;
      mid -= mid % 2;
      if (mid <= lo || mid >= hi) break;
      if (std::abs(priced_at(mid) - reference_price) <= cfg.target_eps) hi = mid;
      else lo = mid;
    }

    if (hi < best_n) {
      best_n = hi;
      best_alpha = alpha;
    }
  }

  if (best_n == std::numeric_limits<std::int64_t>::max()) throw NoAdmissibleAlphaError{};
  return {best_alpha, best_n};
}

}  // namespace fourierml
