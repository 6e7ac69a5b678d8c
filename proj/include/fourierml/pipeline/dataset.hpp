#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fourierml/heston.hpp"
#include "fourierml/surrogate/tree.hpp"

namespace fourierml::pipeline {

enum class SampleStatus { kept, excluded_feller, excluded_moment, excluded_unstable };

std::string_view to_string(SampleStatus status);
SampleStatus status_from(std::string_view text);

struct Sample {
  ml::FeatureVector features{};  // kappa, theta, xi, rho, v0, T
  std::optional<double> mu8;
  std::optional<double> i20;
  std::optional<double> ref_price;
  std::optional<double> cm_alpha;        // optimal damping factor, when searched
  std::optional<std::int64_t> cm_n;      // optimal grid size, when searched
  SampleStatus status = SampleStatus::kept;

  HestonParams params() const {
    return {features[0], features[1], features[2], features[3], features[4]};
  }
  double maturity() const { return features[5]; }
};

// uniform sampling ranges for (kappa, theta, xi, rho, v0, T)
struct ParamRanges {
  double kappa_lo = 1e-3, kappa_hi = 10.0;
  double theta_lo = 1e-3, theta_hi = 2.0;
  double xi_lo = 1e-2, xi_hi = 5.0;
  double rho_lo = -0.99, rho_hi = 0.99;
  double v0_lo = 1e-3, v0_hi = 2.0;
  double t_lo = 1.0 / 250.0, t_hi = 10.0;
};

struct GenerateConfig {
  double strike = 100.0;
  OptionKind kind = OptionKind::call;
  MarketContext mkt{100.0, 0.0};
  double ref_eps = 1e-9;      // COS tolerance for reference prices
  double agree_tol = 1e-7;    // COS vs Carr-Madan cross-check budget
  bool with_cm = false;       // also search the optimal Carr-Madan (alpha, N)
  double cm_target_eps = 1e-7;
  unsigned threads = 0;       // 0 = hardware default
};

// Reference price for known bound values: COS at ref_eps, cross-checked in
// call space against Carr-Madan (M=1024, N=2^20, first admissible damping
// factor from the grid). nullopt marks the sample unstable.
std::optional<double> reference_price(const ml::FeatureVector& features, double mu8, double i20,
                                      double strike, OptionKind kind, const MarketContext& mkt,
                                      double ref_eps = 1e-9, double agree_tol = 1e-7);

// Draws `count` parameter sets, applies the exclusion filters, computes the
// bound values and reference prices for the survivors. Deterministic in seed.
std::vector<Sample> generate_dataset(std::size_t count, std::uint64_t seed,
                                     const ParamRanges& ranges = {},
                                     const GenerateConfig& config = {});

// Keeps drawing until `kept_target` samples survive; the result equals the
// prefix of an unbounded generate_dataset run with the same seed, cut right
// after the final kept sample.
std::vector<Sample> generate_kept(std::size_t kept_target, std::uint64_t seed,
                                  const ParamRanges& ranges = {},
                                  const GenerateConfig& config = {});

// CSV with the fixed header
//   kappa,theta,xi,rho,v0,T,mu8,i20,ref_price,cm_alpha,cm_n,status
// and %.17g numbers; absent fields serialize as NA.
std::string to_csv(const std::vector<Sample>& samples);
std::vector<Sample> from_csv(const std::string& text);
void write_csv(const std::vector<Sample>& samples, const std::string& path);
std::vector<Sample> read_csv(const std::string& path);

// kept samples only, in order
std::vector<Sample> kept_only(const std::vector<Sample>& samples);

}  // namespace fourierml::pipeline
