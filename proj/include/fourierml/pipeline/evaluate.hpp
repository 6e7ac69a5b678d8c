#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fourierml/pipeline/dataset.hpp"
#include "fourierml/surrogate/model_io.hpp"

namespace fourierml::pipeline {

enum class Method { direct_mu4, direct_mu8, rf, nn, bdt, sdt };
std::string_view method_name(Method method);

// mu8 and I20 predictors of one surrogate family
struct BoundModelPair {
  ml::SurrogateModel mu8;
  ml::SurrogateModel i20;
};

struct ModelSet {
  std::optional<BoundModelPair> rf;
  std::optional<BoundModelPair> nn;
  std::optional<BoundModelPair> bdt;
  std::optional<BoundModelPair> sdt;
};

struct AccuracyRow {
  Method method;
  std::vector<double> pct_within_eps;  // aligned with eps_list
  std::size_t failures = 0;            // pricing errors, counted as misses
};

struct EvalReport {
  std::vector<double> eps_list;
  std::vector<AccuracyRow> rows;
  std::size_t sample_count = 0;
  // mean per-sample wall time of each stage, seconds
  std::map<std::string, double> stage_seconds;

  std::string to_json() const;
  std::string to_csv() const;
  std::string to_text() const;
};

// Re-prices every kept sample at each tolerance with the bound values coming
// from the requested source (stored truth or surrogate prediction) and counts
// how often |price - reference| <= eps.
EvalReport evaluate_accuracy(const ModelSet& models, const std::vector<Sample>& kept,
                             double strike, OptionKind kind, const MarketContext& mkt,
                             const std::vector<double>& eps_list, unsigned threads = 0);

struct TimingReport {
  std::size_t sample_count = 0;
  double direct_bounds_sec = 0.0;                 // mu8 + I20, numerically
  std::map<std::string, double> surrogate_sec;    // per available family
  double cos_with_mu8_sec = 0.0;                  // COS at L(eps, mu8)
  double cos_with_mu4_sec = 0.0;                  // COS at L(eps, mu4)
  double noop_sec = 0.0;                          // harness floor
  double eps = 0.0;

  double best_surrogate_speedup() const;
  std::string to_json() const;
  std::string to_csv() const;
  std::string to_text() const;
};

// Median-of-5 wall-clock per batch, divided by the batch size.
TimingReport benchmark_timing(const ModelSet& models, const std::vector<Sample>& kept,
                              double strike, const MarketContext& mkt, double eps);

// Carr-Madan surrogate check: success rates of the predicted pair, the
// doubled-N pair and the fixed rule of thumb (alpha=1.95, M=1024, N=2^12).
struct CmEvalResult {
  std::size_t count = 0;
  double rate_predicted = 0.0;
  double rate_doubled = 0.0;
  double rate_rule_of_thumb = 0.0;

  std::string to_json() const;
  std::string to_text() const;
};

CmEvalResult evaluate_cm(const ml::SurrogateModel& alpha_model, const ml::SurrogateModel& n_model,
                         const std::vector<Sample>& kept, double strike,
                         const MarketContext& mkt, double target_eps = 1e-7,
                         unsigned threads = 0);

}  // namespace fourierml::pipeline
