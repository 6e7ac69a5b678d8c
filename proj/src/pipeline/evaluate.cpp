#include "fourierml/pipeline/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "fourierml/bounds.hpp"
#include "fourierml/carr_madan.hpp"
#include "fourierml/cos_pricer.hpp"
#include "fourierml/parallel.hpp"

namespace fourierml::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// predictions feed power formulas; keep them positive
double positive(double x) { return x > 1e-8 ? x : 1e-8; }

double price_for(OptionKind kind, const OptionSpec& spec, const CosTuning& tuning,
                 const HestonParams& p, const MarketContext& mkt) {
  return kind == OptionKind::call ? price_call_cos(spec, tuning, p, mkt)
                                  : price_put_cos(spec, tuning, p, mkt);
}

struct BoundSource {
  Method method;
  const BoundModelPair* models = nullptr;  // null for the direct methods
};

template <typename F>
double timed_batch_median5(std::size_t n, F&& run_batch) {
  std::array<double, 5> t{};
  for (double& x : t) {
    const auto start = Clock::now();
    run_batch();
    x = seconds_since(start);
  }
  std::sort(t.begin(), t.end());
  return t[2] / static_cast<double>(n);
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::direct_mu4: return "direct-mu4";
    case Method::direct_mu8: return "direct-mu8";
    case Method::rf: return "rf";
    case Method::nn: return "nn";
    case Method::bdt: return "bdt";
    case Method::sdt: return "sdt";
  }
  return "direct-mu8";
}

EvalReport evaluate_accuracy(const ModelSet& models, const std::vector<Sample>& kept,
                             double strike, OptionKind kind, const MarketContext& mkt,
                             const std::vector<double>& eps_list, unsigned threads) {
  EvalReport report;
  report.eps_list = eps_list;
  report.sample_count = kept.size();
  if (eps_list.empty() || kept.empty()) return report;

  for (const Sample& s : kept) {
    if (s.status != SampleStatus::kept || !s.mu8 || !s.i20 || !s.ref_price) {
      throw std::invalid_argument("evaluate_accuracy: needs kept samples with bound values");
    }
  }

  std::vector<BoundSource> sources{{Method::direct_mu4, nullptr}, {Method::direct_mu8, nullptr}};
  if (models.rf) sources.push_back({Method::rf, &*models.rf});
  if (models.nn) sources.push_back({Method::nn, &*models.nn});
  if (models.bdt) sources.push_back({Method::bdt, &*models.bdt});
  if (models.sdt) sources.push_back({Method::sdt, &*models.sdt});

  const std::size_t n = kept.size();
  const std::size_t ne = eps_list.size();

  for (const BoundSource& src : sources) {
    std::vector<std::uint8_t> hit(n * ne, 0);
    std::atomic<std::size_t> failures{0};
    std::atomic<std::uint64_t> bound_ns{0};
    std::atomic<std::uint64_t> price_ns{0};

    parallel_for(
        n,
        [&](std::size_t i) {
          const Sample& s = kept[i];
          const HestonParams p = s.params();
          const double t = s.maturity();
          const OptionSpec spec{strike, t, kind};

          double mu_n = 0.0, i_s = 0.0;
          int order = 8;
          const auto t0 = Clock::now();
          try {
            switch (src.method) {
              case Method::direct_mu8:
                mu_n = *s.mu8;
                i_s = *s.i20;
                break;
              case Method::direct_mu4: {
                const auto mu4 = moment_root_mu_n(4, t, p, mkt);
                if (!mu4) throw MomentUnavailableError{};
                mu_n = *mu4;
                i_s = *s.i20;
                order = 4;
                break;
              }
              default:
                mu_n = positive(ml::predict(src.models->mu8, s.features));
                i_s = positive(ml::predict(src.models->i20, s.features));
                break;
            }
          } catch (...) {
            failures.fetch_add(1);
            return;  // all eps counted as misses
          }
          bound_ns.fetch_add(static_cast<std::uint64_t>(seconds_since(t0) * 1e9));

          for (std::size_t e = 0; e < ne; ++e) {
            try {
              const Tolerance tol{eps_list[e]};
              const CosTuning tuning =
                  tuning_from_bounds(tol, {mu_n, order, i_s, 20}, strike, mkt.r, t);
              const auto t1 = Clock::now();
              const double price = price_for(kind, spec, tuning, p, mkt);
              price_ns.fetch_add(static_cast<std::uint64_t>(seconds_since(t1) * 1e9));
              if (std::abs(price - *s.ref_price) <= eps_list[e]) hit[i * ne + e] = 1;
            } catch (...) {
              failures.fetch_add(1);
            }
          }
        },
        threads);

    AccuracyRow row;
    row.method = src.method;
    row.failures = failures.load();
    for (std::size_t e = 0; e < ne; ++e) {
      std::size_t ok = 0;
      for (std::size_t i = 0; i < n; ++i) ok += hit[i * ne + e];
      row.pct_within_eps.push_back(100.0 * static_cast<double>(ok) / static_cast<double>(n));
    }
    report.rows.push_back(std::move(row));

    const std::string name(method_name(src.method));
    report.stage_seconds["bounds/" + name] =
        static_cast<double>(bound_ns.load()) * 1e-9 / static_cast<double>(n);
    report.stage_seconds["pricing/" + name] =
        static_cast<double>(price_ns.load()) * 1e-9 / static_cast<double>(n * ne);
  }
  return report;
}

std::string EvalReport::to_json() const {
  nlohmann::json rows_json = nlohmann::json::array();
  for (const AccuracyRow& row : rows) {
    rows_json.push_back({{"method", std::string(method_name(row.method))},
                         {"pct_within_eps", row.pct_within_eps},
                         {"failures", row.failures}});
  }
  return nlohmann::json{{"eps_list", eps_list},
                        {"sample_count", sample_count},
                        {"rows", rows_json},
                        {"stage_seconds", stage_seconds}}
      .dump(2);
}

std::string EvalReport::to_csv() const {
  std::ostringstream out;
  out << "method";
  for (double eps : eps_list) out << ",eps=" << eps;
  out << ",failures\n";
  for (const AccuracyRow& row : rows) {
    out << method_name(row.method);
    for (double pct : row.pct_within_eps) out << ',' << pct;
    out << ',' << row.failures << '\n';
  }
  return out.str();
}

std::string EvalReport::to_text() const {
  std::ostringstream out;
  out << "accuracy on " << sample_count << " samples (% within eps)\n";
  out << "  method      ";
  for (double eps : eps_list) {
    out << "  eps=" << eps;
  }
  out << '\n';
  for (const AccuracyRow& row : rows) {
    out << "  " << method_name(row.method);
    for (std::size_t pad = std::string(method_name(row.method)).size(); pad < 12; ++pad) out << ' ';
    for (std::size_t e = 0; e < row.pct_within_eps.size(); ++e) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "  %8.3f", row.pct_within_eps[e]);
      out << buf;
    }
    out << '\n';
  }
  return out.str();
}

double TimingReport::best_surrogate_speedup() const {
  double best = 0.0;
  for (const auto& [name, sec] : surrogate_sec) {
    if (sec > 0.0) best = std::max(best, direct_bounds_sec / sec);
  }
  return best;
}

TimingReport benchmark_timing(const ModelSet& models, const std::vector<Sample>& kept,
                              double strike, const MarketContext& mkt, double eps) {
  TimingReport report;
  report.sample_count = kept.size();
  report.eps = eps;
  if (kept.empty()) return report;

  for (const Sample& s : kept) {
    if (s.status != SampleStatus::kept || !s.mu8 || !s.i20) {
      throw std::invalid_argument("benchmark_timing: needs kept samples with bound values");
    }
  }
  const std::size_t n = kept.size();

  // direct bound computation, cold expectation cache each repetition
  volatile double sink = 0.0;
  report.direct_bounds_sec = timed_batch_median5(n, [&] {
    clear_mu_cache();
    double acc = 0.0;
    for (const Sample& s : kept) {
      const auto mu8 = moment_root_mu_n(8, s.maturity(), s.params(), mkt);
      acc += mu8 ? *mu8 : 0.0;
      acc += integral_root_i_s(20, s.maturity(), s.params(), mkt);
    }
    sink = acc;
  });

  const std::array<std::pair<const char*, const std::optional<BoundModelPair>*>, 4> fams{
      {{"rf", &models.rf}, {"nn", &models.nn}, {"bdt", &models.bdt}, {"sdt", &models.sdt}}};
  for (const auto& [name, pair] : fams) {
    if (!*pair) continue;
    report.surrogate_sec[name] = timed_batch_median5(n, [&] {
      double acc = 0.0;
      for (const Sample& s : kept) {
        acc += ml::predict((**pair).mu8, s.features);
        acc += ml::predict((**pair).i20, s.features);
      }
      sink = acc;
    });
  }

  // COS pricing alone, with tunings prepared outside the clock
  std::vector<CosTuning> tun8(n), tun4(n);
  std::vector<char> has4(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const Sample& s = kept[i];
    tun8[i] = tuning_from_bounds({eps}, {*s.mu8, 8, *s.i20, 20}, strike, mkt.r, s.maturity());
    const auto mu4 = moment_root_mu_n(4, s.maturity(), s.params(), mkt);
    if (mu4) {
      tun4[i] = tuning_from_bounds({eps}, {*mu4, 4, *s.i20, 20}, strike, mkt.r, s.maturity());
      has4[i] = 1;
    }
    // warm the expectation cache so the clock sees pure series evaluation
    (void)expected_log_price(s.maturity(), s.params(), mkt);
  }

  auto time_pricing = [&](const std::vector<CosTuning>& tunings, const std::vector<char>* mask) {
    return timed_batch_median5(n, [&] {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask && !(*mask)[i]) continue;
        const Sample& s = kept[i];
        const OptionSpec call{strike, s.maturity(), OptionKind::call};
        acc += price_call_cos(call, tunings[i], s.params(), mkt);
      }
      sink = acc;
    });
  };
  report.cos_with_mu8_sec = time_pricing(tun8, nullptr);
  report.cos_with_mu4_sec = time_pricing(tun4, &has4);

  report.noop_sec = timed_batch_median5(n, [&] {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += static_cast<double>(i);
    sink = acc;
  });

  return report;
}

std::string TimingReport::to_json() const {
  return nlohmann::json{{"sample_count", sample_count},
                        {"eps", eps},
                        {"direct_bounds_sec", direct_bounds_sec},
                        {"surrogate_sec", surrogate_sec},
                        {"cos_with_mu8_sec", cos_with_mu8_sec},
                        {"cos_with_mu4_sec", cos_with_mu4_sec},
                        {"noop_sec", noop_sec},
                        {"best_surrogate_speedup", best_surrogate_speedup()}}
      .dump(2);
}

std::string TimingReport::to_csv() const {
  std::ostringstream out;
  out << "stage,mean_seconds_per_sample\n";
  out << "bounds/direct," << direct_bounds_sec << '\n';
  for (const auto& [name, sec] : surrogate_sec) out << "bounds/" << name << ',' << sec << '\n';
  out << "cos/L(eps;mu8)," << cos_with_mu8_sec << '\n';
  out << "cos/L(eps;mu4)," << cos_with_mu4_sec << '\n';
  out << "noop," << noop_sec << '\n';
  return out.str();
}

std::string TimingReport::to_text() const {
  std::ostringstream out;
  out << "mean per-sample wall time over " << sample_count << " samples, eps=" << eps << "\n";
  out << "  bounds, direct        " << direct_bounds_sec << " s\n";
  for (const auto& [name, sec] : surrogate_sec) {
    out << "  bounds, " << name;
    for (std::size_t pad = std::string(name).size(); pad < 14; ++pad) out << ' ';
    out << sec << " s  (speedup " << direct_bounds_sec / sec << "x)\n";
  }
  out << "  cos at L(eps, mu8)    " << cos_with_mu8_sec << " s\n";
  out << "  cos at L(eps, mu4)    " << cos_with_mu4_sec << " s  (ratio "
      << cos_with_mu4_sec / std::max(cos_with_mu8_sec, 1e-300) << "x)\n";
  out << "  no-op floor           " << noop_sec << " s\n";
  return out.str();
}

CmEvalResult evaluate_cm(const ml::SurrogateModel& alpha_model, const ml::SurrogateModel& n_model,
                         const std::vector<Sample>& kept, double strike,
                         const MarketContext& mkt, double target_eps, unsigned threads) {
  CmEvalResult result;
  result.count = kept.size();
  if (kept.empty()) return result;

  std::atomic<std::size_t> ok_pred{0}, ok_double{0}, ok_rule{0};

  parallel_for(
      kept.size(),
      [&](std::size_t i) {
        const Sample& s = kept[i];
        if (!s.ref_price) return;
        const HestonParams p = s.params();
        const OptionSpec call{strike, s.maturity(), OptionKind::call};
        const double ref = *s.ref_price;

        const double alpha_hat = std::max(ml::predict(alpha_model, s.features), 1e-3);
        double n_hat_raw = ml::predict(n_model, s.features);
        if (!(n_hat_raw > 2.0)) n_hat_raw = 2.0;
        auto even = [](double x) {
          auto v = static_cast<std::int64_t>(std::ceil(x));
          return v % 2 == 0 ? v : v + 1;
        };
        const std::int64_t n_hat = even(n_hat_raw);

        auto try_price = [&](double alpha, double M, std::int64_t N) {
          try {
            const double price = price_call_cm(call, {alpha, M, N}, p, mkt);
            return std::abs(price - ref) <= target_eps;
          } catch (...) {
            return false;
          }
        };
        if (try_price(alpha_hat, 1200.0, n_hat)) ok_pred.fetch_add(1);
        if (try_price(alpha_hat, 1200.0, 2 * n_hat)) ok_double.fetch_add(1);
        if (try_price(1.95, 1024.0, std::int64_t{1} << 12)) ok_rule.fetch_add(1);
      },
      threads);

  const double n = static_cast<double>(kept.size());
  result.rate_predicted = static_cast<double>(ok_pred.load()) / n;
  result.rate_doubled = static_cast<double>(ok_double.load()) / n;
  result.rate_rule_of_thumb = static_cast<double>(ok_rule.load()) / n;
  return result;
}

std::string CmEvalResult::to_json() const {
  return nlohmann::json{{"count", count},
                        {"rate_predicted", rate_predicted},
                        {"rate_doubled", rate_doubled},
                        {"rate_rule_of_thumb", rate_rule_of_thumb}}
      .dump(2);
}

std::string CmEvalResult::to_text() const {
  std::ostringstream out;
  out << "carr-madan tuning check on " << count << " samples\n";
  out << "  predicted (alpha, N):   " << 100.0 * rate_predicted << "%\n";
  out << "  predicted (alpha, 2N):  " << 100.0 * rate_doubled << "%\n";
  out << "  rule of thumb:          " << 100.0 * rate_rule_of_thumb << "%\n";
  return out.str();
}

}  // namespace fourierml::pipeline
