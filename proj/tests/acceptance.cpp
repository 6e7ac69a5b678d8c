// Full acceptance checklist. Each criterion prints one PASS/FAIL line; the
// exit code is the number of failures. Heavy stages (dataset generation,
// forest training) log progress to stderr.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "fourierml/bounds.hpp"
#include "fourierml/carr_madan.hpp"
#include "fourierml/cos_pricer.hpp"
#include "fourierml/finite_diff.hpp"
#include "fourierml/pipeline/dataset.hpp"
#include "fourierml/pipeline/evaluate.hpp"
#include "fourierml/quadrature.hpp"
#include "fourierml/rng.hpp"
#include "fourierml/surrogate/forest.hpp"
#include "fourierml/surrogate/mlp.hpp"
#include "fourierml/surrogate/model_io.hpp"

using namespace fourierml;
namespace pl = fourierml::pipeline;

namespace {

using Clock = std::chrono::steady_clock;
const Clock::time_point kStart = Clock::now();

double elapsed() { return std::chrono::duration<double>(Clock::now() - kStart).count(); }

void progress(const std::string& msg) {
  std::fprintf(stderr, "[%8.1fs] %s\n", elapsed(), msg.c_str());
}

struct Checker {
  int failures = 0;

  void report(int criterion, bool ok, const std::string& label, const std::string& detail) {
    std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", criterion, label.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
};

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buf[512];
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

const HestonParams kA3{0.6067, 0.0707, 0.2928, -0.7571, 0.0654};
const MarketContext kA3Mkt{100.0, 0.1};
constexpr double kA3T = 0.7;

// ---------------------------------------------------------------- criterion 1
void criterion_golden_price(Checker& c) {
  const auto t0 = Clock::now();
  clear_mu_cache();
  const auto mu4 = moment_root_mu_n(4, kA3T, kA3, kA3Mkt);
  double price = 0.0;
  bool ok = mu4.has_value();
  if (ok) {
    const double i20 = integral_root_i_s(20, kA3T, kA3, kA3Mkt);
    const CosTuning tuning = tuning_from_bounds({1e-6}, {*mu4, 4, i20, 20}, 90.0, kA3Mkt.r, kA3T);
    price = price_put_cos({90.0, kA3T, OptionKind::put}, tuning, kA3, kA3Mkt);
    ok = std::abs(price - 2.773954) <= 1e-5;
  }
  const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
  ok = ok && secs < 1.0;
  c.report(1, ok, "golden worked-example put price",
           fmt("price=%.7f |err|=%.2e, %.3f s incl. bound computation", price,
               std::abs(price - 2.773954), secs));
}

// ------------------------------------------------------------- criteria 2+3+5
struct BigDataset {
  std::vector<pl::Sample> all;
  std::vector<pl::Sample> kept;
};

BigDataset build_big_dataset(std::size_t kept_target, std::uint64_t seed) {
  progress(fmt("generating %zu kept samples (reference prices cross-checked at N=2^20)...",
               kept_target));
  BigDataset d;
  d.all = pl::generate_kept(kept_target, seed);
  d.kept = pl::kept_only(d.all);
  std::size_t feller = 0, moment = 0, unstable = 0;
  for (const auto& s : d.all) {
    feller += s.status == pl::SampleStatus::excluded_feller;
    moment += s.status == pl::SampleStatus::excluded_moment;
    unstable += s.status == pl::SampleStatus::excluded_unstable;
  }
  progress(fmt("dataset: %zu draws -> %zu kept, %zu feller, %zu moment, %zu unstable",
               d.all.size(), d.kept.size(), feller, moment, unstable));
  return d;
}

void criterion_cross_method_agreement(Checker& c, const BigDataset& d) {
  // agreement rate among the samples that reached the cross-check, measured
  // over the prefix that contains the first 1000 kept samples
  std::size_t kept = 0, unstable = 0;
  for (const auto& s : d.all) {
    if (s.status == pl::SampleStatus::kept) {
      if (++kept == 1000) break;
    } else if (s.status == pl::SampleStatus::excluded_unstable) {
      ++unstable;
    }
  }
  const double rate = static_cast<double>(kept) / static_cast<double>(kept + unstable);
  c.report(2, kept == 1000 && rate >= 0.99, "series vs damped-integral agreement at 1e-7",
           fmt("%zu/%zu cross-checked samples agree (%.3f%%), disagreements excluded", kept,
               kept + unstable, 100.0 * rate));
}

void criterion_error_control(Checker& c, const BigDataset& d) {
  progress("error control: direct-mu8 over 500 samples x 6 tolerances...");
  std::vector<pl::Sample> subset(d.kept.begin(), d.kept.begin() + 500);
  const std::vector<double> eps_list{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  const pl::EvalReport report =
      pl::evaluate_accuracy({}, subset, 100.0, OptionKind::call, {100.0, 0.0}, eps_list);
  bool ok = true;
  std::string cells;
  for (const auto& row : report.rows) {
    if (row.method != pl::Method::direct_mu8) continue;
    for (double pct : row.pct_within_eps) {
      cells += fmt("%.1f%% ", pct);
      ok = ok && pct == 100.0;
    }
  }
  c.report(3, ok, "direct mu8/I20 bounds keep every price within eps",
           "500 samples, eps=1e-2..1e-7: " + cells);
}

// ---------------------------------------------------------------- criterion 4
double trace_table(const ml::DecisionTree& t, const ml::FeatureVector& x) {
  std::int32_t id = 0;
  for (;;) {
    const ml::TreeNode& n = t.nodes[static_cast<std::size_t>(id)];
    if (n.leaf) return n.prediction;
    id = (x[static_cast<std::size_t>(n.feature)] <= n.split) ? n.left : n.right;
  }
}

void criterion_appendix_trees(Checker& c) {
  const std::string dir = FOURIERML_DATA_DIR;
  bool ok = true;
  std::string detail;
  try {
    const ml::DecisionTree i20 = ml::load_tree_table(dir + "/i20_tree_depth5.tsv");
    const ml::DecisionTree mu8 = ml::load_tree_table(dir + "/mu8_tree_depth5.tsv");
    ok = ok && i20.nodes.size() == 61 && mu8.nodes.size() == 63;
    ok = ok && i20.predict({1.0, 0.1, 1.0, 0.0, 0.1, 0.1}) == 36.203604;
    ok = ok && mu8.predict({5.0, 1.3, 2.2, 0.4, 1.1, 0.05}) == 0.366800;

    // twenty traced inputs per tree must reproduce tabulated leaves exactly
    int traced = 0;
    Rng rng(20240810);
    for (const ml::DecisionTree* t : {&i20, &mu8}) {
      for (int i = 0; i < 20; ++i) {
        const ml::FeatureVector x{rng.uniform(1e-3, 10.0),  rng.uniform(1e-3, 2.0),
                                  rng.uniform(1e-2, 5.0),   rng.uniform(-0.99, 0.99),
                                  rng.uniform(1e-3, 2.0),   rng.uniform(0.004, 10.0)};
        if (t->predict(x) == trace_table(*t, x)) ++traced;
      }
    }
    ok = ok && traced == 40;
    detail = fmt("61+63 rows parsed, named leaves exact, %d/40 traced inputs exact", traced);
  } catch (const std::exception& e) {
    ok = false;
    detail = e.what();
  }
  c.report(4, ok, "tabulated depth-5 trees load and route exactly", detail);
}

// ---------------------------------------------------------------- criterion 5
struct TrainedModels {
  pl::ModelSet set;
  double rf_mu8_mse = 0.0;
  double baseline_mu8_mse = 0.0;
};

TrainedModels train_bound_models(const std::vector<pl::Sample>& train,
                                 const std::vector<pl::Sample>& test) {
  progress(fmt("training bound surrogates on %zu samples...", train.size()));
  std::vector<ml::FeatureVector> X;
  std::vector<double> y_mu8, y_i20;
  for (const auto& s : train) {
    X.push_back(s.features);
    y_mu8.push_back(*s.mu8);
    y_i20.push_back(*s.i20);
  }

  TrainedModels out;

  ml::ForestFitConfig rf_mu8;
  rf_mu8.num_trees = 600;
  rf_mu8.max_depth = 90;
  rf_mu8.min_node_size = 1;
  rf_mu8.features_per_split = 2;
  rf_mu8.seed = 71;
  ml::ForestFitConfig rf_i20 = rf_mu8;
  rf_i20.num_trees = 500;
  rf_i20.max_depth = 50;
  rf_i20.seed = 72;
  ml::RandomForest rf_m = ml::forest_fit(X, y_mu8, rf_mu8);
  progress("mu8 forest done");
  ml::RandomForest rf_i = ml::forest_fit(X, y_i20, rf_i20);
  progress("I20 forest done");

  // surrogate quality vs the predict-the-mean baseline on the test split
  double mean = 0.0;
  for (double v : y_mu8) mean += v;
  mean /= static_cast<double>(y_mu8.size());
  for (const auto& s : test) {
    const double e1 = rf_m.predict(s.features) - *s.mu8;
    const double e2 = mean - *s.mu8;
    out.rf_mu8_mse += e1 * e1 / static_cast<double>(test.size());
    out.baseline_mu8_mse += e2 * e2 / static_cast<double>(test.size());
  }

  ml::TreeFitConfig bdt_mu8{30, 6, 0};
  ml::TreeFitConfig bdt_i20{30, 8, 0};
  pl::BoundModelPair bdt{ml::SurrogateModel{ml::tree_fit(X, y_mu8, bdt_mu8)},
                         ml::SurrogateModel{ml::tree_fit(X, y_i20, bdt_i20)}};
  progress("big trees done");

  const std::string dir = FOURIERML_DATA_DIR;
  pl::BoundModelPair sdt{ml::SurrogateModel{ml::load_tree_table(dir + "/mu8_tree_depth5.tsv")},
                         ml::SurrogateModel{ml::load_tree_table(dir + "/i20_tree_depth5.tsv")}};

  out.set.rf = pl::BoundModelPair{ml::SurrogateModel{std::move(rf_m)},
                                  ml::SurrogateModel{std::move(rf_i)}};
  out.set.bdt = std::move(bdt);
  out.set.sdt = std::move(sdt);
  return out;
}

void criterion_surrogate_accuracy(Checker& c, const pl::EvalReport& report,
                                  const TrainedModels& models) {
  double rf_at_1e4 = 0.0, sdt_at_1e4 = 0.0;
  bool rf_ge_sdt = true;
  for (const auto& row : report.rows) {
    for (std::size_t e = 0; e < report.eps_list.size(); ++e) {
      if (report.eps_list[e] == 1e-4) {
        if (row.method == pl::Method::rf) rf_at_1e4 = row.pct_within_eps[e];
        if (row.method == pl::Method::sdt) sdt_at_1e4 = row.pct_within_eps[e];
      }
    }
  }
  const pl::AccuracyRow *rf_row = nullptr, *sdt_row = nullptr;
  for (const auto& row : report.rows) {
    if (row.method == pl::Method::rf) rf_row = &row;
    if (row.method == pl::Method::sdt) sdt_row = &row;
  }
  if (rf_row && sdt_row) {
    for (std::size_t e = 0; e < report.eps_list.size(); ++e) {
      rf_ge_sdt = rf_ge_sdt && rf_row->pct_within_eps[e] >= sdt_row->pct_within_eps[e];
    }
  }
  const bool mse_ok = models.rf_mu8_mse < 0.5 * models.baseline_mu8_mse;
  const bool ok = rf_at_1e4 >= 98.0 && sdt_at_1e4 >= 95.0 && rf_ge_sdt && mse_ok;
  c.report(5, ok, "trained forest and shipped small trees stay eps-accurate",
           fmt("at eps=1e-4: rf=%.3f%% (>=98), sdt=%.3f%% (>=95); rf>=sdt at every eps: %s; "
               "rf mu8 mse %.2e vs baseline %.2e",
               rf_at_1e4, sdt_at_1e4, rf_ge_sdt ? "yes" : "no", models.rf_mu8_mse,
               models.baseline_mu8_mse));
}

// ---------------------------------------------------------------- criterion 6
void criterion_cm_surrogate(Checker& c) {
  progress("generating 1000 kept samples with optimal Carr-Madan tunings...");
  pl::GenerateConfig cfg;
  cfg.with_cm = true;
  const auto cm_all = pl::generate_kept(1000, 1357911, {}, cfg);
  auto cm_kept = pl::kept_only(cm_all);
  std::vector<pl::Sample> with_opt;
  for (const auto& s : cm_kept) {
    if (s.cm_alpha && s.cm_n) with_opt.push_back(s);
  }
  progress(fmt("cm dataset ready: %zu kept, %zu with optima", cm_kept.size(), with_opt.size()));

  const std::size_t train_n = with_opt.size() * 7 / 10;
  std::vector<pl::Sample> train(with_opt.begin(), with_opt.begin() + train_n);
  std::vector<pl::Sample> test(with_opt.begin() + train_n, with_opt.end());

  std::vector<ml::FeatureVector> X;
  std::vector<double> y_alpha, y_n;
  for (const auto& s : train) {
    X.push_back(s.features);
    y_alpha.push_back(*s.cm_alpha);
    y_n.push_back(static_cast<double>(*s.cm_n));
  }
  ml::ForestFitConfig fc;
  fc.num_trees = 300;
  fc.max_depth = 30;
  fc.min_node_size = 5;
  fc.features_per_split = 2;
  fc.seed = 73;
  const ml::SurrogateModel alpha_model{ml::forest_fit(X, y_alpha, fc)};
  fc.seed = 74;
  const ml::SurrogateModel n_model{ml::forest_fit(X, y_n, fc)};
  progress("cm forests trained; evaluating...");

  const pl::CmEvalResult r = pl::evaluate_cm(alpha_model, n_model, test, 100.0, {100.0, 0.0});
  const bool ok = r.rate_doubled >= 0.80 && r.rate_rule_of_thumb < 0.40 &&
                  r.rate_doubled > r.rate_predicted;
  c.report(6, ok, "doubled surrogate tunings beat the fixed rule of thumb",
           fmt("%zu test samples: predicted %.2f%%, doubled %.2f%% (>=80), rule %.2f%% (<40)",
               r.count, 100.0 * r.rate_predicted, 100.0 * r.rate_doubled,
               100.0 * r.rate_rule_of_thumb));
}

// ---------------------------------------------------------------- criterion 7
void criterion_numerical_oracles(Checker& c) {
  bool ok = true;
  std::string detail;

  const auto gauss = [](double u) { return std::complex<double>{std::exp(-0.5 * u * u), 0.0}; };
  const auto d4 = derivative_at_zero(4, gauss, 0.4);
  ok = ok && std::abs(d4.value.real() - 3.0) < 1e-6;
  const auto d8 = derivative_at_zero(8, gauss, 0.4);
  ok = ok && std::abs(d8.value.real() - 105.0) / 105.0 < 1e-4;
  detail += fmt("gauss d4 err %.1e, d8 rel %.1e; ", std::abs(d4.value.real() - 3.0),
                std::abs(d8.value.real() - 105.0) / 105.0);

  const HestonParams gl{1.0, 0.04, 1e-8, 0.0, 0.04};
  const MarketContext mkt0{100.0, 0.0};
  const auto mu4 = moment_root_mu_n(4, 1.0, gl, mkt0);
  const auto mu8 = moment_root_mu_n(8, 1.0, gl, mkt0);
  const double want4 = std::pow(3.0 * 0.04 * 0.04, 0.25);
  const double want8 = std::pow(105.0 * std::pow(0.04, 4), 0.125);
  ok = ok && mu4 && std::abs(*mu4 - want4) / want4 < 1e-3;
  ok = ok && mu8 && std::abs(*mu8 - want8) / want8 < 1e-3;
  detail += fmt("limit mu4=%.6f mu8=%.6f; ", mu4 ? *mu4 : -1.0, mu8 ? *mu8 : -1.0);

  const double i2 =
      integral_root_from_log_modulus(2, [](double u) { return -0.5 * u * u; }, 1e-6);
  const double want_i2 = std::sqrt(2.0 / 3.14159265358979323846);
  ok = ok && std::abs(i2 - want_i2) / want_i2 < 1e-5;
  detail += fmt("I2 rel %.1e; ", std::abs(i2 - want_i2) / want_i2);

  // Simpson fourth-order convergence on \int_0^1 e^x dx
  const auto f = [](double x) { return std::exp(x); };
  const double truth = std::exp(1.0) - 1.0;
  const double e1 = std::abs(simpson_rule(f, 0.0, 1.0, 8) - truth);
  const double e2 = std::abs(simpson_rule(f, 0.0, 1.0, 32) - truth);
  ok = ok && e1 / e2 > 150.0;
  detail += fmt("simpson gain %.0fx; ", e1 / e2);

  // network gradient against central differences
  ml::MlpModel m;
  m.layer_sizes = {6, 3, 1};
  Rng rng(5);
  m.weights = {std::vector<double>(18), std::vector<double>(3)};
  m.biases = {std::vector<double>(3), std::vector<double>(1)};
  for (auto& layer : m.weights)
    for (double& w : layer) w = 0.4 * rng.normal();
  std::vector<ml::FeatureVector> X;
  std::vector<double> y;
  for (int i = 0; i < 8; ++i) {
    X.push_back({rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1),
                 rng.uniform(-1, 1), rng.uniform(-1, 1)});
    y.push_back(rng.uniform(-1, 1));
  }
  const auto grads = ml::mlp_gradients(m, X, y);
  double worst = 0.0;
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    for (std::size_t j = 0; j < m.weights[l].size(); ++j) {
      const double h = 1e-6;
      ml::MlpModel up = m, dn = m;
      up.weights[l][j] += h;
      dn.weights[l][j] -= h;
      auto loss = [&](const ml::MlpModel& mm) {
        double acc = 0.0;
        for (std::size_t i = 0; i < X.size(); ++i) {
          const double e = mm.predict(X[i]) - y[i];
          acc += e * e / static_cast<double>(X.size());
        }
        return acc;
      };
      const double fd = (loss(up) - loss(dn)) / (2e-6);
      worst = std::max(worst,
                       std::abs(grads.weight_grads[l][j] - fd) / std::max(1e-6, std::abs(fd)));
    }
  }
  ok = ok && worst < 1e-5;
  detail += fmt("grad check worst rel %.1e", worst);

  c.report(7, ok, "numerical oracle suite", detail);
}

// ---------------------------------------------------------------- criterion 8
void criterion_invariants(Checker& c, const BigDataset& d, const TrainedModels& models) {
  bool ok = true;
  std::string detail;

  // put-call parity residual is structural
  {
    const auto mu8 = moment_root_mu_n(8, kA3T, kA3, kA3Mkt);
    const double i20 = integral_root_i_s(20, kA3T, kA3, kA3Mkt);
    const CosTuning tun = tuning_from_bounds({1e-6}, {*mu8, 8, i20, 20}, 90.0, kA3Mkt.r, kA3T);
    const double call = price_call_cos({90.0, kA3T, OptionKind::call}, tun, kA3, kA3Mkt);
    const double put = price_put_cos({90.0, kA3T, OptionKind::put}, tun, kA3, kA3Mkt);
    const double residual =
        std::abs(call - put - kA3Mkt.s0 + 90.0 * std::exp(-kA3Mkt.r * kA3T));
    ok = ok && residual <= 1e-12;
    detail += fmt("parity residual %.1e; ", residual);
  }

  // price bounds on a slice of kept samples
  {
    bool bounds_ok = true;
    for (std::size_t i = 0; i < 50 && i < d.kept.size(); ++i) {
      const auto& s = d.kept[i];
      const CosTuning tun =
          tuning_from_bounds({1e-4}, {*s.mu8, 8, *s.i20, 20}, 100.0, 0.0, s.maturity());
      const double put =
          price_put_cos({100.0, s.maturity(), OptionKind::put}, tun, s.params(), {100.0, 0.0});
      const double call =
          price_call_cos({100.0, s.maturity(), OptionKind::call}, tun, s.params(), {100.0, 0.0});
      bounds_ok = bounds_ok && put >= -1e-4 && put <= 100.0 + 1e-4;
      bounds_ok = bounds_ok && call >= -1e-4 && call <= 100.0 + 1e-4;
    }
    ok = ok && bounds_ok;
    detail += fmt("price bounds on 50 samples: %s; ", bounds_ok ? "ok" : "VIOLATED");
  }

  // L and N shrink as the tolerance grows
  {
    bool mono = true;
    double prev_L = 1e300, prev_raw = 1e300;
    for (double eps : {1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2}) {
      const double L = truncation_range({eps}, 0.54, 8, 100.0, 0.0, kA3T);
      const double raw = num_terms_raw({eps}, 52.3, 20, L, 100.0, 0.0, kA3T);
      mono = mono && L < prev_L && raw < prev_raw;
      prev_L = L;
      prev_raw = raw;
    }
    ok = ok && mono;
    detail += fmt("L/N monotone in eps: %s; ", mono ? "ok" : "VIOLATED");
  }

  // moment-root ordering across random draws
  {
    Rng rng(321);
    int checked = 0;
    bool ordered = true;
    while (checked < 30) {
      const HestonParams p{rng.uniform(0.05, 5.0), rng.uniform(0.01, 1.0),
                           rng.uniform(0.05, 1.5), rng.uniform(-0.95, 0.95),
                           rng.uniform(0.01, 1.0)};
      const double t = rng.uniform(0.1, 3.0);
      const auto m2 = moment_root_mu_n(2, t, p, {100.0, 0.0});
      const auto m4 = moment_root_mu_n(4, t, p, {100.0, 0.0});
      const auto m6 = moment_root_mu_n(6, t, p, {100.0, 0.0});
      const auto m8 = moment_root_mu_n(8, t, p, {100.0, 0.0});
      if (!(m2 && m4 && m6 && m8)) continue;
      ++checked;
      ordered = ordered && *m2 <= *m4 * (1 + 1e-9) && *m4 <= *m6 * (1 + 1e-9) &&
                *m6 <= *m8 * (1 + 1e-9);
    }
    ok = ok && ordered;
    detail += fmt("mu2<=mu4<=mu6<=mu8 on 30 draws: %s; ", ordered ? "ok" : "VIOLATED");
  }

  // forest prediction is the exact mean of its trees
  {
    const auto& rf = std::get<ml::RandomForest>(models.set.rf->mu8);
    const ml::FeatureVector x = d.kept[0].features;
    double acc = 0.0;
    for (const auto& t : rf.trees) acc += t.predict(x);
    const bool mean_ok = rf.predict(x) == acc / static_cast<double>(rf.trees.size());
    ok = ok && mean_ok;
    detail += fmt("forest mean identity: %s; ", mean_ok ? "ok" : "VIOLATED");
  }

  // seed determinism for datasets and fits
  {
    const auto a = pl::generate_dataset(8, 31337);
    const auto b = pl::generate_dataset(8, 31337);
    bool det = pl::to_csv(a) == pl::to_csv(b);
    std::vector<ml::FeatureVector> X;
    std::vector<double> y;
    for (std::size_t i = 0; i < 50; ++i) {
      X.push_back(d.kept[i].features);
      y.push_back(*d.kept[i].mu8);
    }
    ml::ForestFitConfig fc;
    fc.num_trees = 7;
    fc.seed = 11;
    det = det && ml::model_to_json(ml::SurrogateModel{ml::forest_fit(X, y, fc)}) ==
                     ml::model_to_json(ml::SurrogateModel{ml::forest_fit(X, y, fc)});
    ok = ok && det;
    detail += fmt("seed determinism: %s", det ? "ok" : "VIOLATED");
  }

  c.report(8, ok, "invariant suite", detail);
}

// ---------------------------------------------------------------- criterion 9
void criterion_performance(Checker& c, const BigDataset& d, const TrainedModels& models) {
  progress("benchmarking bound computation and series pricing...");
  std::vector<pl::Sample> subset(d.kept.begin(), d.kept.begin() + 200);
  const pl::TimingReport r = pl::benchmark_timing(models.set, subset, 100.0, {100.0, 0.0}, 1e-7);
  const double sdt_speedup = r.direct_bounds_sec / r.surrogate_sec.at("sdt");
  const double cos_ratio = r.cos_with_mu4_sec / r.cos_with_mu8_sec;
  const bool ok = sdt_speedup >= 100.0 && cos_ratio >= 3.0;
  c.report(9, ok, "surrogate speedups",
           fmt("bound prediction: direct %.3e s vs sdt %.3e s (%.0fx, >=100); series pricing "
               "L(mu4)/L(mu8) time ratio %.1fx (>=3)",
               r.direct_bounds_sec, r.surrogate_sec.at("sdt"), sdt_speedup, cos_ratio));
}

}  // namespace

int main() {
  std::printf("acceptance suite\n");
  Checker checker;

  criterion_golden_price(checker);
  criterion_appendix_trees(checker);
  criterion_numerical_oracles(checker);

  const BigDataset big = build_big_dataset(10000, 987654321);
  criterion_cross_method_agreement(checker, big);
  criterion_error_control(checker, big);

  const std::size_t train_n = 8000;
  std::vector<pl::Sample> train(big.kept.begin(), big.kept.begin() + train_n);
  std::vector<pl::Sample> test(big.kept.begin() + train_n, big.kept.end());
  const TrainedModels models = train_bound_models(train, test);

  progress("evaluating tolerance accuracy on the 2000-sample test split...");
  const std::vector<double> eps_list{1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7};
  const pl::EvalReport report =
      pl::evaluate_accuracy(models.set, test, 100.0, OptionKind::call, {100.0, 0.0}, eps_list);
  std::printf("%s", report.to_text().c_str());
  criterion_surrogate_accuracy(checker, report, models);

  criterion_cm_surrogate(checker);
  criterion_invariants(checker, big, models);
  criterion_performance(checker, big, models);

  std::printf("%d criteria failed\n", checker.failures);
  return checker.failures;
}
