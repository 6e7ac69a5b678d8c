// Command-line front end: dataset generation, surrogate training, pricing,
// accuracy evaluation and timing benchmarks.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fourierml/bounds.hpp"
#include "fourierml/carr_madan.hpp"
#include "fourierml/cos_pricer.hpp"
#include "fourierml/errors.hpp"
#include "fourierml/pipeline/dataset.hpp"
#include "fourierml/pipeline/evaluate.hpp"
#include "fourierml/surrogate/model_io.hpp"

namespace {

using namespace fourierml;
namespace pl = fourierml::pipeline;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitValidation = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << text;
  if (!out) throw IoError("write failure: " + path);
}

ml::SurrogateModel load_model_or_io_error(const std::string& path) {
  try {
    // tabulated-tree text files load directly as tree models
    if (path.size() > 4 && (path.ends_with(".tsv") || path.ends_with(".txt"))) {
      return ml::SurrogateModel{ml::load_tree_table(path)};
    }
    return ml::load_model(path);
  } catch (const ModelFormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
}

std::vector<pl::Sample> read_csv_or_io_error(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return pl::from_csv(buffer.str());
}

// "model:mu8.json,i20.json" -> the two file names
std::pair<std::string, std::string> split_model_pair(const std::string& spec) {
  const std::string body = spec.substr(std::string("model:").size());
  const auto comma = body.find(',');
  if (comma == std::string::npos) {
    throw CLI::ValidationError("--bounds",
                               "model bounds need two files: model:<mu8-or-alpha>,<i20-or-n>");
  }
  return {body.substr(0, comma), body.substr(comma + 1)};
}

struct OptionFlags {
  double kappa = 0.0, theta = 0.0, xi = 0.0, rho = 0.0, v0 = 0.0;
  double maturity = 0.0;
  double s0 = 100.0, rate = 0.0;
  double strike = 100.0;
  std::string kind = "call";

  HestonParams params() const { return {kappa, theta, xi, rho, v0}; }
  MarketContext mkt() const { return {s0, rate}; }
  OptionSpec spec() const {
    return {strike, maturity, kind == "call" ? OptionKind::call : OptionKind::put};
  }
};

void add_option_flags(CLI::App* cmd, OptionFlags& f) {
  cmd->add_option("--kappa", f.kappa, "mean-reversion speed")->required();
  cmd->add_option("--theta", f.theta, "long-run variance")->required();
  cmd->add_option("--xi", f.xi, "volatility of variance")->required();
  cmd->add_option("--rho", f.rho, "correlation")->required();
  cmd->add_option("--v0", f.v0, "initial variance")->required();
  cmd->add_option("--T", f.maturity, "maturity in years")->required();
  cmd->add_option("--s0", f.s0, "spot price");
  cmd->add_option("--rate", f.rate, "risk-free rate");
  cmd->add_option("--strike", f.strike, "strike");
  cmd->add_option("--kind", f.kind, "put or call")->check(CLI::IsMember({"put", "call"}));
}

int cmd_gen_data(std::size_t count, std::size_t min_kept, std::uint64_t seed,
                 const std::string& out, double strike, double s0, double rate,
                 const std::string& kind, bool with_cm, unsigned threads) {
  pl::GenerateConfig cfg;
  cfg.strike = strike;
  cfg.mkt = {s0, rate};
  cfg.kind = kind == "call" ? OptionKind::call : OptionKind::put;
  cfg.with_cm = with_cm;
  cfg.threads = threads;

  std::vector<pl::Sample> samples;
  if (min_kept > 0) {
    samples = pl::generate_kept(min_kept, seed, {}, cfg);
  } else {
    samples = pl::generate_dataset(count, seed, {}, cfg);
  }
  try {
    pl::write_csv(samples, out);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }

  std::size_t kept = 0;
  for (const auto& s : samples) kept += s.status == pl::SampleStatus::kept;
  std::fprintf(stderr, "wrote %zu rows (%zu kept) to %s\n", samples.size(), kept, out.c_str());
  return kExitOk;
}

int cmd_train(const std::string& target, const std::string& model_kind, const std::string& in,
              const std::string& out, int num_trees, int max_depth, int min_node_size,
              int features_per_split, bool no_bootstrap, const std::string& hidden,
              const std::string& activation, int epochs, int batch_size, double learning_rate,
              double validation_split, std::uint64_t seed) {
  const auto samples = read_csv_or_io_error(in);

  auto fit_one = [&](const std::vector<ml::FeatureVector>& X, const std::vector<double>& y,
                     std::uint64_t fit_seed) -> ml::SurrogateModel {
    if (X.empty()) throw std::invalid_argument("train: no usable rows in " + in);
    if (model_kind == "tree") {
      return ml::tree_fit(X, y, {max_depth, min_node_size, fit_seed});
    }
    if (model_kind == "forest") {
      ml::ForestFitConfig cfg;
      cfg.num_trees = num_trees;
      cfg.max_depth = max_depth;
      cfg.min_node_size = min_node_size;
      cfg.features_per_split = features_per_split;
      cfg.bootstrap = !no_bootstrap;
      cfg.seed = fit_seed;
      return ml::forest_fit(X, y, cfg);
    }
    ml::MlpFitConfig cfg;
    cfg.hidden_layers.clear();
    std::stringstream hs(hidden);
    std::string tokens;
    while (std::getline(hs, tokens, ',')) {
      if (!tokens.empty()) cfg.hidden_layers.push_back(std::stoi(tokens));
    }
    cfg.activation = activation == "relu" ? ml::Activation::relu : ml::Activation::sigmoid;
    cfg.epochs = epochs;
    cfg.batch_size = batch_size;
    cfg.learning_rate = learning_rate;
    cfg.validation_split = validation_split;
    cfg.seed = fit_seed;
    auto result = ml::mlp_fit(X, y, cfg);
    std::fprintf(stderr, "mlp final loss: train %.6g val %.6g\n", result.train_loss.back(),
                 result.val_loss.empty() ? 0.0 : result.val_loss.back());
    return std::move(result.model);
  };

  std::vector<ml::FeatureVector> X;
  if (target == "cm") {
    std::vector<double> y_alpha, y_n;
    for (const auto& s : samples) {
      if (s.status != pl::SampleStatus::kept || !s.cm_alpha || !s.cm_n) continue;
      X.push_back(s.features);
      y_alpha.push_back(*s.cm_alpha);
      y_n.push_back(static_cast<double>(*s.cm_n));
    }
    const auto alpha_model = fit_one(X, y_alpha, seed);
    const auto n_model = fit_one(X, y_n, seed + 1);
    try {
      ml::save_model(alpha_model, out + ".alpha.json");
      ml::save_model(n_model, out + ".n.json");
    } catch (const std::exception& e) {
      throw IoError(e.what());
    }
    std::fprintf(stderr, "trained on %zu rows; wrote %s.alpha.json and %s.n.json\n", X.size(),
                 out.c_str(), out.c_str());
    return kExitOk;
  }

  std::vector<double> y;
  for (const auto& s : samples) {
    if (s.status != pl::SampleStatus::kept) continue;
    const std::optional<double> value = target == "mu8" ? s.mu8 : s.i20;
    if (!value) continue;
    X.push_back(s.features);
    y.push_back(*value);
  }
  const auto model = fit_one(X, y, seed);
  try {
    ml::save_model(model, out);
  } catch (const std::exception& e) {
    throw IoError(e.what());
  }
  std::fprintf(stderr, "trained on %zu rows; wrote %s\n", X.size(), out.c_str());
  return kExitOk;
}

int cmd_price(const OptionFlags& flags, const std::string& method, double eps,
              const std::string& bounds, int moment_order, int smoothness_order,
              const std::string& format) {
  const HestonParams p = flags.params();
  p.validate();
  const MarketContext mkt = flags.mkt();
  mkt.validate();
  const OptionSpec spec = flags.spec();
  spec.validate();
  const double t = spec.maturity;

  nlohmann::json out;
  out["method"] = method;
  out["eps"] = eps;

  if (method == "cos") {
    double mu_n = 0.0, i_s = 0.0;
    if (bounds == "direct") {
      const auto mu = moment_root_mu_n(moment_order, t, p, mkt);
      if (!mu) {
        out["status"] = "moment-unavailable";
        write_text("", format == "json" ? out.dump(2) + "\n" : "moment-unavailable\n");
        return kExitOk;
      }
      mu_n = *mu;
      i_s = integral_root_i_s(smoothness_order, t, p, mkt);
    } else {
      const auto [mu8_path, i20_path] = split_model_pair(bounds);
      const ml::FeatureVector x{p.kappa, p.theta, p.xi, p.rho, p.v0, t};
      mu_n = std::max(ml::predict(load_model_or_io_error(mu8_path), x), 1e-8);
      i_s = std::max(ml::predict(load_model_or_io_error(i20_path), x), 1e-8);
      moment_order = 8;  // surrogates are trained on the mu8 / I20 targets
      smoothness_order = 20;
    }
    const Tolerance tol{eps};
    const CosTuning tuning =
        tuning_from_bounds(tol, {mu_n, moment_order, i_s, smoothness_order}, spec.strike, mkt.r, t);
    const double price = spec.kind == OptionKind::call ? price_call_cos(spec, tuning, p, mkt)
                                                       : price_put_cos(spec, tuning, p, mkt);
    out["price"] = price;
    out["half_width"] = tuning.half_width;
    out["num_terms"] = tuning.num_terms;
    out["mu_n"] = mu_n;
    out["i_s"] = i_s;
    if (format == "json") {
      write_text("", out.dump(2) + "\n");
    } else {
      std::printf("%.9f\n", price);
    }
    return kExitOk;
  }

  // damped-integral pricing always quotes the call variant internally
  OptionSpec call = spec;
  call.kind = OptionKind::call;
  double cm_price = 0.0;
  if (bounds == "direct") {
    // tuning search against a high-accuracy series reference
    const auto mu8 = moment_root_mu_n(8, t, p, mkt);
    if (!mu8) {
      out["status"] = "moment-unavailable";
      write_text("", format == "json" ? out.dump(2) + "\n" : "moment-unavailable\n");
      return kExitOk;
    }
    const double i20 = integral_root_i_s(20, t, p, mkt);
    const CosTuning ref_tuning =
        tuning_from_bounds({1e-9}, {*mu8, 8, i20, 20}, spec.strike, mkt.r, t);
    const double ref = price_call_cos(call, ref_tuning, p, mkt);
    SearchConfig search;
    search.target_eps = eps;
    const OptimalTuning opt = optimal_tuning_search(call, p, mkt, ref, search);
    cm_price = price_call_cm(call, {opt.alpha, search.upper_limit, opt.grid_points}, p, mkt);
    out["alpha"] = opt.alpha;
    out["grid_points"] = opt.grid_points;
  } else {
    const auto [alpha_path, n_path] = split_model_pair(bounds);
    const ml::FeatureVector x{p.kappa, p.theta, p.xi, p.rho, p.v0, t};
    const double alpha_hat = std::max(ml::predict(load_model_or_io_error(alpha_path), x), 1e-3);
    double n_raw = ml::predict(load_model_or_io_error(n_path), x);
    if (!(n_raw > 2.0)) n_raw = 2.0;
    auto n_hat = static_cast<std::int64_t>(std::ceil(n_raw));
    if (n_hat % 2 != 0) ++n_hat;
    n_hat *= 2;  // predicted grids run doubled to absorb underestimation
    cm_price = price_call_cm(call, {alpha_hat, 1200.0, n_hat}, p, mkt);
    out["alpha"] = alpha_hat;
    out["grid_points"] = n_hat;
  }
  if (spec.kind == OptionKind::put) {
    cm_price = cm_price - mkt.s0 + spec.strike * std::exp(-mkt.r * t);
  }
  out["price"] = cm_price;
  if (format == "json") {
    write_text("", out.dump(2) + "\n");
  } else {
    std::printf("%.9f\n", cm_price);
  }
  return kExitOk;
}

std::optional<pl::BoundModelPair> load_pair(const std::string& mu8_path,
                                            const std::string& i20_path) {
  if (mu8_path.empty() && i20_path.empty()) return std::nullopt;
  if (mu8_path.empty() || i20_path.empty()) {
    throw CLI::ValidationError("models", "both the mu8 and i20 model files are required");
  }
  return pl::BoundModelPair{load_model_or_io_error(mu8_path), load_model_or_io_error(i20_path)};
}

std::vector<pl::Sample> sliced_kept(const std::string& data, std::size_t skip, std::size_t limit) {
  auto kept = pl::kept_only(read_csv_or_io_error(data));
  if (skip >= kept.size()) return {};
  kept.erase(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(skip));
  if (limit > 0 && kept.size() > limit) kept.resize(limit);
  return kept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"error-controlled Fourier pricing with learned tuning bounds"};
  app.require_subcommand(1);

  // ---- gen-data
  auto* gen = app.add_subcommand("gen-data", "draw Heston samples, filter, compute references");
  std::size_t gen_count = 1000, gen_min_kept = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "dataset.csv";
  double gen_strike = 100.0, gen_s0 = 100.0, gen_rate = 0.0;
  std::string gen_kind = "call";
  bool gen_with_cm = false;
  unsigned gen_threads = 0;
  gen->add_option("--count", gen_count, "number of raw draws");
  gen->add_option("--min-kept", gen_min_kept, "draw until this many samples survive");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "output CSV path")->required();
  gen->add_option("--strike", gen_strike, "strike of the reference option");
  gen->add_option("--s0", gen_s0, "spot");
  gen->add_option("--rate", gen_rate, "risk-free rate");
  gen->add_option("--kind", gen_kind, "put or call")->check(CLI::IsMember({"put", "call"}));
  gen->add_flag("--with-cm", gen_with_cm, "also search optimal Carr-Madan (alpha, N)");
  gen->add_option("--threads", gen_threads, "worker threads (0 = auto)");

  // ---- train
  auto* train = app.add_subcommand("train", "fit a surrogate for mu8, I20 or the CM tuning");
  std::string tr_target, tr_model, tr_in, tr_out;
  int tr_num_trees = 500, tr_max_depth = 30, tr_min_node = 6, tr_mtry = 2;
  bool tr_no_bootstrap = false;
  std::string tr_hidden = "64,32", tr_activation = "sigmoid";
  int tr_epochs = 100, tr_batch = 256;
  double tr_lr = 1e-3, tr_val = 0.2;
  std::uint64_t tr_seed = 1;
  train->add_option("--target", tr_target, "mu8, i20 or cm")
      ->required()
      ->check(CLI::IsMember({"mu8", "i20", "cm"}));
  train->add_option("--model", tr_model, "tree, forest or mlp")
      ->required()
      ->check(CLI::IsMember({"tree", "forest", "mlp"}));
  train->add_option("--in", tr_in, "training CSV")->required();
  train->add_option("--out-model", tr_out, "output model file")->required();
  train->add_option("--num-trees", tr_num_trees, "forest size");
  train->add_option("--max-depth", tr_max_depth, "tree depth cap (-1 = unlimited)");
  train->add_option("--min-node-size", tr_min_node, "minimal node size to split");
  train->add_option("--features-per-split", tr_mtry, "candidate features per node");
  train->add_flag("--no-bootstrap", tr_no_bootstrap, "train each tree on the full data");
  train->add_option("--hidden", tr_hidden, "comma-separated hidden layer sizes");
  train->add_option("--activation", tr_activation, "sigmoid or relu")
      ->check(CLI::IsMember({"sigmoid", "relu"}));
  train->add_option("--epochs", tr_epochs, "training epochs");
  train->add_option("--batch-size", tr_batch, "mini-batch size");
  train->add_option("--learning-rate", tr_lr, "Adam step size");
  train->add_option("--validation-split", tr_val, "fraction held out for validation");
  train->add_option("--seed", tr_seed, "RNG seed");

  // ---- price
  auto* price = app.add_subcommand("price", "price one European option");
  OptionFlags pf;
  std::string pr_method = "cos", pr_bounds = "direct", pr_format = "text";
  double pr_eps = 1e-6;
  int pr_n = 8, pr_s = 20;
  price->add_option("--method", pr_method, "cos or carr-madan")
      ->check(CLI::IsMember({"cos", "carr-madan"}));
  price->add_option("--eps", pr_eps, "error tolerance");
  price->add_option("--bounds", pr_bounds,
                    "direct or model:<mu8-file>,<i20-file> (carr-madan: alpha,N files)");
  price->add_option("--moment-order", pr_n, "moment order n for the truncation range");
  price->add_option("--smoothness-order", pr_s, "smoothness order s for the term count");
  price->add_option("--format", pr_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  add_option_flags(price, pf);

  // ---- evaluate
  auto* eval = app.add_subcommand("evaluate", "tolerance-accuracy table on a dataset");
  std::string ev_data, ev_format = "text", ev_out;
  std::string ev_eps_list = "1e-2,1e-3,1e-4,1e-5,1e-6,1e-7";
  std::string ev_rf_mu8, ev_rf_i20, ev_nn_mu8, ev_nn_i20, ev_bdt_mu8, ev_bdt_i20, ev_sdt_mu8,
      ev_sdt_i20, ev_cm_alpha, ev_cm_n;
  double ev_strike = 100.0, ev_s0 = 100.0, ev_rate = 0.0;
  std::string ev_kind = "call";
  std::size_t ev_skip = 0, ev_limit = 0;
  double ev_cm_target = 1e-7;
  unsigned ev_threads = 0;
  eval->add_option("--data", ev_data, "dataset CSV")->required();
  eval->add_option("--eps-list", ev_eps_list, "comma-separated tolerances");
  eval->add_option("--rf-mu8", ev_rf_mu8, "random-forest mu8 model");
  eval->add_option("--rf-i20", ev_rf_i20, "random-forest I20 model");
  eval->add_option("--nn-mu8", ev_nn_mu8, "network mu8 model");
  eval->add_option("--nn-i20", ev_nn_i20, "network I20 model");
  eval->add_option("--bdt-mu8", ev_bdt_mu8, "big-tree mu8 model");
  eval->add_option("--bdt-i20", ev_bdt_i20, "big-tree I20 model");
  eval->add_option("--sdt-mu8", ev_sdt_mu8, "small-tree mu8 model");
  eval->add_option("--sdt-i20", ev_sdt_i20, "small-tree I20 model");
  eval->add_option("--cm-alpha-model", ev_cm_alpha, "Carr-Madan alpha model");
  eval->add_option("--cm-n-model", ev_cm_n, "Carr-Madan N model");
  eval->add_option("--cm-target-eps", ev_cm_target, "Carr-Madan accuracy target");
  eval->add_option("--strike", ev_strike, "strike");
  eval->add_option("--s0", ev_s0, "spot");
  eval->add_option("--rate", ev_rate, "risk-free rate");
  eval->add_option("--kind", ev_kind, "put or call")->check(CLI::IsMember({"put", "call"}));
  eval->add_option("--skip", ev_skip, "skip this many kept samples first");
  eval->add_option("--limit", ev_limit, "use at most this many kept samples");
  eval->add_option("--format", ev_format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  eval->add_option("--out", ev_out, "write the report here instead of stdout");
  eval->add_option("--threads", ev_threads, "worker threads (0 = auto)");

  // ---- bench
  auto* bench = app.add_subcommand("bench", "timing of bound computation and pricing");
  std::string be_data, be_format = "text", be_out;
  double be_eps = 1e-7;
  std::string be_rf_mu8, be_rf_i20, be_nn_mu8, be_nn_i20, be_bdt_mu8, be_bdt_i20, be_sdt_mu8,
      be_sdt_i20;
  double be_strike = 100.0, be_s0 = 100.0, be_rate = 0.0;
  std::size_t be_skip = 0, be_limit = 0;
  bench->add_option("--data", be_data, "dataset CSV")->required();
  bench->add_option("--eps", be_eps, "tolerance used for the pricing stage");
  bench->add_option("--rf-mu8", be_rf_mu8, "random-forest mu8 model");
  bench->add_option("--rf-i20", be_rf_i20, "random-forest I20 model");
  bench->add_option("--nn-mu8", be_nn_mu8, "network mu8 model");
  bench->add_option("--nn-i20", be_nn_i20, "network I20 model");
  bench->add_option("--bdt-mu8", be_bdt_mu8, "big-tree mu8 model");
  bench->add_option("--bdt-i20", be_bdt_i20, "big-tree I20 model");
  bench->add_option("--sdt-mu8", be_sdt_mu8, "small-tree mu8 model");
  bench->add_option("--sdt-i20", be_sdt_i20, "small-tree I20 model");
  bench->add_option("--strike", be_strike, "strike");
  bench->add_option("--s0", be_s0, "spot");
  bench->add_option("--rate", be_rate, "risk-free rate");
  bench->add_option("--skip", be_skip, "skip this many kept samples first");
  bench->add_option("--limit", be_limit, "use at most this many kept samples");
  bench->add_option("--format", be_format, "text, json or csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  bench->add_option("--out", be_out, "write the report here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      return cmd_gen_data(gen_count, gen_min_kept, gen_seed, gen_out, gen_strike, gen_s0,
                          gen_rate, gen_kind, gen_with_cm, gen_threads);
    }
    if (train->parsed()) {
      return cmd_train(tr_target, tr_model, tr_in, tr_out, tr_num_trees, tr_max_depth,
                       tr_min_node, tr_mtry, tr_no_bootstrap, tr_hidden, tr_activation,
                       tr_epochs, tr_batch, tr_lr, tr_val, tr_seed);
    }
    if (price->parsed()) {
      if (pr_bounds != "direct" && pr_bounds.rfind("model:", 0) != 0) {
        std::fprintf(stderr, "error: --bounds must be direct or model:<file>,<file>\n");
        return kExitUsage;
      }
      return cmd_price(pf, pr_method, pr_eps, pr_bounds, pr_n, pr_s, pr_format);
    }
    if (eval->parsed()) {
      pl::ModelSet models;
      models.rf = load_pair(ev_rf_mu8, ev_rf_i20);
      models.nn = load_pair(ev_nn_mu8, ev_nn_i20);
      models.bdt = load_pair(ev_bdt_mu8, ev_bdt_i20);
      models.sdt = load_pair(ev_sdt_mu8, ev_sdt_i20);

      std::vector<double> eps_list;
      std::stringstream es(ev_eps_list);
      std::string tok;
      while (std::getline(es, tok, ',')) {
        if (!tok.empty()) eps_list.push_back(std::stod(tok));
      }

      const auto kept = sliced_kept(ev_data, ev_skip, ev_limit);
      const OptionKind kind = ev_kind == "call" ? OptionKind::call : OptionKind::put;
      const auto report = pl::evaluate_accuracy(models, kept, ev_strike, kind,
                                                {ev_s0, ev_rate}, eps_list, ev_threads);
      std::string text = ev_format == "json" ? report.to_json() + "\n"
                         : ev_format == "csv" ? report.to_csv()
                                              : report.to_text();
      if (!ev_cm_alpha.empty() || !ev_cm_n.empty()) {
        if (ev_cm_alpha.empty() || ev_cm_n.empty()) {
          throw CLI::ValidationError("--cm-alpha-model",
                                     "both carr-madan model files are required");
        }
        const auto cm = pl::evaluate_cm(load_model_or_io_error(ev_cm_alpha),
                                        load_model_or_io_error(ev_cm_n), kept, ev_strike,
                                        {ev_s0, ev_rate}, ev_cm_target, ev_threads);
        text += ev_format == "json" ? cm.to_json() + "\n" : cm.to_text();
      }
      write_text(ev_out, text);
      return kExitOk;
    }
    if (bench->parsed()) {
      pl::ModelSet models;
      models.rf = load_pair(be_rf_mu8, be_rf_i20);
      models.nn = load_pair(be_nn_mu8, be_nn_i20);
      models.bdt = load_pair(be_bdt_mu8, be_bdt_i20);
      models.sdt = load_pair(be_sdt_mu8, be_sdt_i20);
      const auto kept = sliced_kept(be_data, be_skip, be_limit);
      const auto report = pl::benchmark_timing(models, kept, be_strike, {be_s0, be_rate}, be_eps);
      write_text(be_out, be_format == "json"  ? report.to_json() + "\n"
                         : be_format == "csv" ? report.to_csv()
                                              : report.to_text());
      return kExitOk;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitIo;
  } catch (const ModelFormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidation;
  }
  return kExitUsage;
}
