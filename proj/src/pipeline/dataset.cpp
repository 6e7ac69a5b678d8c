#include "fourierml/pipeline/dataset.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fourierml/bounds.hpp"
#include "fourierml/carr_madan.hpp"
#include "fourierml/cos_pricer.hpp"
#include "fourierml/parallel.hpp"
#include "fourierml/rng.hpp"

namespace fourierml::pipeline {

std::string_view to_string(SampleStatus status) {
  switch (status) {
    case SampleStatus::kept: return "kept";
    case SampleStatus::excluded_feller: return "excluded-feller";
    case SampleStatus::excluded_moment: return "excluded-moment";
    case SampleStatus::excluded_unstable: return "excluded-unstable";
  }
  return "kept";
}

SampleStatus status_from(std::string_view text) {
  if (text == "kept") return SampleStatus::kept;
  if (text == "excluded-feller") return SampleStatus::excluded_feller;
  if (text == "excluded-moment") return SampleStatus::excluded_moment;
  if (text == "excluded-unstable") return SampleStatus::excluded_unstable;
  throw std::invalid_argument("unknown sample status: " + std::string(text));
}

std::optional<double> reference_price(const ml::FeatureVector& features, double mu8, double i20,
                                      double strike, OptionKind kind, const MarketContext& mkt,
                                      double ref_eps, double agree_tol) {
  const HestonParams p{features[0], features[1], features[2], features[3], features[4]};
  const double t = features[5];
  try {
    const CosTuning tuning = tuning_from_bounds({ref_eps}, {mu8, 8, i20, 20}, strike, mkt.r, t);
    const OptionSpec call{strike, t, OptionKind::call};
    const double cos_call = price_call_cos(call, tuning, p, mkt);

    // cross-check in call space against the damped-integral price
    double cm_call = 0.0;
    bool crossed = false;
    for (double alpha : alpha_grid()) {
      if (!damping_admissible(alpha, t, p, mkt)) continue;
      cm_call = price_call_cm(call, {alpha, 1024.0, std::int64_t{1} << 20}, p, mkt);
      crossed = true;
      break;
    }
    if (!crossed || std::abs(cm_call - cos_call) > agree_tol) return std::nullopt;

    if (kind == OptionKind::call) return cos_call;
    return cos_call - mkt.s0 + strike * std::exp(-mkt.r * t);
  } catch (const CfOverflowError&) {
    return std::nullopt;
  } catch (const std::invalid_argument&) {
    return std::nullopt;  // e.g. term count beyond the supported maximum
  }
}

namespace {

void finish_sample(Sample& s, const GenerateConfig& config) {
  const HestonParams p = s.params();
  const double t = s.maturity();

  if (!feller_holds(p)) {
    s.status = SampleStatus::excluded_feller;
    return;
  }

  const auto mu8 = moment_root_mu_n(8, t, p, config.mkt);
  if (!mu8) {
    s.status = SampleStatus::excluded_moment;
    return;
  }
  s.mu8 = *mu8;

  try {
    s.i20 = integral_root_i_s(20, t, p, config.mkt);
  } catch (const IntegralNonconvergentError&) {
    s.status = SampleStatus::excluded_unstable;
    s.mu8.reset();
    return;
  } catch (const CfOverflowError&) {
    s.status = SampleStatus::excluded_unstable;
    s.mu8.reset();
    return;
  }

  const auto ref = reference_price(s.features, *s.mu8, *s.i20, config.strike, config.kind,
                                   config.mkt, config.ref_eps, config.agree_tol);
  if (!ref) {
    s.status = SampleStatus::excluded_unstable;
    s.mu8.reset();
    s.i20.reset();
    return;
  }
  s.ref_price = *ref;
  s.status = SampleStatus::kept;

  if (config.with_cm) {
    // the optima always target the call variant; with the default evaluation
    // setup the reference already is a call price
    const OptionSpec call{config.strike, t, OptionKind::call};
    const double call_ref =
        config.kind == OptionKind::call
            ? *s.ref_price
            : *s.ref_price + config.mkt.s0 - config.strike * std::exp(-config.mkt.r * t);
    try {
      SearchConfig search;
      search.target_eps = config.cm_target_eps;
      const OptimalTuning opt = optimal_tuning_search(call, p, config.mkt, call_ref, search);
      s.cm_alpha = opt.alpha;
      s.cm_n = opt.grid_points;
    } catch (const NoAdmissibleAlphaError&) {
      // kept sample without Carr-Madan optima
    }
  }
}

std::vector<Sample> draw_features(std::size_t count, Rng& rng, const ParamRanges& r) {
  std::vector<Sample> out(count);
  for (Sample& s : out) {
    s.features[0] = rng.uniform(r.kappa_lo, r.kappa_hi);
    s.features[1] = rng.uniform(r.theta_lo, r.theta_hi);
    s.features[2] = rng.uniform(r.xi_lo, r.xi_hi);
    s.features[3] = rng.uniform(r.rho_lo, r.rho_hi);
    s.features[4] = rng.uniform(r.v0_lo, r.v0_hi);
    s.features[5] = rng.uniform(r.t_lo, r.t_hi);
  }
  return out;
}

}  // namespace

std::vector<Sample> generate_dataset(std::size_t count, std::uint64_t seed,
                                     const ParamRanges& ranges, const GenerateConfig& config) {
  if (count < 1) throw std::invalid_argument("generate_dataset: count must be >= 1");
  Rng rng(seed);
  std::vector<Sample> samples = draw_features(count, rng, ranges);
  parallel_for(samples.size(), [&](std::size_t i) { finish_sample(samples[i], config); },
               config.threads);
  return samples;
}

std::vector<Sample> generate_kept(std::size_t kept_target, std::uint64_t seed,
                                  const ParamRanges& ranges, const GenerateConfig& config) {
  if (kept_target < 1) throw std::invalid_argument("generate_kept: target must be >= 1");
  Rng rng(seed);
  std::vector<Sample> all;
  std::size_t kept = 0;
  const std::size_t chunk = std::max<std::size_t>(64, kept_target / 2);
  while (kept < kept_target) {
    std::vector<Sample> batch = draw_features(chunk, rng, ranges);
    parallel_for(batch.size(), [&](std::size_t i) { finish_sample(batch[i], config); },
                 config.threads);
    for (Sample& s : batch) {
      const bool is_kept = s.status == SampleStatus::kept;
      all.push_back(std::move(s));
      if (is_kept && ++kept == kept_target) break;
    }
  }
  return all;
}

namespace {

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string field_or_na(const std::optional<double>& v) {
  return v ? format_double(*v) : "NA";
}

}  // namespace

std::string to_csv(const std::vector<Sample>& samples) {
  std::ostringstream out;
  out << "kappa,theta,xi,rho,v0,T,mu8,i20,ref_price,cm_alpha,cm_n,status\n";
  for (const Sample& s : samples) {
    for (double f : s.features) out << format_double(f) << ',';
    out << field_or_na(s.mu8) << ',' << field_or_na(s.i20) << ',' << field_or_na(s.ref_price)
        << ',' << field_or_na(s.cm_alpha) << ',';
    if (s.cm_n) out << *s.cm_n;
    else out << "NA";
    out << ',' << to_string(s.status) << '\n';
  }
  return out.str();
}

std::vector<Sample> from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset csv: empty input");
  if (line != "kappa,theta,xi,rho,v0,T,mu8,i20,ref_price,cm_alpha,cm_n,status") {
    throw std::invalid_argument("dataset csv: unexpected header: " + line);
  }

  std::vector<Sample> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 12) {
      throw std::invalid_argument("dataset csv: row needs 12 cells: " + line);
    }
    Sample s;
    auto num = [](const std::string& c) {
      std::size_t used = 0;
      const double v = std::stod(c, &used);
      if (used != c.size()) throw std::invalid_argument("dataset csv: bad number " + c);
      return v;
    };
    for (std::size_t j = 0; j < 6; ++j) s.features[j] = num(cells[j]);
    if (cells[6] != "NA") s.mu8 = num(cells[6]);
    if (cells[7] != "NA") s.i20 = num(cells[7]);
    if (cells[8] != "NA") s.ref_price = num(cells[8]);
    if (cells[9] != "NA") s.cm_alpha = num(cells[9]);
    if (cells[10] != "NA") s.cm_n = std::stoll(cells[10]);
    s.status = status_from(cells[11]);
    out.push_back(std::move(s));
  }
  return out;
}

void write_csv(const std::vector<Sample>& samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << to_csv(samples);
  if (!out) throw std::runtime_error("write failure: " + path);
}

std::vector<Sample> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_csv(buffer.str());
}

std::vector<Sample> kept_only(const std::vector<Sample>& samples) {
  std::vector<Sample> out;
  for (const Sample& s : samples) {
    if (s.status == SampleStatus::kept) out.push_back(s);
  }
  return out;
}

}  // namespace fourierml::pipeline
