#include "fourierml/surrogate/mlp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "fourierml/errors.hpp"
#include "fourierml/rng.hpp"

namespace fourierml::ml {

namespace {

double activate(Activation a, double z) {
  switch (a) {
    case Activation::sigmoid: return 1.0 / (1.0 + std::exp(-z));
    case Activation::relu: return z > 0.0 ? z : 0.0;
    case Activation::identity: return z;
  }
  return z;
}

// derivative expressed through the activation value where possible
double activate_grad(Activation a, double z, double value) {
  switch (a) {
    case Activation::sigmoid: return value * (1.0 - value);
    case Activation::relu: return z > 0.0 ? 1.0 : 0.0;
    case Activation::identity: return 1.0;
  }
  (void)z;
  return 1.0;
}

struct Workspace {
  // per layer: pre-activations z and activations a (a[0] is the input)
  std::vector<std::vector<double>> z;
  std::vector<std::vector<double>> a;
  std::vector<std::vector<double>> delta;

  explicit Workspace(const std::vector<int>& sizes) {
    a.resize(sizes.size());
    z.resize(sizes.size());
    delta.resize(sizes.size());
    for (std::size_t l = 0; l < sizes.size(); ++l) {
      a[l].resize(static_cast<std::size_t>(sizes[l]));
      z[l].resize(static_cast<std::size_t>(sizes[l]));
      delta[l].resize(static_cast<std::size_t>(sizes[l]));
    }
  }
};

// forward pass on scaled input; returns the raw network output
double forward(const MlpModel& m, const double* x_scaled, Workspace& ws) {
  const std::size_t layers = m.layer_sizes.size();
  for (std::size_t j = 0; j < ws.a[0].size(); ++j) ws.a[0][j] = x_scaled[j];
  for (std::size_t l = 0; l + 1 < layers; ++l) {
    const auto in_n = static_cast<std::size_t>(m.layer_sizes[l]);
    const auto out_n = static_cast<std::size_t>(m.layer_sizes[l + 1]);
    const bool last = (l + 2 == layers);
    const Activation act = last ? Activation::identity : m.hidden_activation;
    for (std::size_t r = 0; r < out_n; ++r) {
      double zv = m.biases[l][r];
      const double* wrow = &m.weights[l][r * in_n];
      for (std::size_t c = 0; c < in_n; ++c) zv += wrow[c] * ws.a[l][c];
      ws.z[l + 1][r] = zv;
      ws.a[l + 1][r] = activate(act, zv);
    }
  }
  return ws.a[layers - 1][0];
}

// backprop of d(loss)/d(output) = out_grad into the gradient accumulators
void backward(const MlpModel& m, Workspace& ws, double out_grad,
              std::vector<std::vector<double>>& wg, std::vector<std::vector<double>>& bg) {
  const std::size_t layers = m.layer_sizes.size();
  ws.delta[layers - 1][0] = out_grad;  // identity output layer
  for (std::size_t l = layers - 1; l-- > 0;) {
    const auto in_n = static_cast<std::size_t>(m.layer_sizes[l]);
    const auto out_n = static_cast<std::size_t>(m.layer_sizes[l + 1]);
    const bool last = (l + 2 == layers);
    const Activation act = last ? Activation::identity : m.hidden_activation;
    for (std::size_t r = 0; r < out_n; ++r) {
      const double d = ws.delta[l + 1][r] * activate_grad(act, ws.z[l + 1][r], ws.a[l + 1][r]);
      ws.delta[l + 1][r] = d;
      bg[l][r] += d;
      double* wgrow = &wg[l][r * in_n];
      for (std::size_t c = 0; c < in_n; ++c) wgrow[c] += d * ws.a[l][c];
    }
    if (l > 0) {
      for (std::size_t c = 0; c < in_n; ++c) {
        double acc = 0.0;
        for (std::size_t r = 0; r < out_n; ++r) {
          acc += m.weights[l][r * in_n + c] * ws.delta[l + 1][r];
        }
        ws.delta[l][c] = acc;
      }
    }
  }
}

void scale_input(const MlpModel& m, const FeatureVector& x, double* out) {
  for (std::size_t j = 0; j < 6; ++j) out[j] = (x[j] - m.input_mean[j]) / m.input_scale[j];
}

}  // namespace

void MlpModel::validate() const {
  if (layer_sizes.size() < 2) throw ModelFormatError("mlp needs at least input and output layers");
  if (layer_sizes.front() != 6) throw ModelFormatError("mlp input layer must have 6 units");
  if (layer_sizes.back() != 1) throw ModelFormatError("mlp output layer must have 1 unit");
  if (weights.size() != layer_sizes.size() - 1 || biases.size() != weights.size()) {
    throw ModelFormatError("mlp weight/bias layer count mismatch");
  }
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    if (layer_sizes[l] < 1 || layer_sizes[l + 1] < 1) throw ModelFormatError("mlp empty layer");
    const auto want_w = static_cast<std::size_t>(layer_sizes[l]) *
                        static_cast<std::size_t>(layer_sizes[l + 1]);
    if (weights[l].size() != want_w) throw ModelFormatError("mlp weight shape mismatch");
    if (biases[l].size() != static_cast<std::size_t>(layer_sizes[l + 1])) {
      throw ModelFormatError("mlp bias shape mismatch");
    }
    for (double w : weights[l]) {
      if (!std::isfinite(w)) throw ModelFormatError("mlp has non-finite weight");
    }
    for (double b : biases[l]) {
      if (!std::isfinite(b)) throw ModelFormatError("mlp has non-finite bias");
    }
  }
  for (double s : input_scale) {
    if (!(s > 0.0)) throw ModelFormatError("mlp input scale must be positive");
  }
  if (!(target_scale > 0.0)) throw ModelFormatError("mlp target scale must be positive");
}

double MlpModel::predict(const FeatureVector& x) const {
  Workspace ws(layer_sizes);
  double xs[6];
  scale_input(*this, x, xs);
  return forward(*this, xs, ws) * target_scale + target_mean;
}

MlpGradients mlp_gradients(const MlpModel& model, std::span<const FeatureVector> features,
                           std::span<const double> targets) {
  if (features.empty() || features.size() != targets.size()) {
    throw std::invalid_argument("mlp_gradients: need matching, non-empty data");
  }
  MlpGradients out;
  out.weight_grads.resize(model.weights.size());
  out.bias_grads.resize(model.biases.size());
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    out.weight_grads[l].assign(model.weights[l].size(), 0.0);
    out.bias_grads[l].assign(model.biases[l].size(), 0.0);
  }

  Workspace ws(model.layer_sizes);
  const double n = static_cast<double>(features.size());
  const double ts = model.target_scale;
  for (std::size_t i = 0; i < features.size(); ++i) {
    double xs[6];
    scale_input(model, features[i], xs);
    const double net = forward(model, xs, ws);
    const double pred = net * ts + model.target_mean;
    const double err = pred - targets[i];
    out.loss += err * err / n;
    backward(model, ws, 2.0 * err * ts / n, out.weight_grads, out.bias_grads);
  }
  return out;
}

MlpFitResult mlp_fit(std::span<const FeatureVector> features, std::span<const double> targets,
                     const MlpFitConfig& config) {
  if (features.empty() || features.size() != targets.size()) {
    throw std::invalid_argument("mlp_fit: need matching, non-empty features and targets");
  }
  if (config.epochs < 1) throw std::invalid_argument("mlp_fit: epochs must be >= 1");
  if (!(config.validation_split >= 0.0 && config.validation_split < 1.0)) {
    throw std::invalid_argument("mlp_fit: validation_split must be in [0, 1)");
  }

  const std::size_t n = features.size();
  const auto val_n = static_cast<std::size_t>(config.validation_split * static_cast<double>(n));
  const std::size_t train_n = n - val_n;
  if (train_n == 0) throw std::invalid_argument("mlp_fit: no training samples left");
  const std::size_t batch =
      std::min<std::size_t>(std::max(1, config.batch_size), train_n);

  MlpModel model;
  model.layer_sizes.push_back(6);
  for (int h : config.hidden_layers) {
    if (h < 1) throw std::invalid_argument("mlp_fit: hidden layer sizes must be >= 1");
    model.layer_sizes.push_back(h);
  }
  model.layer_sizes.push_back(1);
  model.hidden_activation = config.activation;

  if (config.standardize) {
    for (std::size_t j = 0; j < 6; ++j) {
      double mean = 0.0;
      for (std::size_t i = 0; i < train_n; ++i) mean += features[i][j];
      mean /= static_cast<double>(train_n);
      double var = 0.0;
      for (std::size_t i = 0; i < train_n; ++i) {
        const double d = features[i][j] - mean;
        var += d * d;
      }
      var /= static_cast<double>(train_n);
      model.input_mean[j] = mean;
      model.input_scale[j] = var > 1e-24 ? std::sqrt(var) : 1.0;
    }
    double tmean = 0.0;
    for (std::size_t i = 0; i < train_n; ++i) tmean += targets[i];
    tmean /= static_cast<double>(train_n);
    double tvar = 0.0;
    for (std::size_t i = 0; i < train_n; ++i) {
      const double d = targets[i] - tmean;
      tvar += d * d;
    }
    tvar /= static_cast<double>(train_n);
    model.target_mean = tmean;
    model.target_scale = tvar > 1e-24 ? std::sqrt(tvar) : 1.0;
  }

  // He-initialised weights, zero biases
  Rng rng(config.seed);
  model.weights.resize(model.layer_sizes.size() - 1);
  model.biases.resize(model.layer_sizes.size() - 1);
  for (std::size_t l = 0; l + 1 < model.layer_sizes.size(); ++l) {
    const auto in_n = static_cast<std::size_t>(model.layer_sizes[l]);
    const auto out_n = static_cast<std::size_t>(model.layer_sizes[l + 1]);
    const double stddev = std::sqrt(2.0 / static_cast<double>(in_n));
    model.weights[l].resize(in_n * out_n);
    for (double& w : model.weights[l]) w = stddev * rng.normal();
    model.biases[l].assign(out_n, 0.0);
  }

  // Adam state
  std::vector<std::vector<double>> mw(model.weights.size()), vw(model.weights.size());
  std::vector<std::vector<double>> mb(model.biases.size()), vb(model.biases.size());
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    mw[l].assign(model.weights[l].size(), 0.0);
    vw[l].assign(model.weights[l].size(), 0.0);
    mb[l].assign(model.biases[l].size(), 0.0);
    vb[l].assign(model.biases[l].size(), 0.0);
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kAdamEps = 1e-8;
  long step = 0;

  std::vector<std::size_t> order(train_n);
  for (std::size_t i = 0; i < train_n; ++i) order[i] = i;

  std::vector<std::vector<double>> wg(model.weights.size()), bg(model.biases.size());
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    wg[l].assign(model.weights[l].size(), 0.0);
    bg[l].assign(model.biases[l].size(), 0.0);
  }

  Workspace ws(model.layer_sizes);
  const double ts2 = model.target_scale * model.target_scale;
  MlpFitResult result;

  auto scaled_target = [&](std::size_t i) {
    return (targets[i] - model.target_mean) / model.target_scale;
  };

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    double epoch_loss = 0.0;

    for (std::size_t start = 0; start < train_n; start += batch) {
      const std::size_t stop = std::min(start + batch, train_n);
      const double bn = static_cast<double>(stop - start);
      for (std::size_t l = 0; l < wg.size(); ++l) {
        std::fill(wg[l].begin(), wg[l].end(), 0.0);
        std::fill(bg[l].begin(), bg[l].end(), 0.0);
      }
      double batch_loss = 0.0;
      for (std::size_t k = start; k < stop; ++k) {
        const std::size_t i = order[k];
        double xs[6];
        scale_input(model, features[i], xs);
        const double net = forward(model, xs, ws);
        const double err = net - scaled_target(i);
        batch_loss += err * err / bn;
        backward(model, ws, 2.0 * err / bn, wg, bg);
      }
      epoch_loss += batch_loss * bn;

      ++step;
      const double corr1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double corr2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t l = 0; l < model.weights.size(); ++l) {
        for (std::size_t j = 0; j < model.weights[l].size(); ++j) {
          const double g = wg[l][j];
          mw[l][j] = kBeta1 * mw[l][j] + (1.0 - kBeta1) * g;
          vw[l][j] = kBeta2 * vw[l][j] + (1.0 - kBeta2) * g * g;
          model.weights[l][j] -= config.learning_rate * (mw[l][j] / corr1) /
                                 (std::sqrt(vw[l][j] / corr2) + kAdamEps);
        }
        for (std::size_t j = 0; j < model.biases[l].size(); ++j) {
          const double g = bg[l][j];
          mb[l][j] = kBeta1 * mb[l][j] + (1.0 - kBeta1) * g;
          vb[l][j] = kBeta2 * vb[l][j] + (1.0 - kBeta2) * g * g;
          model.biases[l][j] -= config.learning_rate * (mb[l][j] / corr1) /
                                (std::sqrt(vb[l][j] / corr2) + kAdamEps);
        }
      }
    }

    epoch_loss /= static_cast<double>(train_n);
    if (!std::isfinite(epoch_loss)) {
      throw std::runtime_error("mlp_fit: loss diverged at epoch " + std::to_string(epoch));
    }
    result.train_loss.push_back(epoch_loss * ts2);

    if (val_n > 0) {
      double val_loss = 0.0;
      for (std::size_t i = train_n; i < n; ++i) {
        double xs[6];
        scale_input(model, features[i], xs);
        const double err = forward(model, xs, ws) - scaled_target(i);
        val_loss += err * err / static_cast<double>(val_n);
      }
      if (!std::isfinite(val_loss)) {
        throw std::runtime_error("mlp_fit: validation loss diverged at epoch " +
                                 std::to_string(epoch));
      }
      result.val_loss.push_back(val_loss * ts2);
    }
  }

  model.validate();
  result.model = std::move(model);
  return result;
}

}  // namespace fourierml::ml
