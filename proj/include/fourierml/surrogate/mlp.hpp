#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "fourierml/surrogate/tree.hpp"  // FeatureVector

namespace fourierml::ml {

enum class Activation { sigmoid, relu, identity };

struct MlpModel {
  std::vector<int> layer_sizes;               // e.g. {6, 64, 32, 1}
  std::vector<std::vector<double>> weights;   // per layer, row-major out x in
  std::vector<std::vector<double>> biases;    // per layer
  Activation hidden_activation = Activation::sigmoid;

  // affine pre/post-processing fitted on the training data; identity by default
  std::array<double, 6> input_mean{0, 0, 0, 0, 0, 0};
  std::array<double, 6> input_scale{1, 1, 1, 1, 1, 1};
  double target_mean = 0.0;
  double target_scale = 1.0;

  void validate() const;  // shape chain must be consistent, parameters finite
  double predict(const FeatureVector& x) const;
};

struct MlpFitConfig {
  std::vector<int> hidden_layers{64, 32};
  Activation activation = Activation::sigmoid;
  int epochs = 100;
  int batch_size = 256;
  double learning_rate = 1e-3;
  double validation_split = 0.2;
  std::uint64_t seed = 0;
  bool standardize = true;  // z-score inputs and target from the training set
};

struct MlpFitResult {
  MlpModel model;
  // per-epoch mean squared error in original target units
  std::vector<double> train_loss;
  std::vector<double> val_loss;
};

// Mini-batch Adam on the mean squared error, He-initialised weights, fixed
// validation tail. Deterministic given the seed. Throws std::runtime_error
// naming the epoch if the loss turns non-finite.
MlpFitResult mlp_fit(std::span<const FeatureVector> features, std::span<const double> targets,
                     const MlpFitConfig& config);

// MSE of model.predict over the set plus its gradient with respect to every
// weight and bias, via backpropagation. Shapes match model.weights/biases.
struct MlpGradients {
  double loss = 0.0;
  std::vector<std::vector<double>> weight_grads;
  std::vector<std::vector<double>> bias_grads;
};
MlpGradients mlp_gradients(const MlpModel& model, std::span<const FeatureVector> features,
                           std::span<const double> targets);

}  // namespace fourierml::ml
