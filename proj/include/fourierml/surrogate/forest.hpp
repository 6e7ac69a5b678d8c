#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fourierml/surrogate/tree.hpp"

namespace fourierml::ml {

struct ForestFitConfig {
  int num_trees = 100;
  int max_depth = -1;
  int min_node_size = 1;
  int features_per_split = 2;
  bool bootstrap = true;  // disabled only by tests that pin the degenerate case
  std::uint64_t seed = 0;
};

struct RandomForest {
  std::vector<DecisionTree> trees;
  ForestFitConfig config;

  void validate() const;
  // arithmetic mean of the member predictions
  double predict(const FeatureVector& x) const;
};

// Bagged CART: each tree sees a bootstrap resample (same size as the data) and
// draws features_per_split candidate features per node. Tree i derives its RNG
// stream from (seed, i), so parallel training equals sequential training.
RandomForest forest_fit(std::span<const FeatureVector> features, std::span<const double> targets,
                        const ForestFitConfig& config);

}  // namespace fourierml::ml
