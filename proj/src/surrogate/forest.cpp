#include "fourierml/surrogate/forest.hpp"

#include <stdexcept>

#include "fourierml/errors.hpp"
#include "fourierml/parallel.hpp"

namespace fourierml::ml {

void RandomForest::validate() const {
  if (trees.empty()) throw ModelFormatError("forest has no trees");
  for (const DecisionTree& t : trees) t.validate();
}

double RandomForest::predict(const FeatureVector& x) const {
  double acc = 0.0;
  for (const DecisionTree& t : trees) acc += t.predict(x);
  return acc / static_cast<double>(trees.size());
}

RandomForest forest_fit(std::span<const FeatureVector> features, std::span<const double> targets,
                        const ForestFitConfig& config) {
  if (features.empty() || features.size() != targets.size()) {
    throw std::invalid_argument("forest_fit: need matching, non-empty features and targets");
  }
  if (config.num_trees < 1) throw std::invalid_argument("forest_fit: num_trees must be >= 1");

  RandomForest forest;
  forest.config = config;
  forest.trees.resize(static_cast<std::size_t>(config.num_trees));

  const std::size_t n = features.size();
  const TreeFitConfig tree_cfg{config.max_depth, config.min_node_size, config.seed};

  parallel_for(forest.trees.size(), [&](std::size_t i) {
    Rng rng(Rng::derive(config.seed, i));
    std::vector<std::uint32_t> rows(n);
    if (config.bootstrap) {
      for (std::size_t k = 0; k < n; ++k) {
        rows[k] = static_cast<std::uint32_t>(rng.uniform_index(n));
      }
    } else {
      for (std::size_t k = 0; k < n; ++k) rows[k] = static_cast<std::uint32_t>(k);
    }
    forest.trees[i] = detail::grow_tree(features, targets, std::move(rows), tree_cfg,
                                        config.features_per_split, &rng);
  });

  return forest;
}

}  // namespace fourierml::ml
