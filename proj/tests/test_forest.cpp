#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fourierml/rng.hpp"
#include "fourierml/surrogate/forest.hpp"
#include "fourierml/surrogate/model_io.hpp"

using namespace fourierml;
using namespace fourierml::ml;

namespace {

std::pair<std::vector<FeatureVector>, std::vector<double>> toy_data(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<FeatureVector> X;
  std::vector<double> y;
  for (int i = 0; i < n; ++i) {
    FeatureVector x{rng.uniform(0, 2), rng.uniform(0, 2),  rng.uniform(0, 2),
                    rng.uniform(-1, 1), rng.uniform(0, 2), rng.uniform(0, 2)};
    X.push_back(x);
    y.push_back(3.0 * x[5] - x[2] + 0.5 * x[0] * x[4] + rng.uniform(-0.1, 0.1));
  }
  return {std::move(X), std::move(y)};
}

DecisionTree constant_tree(double value) {
  DecisionTree t;
  TreeNode leaf;
  leaf.id = 0;
  leaf.leaf = true;
  leaf.prediction = value;
  t.nodes.push_back(leaf);
  return t;
}

}  // namespace

TEST_CASE("degenerate forest equals a plain tree fit") {
  const auto [X, y] = toy_data(120, 5);
  ForestFitConfig cfg;
  cfg.num_trees = 1;
  cfg.bootstrap = false;
  cfg.features_per_split = 6;
  cfg.max_depth = 4;
  cfg.min_node_size = 2;
  const RandomForest forest = forest_fit(X, y, cfg);
  const DecisionTree tree = tree_fit(X, y, {.max_depth = 4, .min_node_size = 2, .seed = 0});
  Rng rng(123);
  for (int i = 0; i < 50; ++i) {
    FeatureVector x{rng.uniform(0, 2), rng.uniform(0, 2),  rng.uniform(0, 2),
                    rng.uniform(-1, 1), rng.uniform(0, 2), rng.uniform(0, 2)};
    CHECK(forest.predict(x) == tree.predict(x));
  }
}

TEST_CASE("forest prediction is exactly the mean of its trees") {
  RandomForest f;
  f.trees.push_back(constant_tree(1.0));
  f.trees.push_back(constant_tree(3.0));
  const FeatureVector x{1, 1, 1, 0, 1, 1};
  CHECK(f.predict(x) == 2.0);

  // mean over a trained forest, checked against explicit averaging
  const auto [X, y] = toy_data(80, 6);
  ForestFitConfig cfg;
  cfg.num_trees = 7;
  cfg.seed = 42;
  const RandomForest trained = forest_fit(X, y, cfg);
  double acc = 0.0;
  for (const auto& t : trained.trees) acc += t.predict(x);
  CHECK(trained.predict(x) == acc / 7.0);
}

TEST_CASE("permuting tree order leaves the prediction unchanged") {
  RandomForest f;
  f.trees.push_back(constant_tree(1.0));
  f.trees.push_back(constant_tree(5.0));
  f.trees.push_back(constant_tree(-2.0));
  RandomForest g = f;
  std::swap(g.trees[0], g.trees[2]);
  const FeatureVector x{1, 1, 1, 0, 1, 1};
  CHECK(f.predict(x) == g.predict(x));
}

TEST_CASE("a forest of copies equals the single tree") {
  RandomForest f;
  for (int i = 0; i < 5; ++i) f.trees.push_back(constant_tree(4.25));
  CHECK(f.predict({1, 1, 1, 0, 1, 1}) == 4.25);
}

TEST_CASE("same seed gives identical serialized models") {
  const auto [X, y] = toy_data(150, 7);
  ForestFitConfig cfg;
  cfg.num_trees = 9;
  cfg.seed = 2024;
  const RandomForest a = forest_fit(X, y, cfg);
  const RandomForest b = forest_fit(X, y, cfg);
  CHECK(model_to_json(SurrogateModel{a}) == model_to_json(SurrogateModel{b}));
}

TEST_CASE("different seeds give different forests") {
  const auto [X, y] = toy_data(150, 7);
  ForestFitConfig a_cfg;
  a_cfg.num_trees = 5;
  a_cfg.seed = 1;
  ForestFitConfig b_cfg = a_cfg;
  b_cfg.seed = 2;
  const RandomForest a = forest_fit(X, y, a_cfg);
  const RandomForest b = forest_fit(X, y, b_cfg);
  CHECK(model_to_json(SurrogateModel{a}) != model_to_json(SurrogateModel{b}));
}

TEST_CASE("forest fit improves over the mean baseline on held-out data") {
  const auto [X, y] = toy_data(600, 8);
  const std::size_t train_n = 450;
  std::span<const FeatureVector> Xtr(X.data(), train_n);
  std::span<const double> ytr(y.data(), train_n);

  ForestFitConfig cfg;
  cfg.num_trees = 60;
  cfg.seed = 3;
  const RandomForest f = forest_fit(Xtr, ytr, cfg);

  double mean = 0.0;
  for (std::size_t i = 0; i < train_n; ++i) mean += y[i];
  mean /= static_cast<double>(train_n);

  double mse_forest = 0.0, mse_mean = 0.0;
  for (std::size_t i = train_n; i < X.size(); ++i) {
    const double e1 = f.predict(X[i]) - y[i];
    const double e2 = mean - y[i];
    mse_forest += e1 * e1;
    mse_mean += e2 * e2;
  }
  CHECK(mse_forest < 0.5 * mse_mean);
}

TEST_CASE("invalid configurations are rejected") {
  const auto [X, y] = toy_data(10, 9);
  ForestFitConfig cfg;
  cfg.num_trees = 0;
  CHECK_THROWS_AS((void)forest_fit(X, y, cfg), std::invalid_argument);
  CHECK_THROWS_AS((void)forest_fit({}, {}, ForestFitConfig{}), std::invalid_argument);
}
