#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fourierml/rng.hpp"

namespace fourierml::ml {

// ordered model inputs: kappa, theta, xi, rho, v0, T
using FeatureVector = std::array<double, 6>;

inline constexpr std::array<std::string_view, 6> kFeatureNames = {"kappa", "theta", "xi",
                                                                  "rho",   "v0",    "T"};

// index for a feature name; throws ModelFormatError on unknown names
int feature_index(std::string_view name);

struct TreeNode {
  std::int32_t id = 0;
  bool leaf = false;
  std::int32_t feature = -1;  // 0..5 for internal nodes
  double split = 0.0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  double prediction = 0.0;  // leaf nodes only
};

struct DecisionTree {
  // nodes indexed by id; node 0 is the root
  std::vector<TreeNode> nodes;
  int max_depth = -1;  // fit metadata; -1 = unlimited
  int min_node_size = 1;

  // shape checks: ids consecutive, children resolve, every non-root node
  // referenced exactly once, leaves carry predictions
  void validate() const;

  // route from the root with "left if feature <= split"
  double predict(const FeatureVector& x) const;
};

struct TreeFitConfig {
  int max_depth = -1;     // -1 = unlimited
  int min_node_size = 1;  // nodes smaller than this become leaves
  std::uint64_t seed = 0; // only used when features are subsampled
};

// CART regression: each split maximises the variance reduction over all
// (feature, midpoint-threshold) candidates; leaves predict the node mean.
DecisionTree tree_fit(std::span<const FeatureVector> features, std::span<const double> targets,
                      const TreeFitConfig& config = {});

// Parses the tabulated-tree text format: whitespace-separated columns
//   nodeID  leaf_node  variable  split_value  left_child  right_child  prediction
// with Yes/No leaf flags, feature names from kFeatureNames and NA for absent
// fields. A header row is detected and skipped.
DecisionTree parse_tree_table(const std::string& text);

// Reads a tabulated tree from disk.
DecisionTree load_tree_table(const std::string& path);

namespace detail {
// variance reduction of the best split at a set of rows, brute-force; shared
// with tests that cross-check the fitted splits
struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double reduction = 0.0;
};
SplitChoice best_split(std::span<const FeatureVector> features, std::span<const double> targets,
                       std::span<const std::uint32_t> rows, std::span<const int> candidates);

// CART growth over an explicit row set (rows may repeat under bootstrap).
// features_per_split < 6 draws that many distinct candidate features per node
// from *rng; rng may be null when all features are used.
DecisionTree grow_tree(std::span<const FeatureVector> features, std::span<const double> targets,
                       std::vector<std::uint32_t> rows, const TreeFitConfig& config,
                       int features_per_split, Rng* rng);
}  // namespace detail

}  // namespace fourierml::ml
