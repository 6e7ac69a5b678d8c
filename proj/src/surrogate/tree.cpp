#include "fourierml/surrogate/tree.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "fourierml/errors.hpp"
#include "fourierml/rng.hpp"

namespace fourierml::ml {

int feature_index(std::string_view name) {
  for (std::size_t i = 0; i < kFeatureNames.size(); ++i) {
    if (kFeatureNames[i] == name) return static_cast<int>(i);
  }
  throw ModelFormatError("unknown feature name: " + std::string(name));
}

void DecisionTree::validate() const {
  if (nodes.empty()) throw ModelFormatError("tree has no nodes");
  const auto n = static_cast<std::int32_t>(nodes.size());
  std::vector<int> referenced(nodes.size(), 0);
  for (std::int32_t i = 0; i < n; ++i) {
    const TreeNode& node = nodes[static_cast<std::size_t>(i)];
    if (node.id != i) throw ModelFormatError("node ids must be consecutive from 0");
    if (node.leaf) {
      if (node.left != -1 || node.right != -1) {
        throw ModelFormatError("leaf node " + std::to_string(i) + " has children");
      }
      if (!std::isfinite(node.prediction)) {
        throw ModelFormatError("leaf node " + std::to_string(i) + " lacks a prediction");
      }
    } else {
      if (node.feature < 0 || node.feature >= 6) {
        throw ModelFormatError("internal node " + std::to_string(i) + " has no split variable");
      }
      if (!std::isfinite(node.split)) {
        throw ModelFormatError("internal node " + std::to_string(i) + " has no split value");
      }
      for (std::int32_t child : {node.left, node.right}) {
        if (child < 0 || child >= n) {
          throw ModelFormatError("node " + std::to_string(i) + " references missing child " +
                                 std::to_string(child));
        }
        if (child == 0) throw ModelFormatError("root cannot be a child");
        referenced[static_cast<std::size_t>(child)] += 1;
      }
    }
  }
  for (std::int32_t i = 1; i < n; ++i) {
    if (referenced[static_cast<std::size_t>(i)] != 1) {
      throw ModelFormatError("node " + std::to_string(i) + " referenced " +
                             std::to_string(referenced[static_cast<std::size_t>(i)]) +
                             " times; structure is not a tree");
    }
  }
  std::vector<char> seen(nodes.size(), 0);
  std::deque<std::int32_t> queue{0};
  std::size_t visited = 0;
  while (!queue.empty()) {
    const std::int32_t i = queue.front();
    queue.pop_front();
    if (seen[static_cast<std::size_t>(i)]) throw ModelFormatError("cycle detected in tree");
    seen[static_cast<std::size_t>(i)] = 1;
    ++visited;
    const TreeNode& node = nodes[static_cast<std::size_t>(i)];
    if (!node.leaf) {
      queue.push_back(node.left);
      queue.push_back(node.right);
    }
  }
  if (visited != nodes.size()) throw ModelFormatError("unreachable nodes in tree");
}

double DecisionTree::predict(const FeatureVector& x) const {
  const TreeNode* node = &nodes[0];
  while (!node->leaf) {
    const std::int32_t next =
        x[static_cast<std::size_t>(node->feature)] <= node->split ? node->left : node->right;
    node = &nodes[static_cast<std::size_t>(next)];
  }
  return node->prediction;
}

namespace detail {

SplitChoice best_split(std::span<const FeatureVector> features, std::span<const double> targets,
                       std::span<const std::uint32_t> rows, std::span<const int> candidates) {
  SplitChoice best;
  const std::size_t n = rows.size();
  if (n < 2) return best;

  double sum = 0.0, sum2 = 0.0;
  for (std::uint32_t r : rows) {
    sum += targets[r];
    sum2 += targets[r] * targets[r];
  }
  const double sse_parent = sum2 - sum * sum / static_cast<double>(n);

  std::vector<std::uint32_t> order(rows.begin(), rows.end());
  for (int f : candidates) {
    const auto fi = static_cast<std::size_t>(f);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (features[a][fi] != features[b][fi]) return features[a][fi] < features[b][fi];
      return a < b;
    });
    double left_sum = 0.0, left_sum2 = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double y = targets[order[k]];
      left_sum += y;
      left_sum2 += y * y;
      const double x_here = features[order[k]][fi];
      const double x_next = features[order[k + 1]][fi];
      if (x_here == x_next) continue;  // thresholds sit between distinct values
      const double nl = static_cast<double>(k + 1);
      const double nr = static_cast<double>(n - k - 1);
      const double right_sum = sum - left_sum;
      const double right_sum2 = sum2 - left_sum2;
      const double sse =
          (left_sum2 - left_sum * left_sum / nl) + (right_sum2 - right_sum * right_sum / nr);
      const double reduction = sse_parent - sse;
      const double threshold = 0.5 * (x_here + x_next);
      if (!best.found || reduction > best.reduction ||
          (reduction == best.reduction &&
           (f < best.feature || (f == best.feature && threshold < best.threshold)))) {
        best.found = true;
        best.feature = f;
        best.threshold = threshold;
        best.reduction = reduction;
      }
    }
  }
  if (best.found && !(best.reduction > 0.0)) best.found = false;
  return best;
}

}  // namespace detail

namespace {

struct PendingNode {
  std::int32_t id;
  std::vector<std::uint32_t> rows;
  int depth;
};

}  // namespace

namespace detail {

DecisionTree grow_tree(std::span<const FeatureVector> features, std::span<const double> targets,
                       std::vector<std::uint32_t> rows, const TreeFitConfig& config,
                       int features_per_split, Rng* rng) {
  if (features.empty() || features.size() != targets.size() || rows.empty()) {
    throw std::invalid_argument("grow_tree: need matching, non-empty data");
  }
  if (features_per_split < 1) features_per_split = 1;
  if (features_per_split > 6) features_per_split = 6;
  const bool sample_features = features_per_split < 6 && rng != nullptr;

  DecisionTree tree;
  tree.max_depth = config.max_depth;
  tree.min_node_size = config.min_node_size;

  std::deque<PendingNode> queue;
  tree.nodes.emplace_back();
  tree.nodes[0].id = 0;
  queue.push_back({0, std::move(rows), 0});

  std::array<int, 6> pool{0, 1, 2, 3, 4, 5};

  while (!queue.empty()) {
    PendingNode work = std::move(queue.front());
    queue.pop_front();

    double sum = 0.0;
    double ymin = std::numeric_limits<double>::infinity();
    double ymax = -std::numeric_limits<double>::infinity();
    for (std::uint32_t r : work.rows) {
      sum += targets[r];
      ymin = std::min(ymin, targets[r]);
      ymax = std::max(ymax, targets[r]);
    }
    const double mean = sum / static_cast<double>(work.rows.size());

    auto make_leaf = [&] {
      TreeNode& node = tree.nodes[static_cast<std::size_t>(work.id)];
      node.leaf = true;
      node.prediction = mean;
    };

    const bool depth_capped = config.max_depth >= 0 && work.depth >= config.max_depth;
    if (depth_capped || work.rows.size() < static_cast<std::size_t>(config.min_node_size) ||
        ymin == ymax) {
      make_leaf();
      continue;
    }

    std::array<int, 6> chosen{};
    std::span<const int> candidates;
    if (sample_features) {
      // partial Fisher-Yates, then ascending order for deterministic ties
      std::array<int, 6> deck = pool;
      for (int k = 0; k < features_per_split; ++k) {
        const auto j = static_cast<std::size_t>(k) +
                       static_cast<std::size_t>(rng->uniform_index(6 - static_cast<std::uint64_t>(k)));
        std::swap(deck[static_cast<std::size_t>(k)], deck[j]);
        chosen[static_cast<std::size_t>(k)] = deck[static_cast<std::size_t>(k)];
      }
      std::sort(chosen.begin(), chosen.begin() + features_per_split);
      candidates = std::span<const int>(chosen.data(), static_cast<std::size_t>(features_per_split));
    } else {
      candidates = std::span<const int>(pool.data(), pool.size());
    }

    const auto choice = detail::best_split(features, targets, work.rows, candidates);
    if (!choice.found) {
      make_leaf();
      continue;
    }

    std::vector<std::uint32_t> left_rows, right_rows;
    for (std::uint32_t r : work.rows) {
      if (features[r][static_cast<std::size_t>(choice.feature)] <= choice.threshold) {
        left_rows.push_back(r);
      } else {
        right_rows.push_back(r);
      }
    }

    const auto left_id = static_cast<std::int32_t>(tree.nodes.size());
    const auto right_id = left_id + 1;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    tree.nodes[static_cast<std::size_t>(left_id)].id = left_id;
    tree.nodes[static_cast<std::size_t>(right_id)].id = right_id;

    TreeNode& node = tree.nodes[static_cast<std::size_t>(work.id)];
    node.leaf = false;
    node.feature = choice.feature;
    node.split = choice.threshold;
    node.left = left_id;
    node.right = right_id;

    queue.push_back({left_id, std::move(left_rows), work.depth + 1});
    queue.push_back({right_id, std::move(right_rows), work.depth + 1});
  }

  tree.validate();
  return tree;
}

}  // namespace detail

DecisionTree tree_fit(std::span<const FeatureVector> features, std::span<const double> targets,
                      const TreeFitConfig& config) {
  if (features.empty() || features.size() != targets.size()) {
    throw std::invalid_argument("tree_fit: need matching, non-empty features and targets");
  }
  std::vector<std::uint32_t> all(features.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<std::uint32_t>(i);
  return detail::grow_tree(features, targets, std::move(all), config, 6, nullptr);
}

DecisionTree parse_tree_table(const std::string& text) {
  struct Row {
    std::int32_t id;
    bool leaf;
    std::string variable, split, left, right, prediction;
  };
  std::vector<Row> rows;

  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream fields(line);
    std::vector<std::string> tok;
    std::string t;
    while (fields >> t) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok[0] == "nodeID" || tok[0][0] == '#') continue;  // header / comment
    if (tok.size() != 7) {
      throw ModelFormatError("tree table row needs 7 columns, got " + std::to_string(tok.size()) +
                             ": " + line);
    }
    Row row;
    try {
      row.id = std::stoi(tok[0]);
    } catch (...) {
      throw ModelFormatError("bad nodeID: " + tok[0]);
    }
    if (tok[1] == "Yes") row.leaf = true;
    else if (tok[1] == "No") row.leaf = false;
    else throw ModelFormatError("leaf flag must be Yes or No, got " + tok[1]);
    row.variable = tok[2];
    row.split = tok[3];
    row.left = tok[4];
    row.right = tok[5];
    row.prediction = tok[6];
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ModelFormatError("tree table has no rows");

  std::int32_t max_id = 0;
  for (const Row& r : rows) {
    if (r.id < 0) throw ModelFormatError("negative nodeID");
    max_id = std::max(max_id, r.id);
  }

  DecisionTree tree;
  tree.max_depth = -1;
  tree.nodes.resize(static_cast<std::size_t>(max_id) + 1);
  std::vector<char> filled(tree.nodes.size(), 0);
  auto parse_num = [](const std::string& s, const char* what) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument(s);
      return v;
    } catch (...) {
      throw ModelFormatError(std::string("bad ") + what + ": " + s);
    }
  };

  for (const Row& r : rows) {
    if (filled[static_cast<std::size_t>(r.id)]) {
      throw ModelFormatError("duplicate nodeID " + std::to_string(r.id));
    }
    filled[static_cast<std::size_t>(r.id)] = 1;
    TreeNode& node = tree.nodes[static_cast<std::size_t>(r.id)];
    node.id = r.id;
    node.leaf = r.leaf;
    if (r.leaf) {
      if (r.variable != "NA" || r.split != "NA" || r.left != "NA" || r.right != "NA") {
        throw ModelFormatError("leaf row " + std::to_string(r.id) + " must use NA fields");
      }
      node.prediction = parse_num(r.prediction, "prediction");
    } else {
      if (r.prediction != "NA") {
        throw ModelFormatError("internal row " + std::to_string(r.id) + " must have NA prediction");
      }
      node.feature = feature_index(r.variable);
      node.split = parse_num(r.split, "split value");
      node.left = static_cast<std::int32_t>(parse_num(r.left, "left child"));
      node.right = static_cast<std::int32_t>(parse_num(r.right, "right child"));
    }
  }
  for (std::size_t i = 0; i < filled.size(); ++i) {
    if (!filled[i]) throw ModelFormatError("missing nodeID " + std::to_string(i));
  }
  tree.validate();
  return tree;
}

DecisionTree load_tree_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ModelFormatError("cannot open tree table: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_tree_table(buffer.str());
}

}  // namespace fourierml::ml
