#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "fourierml/errors.hpp"
#include "fourierml/rng.hpp"
#include "fourierml/surrogate/tree.hpp"

using namespace fourierml;
using namespace fourierml::ml;

namespace {

const std::string kI20Path = std::string(FOURIERML_DATA_DIR) + "/i20_tree_depth5.tsv";
const std::string kMu8Path = std::string(FOURIERML_DATA_DIR) + "/mu8_tree_depth5.tsv";

// the five-node example table (depth-2 tree on T and v0)
const char* kSmallTable = R"(nodeID leaf_node variable split_value left_child right_child prediction
0 No T 0.101999 1 2 NA
1 Yes NA NA NA NA 46.988648
2 No v0 0.838772 3 4 NA
3 Yes NA NA NA NA 14.185356
4 Yes NA NA NA NA 2.344154
)";

FeatureVector fv(double kappa, double theta, double xi, double rho, double v0, double T) {
  return {kappa, theta, xi, rho, v0, T};
}

// independent router used to trace tabulated trees in tests
double trace_table(const DecisionTree& t, const FeatureVector& x) {
  std::int32_t id = 0;
  for (;;) {
    const TreeNode& n = t.nodes[static_cast<std::size_t>(id)];
    if (n.leaf) return n.prediction;
    id = (x[static_cast<std::size_t>(n.feature)] <= n.split) ? n.left : n.right;
  }
}

}  // namespace

TEST_CASE("feature names map to indices") {
  CHECK(feature_index("kappa") == 0);
  CHECK(feature_index("theta") == 1);
  CHECK(feature_index("xi") == 2);
  CHECK(feature_index("rho") == 3);
  CHECK(feature_index("v0") == 4);
  CHECK(feature_index("T") == 5);
  CHECK_THROWS_AS((void)feature_index("sigma"), ModelFormatError);
}

TEST_CASE("small example table routes correctly") {
  const DecisionTree t = parse_tree_table(kSmallTable);
  CHECK(t.nodes.size() == 5);
  CHECK(t.predict(fv(1, 1, 1, 0, 0.9, 0.5)) == 2.344154);
  CHECK(t.predict(fv(1, 1, 1, 0, 0.5, 0.5)) == 14.185356);
  CHECK(t.predict(fv(1, 1, 1, 0, 0.9, 0.05)) == 46.988648);
}

TEST_CASE("shipped I20 table parses and matches the tabulated paths") {
  const DecisionTree t = load_tree_table(kI20Path);
  CHECK(t.nodes.size() == 61);
  CHECK_FALSE(t.nodes[0].leaf);
  CHECK(t.nodes[0].feature == feature_index("T"));
  CHECK(t.nodes[0].split == 0.186064);
  // path 0 -> 1 -> 3 -> 8 -> 17 -> 35
  CHECK(t.predict(fv(1.0, 0.1, 1.0, 0.0, 0.1, 0.1)) == 36.203604);
}

TEST_CASE("shipped mu8 table parses and matches the tabulated paths") {
  const DecisionTree t = load_tree_table(kMu8Path);
  CHECK(t.nodes.size() == 63);
  CHECK(t.nodes[62].leaf);
  CHECK(t.nodes[62].prediction == 5.944725);
  // T = 0.05 routes 0 -> 1 -> 3 -> 7 -> 15 -> 31 regardless of other features
  CHECK(t.predict(fv(5.0, 1.5, 3.0, 0.5, 1.9, 0.05)) == 0.366800);
  CHECK(t.predict(fv(0.001, 0.001, 0.01, -0.99, 0.001, 0.05)) == 0.366800);
}

TEST_CASE("tabulated predictions agree with an independent trace on random inputs") {
  for (const std::string& path : {kI20Path, kMu8Path}) {
    const DecisionTree t = load_tree_table(path);
    Rng rng(77);
    for (int i = 0; i < 200; ++i) {
      const FeatureVector x =
          fv(rng.uniform(1e-3, 10.0), rng.uniform(1e-3, 2.0), rng.uniform(1e-2, 5.0),
             rng.uniform(-0.99, 0.99), rng.uniform(1e-3, 2.0), rng.uniform(0.004, 10.0));
      CHECK(t.predict(x) == trace_table(t, x));
    }
  }
}

TEST_CASE("table parse errors are descriptive") {
  CHECK_THROWS_AS((void)parse_tree_table(""), ModelFormatError);
  // duplicate id
  CHECK_THROWS_AS((void)parse_tree_table("0 Yes NA NA NA NA 1.0\n0 Yes NA NA NA NA 2.0\n"),
                  ModelFormatError);
  // dangling child
  CHECK_THROWS_AS((void)parse_tree_table("0 No T 1.0 1 7 NA\n1 Yes NA NA NA NA 2.0\n"),
                  ModelFormatError);
  // shared child (not a tree)
  CHECK_THROWS_AS(
      (void)parse_tree_table("0 No T 1.0 1 1 NA\n1 Yes NA NA NA NA 2.0\n2 Yes NA NA NA NA 3.0\n"),
      ModelFormatError);
  // wrong column count
  CHECK_THROWS_AS((void)parse_tree_table("0 Yes NA NA NA 1.0\n"), ModelFormatError);
  // unknown variable
  CHECK_THROWS_AS((void)parse_tree_table("0 No sigma 1.0 1 2 NA\n1 Yes NA NA NA NA 1.0\n"
                                         "2 Yes NA NA NA NA 2.0\n"),
                  ModelFormatError);
}

TEST_CASE("single sample fits to a single-leaf tree") {
  const FeatureVector x = fv(1, 1, 1, 0, 1, 1);
  const double y = 3.25;
  const DecisionTree t = tree_fit(std::span(&x, 1), std::span(&y, 1), {});
  CHECK(t.nodes.size() == 1);
  CHECK(t.nodes[0].leaf);
  CHECK(t.predict(x) == 3.25);
}

TEST_CASE("constant targets produce no splits") {
  Rng rng(11);
  std::vector<FeatureVector> X;
  std::vector<double> y;
  for (int i = 0; i < 50; ++i) {
    X.push_back(fv(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(-1, 1),
                   rng.uniform(0, 1), rng.uniform(0, 1)));
    y.push_back(7.5);
  }
  const DecisionTree t = tree_fit(X, y, {});
  CHECK(t.nodes.size() == 1);
  CHECK(t.predict(X[0]) == 7.5);
}

TEST_CASE("unlimited depth with distinct features reaches zero training error") {
  Rng rng(13);
  std::vector<FeatureVector> X;
  std::vector<double> y;
  for (int i = 0; i < 200; ++i) {
    X.push_back(fv(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(-1, 1),
                   rng.uniform(0, 1), rng.uniform(0, 1)));
    y.push_back(rng.uniform(-5, 5));
  }
  const DecisionTree t = tree_fit(X, y, {.max_depth = -1, .min_node_size = 1, .seed = 0});
  for (std::size_t i = 0; i < X.size(); ++i) {
    CHECK(t.predict(X[i]) == doctest::Approx(y[i]).epsilon(1e-12));
  }
}

TEST_CASE("every internal split maximises variance reduction") {
  Rng rng(17);
  std::vector<FeatureVector> X;
  std::vector<double> y;
  for (int i = 0; i < 60; ++i) {
    X.push_back(fv(rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(0, 2), rng.uniform(-1, 1),
                   rng.uniform(0, 2), rng.uniform(0, 2)));
    y.push_back(X.back()[5] * 2.0 + X.back()[0] + rng.uniform(-0.3, 0.3));
  }
  const DecisionTree t = tree_fit(X, y, {.max_depth = 3, .min_node_size = 2, .seed = 0});

  // replay routing to recover each node's row set, then brute-force the best
  // split and compare with the recorded one
  std::vector<std::vector<std::uint32_t>> rows(t.nodes.size());
  for (std::uint32_t i = 0; i < X.size(); ++i) {
    std::int32_t id = 0;
    for (;;) {
      rows[static_cast<std::size_t>(id)].push_back(i);
      const TreeNode& n = t.nodes[static_cast<std::size_t>(id)];
      if (n.leaf) break;
      id = X[i][static_cast<std::size_t>(n.feature)] <= n.split ? n.left : n.right;
    }
  }
  const std::array<int, 6> all{0, 1, 2, 3, 4, 5};
  int internal_checked = 0;
  for (const TreeNode& n : t.nodes) {
    if (n.leaf) continue;
    const auto best = ml::detail::best_split(X, y, rows[static_cast<std::size_t>(n.id)], all);
    REQUIRE(best.found);
    CHECK(n.feature == best.feature);
    CHECK(n.split == doctest::Approx(best.threshold).epsilon(1e-15));
    ++internal_checked;
  }
  CHECK(internal_checked > 0);
}

TEST_CASE("max depth limits the tree") {
  Rng rng(19);
  std::vector<FeatureVector> X;
  std::vector<double> y;
  for (int i = 0; i < 300; ++i) {
    X.push_back(fv(rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(0, 1), rng.uniform(-1, 1),
                   rng.uniform(0, 1), rng.uniform(0, 1)));
    y.push_back(rng.uniform(-5, 5));
  }
  const DecisionTree t = tree_fit(X, y, {.max_depth = 5, .min_node_size = 1, .seed = 0});
  // a depth-5 binary tree has at most 2^6 - 1 nodes
  CHECK(t.nodes.size() <= 63);
}

TEST_CASE("malformed trees fail validation at load, never at predict") {
  DecisionTree t;
  TreeNode root;
  root.id = 0;
  root.leaf = false;
  root.feature = 0;
  root.split = 1.0;
  root.left = 1;
  root.right = 2;  // missing child
  t.nodes.push_back(root);
  TreeNode leaf;
  leaf.id = 1;
  leaf.leaf = true;
  leaf.prediction = 1.0;
  t.nodes.push_back(leaf);
  CHECK_THROWS_AS(t.validate(), ModelFormatError);
}
