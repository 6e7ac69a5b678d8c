#include "fourierml/surrogate/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fourierml/errors.hpp"

namespace fourierml::ml {

namespace {

using nlohmann::json;

json tree_to_json(const DecisionTree& tree) {
  json nodes = json::array();
  for (const TreeNode& n : tree.nodes) {
    json j{{"id", n.id}, {"leaf", n.leaf}};
    if (n.leaf) {
      j["prediction"] = n.prediction;
    } else {
      j["feature"] = n.feature;
      j["split"] = n.split;
      j["left"] = n.left;
      j["right"] = n.right;
    }
    nodes.push_back(std::move(j));
  }
  return json{{"kind", "tree"},
              {"version", 1},
              {"max_depth", tree.max_depth},
              {"min_node_size", tree.min_node_size},
              {"nodes", std::move(nodes)}};
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree tree;
  tree.max_depth = j.value("max_depth", -1);
  tree.min_node_size = j.value("min_node_size", 1);
  if (!j.contains("nodes") || !j["nodes"].is_array()) {
    throw ModelFormatError("tree json lacks a nodes array");
  }
  for (const json& nj : j["nodes"]) {
    TreeNode n;
    n.id = nj.at("id").get<std::int32_t>();
    n.leaf = nj.at("leaf").get<bool>();
    if (n.leaf) {
      n.prediction = nj.at("prediction").get<double>();
    } else {
      n.feature = nj.at("feature").get<std::int32_t>();
      n.split = nj.at("split").get<double>();
      n.left = nj.at("left").get<std::int32_t>();
      n.right = nj.at("right").get<std::int32_t>();
    }
    tree.nodes.push_back(n);
  }
  tree.validate();
  return tree;
}

json forest_to_json(const RandomForest& forest) {
  json trees = json::array();
  for (const DecisionTree& t : forest.trees) trees.push_back(tree_to_json(t));
  return json{{"kind", "forest"},
              {"version", 1},
              {"num_trees", forest.config.num_trees},
              {"max_depth", forest.config.max_depth},
              {"min_node_size", forest.config.min_node_size},
              {"features_per_split", forest.config.features_per_split},
              {"bootstrap", forest.config.bootstrap},
              {"seed", forest.config.seed},
              {"trees", std::move(trees)}};
}

RandomForest forest_from_json(const json& j) {
  RandomForest forest;
  forest.config.num_trees = j.value("num_trees", 0);
  forest.config.max_depth = j.value("max_depth", -1);
  forest.config.min_node_size = j.value("min_node_size", 1);
  forest.config.features_per_split = j.value("features_per_split", 2);
  forest.config.bootstrap = j.value("bootstrap", true);
  forest.config.seed = j.value("seed", std::uint64_t{0});
  if (!j.contains("trees") || !j["trees"].is_array()) {
    throw ModelFormatError("forest json lacks a trees array");
  }
  for (const json& tj : j["trees"]) forest.trees.push_back(tree_from_json(tj));
  forest.validate();
  return forest;
}

const char* activation_name(Activation a) {
  switch (a) {
    case Activation::sigmoid: return "sigmoid";
    case Activation::relu: return "relu";
    case Activation::identity: return "identity";
  }
  return "sigmoid";
}

Activation activation_from(const std::string& s) {
  if (s == "sigmoid") return Activation::sigmoid;
  if (s == "relu") return Activation::relu;
  if (s == "identity") return Activation::identity;
  throw ModelFormatError("unknown activation: " + s);
}

json mlp_to_json(const MlpModel& m) {
  return json{{"kind", "mlp"},
              {"version", 1},
              {"layer_sizes", m.layer_sizes},
              {"activation", activation_name(m.hidden_activation)},
              {"weights", m.weights},
              {"biases", m.biases},
              {"input_mean", m.input_mean},
              {"input_scale", m.input_scale},
              {"target_mean", m.target_mean},
              {"target_scale", m.target_scale}};
}

MlpModel mlp_from_json(const json& j) {
  MlpModel m;
  m.layer_sizes = j.at("layer_sizes").get<std::vector<int>>();
  m.hidden_activation = activation_from(j.at("activation").get<std::string>());
  m.weights = j.at("weights").get<std::vector<std::vector<double>>>();
  m.biases = j.at("biases").get<std::vector<std::vector<double>>>();
  if (j.contains("input_mean")) m.input_mean = j["input_mean"].get<std::array<double, 6>>();
  if (j.contains("input_scale")) m.input_scale = j["input_scale"].get<std::array<double, 6>>();
  m.target_mean = j.value("target_mean", 0.0);
  m.target_scale = j.value("target_scale", 1.0);
  m.validate();
  return m;
}

}  // namespace

double predict(const SurrogateModel& model, const FeatureVector& x) {
  return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

std::string model_to_json(const SurrogateModel& model) {
  const json j = std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, DecisionTree>) return tree_to_json(m);
        else if constexpr (std::is_same_v<T, RandomForest>) return forest_to_json(m);
        else return mlp_to_json(m);
      },
      model);
  return j.dump(2);
}

SurrogateModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("model json parse failure: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int version = j.value("version", 0);
    if (version != 1) {
      throw ModelFormatError("unsupported model version " + std::to_string(version));
    }
    if (kind == "tree") return tree_from_json(j);
    if (kind == "forest") return forest_from_json(j);
    if (kind == "mlp") return mlp_from_json(j);
    throw ModelFormatError("unknown model kind: " + kind);
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("model json structure failure: ") + e.what());
  }
}

void save_model(const SurrogateModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << model_to_json(model) << '\n';
  if (!out) throw std::runtime_error("write failure: " + path);
}

SurrogateModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

}  // namespace fourierml::ml
