#pragma once

#include <string>
#include <variant>

#include "fourierml/surrogate/forest.hpp"
#include "fourierml/surrogate/mlp.hpp"
#include "fourierml/surrogate/tree.hpp"

namespace fourierml::ml {

using SurrogateModel = std::variant<DecisionTree, RandomForest, MlpModel>;

double predict(const SurrogateModel& model, const FeatureVector& x);

// JSON model files: {"kind": "tree"|"forest"|"mlp", "version": 1, ...}.
// Loading validates the model; malformed files raise ModelFormatError.
std::string model_to_json(const SurrogateModel& model);
SurrogateModel model_from_json(const std::string& text);

void save_model(const SurrogateModel& model, const std::string& path);
SurrogateModel load_model(const std::string& path);

}  // namespace fourierml::ml
