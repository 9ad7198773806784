#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfrsense/channel.hpp"
#include "cfrsense/error.hpp"
#include "cfrsense/ml/data.hpp"
#include "cfrsense/preprocess.hpp"

namespace cfrsense::ml {

using json = nlohmann::ordered_json;

// Binary classifier trained on fixed-length feature vectors. Class order is
// (hydrated, dehydrated); every vote or score tie resolves to the earlier
// class.
class Model {
 public:
  virtual ~Model() = default;

  Label predict(std::span<const double> features) const {
    if (features.size() != feature_dim_)
      throw data_error("predict: expected " + std::to_string(feature_dim_) +
                       " features, got " + std::to_string(features.size()));
    return predict_row(features.data()) ? Label::dehydrated : Label::hydrated;
  }

  const std::string& variant() const { return variant_; }
  std::size_t feature_dim() const { return feature_dim_; }

  virtual json to_json() const = 0;

 protected:
  Model(std::string variant, std::size_t feature_dim)
      : variant_(std::move(variant)), feature_dim_(feature_dim) {}

  virtual int predict_row(const double* features) const = 0;

 private:
  std::string variant_;
  std::size_t feature_dim_ = 0;

  friend class EnsembleModel;
};

// The fixed variant catalog, in reporting order.
const std::vector<std::string>& catalog();
bool in_catalog(const std::string& variant);

std::unique_ptr<Model> fit(const std::string& variant,
                           const std::vector<LabeledExample>& train, std::uint64_t seed);

std::vector<Label> predict_batch(const Model& model, const std::vector<LabeledExample>& examples);

json model_to_json(const Model& model);
std::unique_ptr<Model> model_from_json(const json& j);

void save_model(const Model& model, const std::string& path);
std::unique_ptr<Model> load_model(const std::string& path);

}  // namespace cfrsense::ml
