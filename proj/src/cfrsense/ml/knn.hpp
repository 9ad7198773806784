#pragma once

#include "cfrsense/ml/model.hpp"

namespace cfrsense::ml {

// Majority label among the k nearest training rows by Euclidean distance.
// Equal distances prefer the lower row index; vote ties prefer class 0.
int knn_vote(const Dataset& train, const double* query, int k);

class KnnModel : public Model {
 public:
  KnnModel(std::string variant, Dataset train, int k);

  json to_json() const override;
  static std::unique_ptr<KnnModel> from_json(const json& j);

 protected:
  int predict_row(const double* features) const override;

 private:
  Dataset train_;
  int k_;
};

std::unique_ptr<Model> knn_fit(const std::vector<LabeledExample>& train, int k,
                               std::string variant);

}  // namespace cfrsense::ml
