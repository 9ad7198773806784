#pragma once

#include <limits>

#include "cfrsense/ml/model.hpp"

namespace cfrsense::ml {

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int label = 0;
};

// Binary CART grown best-first by Gini impurity decrease. Splits test
// x[feature] <= threshold with thresholds at midpoints of consecutive
// distinct values; equally good splits prefer the lower feature index, then
// the lower threshold. Growth stops at max_splits internal nodes or purity.
struct Tree {
  std::vector<TreeNode> nodes;

  int predict(const double* features) const;
};

// rows selects the training rows (repeats allowed, e.g. bootstrap samples).
Tree tree_build(const Dataset& data, const std::vector<std::size_t>& rows, int max_splits);

inline constexpr int kUnlimitedSplits = std::numeric_limits<int>::max();

class TreeModel : public Model {
 public:
  TreeModel(std::string variant, std::size_t feature_dim, Tree tree);

  const Tree& tree() const { return tree_; }

  json to_json() const override;
  static std::unique_ptr<TreeModel> from_json(const json& j);

 protected:
  int predict_row(const double* features) const override;

 private:
  Tree tree_;
};

std::unique_ptr<Model> tree_fit(const std::vector<LabeledExample>& train, int max_splits,
                                std::string variant);

json tree_to_json(const Tree& t);
Tree tree_from_json(const json& j);

}  // namespace cfrsense::ml
