#pragma once

#include <cstdint>

#include "cfrsense/ml/lda.hpp"
#include "cfrsense/ml/model.hpp"
#include "cfrsense/ml/tree.hpp"

namespace cfrsense::ml {

enum class EnsembleKind { boosted_tree, bagged_tree, subspace_knn, subspace_discriminant };

const char* ensemble_kind_name(EnsembleKind k);
EnsembleKind ensemble_kind_from_name(const std::string& name);

class EnsembleModel : public Model {
 public:
  EnsembleModel(std::string variant, std::size_t feature_dim, EnsembleKind kind);

  EnsembleKind kind() const { return kind_; }
  std::size_t learner_count() const;

  json to_json() const override;
  static std::unique_ptr<EnsembleModel> from_json(const json& j);

 protected:
  int predict_row(const double* features) const override;

 private:
  friend std::unique_ptr<Model> ensemble_fit(const std::vector<LabeledExample>&, EnsembleKind,
                                             std::uint64_t, std::string, int, int);

  EnsembleKind kind_;
  std::vector<Tree> trees_;          // boosted, bagged
  std::vector<double> alphas_;       // boosted
  std::vector<std::vector<std::size_t>> subsets_;  // subspace
  std::vector<Dataset> knn_data_;    // subspace knn (reduced training rows)
  std::vector<Lda> ldas_;            // subspace discriminant
};

// subspace_dim 0 means ceil(d/2); it is ignored by the tree ensembles.
std::unique_ptr<Model> ensemble_fit(const std::vector<LabeledExample>& train, EnsembleKind kind,
                                    std::uint64_t seed, std::string variant,
                                    int n_learners = 30, int subspace_dim = 0);

double adaboost_learner_weight(double eps);

}  // namespace cfrsense::ml
