#include "cfrsense/ml/knn.hpp"

#include <algorithm>
#include <utility>

#include "cfrsense/kernels/kernels.hpp"

namespace cfrsense::ml {

int knn_vote(const Dataset& train, const double* query, int k) {
  if (train.n == 0) throw model_error("knn: empty training set");
  if (k < 1 || static_cast<std::size_t>(k) > train.n)
    throw model_error("knn: k must lie in [1, training size]");

  const auto& krn = kernels::ops();
  std::vector<std::pair<double, std::size_t>> order(train.n);
  for (std::size_t i = 0; i < train.n; ++i)
    order[i] = {krn.sqdist(train.row(i), query, train.d), i};
  std::partial_sort(order.begin(), order.begin() + k, order.end());

  int votes[2] = {0, 0};
  for (int i = 0; i < k; ++i) ++votes[train.y[order[i].second]];
  return votes[1] > votes[0] ? 1 : 0;
}

KnnModel::KnnModel(std::string variant, Dataset train, int k)
    : Model(std::move(variant), train.d), train_(std::move(train)), k_(k) {
  if (train_.n == 0) throw model_error("knn: empty training set");
  if (k_ < 1 || static_cast<std::size_t>(k_) > train_.n)
    throw model_error("knn: k must lie in [1, training size]");
}

int KnnModel::predict_row(const double* features) const {
  return knn_vote(train_, features, k_);
}

json KnnModel::to_json() const {
  json j;
  j["kind"] = "knn";
  j["variant"] = variant();
  j["k"] = k_;
  j["n"] = train_.n;
  j["d"] = train_.d;
  j["x"] = train_.x;
  j["y"] = train_.y;
  return j;
}

std::unique_ptr<KnnModel> KnnModel::from_json(const json& j) {
  Dataset d;
  d.n = j.at("n").get<std::size_t>();
  d.d = j.at("d").get<std::size_t>();
  d.x = j.at("x").get<std::vector<double>>();
  d.y = j.at("y").get<std::vector<int>>();
  if (d.x.size() != d.n * d.d || d.y.size() != d.n)
    throw data_error("knn model: inconsistent stored shapes");
  return std::make_unique<KnnModel>(j.at("variant").get<std::string>(), std::move(d),
                                    j.at("k").get<int>());
}

std::unique_ptr<Model> knn_fit(const std::vector<LabeledExample>& train, int k,
                               std::string variant) {
  return std::make_unique<KnnModel>(std::move(variant), dataset_from(train), k);
}

}  // namespace cfrsense::ml
