#include "cfrsense/ml/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cfrsense/ml/knn.hpp"
#include "cfrsense/prng.hpp"

namespace cfrsense::ml {

namespace {

constexpr int kBoostedTreeSplits = 10;
constexpr int kBoostRetries = 10;

std::vector<std::size_t> bootstrap_rows(std::size_t n, rng::Stream& s) {
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = s.next_below(n);
  return rows;
}

std::vector<std::size_t> weighted_rows(const std::vector<double>& w, rng::Stream& s) {
  std::vector<double> cum(w.size());
  std::partial_sum(w.begin(), w.end(), cum.begin());
  const double total = cum.back();
  std::vector<std::size_t> rows(w.size());
  for (auto& r : rows) {
    const double u = s.next_unit() * total;
    r = static_cast<std::size_t>(
        std::upper_bound(cum.begin(), cum.end(), u) - cum.begin());
    if (r >= w.size()) r = w.size() - 1;
  }
  return rows;
}

std::vector<std::size_t> draw_subset(std::size_t d, std::size_t m, rng::Stream& s) {
  std::vector<std::size_t> idx(d);
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + s.next_below(d - i);
    std::swap(idx[i], idx[j]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());
  return idx;
}

void gather(const double* features, const std::vector<std::size_t>& subset,
            std::vector<double>& out) {
  out.resize(subset.size());
  for (std::size_t i = 0; i < subset.size(); ++i) out[i] = features[subset[i]];
}

}  // namespace

const char* ensemble_kind_name(EnsembleKind k) {
  switch (k) {
    case EnsembleKind::boosted_tree: return "boosted-tree";
    case EnsembleKind::bagged_tree: return "bagged-tree";
    case EnsembleKind::subspace_knn: return "subspace-knn";
    case EnsembleKind::subspace_discriminant: return "subspace-discriminant";
  }
  throw model_error("ensemble: unknown kind");
}

EnsembleKind ensemble_kind_from_name(const std::string& name) {
  if (name == "boosted-tree") return EnsembleKind::boosted_tree;
  if (name == "bagged-tree") return EnsembleKind::bagged_tree;
  if (name == "subspace-knn") return EnsembleKind::subspace_knn;
  if (name == "subspace-discriminant") return EnsembleKind::subspace_discriminant;
  throw data_error("ensemble: unknown kind name '" + name + "'");
}

double adaboost_learner_weight(double eps) {
  const double e = std::max(eps, 1e-12);
  return 0.5 * std::log((1.0 - e) / e);
}

EnsembleModel::EnsembleModel(std::string variant, std::size_t feature_dim, EnsembleKind kind)
    : Model(std::move(variant), feature_dim), kind_(kind) {}

std::size_t EnsembleModel::learner_count() const {
  switch (kind_) {
    case EnsembleKind::boosted_tree:
    case EnsembleKind::bagged_tree: return trees_.size();
    case EnsembleKind::subspace_knn: return knn_data_.size();
    case EnsembleKind::subspace_discriminant: return ldas_.size();
  }
  return 0;
}

int EnsembleModel::predict_row(const double* features) const {
  switch (kind_) {
    case EnsembleKind::boosted_tree: {
      double score = 0.0;
      for (std::size_t t = 0; t < trees_.size(); ++t)
        score += alphas_[t] * (trees_[t].predict(features) ? 1.0 : -1.0);
      return score > 0.0 ? 1 : 0;
    }
    case EnsembleKind::bagged_tree: {
      int votes[2] = {0, 0};
      for (const Tree& t : trees_) ++votes[t.predict(features)];
      return votes[1] > votes[0] ? 1 : 0;
    }
    case EnsembleKind::subspace_knn: {
      int votes[2] = {0, 0};
      std::vector<double> q;
      for (std::size_t t = 0; t < knn_data_.size(); ++t) {
        gather(features, subsets_[t], q);
        ++votes[knn_vote(knn_data_[t], q.data(), 1)];
      }
      return votes[1] > votes[0] ? 1 : 0;
    }
    case EnsembleKind::subspace_discriminant: {
      int votes[2] = {0, 0};
      std::vector<double> q;
      for (std::size_t t = 0; t < ldas_.size(); ++t) {
        gather(features, subsets_[t], q);
        ++votes[ldas_[t].predict(q.data())];
      }
      return votes[1] > votes[0] ? 1 : 0;
    }
  }
  throw model_error("ensemble: unknown kind");
}

std::unique_ptr<Model> ensemble_fit(const std::vector<LabeledExample>& train, EnsembleKind kind,
                                    std::uint64_t seed, std::string variant, int n_learners,
                                    int subspace_dim) {
  if (n_learners < 1) throw model_error("ensemble: need at least one learner");
  const Dataset data = dataset_from(train);
  if (data.n == 0) throw model_error("ensemble: empty training set");

  auto model = std::make_unique<EnsembleModel>(std::move(variant), data.d, kind);
  std::vector<std::size_t> all_rows(data.n);
  std::iota(all_rows.begin(), all_rows.end(), 0);

  switch (kind) {
    case EnsembleKind::boosted_tree: {
      std::vector<double> w(data.n, 1.0 / static_cast<double>(data.n));
      for (int t = 0; t < n_learners; ++t) {
        rng::Stream s(rng::derive(seed, rng::kTagModel, static_cast<std::uint64_t>(t)), 0);
        Tree tree;
        double eps = 0.0;
        std::vector<char> miss(data.n);
        for (int attempt = 0;; ++attempt) {
          tree = tree_build(data, weighted_rows(w, s), kBoostedTreeSplits);
          eps = 0.0;
          for (std::size_t i = 0; i < data.n; ++i) {
            miss[i] = tree.predict(data.row(i)) != data.y[i];
            if (miss[i]) eps += w[i];
          }
          if (eps < 0.5) break;
          if (attempt >= kBoostRetries)
            throw model_error("ensemble: boosting stalled, weak learner error >= 0.5 after " +
                              std::to_string(kBoostRetries) + " retries");
        }
        const double alpha = adaboost_learner_weight(eps);
        model->trees_.push_back(std::move(tree));
        model->alphas_.push_back(alpha);
        if (eps == 0.0) break;
        double total = 0.0;
        for (std::size_t i = 0; i < data.n; ++i) {
          w[i] *= std::exp(miss[i] ? alpha : -alpha);
          total += w[i];
        }
        for (double& wi : w) wi /= total;
      }
      break;
    }
    case EnsembleKind::bagged_tree: {
      for (int t = 0; t < n_learners; ++t) {
        rng::Stream s(rng::derive(seed, rng::kTagModel, static_cast<std::uint64_t>(t)), 0);
        model->trees_.push_back(tree_build(data, bootstrap_rows(data.n, s), kUnlimitedSplits));
      }
      break;
    }
    case EnsembleKind::subspace_knn:
    case EnsembleKind::subspace_discriminant: {
      const std::size_t m = subspace_dim > 0 ? static_cast<std::size_t>(subspace_dim)
                                             : (data.d + 1) / 2;
      if (m < 1 || m > data.d) throw model_error("ensemble: subspace size out of range");
      for (int t = 0; t < n_learners; ++t) {
        rng::Stream s(rng::derive(seed, rng::kTagModel, static_cast<std::uint64_t>(t)), 0);
        std::vector<std::size_t> subset = draw_subset(data.d, m, s);
        Dataset reduced = dataset_cols(data, subset);
        if (kind == EnsembleKind::subspace_knn)
          model->knn_data_.push_back(std::move(reduced));
        else
          model->ldas_.push_back(lda_fit(reduced, 1e-6));
        model->subsets_.push_back(std::move(subset));
      }
      break;
    }
  }
  return model;
}

json EnsembleModel::to_json() const {
  json j;
  j["kind"] = "ensemble";
  j["variant"] = variant();
  j["ensemble_kind"] = ensemble_kind_name(kind_);
  j["d"] = feature_dim();
  switch (kind_) {
    case EnsembleKind::boosted_tree: {
      json trees = json::array();
      for (const Tree& t : trees_) trees.push_back(tree_to_json(t));
      j["trees"] = std::move(trees);
      j["alphas"] = alphas_;
      break;
    }
    case EnsembleKind::bagged_tree: {
      json trees = json::array();
      for (const Tree& t : trees_) trees.push_back(tree_to_json(t));
      j["trees"] = std::move(trees);
      break;
    }
    case EnsembleKind::subspace_knn: {
      j["subsets"] = subsets_;
      json members = json::array();
      for (const Dataset& d : knn_data_) {
        json m;
        m["n"] = d.n;
        m["d"] = d.d;
        m["x"] = d.x;
        m["y"] = d.y;
        members.push_back(std::move(m));
      }
      j["members"] = std::move(members);
      break;
    }
    case EnsembleKind::subspace_discriminant: {
      j["subsets"] = subsets_;
      json members = json::array();
      for (const Lda& l : ldas_) {
        json m;
        m["w"] = l.w;
        m["threshold"] = l.threshold;
        members.push_back(std::move(m));
      }
      j["members"] = std::move(members);
      break;
    }
  }
  return j;
}

std::unique_ptr<EnsembleModel> EnsembleModel::from_json(const json& j) {
  const EnsembleKind kind = ensemble_kind_from_name(j.at("ensemble_kind").get<std::string>());
  auto model = std::make_unique<EnsembleModel>(j.at("variant").get<std::string>(),
                                               j.at("d").get<std::size_t>(), kind);
  switch (kind) {
    case EnsembleKind::boosted_tree:
      for (const json& t : j.at("trees")) model->trees_.push_back(tree_from_json(t));
      model->alphas_ = j.at("alphas").get<std::vector<double>>();
      if (model->alphas_.size() != model->trees_.size())
        throw data_error("ensemble model: learner weight count mismatch");
      break;
    case EnsembleKind::bagged_tree:
      for (const json& t : j.at("trees")) model->trees_.push_back(tree_from_json(t));
      break;
    case EnsembleKind::subspace_knn: {
      model->subsets_ = j.at("subsets").get<std::vector<std::vector<std::size_t>>>();
      for (const json& m : j.at("members")) {
        Dataset d;
        d.n = m.at("n").get<std::size_t>();
        d.d = m.at("d").get<std::size_t>();
        d.x = m.at("x").get<std::vector<double>>();
        d.y = m.at("y").get<std::vector<int>>();
        if (d.x.size() != d.n * d.d || d.y.size() != d.n)
          throw data_error("ensemble model: inconsistent member shapes");
        model->knn_data_.push_back(std::move(d));
      }
      if (model->subsets_.size() != model->knn_data_.size())
        throw data_error("ensemble model: subset count mismatch");
      break;
    }
    case EnsembleKind::subspace_discriminant: {
      model->subsets_ = j.at("subsets").get<std::vector<std::vector<std::size_t>>>();
      for (const json& m : j.at("members")) {
        Lda l;
        l.w = m.at("w").get<std::vector<double>>();
        l.threshold = m.at("threshold").get<double>();
        model->ldas_.push_back(std::move(l));
      }
      if (model->subsets_.size() != model->ldas_.size())
        throw data_error("ensemble model: subset count mismatch");
      break;
    }
  }
  return model;
}

}  // namespace cfrsense::ml
