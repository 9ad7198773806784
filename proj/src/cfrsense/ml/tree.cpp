#include "cfrsense/ml/tree.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>

namespace cfrsense::ml {

namespace {

// Impurity in count units: m * gini(c0, c1). Summing this over children and
// subtracting from the parent's value gives the absolute impurity decrease,
// which is also the best-first priority.
double gini_cost(long c0, long c1) {
  const double m = static_cast<double>(c0 + c1);
  if (m == 0.0) return 0.0;
  const double a = static_cast<double>(c0);
  const double b = static_cast<double>(c1);
  return m - (a * a + b * b) / m;
}

struct SplitChoice {
  bool valid = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
};

struct BuildNode {
  int tree_index = 0;
  long id = 0;
  long c0 = 0;
  long c1 = 0;
  // Per feature: slot indices into `rows`, ordered by that feature's value.
  std::vector<std::vector<std::uint32_t>> order;
  SplitChoice split;
};

struct ByGainThenAge {
  bool operator()(const BuildNode& a, const BuildNode& b) const {
    if (a.split.gain != b.split.gain) return a.split.gain < b.split.gain;
    return a.id > b.id;
  }
};

class Builder {
 public:
  Builder(const Dataset& data, const std::vector<std::size_t>& rows)
      : data_(data), rows_(rows) {}

  Tree run(int max_splits) {
    Tree tree;
    tree.nodes.emplace_back();

    BuildNode root;
    root.tree_index = 0;
    root.id = next_id_++;
    root.order.resize(data_.d);
    std::vector<std::uint32_t> base(rows_.size());
    for (std::uint32_t s = 0; s < rows_.size(); ++s) base[s] = s;
    for (std::size_t j = 0; j < data_.d; ++j) {
      root.order[j] = base;
      std::stable_sort(root.order[j].begin(), root.order[j].end(),
                       [&](std::uint32_t a, std::uint32_t b) {
                         return value(a, j) < value(b, j);
                       });
    }
    for (std::size_t s = 0; s < rows_.size(); ++s) count(root, label(s));
    choose_split(root);

    std::vector<BuildNode> heap;
    heap.push_back(std::move(root));
    int splits = 0;
    while (!heap.empty() && splits < max_splits) {
      std::pop_heap(heap.begin(), heap.end(), ByGainThenAge{});
      BuildNode nd = std::move(heap.back());
      heap.pop_back();
      if (!nd.split.valid || nd.split.gain <= 0.0 || nd.c0 == 0 || nd.c1 == 0) {
        finalize_leaf(tree, nd);
        continue;
      }

      ++splits;
      const int li = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      TreeNode& inner = tree.nodes[nd.tree_index];
      inner.feature = nd.split.feature;
      inner.threshold = nd.split.threshold;
      inner.left = li;
      inner.right = li + 1;

      BuildNode lo, hi;
      lo.tree_index = li;
      hi.tree_index = li + 1;
      lo.id = next_id_++;
      hi.id = next_id_++;
      partition(nd, lo, hi);
      choose_split(lo);
      choose_split(hi);
      heap.push_back(std::move(lo));
      std::push_heap(heap.begin(), heap.end(), ByGainThenAge{});
      heap.push_back(std::move(hi));
      std::push_heap(heap.begin(), heap.end(), ByGainThenAge{});
    }
    for (auto& nd : heap) finalize_leaf(tree, nd);
    return tree;
  }

 private:
  double value(std::uint32_t slot, std::size_t feature) const {
    return data_.x[rows_[slot] * data_.d + feature];
  }
  int label(std::uint32_t slot) const { return data_.y[rows_[slot]]; }
  static void count(BuildNode& nd, int lbl) { (lbl ? nd.c1 : nd.c0)++; }

  void finalize_leaf(Tree& tree, const BuildNode& nd) const {
    TreeNode& leaf = tree.nodes[nd.tree_index];
    leaf.feature = -1;
    leaf.label = nd.c1 > nd.c0 ? 1 : 0;
  }

  void choose_split(BuildNode& nd) const {
    const double parent_cost = gini_cost(nd.c0, nd.c1);
    double best_cost = 0.0;
    for (std::size_t j = 0; j < data_.d; ++j) {
      const auto& ord = nd.order[j];
      long l0 = 0, l1 = 0;
      for (std::size_t p = 0; p + 1 < ord.size(); ++p) {
        count_into(l0, l1, label(ord[p]));
        const double lo = value(ord[p], j);
        const double hi = value(ord[p + 1], j);
        if (!(lo < hi)) continue;
        double thr = lo + 0.5 * (hi - lo);
        // Midpoints of adjacent representable doubles can round onto an
        // endpoint; pin the threshold so `x <= thr` still separates them.
        if (!(thr < hi)) thr = lo;
        const double cost = gini_cost(l0, l1) + gini_cost(nd.c0 - l0, nd.c1 - l1);
        if (!nd.split.valid || cost < best_cost) {
          nd.split.valid = true;
          nd.split.feature = static_cast<int>(j);
          nd.split.threshold = thr;
          best_cost = cost;
        }
      }
    }
    if (nd.split.valid) nd.split.gain = parent_cost - best_cost;
  }

  static void count_into(long& c0, long& c1, int lbl) { (lbl ? c1 : c0)++; }

  void partition(const BuildNode& nd, BuildNode& lo, BuildNode& hi) {
    side_.assign(rows_.size(), 0);
    for (std::uint32_t s : nd.order[0]) {
      const bool left = value(s, nd.split.feature) <= nd.split.threshold;
      side_[s] = left ? 1 : 0;
      if (left)
        count(lo, label(s));
      else
        count(hi, label(s));
    }
    lo.order.resize(data_.d);
    hi.order.resize(data_.d);
    for (std::size_t j = 0; j < data_.d; ++j) {
      lo.order[j].reserve(static_cast<std::size_t>(lo.c0 + lo.c1));
      hi.order[j].reserve(static_cast<std::size_t>(hi.c0 + hi.c1));
      for (std::uint32_t s : nd.order[j]) (side_[s] ? lo.order[j] : hi.order[j]).push_back(s);
    }
  }

  const Dataset& data_;
  const std::vector<std::size_t>& rows_;
  std::vector<char> side_;
  long next_id_ = 0;
};

}  // namespace

int Tree::predict(const double* features) const {
  int at = 0;
  while (nodes[at].feature >= 0) {
    const TreeNode& nd = nodes[at];
    at = features[nd.feature] <= nd.threshold ? nd.left : nd.right;
  }
  return nodes[at].label;
}

Tree tree_build(const Dataset& data, const std::vector<std::size_t>& rows, int max_splits) {
  if (rows.empty()) throw model_error("tree: empty training set");
  if (max_splits < 0) throw model_error("tree: max_splits must be >= 0");
  return Builder(data, rows).run(max_splits);
}

TreeModel::TreeModel(std::string variant, std::size_t feature_dim, Tree tree)
    : Model(std::move(variant), feature_dim), tree_(std::move(tree)) {}

int TreeModel::predict_row(const double* features) const { return tree_.predict(features); }

json tree_to_json(const Tree& t) {
  json j;
  std::vector<int> feature, left, right, label;
  std::vector<double> threshold;
  for (const TreeNode& nd : t.nodes) {
    feature.push_back(nd.feature);
    threshold.push_back(nd.threshold);
    left.push_back(nd.left);
    right.push_back(nd.right);
    label.push_back(nd.label);
  }
  j["feature"] = feature;
  j["threshold"] = threshold;
  j["left"] = left;
  j["right"] = right;
  j["label"] = label;
  return j;
}

Tree tree_from_json(const json& j) {
  const auto feature = j.at("feature").get<std::vector<int>>();
  const auto threshold = j.at("threshold").get<std::vector<double>>();
  const auto left = j.at("left").get<std::vector<int>>();
  const auto right = j.at("right").get<std::vector<int>>();
  const auto label = j.at("label").get<std::vector<int>>();
  const std::size_t n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n || label.size() != n ||
      n == 0)
    throw data_error("tree model: inconsistent stored shapes");
  Tree t;
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    t.nodes[i] = {feature[i], threshold[i], left[i], right[i], label[i]};
    if (feature[i] >= 0 && (left[i] < 0 || right[i] < 0 ||
                            static_cast<std::size_t>(left[i]) >= n ||
                            static_cast<std::size_t>(right[i]) >= n))
      throw data_error("tree model: dangling child index");
  }
  return t;
}

json TreeModel::to_json() const {
  json j;
  j["kind"] = "tree";
  j["variant"] = variant();
  j["d"] = feature_dim();
  j["tree"] = tree_to_json(tree_);
  return j;
}

std::unique_ptr<TreeModel> TreeModel::from_json(const json& j) {
  return std::make_unique<TreeModel>(j.at("variant").get<std::string>(),
                                     j.at("d").get<std::size_t>(),
                                     tree_from_json(j.at("tree")));
}

std::unique_ptr<Model> tree_fit(const std::vector<LabeledExample>& train, int max_splits,
                                std::string variant) {
  const Dataset data = dataset_from(train);
  if (data.n == 0) throw model_error("tree: empty training set");
  std::vector<std::size_t> rows(data.n);
  for (std::size_t i = 0; i < data.n; ++i) rows[i] = i;
  Tree t = tree_build(data, rows, max_splits);
  return std::make_unique<TreeModel>(std::move(variant), data.d, std::move(t));
}

}  // namespace cfrsense::ml
