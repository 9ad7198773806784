#include <doctest.h>

#include "cfrsense/error.hpp"
#include "cfrsense/ml/tree.hpp"
#include "test_support.hpp"

using namespace cfrsense;
using namespace cfrsense::ml;
using testsupport::points1d;
using testsupport::points2d;

namespace {

std::vector<std::size_t> all_rows(const Dataset& data) {
  std::vector<std::size_t> rows(data.n);
  for (std::size_t i = 0; i < data.n; ++i) rows[i] = i;
  return rows;
}

}  // namespace

TEST_CASE("tree splits a separable one dimensional set at the gap midpoint") {
  const auto train = points1d({{0.0, 0}, {1.0, 0}, {10.0, 1}, {11.0, 1}});
  const Dataset data = dataset_from(train);
  const Tree tree = tree_build(data, all_rows(data), kUnlimitedSplits);

  REQUIRE(tree.nodes.size() == 3);
  const TreeNode& root = tree.nodes[0];
  CHECK(root.feature == 0);
  CHECK(root.threshold == doctest::Approx(5.5).epsilon(1e-12));
  CHECK(tree.nodes[root.left].label == 0);
  CHECK(tree.nodes[root.right].label == 1);

  for (const auto& ex : train)
    CHECK(tree.predict(ex.features.data()) == static_cast<int>(ex.label));
  const double at_threshold = 5.5;
  CHECK(tree.predict(&at_threshold) == 0);
}

TEST_CASE("tree with no splits allowed is a majority stump") {
  const auto train = points1d({{0.0, 1}, {1.0, 1}, {2.0, 0}});
  const Dataset data = dataset_from(train);
  const Tree tree = tree_build(data, all_rows(data), 0);
  REQUIRE(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].label == 1);
  const double q = -100.0;
  CHECK(tree.predict(&q) == 1);
}

TEST_CASE("tree on a pure set is a single leaf") {
  const auto train = points1d({{0.0, 1}, {5.0, 1}, {9.0, 1}});
  const Dataset data = dataset_from(train);
  const Tree tree = tree_build(data, all_rows(data), kUnlimitedSplits);
  REQUIRE(tree.nodes.size() == 1);
  CHECK(tree.nodes[0].label == 1);
}

TEST_CASE("unlimited tree fits any consistent labeling exactly") {
  auto train = testsupport::blobs(40, 3, 0.0, 1.0, 1.0, 21);
  const auto model = tree_fit(train, kUnlimitedSplits, "tree-fine");
  for (const auto& ex : train) CHECK(model->predict(ex.features) == ex.label);
}

TEST_CASE("tree node indices form a consistent binary structure") {
  const auto train = testsupport::blobs(30, 2, 0.0, 0.5, 1.0, 9);
  const Dataset data = dataset_from(train);
  const Tree tree = tree_build(data, all_rows(data), kUnlimitedSplits);
  int leaves = 0;
  int splits = 0;
  for (const auto& node : tree.nodes) {
    if (node.feature < 0) {
      ++leaves;
      CHECK(node.left == -1);
      CHECK(node.right == -1);
    } else {
      ++splits;
      CHECK(node.left > 0);
      CHECK(node.right > 0);
      CHECK(node.left < static_cast<int>(tree.nodes.size()));
      CHECK(node.right < static_cast<int>(tree.nodes.size()));
    }
  }
  CHECK(leaves == splits + 1);
  for (const auto& ex : train)
    CHECK(tree.predict(ex.features.data()) == static_cast<int>(ex.label));
}

TEST_CASE("tree impurity ties prefer the lower threshold") {
  const auto train = points1d({{0.0, 0}, {1.0, 1}, {2.0, 0}});
  const Dataset data = dataset_from(train);
  const Tree tree = tree_build(data, all_rows(data), kUnlimitedSplits);
  REQUIRE(tree.nodes.size() >= 3);
  CHECK(tree.nodes[0].threshold == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("tree impurity ties prefer the lower feature index") {
  const auto train = points2d({{{0.0, 0.0}, 0}, {{1.0, 1.0}, 0}, {{10.0, 10.0}, 1}});
  const Dataset data = dataset_from(train);
  const Tree tree = tree_build(data, all_rows(data), kUnlimitedSplits);
  CHECK(tree.nodes[0].feature == 0);
}

TEST_CASE("tree respects the split budget") {
  const auto train = testsupport::blobs(60, 2, 0.0, 0.4, 1.0, 5);
  const Dataset data = dataset_from(train);
  for (int budget : {1, 2, 4}) {
    const Tree tree = tree_build(data, all_rows(data), budget);
    int splits = 0;
    for (const auto& node : tree.nodes)
      if (node.feature >= 0) ++splits;
    CHECK(splits <= budget);
    CHECK(splits >= 1);
  }
}

TEST_CASE("tree rejects empty and malformed inputs") {
  CHECK_THROWS_AS((void)tree_fit({}, 4, "tree-coarse"), model_error);
  const auto train = points1d({{0.0, 0}, {1.0, 1}});
  const Dataset data = dataset_from(train);
  CHECK_THROWS_AS((void)tree_build(data, all_rows(data), -2), model_error);
}
