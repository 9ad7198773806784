#include <doctest.h>

#include "cfrsense/error.hpp"
#include "cfrsense/ml/knn.hpp"
#include "test_support.hpp"

using namespace cfrsense;
using namespace cfrsense::ml;
using testsupport::points1d;

TEST_CASE("knn majority vote on a one dimensional set") {
  const auto train = points1d({{0.0, 0}, {1.0, 0}, {10.0, 1}});
  const Dataset data = dataset_from(train);
  const double q = 2.0;
  CHECK(knn_vote(data, &q, 3) == 0);
  CHECK(knn_vote(data, &q, 1) == 0);
  const double far = 9.0;
  CHECK(knn_vote(data, &far, 1) == 1);
}

TEST_CASE("knn k equal to one recalls every training point") {
  const auto train = testsupport::blobs(20, 3, 0.0, 5.0, 0.5, 11);
  const auto model = knn_fit(train, 1, "knn-fine");
  for (const auto& ex : train) CHECK(model->predict(ex.features) == ex.label);
}

TEST_CASE("knn distance tie resolves to the earlier row") {
  const auto a = points1d({{1.0, 1}, {3.0, 0}});
  const double q = 2.0;
  CHECK(knn_vote(dataset_from(a), &q, 1) == 1);
  const auto b = points1d({{3.0, 0}, {1.0, 1}});
  CHECK(knn_vote(dataset_from(b), &q, 1) == 0);
}

TEST_CASE("knn vote tie resolves to hydrated") {
  const auto train = points1d({{1.0, 1}, {3.0, 0}});
  const double q = 2.0;
  CHECK(knn_vote(dataset_from(train), &q, 2) == 0);
}

TEST_CASE("knn with k equal to n returns the global majority") {
  const auto train = points1d({{0.0, 1}, {1.0, 1}, {2.0, 0}});
  const double q = 100.0;
  CHECK(knn_vote(dataset_from(train), &q, 3) == 1);
}

TEST_CASE("knn rejects bad inputs") {
  const auto train = points1d({{0.0, 0}, {1.0, 1}});
  CHECK_THROWS_AS((void)knn_fit({}, 1, "knn-fine"), model_error);
  CHECK_THROWS_AS((void)knn_fit(train, 0, "knn-fine"), model_error);
  CHECK_THROWS_AS((void)knn_fit(train, 3, "knn-fine"), model_error);
  const double q = 0.0;
  CHECK_THROWS_AS((void)knn_vote(dataset_from(train), &q, 5), model_error);
}

TEST_CASE("knn serializes its neighbour count") {
  const auto train = testsupport::blobs(60, 2, 0.0, 4.0, 0.4, 3);
  const auto fine = knn_fit(train, 1, "knn-fine");
  const auto medium = knn_fit(train, 10, "knn-medium");
  const auto coarse = knn_fit(train, 100, "knn-coarse");
  CHECK(fine->to_json().at("k").get<int>() == 1);
  CHECK(medium->to_json().at("k").get<int>() == 10);
  CHECK(coarse->to_json().at("k").get<int>() == 100);
  CHECK(fine->variant() == "knn-fine");
  CHECK(coarse->feature_dim() == 2);
}
