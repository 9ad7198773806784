#include <doctest.h>

#include <cmath>
#include <set>

#include "cfrsense/error.hpp"
#include "cfrsense/ml/ensemble.hpp"
#include "cfrsense/ml/knn.hpp"
#include "test_support.hpp"

using namespace cfrsense;
using namespace cfrsense::ml;

TEST_CASE("boosting weight formula") {
  CHECK(adaboost_learner_weight(0.25) == doctest::Approx(0.5 * std::log(3.0)).epsilon(1e-12));
  CHECK(adaboost_learner_weight(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(adaboost_learner_weight(0.1) > adaboost_learner_weight(0.25));
  const double at_zero = adaboost_learner_weight(0.0);
  CHECK(std::isfinite(at_zero));
  CHECK(at_zero > adaboost_learner_weight(0.01));
}

TEST_CASE("boosted trees stop early on an easy problem") {
  const auto train = testsupport::blobs(25, 2, 0.0, 4.0, 0.4, 41);
  const auto model = ensemble_fit(train, EnsembleKind::boosted_tree, 9, "ensemble-boosted-tree");
  const auto* ens = dynamic_cast<const EnsembleModel*>(model.get());
  REQUIRE(ens != nullptr);
  CHECK(ens->learner_count() >= 1);
  CHECK(ens->learner_count() <= 30);
  for (const auto& ex : train) CHECK(model->predict(ex.features) == ex.label);
}

TEST_CASE("bagged trees fit a separable set") {
  const auto train = testsupport::blobs(25, 2, 0.0, 4.0, 0.4, 43);
  const auto model = ensemble_fit(train, EnsembleKind::bagged_tree, 9, "ensemble-bagged-tree");
  const auto* ens = dynamic_cast<const EnsembleModel*>(model.get());
  REQUIRE(ens != nullptr);
  CHECK(ens->learner_count() == 30);
  for (const auto& ex : train) CHECK(model->predict(ex.features) == ex.label);
}

TEST_CASE("boosting reports stall on coin flip data") {
  std::vector<LabeledExample> train;
  for (int i = 0; i < 40; ++i) {
    LabeledExample ex;
    ex.features = {1.0, 2.0};
    ex.label = static_cast<Label>(i % 2);
    train.push_back(std::move(ex));
  }
  CHECK_THROWS_AS((void)ensemble_fit(train, EnsembleKind::boosted_tree, 1, "x"), model_error);
}

TEST_CASE("single full subspace knn learner equals plain nearest neighbour") {
  const auto train = testsupport::blobs(20, 3, 0.0, 1.0, 1.0, 59);
  const auto ens = ensemble_fit(train, EnsembleKind::subspace_knn, 4, "x", 1, 3);
  const auto base = knn_fit(train, 1, "knn-fine");
  const auto probes = testsupport::blobs(30, 3, 0.0, 1.0, 1.2, 60);
  for (const auto& p : probes) CHECK(ens->predict(p.features) == base->predict(p.features));
  for (const auto& ex : train) CHECK(ens->predict(ex.features) == base->predict(ex.features));
}

TEST_CASE("subspace knn votes across reduced views") {
  const auto train = testsupport::blobs(30, 6, 0.0, 2.5, 0.6, 61);
  const auto model = ensemble_fit(train, EnsembleKind::subspace_knn, 2, "ensemble-subspace-knn");
  const auto* ens = dynamic_cast<const EnsembleModel*>(model.get());
  REQUIRE(ens != nullptr);
  CHECK(ens->learner_count() == 30);
  std::size_t correct = 0;
  for (const auto& ex : train)
    if (model->predict(ex.features) == ex.label) ++correct;
  CHECK(correct == train.size());
}

TEST_CASE("subspace subsets are sorted half size draws that vary by learner") {
  const auto train = testsupport::blobs(30, 7, 0.0, 2.0, 0.8, 67);
  const auto model =
      ensemble_fit(train, EnsembleKind::subspace_discriminant, 3, "ensemble-subspace-discriminant");
  const json j = model->to_json();
  const auto& subsets = j.at("subsets");
  REQUIRE(subsets.size() == 30);
  std::set<std::vector<std::size_t>> distinct;
  for (const auto& s : subsets) {
    auto subset = s.get<std::vector<std::size_t>>();
    CHECK(subset.size() == 4);  // ceil(7 / 2)
    CHECK(std::is_sorted(subset.begin(), subset.end()));
    CHECK(std::adjacent_find(subset.begin(), subset.end()) == subset.end());
    for (std::size_t f : subset) CHECK(f < 7);
    distinct.insert(std::move(subset));
  }
  CHECK(distinct.size() > 1);
}

TEST_CASE("ensembles are deterministic in their seed") {
  const auto train = testsupport::blobs(20, 4, 0.0, 1.5, 0.9, 71);
  for (const auto kind : {EnsembleKind::boosted_tree, EnsembleKind::bagged_tree,
                          EnsembleKind::subspace_knn, EnsembleKind::subspace_discriminant}) {
    const auto a = ensemble_fit(train, kind, 12, "x");
    const auto b = ensemble_fit(train, kind, 12, "x");
    CHECK(a->to_json() == b->to_json());
    const auto c = ensemble_fit(train, kind, 13, "x");
    CHECK(a->to_json() != c->to_json());
  }
}

TEST_CASE("ensemble kind names round trip") {
  for (const auto kind : {EnsembleKind::boosted_tree, EnsembleKind::bagged_tree,
                          EnsembleKind::subspace_knn, EnsembleKind::subspace_discriminant})
    CHECK(ensemble_kind_from_name(ensemble_kind_name(kind)) == kind);
  CHECK_THROWS_AS((void)ensemble_kind_from_name("stacked"), data_error);
}

TEST_CASE("ensemble rejects degenerate setups") {
  const auto train = testsupport::blobs(5, 2, 0.0, 1.0, 0.5, 73);
  CHECK_THROWS_AS((void)ensemble_fit(train, EnsembleKind::bagged_tree, 1, "x", 0), model_error);
  CHECK_THROWS_AS((void)ensemble_fit({}, EnsembleKind::bagged_tree, 1, "x"), model_error);
  CHECK_THROWS_AS((void)ensemble_fit(train, EnsembleKind::subspace_knn, 1, "x", 5, 3),
                  model_error);
}
