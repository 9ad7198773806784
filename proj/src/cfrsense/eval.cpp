#include "cfrsense/eval.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <utility>

#include "cfrsense/error.hpp"
#include "cfrsense/io/csv.hpp"
#include "cfrsense/io/sha256.hpp"
#include "cfrsense/ml/model.hpp"
#include "cfrsense/prng.hpp"

namespace cfrsense {

void ConfusionMatrix::add(Label truth, Label predicted) {
  if (truth == Label::dehydrated)
    (predicted == Label::dehydrated ? tp : fn)++;
  else
    (predicted == Label::hydrated ? tn : fp)++;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
  tp += other.tp;
  tn += other.tn;
  fp += other.fp;
  fn += other.fn;
  return *this;
}

double accuracy(const ConfusionMatrix& cm) {
  const long total = cm.total();
  if (total <= 0) throw data_error("accuracy undefined on an empty confusion matrix");
  return 100.0 * static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
}

namespace {

void shuffle_indices(std::vector<std::size_t>& idx, rng::Stream& s) {
  for (std::size_t i = 0; i + 1 < idx.size(); ++i) {
    const std::size_t j = i + s.next_below(idx.size() - i);
    std::swap(idx[i], idx[j]);
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, int k, std::uint64_t seed) {
  if (k < 2) throw config_error("kfold: k must be >= 2");
  if (static_cast<std::size_t>(k) > n)
    throw config_error("kfold: k exceeds the number of examples");
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  rng::Stream s(rng::derive(seed, rng::kTagFold), 0);
  shuffle_indices(idx, s);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < n; ++i) folds[i % k].push_back(idx[i]);
  return folds;
}

std::vector<std::vector<std::size_t>> kfold_split_sessions(
    const std::vector<LabeledExample>& examples, int k, std::uint64_t seed) {
  if (k < 2) throw config_error("kfold: k must be >= 2");

  // Sessions recorded under both class labels share one (subject, session)
  // group so their common channel realization never straddles a fold.
  std::map<std::pair<int, int>, std::size_t> slot;
  struct Group {
    std::vector<std::size_t> members;
    long votes[2] = {0, 0};
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto key = std::make_pair(examples[i].subject_id, examples[i].session_id);
    auto [it, inserted] = slot.try_emplace(key, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].members.push_back(i);
    ++groups[it->second].votes[examples[i].label == Label::dehydrated ? 1 : 0];
  }
  if (static_cast<std::size_t>(k) > groups.size())
    throw config_error("kfold: k exceeds the number of session groups");

  std::vector<std::size_t> strata[2];
  for (std::size_t g = 0; g < groups.size(); ++g)
    strata[groups[g].votes[1] > groups[g].votes[0] ? 1 : 0].push_back(g);

  std::vector<std::vector<std::size_t>> folds(k);
  std::size_t cursor = 0;
  for (std::size_t s = 0; s < 2; ++s) {
    rng::Stream stream(rng::derive(seed, rng::kTagFold, s), 0);
    shuffle_indices(strata[s], stream);
    for (std::size_t g : strata[s]) {
      auto& fold = folds[cursor % static_cast<std::size_t>(k)];
      fold.insert(fold.end(), groups[g].members.begin(), groups[g].members.end());
      ++cursor;
    }
  }
  return folds;
}

std::string dataset_fingerprint(const std::vector<LabeledExample>& examples) {
  std::ostringstream canon;
  io::write_examples_csv(examples, canon);
  return io::sha256_hex(canon.str());
}

CvReport cross_validate(const std::vector<LabeledExample>& examples, const std::string& variant,
                        int k, std::uint64_t seed, Grouping grouping) {
  if (examples.empty()) throw data_error("cross_validate: no examples");

  const auto folds = grouping == Grouping::by_session
                         ? kfold_split_sessions(examples, k, seed)
                         : kfold_split(examples.size(), k, seed);

  CvReport report;
  report.variant = variant;
  report.seed = seed;
  report.dataset_fingerprint = dataset_fingerprint(examples);

  std::vector<char> held(examples.size());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::fill(held.begin(), held.end(), 0);
    for (std::size_t i : folds[f]) held[i] = 1;

    std::vector<LabeledExample> train, val;
    for (std::size_t i = 0; i < examples.size(); ++i)
      (held[i] ? val : train).push_back(examples[i]);

    bool saw[2] = {false, false};
    for (const auto& ex : train) saw[ex.label == Label::dehydrated ? 1 : 0] = true;
    if (!saw[0] || !saw[1])
      throw model_error("cross_validate: training folds lost a class; stratification failed");

    const Standardizer st = standardize_fit(train);
    standardize_apply(st, train);
    standardize_apply(st, val);

    const auto model = ml::fit(variant, train, rng::derive(seed, rng::kTagFold, f));
    ConfusionMatrix cm;
    for (const auto& ex : val) cm.add(ex.label, model->predict(ex.features));
    report.fold_accuracies.push_back(accuracy(cm));
    report.pooled += cm;
  }

  report.mean_accuracy =
      std::accumulate(report.fold_accuracies.begin(), report.fold_accuracies.end(), 0.0) /
      static_cast<double>(report.fold_accuracies.size());
  report.pooled_accuracy = accuracy(report.pooled);
  return report;
}

const std::vector<BaselineEntry>& baseline_table() {
  static const std::vector<BaselineEntry> table = {
      {"liaqat-2022", 97.83, "contact"},
      {"kulkarni-2021", 75.96, "contact"},
      {"liaqat-2020", 91.53, "contact"},
      {"rizwan-2020", 85.63, "contact"},
      {"carrieri-2020", 73.91, "contact"},
      {"cbdm-reference", 93.8, "non-contact"},
      {"hbdm-reference", 96.15, "non-contact"},
  };
  return table;
}

}  // namespace cfrsense
