#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cfrsense/channel.hpp"
#include "cfrsense/preprocess.hpp"

namespace cfrsense {

// Binary counts with dehydrated as the positive class.
struct ConfusionMatrix {
  long tp = 0;
  long tn = 0;
  long fp = 0;
  long fn = 0;

  long total() const { return tp + tn + fp + fn; }
  void add(Label truth, Label predicted);
  ConfusionMatrix& operator+=(const ConfusionMatrix& other);
};

// 100 * (tp + tn) / total.
double accuracy(const ConfusionMatrix& cm);

enum class Grouping { by_example, by_session };

// Disjoint covering folds over [0, n); sizes differ by at most one.
std::vector<std::vector<std::size_t>> kfold_split(std::size_t n, int k, std::uint64_t seed);

// Folds over example indices keeping each (subject, session) group whole;
// groups are dealt round-robin per majority-class stratum so folds stay
// balanced in both group count and class mix.
std::vector<std::vector<std::size_t>> kfold_split_sessions(
    const std::vector<LabeledExample>& examples, int k, std::uint64_t seed);

struct CvReport {
  std::string variant;
  std::vector<double> fold_accuracies;
  ConfusionMatrix pooled;
  double mean_accuracy = 0.0;
  double pooled_accuracy = 0.0;
  std::uint64_t seed = 0;
  std::string dataset_fingerprint;
};

CvReport cross_validate(const std::vector<LabeledExample>& examples, const std::string& variant,
                        int k, std::uint64_t seed, Grouping grouping = Grouping::by_session);

std::string dataset_fingerprint(const std::vector<LabeledExample>& examples);

struct BaselineEntry {
  std::string method;
  double accuracy_pct;
  std::string kind;
};

// Published reference accuracies, used only when rendering comparison
// reports; never consulted by tests of this pipeline's own numbers.
const std::vector<BaselineEntry>& baseline_table();

}  // namespace cfrsense
