#pragma once

#include "cfrsense/ml/model.hpp"

namespace cfrsense::ml {

// Fisher linear discriminant: w = S^-1 (mu1 - mu0) with pooled within-class
// covariance S (ridge-stabilized on the diagonal), thresholded at the
// midpoint projection of the class means.
struct Lda {
  std::vector<double> w;
  double threshold = 0.0;

  int predict(const double* features) const;
};

Lda lda_fit(const Dataset& data, double ridge = 1e-6);

}  // namespace cfrsense::ml
