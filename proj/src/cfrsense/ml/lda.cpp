#include "cfrsense/ml/lda.hpp"

#include <cmath>

#include "cfrsense/kernels/kernels.hpp"

namespace cfrsense::ml {

namespace {

// In-place Cholesky solve of (L L^T) w = rhs for SPD a (d x d, row-major).
std::vector<double> spd_solve(std::vector<double> a, std::vector<double> rhs, std::size_t d) {
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = a[i * d + j];
      for (std::size_t k = 0; k < j; ++k) sum -= a[i * d + k] * a[j * d + k];
      if (i == j) {
        if (sum <= 0.0) throw model_error("lda: covariance not positive definite");
        a[i * d + j] = std::sqrt(sum);
      } else {
        a[i * d + j] = sum / a[j * d + j];
      }
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    double sum = rhs[i];
    for (std::size_t k = 0; k < i; ++k) sum -= a[i * d + k] * rhs[k];
    rhs[i] = sum / a[i * d + i];
  }
  for (std::size_t ii = d; ii-- > 0;) {
    double sum = rhs[ii];
    for (std::size_t k = ii + 1; k < d; ++k) sum -= a[k * d + ii] * rhs[k];
    rhs[ii] = sum / a[ii * d + ii];
  }
  return rhs;
}

}  // namespace

int Lda::predict(const double* features) const {
  return kernels::ops().dot(w.data(), features, w.size()) > threshold ? 1 : 0;
}

Lda lda_fit(const Dataset& data, double ridge) {
  const std::size_t n = data.n;
  const std::size_t d = data.d;
  if (n == 0) throw model_error("lda: empty training set");

  std::size_t counts[2] = {0, 0};
  std::vector<double> mu0(d, 0.0), mu1(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    auto& mu = data.y[i] ? mu1 : mu0;
    ++counts[data.y[i]];
    const double* r = data.row(i);
    for (std::size_t j = 0; j < d; ++j) mu[j] += r[j];
  }
  if (counts[0] == 0 || counts[1] == 0)
    throw data_error("lda: training data holds a single class");
  for (std::size_t j = 0; j < d; ++j) {
    mu0[j] /= static_cast<double>(counts[0]);
    mu1[j] /= static_cast<double>(counts[1]);
  }

  std::vector<double> s(d * d, 0.0);
  std::vector<double> delta(d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& mu = data.y[i] ? mu1 : mu0;
    const double* r = data.row(i);
    for (std::size_t j = 0; j < d; ++j) delta[j] = r[j] - mu[j];
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = a; b < d; ++b) s[a * d + b] += delta[a] * delta[b];
  }
  const double denom = static_cast<double>(n > 2 ? n - 2 : 1);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      s[a * d + b] /= denom;
      s[b * d + a] = s[a * d + b];
    }
  for (std::size_t a = 0; a < d; ++a) s[a * d + a] += ridge;

  std::vector<double> diff(d);
  for (std::size_t j = 0; j < d; ++j) diff[j] = mu1[j] - mu0[j];

  Lda out;
  out.w = spd_solve(std::move(s), std::move(diff), d);
  double mid = 0.0;
  for (std::size_t j = 0; j < d; ++j) mid += out.w[j] * 0.5 * (mu0[j] + mu1[j]);
  out.threshold = mid;
  return out;
}

}  // namespace cfrsense::ml
