#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "cfrsense/error.hpp"
#include "cfrsense/ml/svm.hpp"
#include "cfrsense/prng.hpp"
#include "test_support.hpp"

using namespace cfrsense;
using namespace cfrsense::ml;
using testsupport::points1d;
using testsupport::points2d;

namespace {

// Reference solver for the soft-margin dual: projected gradient ascent on
//   W(a) = sum a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
// over the box [0, c]^n intersected with the hyperplane sum a_i y_i = 0.
// The projection is exact: clamp(v - lambda y, 0, c) with lambda found by
// bisection, since the constraint sum is monotone in lambda.
struct DualProblem {
  std::vector<double> y;
  std::vector<double> gram;  // n x n
  std::size_t n = 0;
  double c = 1.0;
};

DualProblem dual_problem(const std::vector<LabeledExample>& train, SvmKernel kernel, double c) {
  DualProblem p;
  p.n = train.size();
  p.c = c;
  p.y.resize(p.n);
  p.gram.resize(p.n * p.n);
  for (std::size_t i = 0; i < p.n; ++i) p.y[i] = train[i].label == Label::dehydrated ? 1.0 : -1.0;
  const std::size_t d = train[0].features.size();
  for (std::size_t i = 0; i < p.n; ++i)
    for (std::size_t j = 0; j < p.n; ++j)
      p.gram[i * p.n + j] =
          svm_kernel_eval(kernel, train[i].features.data(), train[j].features.data(), d);
  return p;
}

std::vector<double> project(const DualProblem& p, std::vector<double> v) {
  double hi = p.c + 1.0;
  for (double x : v) hi = std::max(hi, std::abs(x) + p.c + 1.0);
  double lo = -hi;
  auto balance = [&](double lambda) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.n; ++i)
      s += p.y[i] * std::clamp(v[i] - lambda * p.y[i], 0.0, p.c);
    return s;
  };
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (balance(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  const double lambda = 0.5 * (lo + hi);
  for (std::size_t i = 0; i < p.n; ++i) v[i] = std::clamp(v[i] - lambda * p.y[i], 0.0, p.c);
  return v;
}

double dual_objective(const DualProblem& p, const std::vector<double>& a) {
  double obj = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) {
    obj += a[i];
    double q = 0.0;
    for (std::size_t j = 0; j < p.n; ++j) q += a[j] * p.y[j] * p.gram[i * p.n + j];
    obj -= 0.5 * a[i] * p.y[i] * q;
  }
  return obj;
}

std::vector<double> solve_reference(const DualProblem& p, int iters = 60000) {
  double trace = 0.0;
  for (std::size_t i = 0; i < p.n; ++i) trace += p.gram[i * p.n + i];
  const double eta = 1.0 / (trace + static_cast<double>(p.n));
  std::vector<double> a(p.n, 0.0);
  a = project(p, a);
  std::vector<double> v(p.n);
  for (int it = 0; it < iters; ++it) {
    for (std::size_t i = 0; i < p.n; ++i) {
      double q = 0.0;
      for (std::size_t j = 0; j < p.n; ++j) q += a[j] * p.y[j] * p.gram[i * p.n + j];
      v[i] = a[i] + eta * (1.0 - p.y[i] * q);
    }
    a = project(p, v);
  }
  return a;
}

// Sufficient optimality conditions at the solver's stopping tolerance.
void check_kkt(const std::vector<LabeledExample>& train, const SvmModel& model,
               const SvmFitInfo& info, double c) {
  double balance = 0.0;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const double y = train[i].label == Label::dehydrated ? 1.0 : -1.0;
    const double a = info.alpha[i];
    CHECK(a >= -1e-12);
    CHECK(a <= c + 1e-12);
    balance += a * y;
    const double margin = y * model.decision(train[i].features.data());
    if (a < 1e-8) {
      CHECK(margin >= 1.0 - 2e-3);
    } else if (a > c - 1e-8) {
      CHECK(margin <= 1.0 + 2e-3);
    } else {
      CHECK(margin == doctest::Approx(1.0).epsilon(2.5e-3));
    }
  }
  CHECK(std::abs(balance) <= 1e-6);
}

}  // namespace

TEST_CASE("svm on two opposite points is the maximum margin line") {
  const auto train = points1d({{-1.0, 0}, {1.0, 1}});
  SvmFitInfo info;
  const auto model = svm_fit(train, SvmKernel::linear, 1.0, "svm-linear", &info);
  CHECK(info.alpha[0] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(info.alpha[1] == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(std::abs(model->bias()) <= 1e-3);
  const double neg = -1.0, pos = 1.0, mid = 0.0;
  CHECK(model->decision(&pos) == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(model->decision(&neg) == doctest::Approx(-1.0).epsilon(2e-3));
  CHECK(std::abs(model->decision(&mid)) <= 2e-3);
  CHECK(model->predict(std::vector<double>{0.7}) == Label::dehydrated);
  CHECK(model->predict(std::vector<double>{-0.7}) == Label::hydrated);
}

TEST_CASE("quadratic kernel separates xor") {
  const auto train = points2d(
      {{{1.0, 1.0}, 0}, {{-1.0, -1.0}, 0}, {{1.0, -1.0}, 1}, {{-1.0, 1.0}, 1}});
  SvmFitInfo info;
  const auto model = svm_fit(train, SvmKernel::poly2, 1.0, "svm-quadratic", &info);
  for (const auto& ex : train) CHECK(model->predict(ex.features) == ex.label);
  for (double a : info.alpha) CHECK(a == doctest::Approx(0.125).epsilon(2e-2));
  CHECK(std::abs(model->bias()) <= 2e-3);
  for (const auto& ex : train) {
    const double y = ex.label == Label::dehydrated ? 1.0 : -1.0;
    CHECK(y * model->decision(ex.features.data()) == doctest::Approx(1.0).epsilon(5e-3));
  }
  check_kkt(train, *model, info, 1.0);
}

TEST_CASE("solver matches a projected gradient reference on random problems") {
  for (const auto kernel : {SvmKernel::linear, SvmKernel::poly2, SvmKernel::poly3}) {
    for (double gap : {3.0, 0.5}) {
      auto train = testsupport::blobs(6, 2, 0.0, gap, 1.0, 100 + static_cast<int>(gap * 10));
      const double c = 1.0;
      SvmFitInfo info;
      const auto model = svm_fit(train, kernel, c, "svm-test", &info);

      const DualProblem p = dual_problem(train, kernel, c);
      const auto ref = solve_reference(p);
      const double w_solver = dual_objective(p, info.alpha);
      const double w_ref = dual_objective(p, ref);
      const double scale = std::max(1.0, std::abs(w_ref));
      CHECK(w_solver >= w_ref - 5e-3 * scale);
      CHECK(std::abs(w_solver - w_ref) <= 5e-3 * scale);
      check_kkt(train, *model, info, c);
    }
  }
}

TEST_CASE("dual feasibility holds on an overlapping soft margin problem") {
  auto train = testsupport::blobs(20, 2, 0.0, 0.8, 1.0, 77);
  SvmFitInfo info;
  const auto model = svm_fit(train, SvmKernel::linear, 1.0, "svm-linear", &info);
  double balance = 0.0;
  bool any_at_box = false;
  for (std::size_t i = 0; i < train.size(); ++i) {
    const double y = train[i].label == Label::dehydrated ? 1.0 : -1.0;
    balance += info.alpha[i] * y;
    CHECK(info.alpha[i] >= -1e-12);
    CHECK(info.alpha[i] <= 1.0 + 1e-12);
    if (info.alpha[i] > 1.0 - 1e-8) any_at_box = true;
  }
  CHECK(std::abs(balance) <= 1e-6);
  CHECK(any_at_box);
  check_kkt(train, *model, info, 1.0);
}

TEST_CASE("svm prediction ignores training row order") {
  auto train = testsupport::blobs(15, 2, 0.0, 4.0, 0.5, 31);
  const auto a = svm_fit(train, SvmKernel::linear, 1.0, "svm-linear");
  std::vector<LabeledExample> shuffled = train;
  rng::Stream rng(5, 0);
  for (std::size_t i = shuffled.size(); i > 1; --i)
    std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
  const auto b = svm_fit(shuffled, SvmKernel::linear, 1.0, "svm-linear");
  for (const auto& ex : train) CHECK(a->predict(ex.features) == b->predict(ex.features));
}

TEST_CASE("kernel evaluations are exact") {
  const double u[] = {1.0, 2.0};
  const double v[] = {3.0, -1.0};
  CHECK(svm_kernel_eval(SvmKernel::linear, u, v, 2) == 1.0);
  CHECK(svm_kernel_eval(SvmKernel::poly2, u, v, 2) == 4.0);
  CHECK(svm_kernel_eval(SvmKernel::poly3, u, v, 2) == 8.0);
  CHECK(svm_kernel_name(SvmKernel::poly2) == std::string("poly2"));
  CHECK(svm_kernel_from_name("poly3") == SvmKernel::poly3);
  CHECK_THROWS_AS((void)svm_kernel_from_name("rbf"), data_error);
}

TEST_CASE("svm rejects degenerate inputs") {
  const auto one_class = points1d({{0.0, 1}, {1.0, 1}});
  CHECK_THROWS_AS((void)svm_fit(one_class, SvmKernel::linear, 1.0, "svm-linear"), data_error);
  const auto ok = points1d({{0.0, 0}, {1.0, 1}});
  CHECK_THROWS_AS((void)svm_fit(ok, SvmKernel::linear, 0.0, "svm-linear"), model_error);
  CHECK_THROWS_AS((void)svm_fit({}, SvmKernel::linear, 1.0, "svm-linear"), model_error);
}
