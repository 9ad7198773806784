#include "cfrsense/ml/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "cfrsense/kernels/kernels.hpp"

namespace cfrsense::ml {

namespace {

constexpr double kKktTol = 1e-3;
// Safety valve against a stalled optimizer, scaled generously above the
// worst observed demand (~1.5k updates per row on label-free noise).
long max_pair_updates(std::size_t n) {
  return std::max<long>(2000000, 10000 * static_cast<long>(n));
}

double poly_apply(SvmKernel k, double dot) {
  switch (k) {
    case SvmKernel::linear: return dot;
    case SvmKernel::poly2: return (1.0 + dot) * (1.0 + dot);
    case SvmKernel::poly3: return (1.0 + dot) * (1.0 + dot) * (1.0 + dot);
  }
  throw model_error("svm: unknown kernel");
}

// Pairwise SMO on the soft-margin dual:
//   max  sum(a) - 1/2 sum_ij a_i a_j y_i y_j K_ij
//   s.t. sum(a_i y_i) = 0,  0 <= a_i <= C.
// The equality constraint is maintained exactly by moving the chosen pair
// along a_u += y_u t, a_v -= y_v t.  u is the most violating index; its
// partner v is chosen by the second-order rule (largest one-step gain),
// which needs far fewer updates than the classic max-violation partner
// when kernel values span orders of magnitude.
struct Smo {
  const Dataset& data;
  const std::vector<double>& y;  // +-1
  double c;
  std::vector<double> gram;      // n*n, kernel values
  std::vector<double> diag;      // gram[i*n+i]
  std::vector<double> alpha;
  std::vector<double> g;         // g_i = sum_j a_j y_j K_ij
  long iterations = 0;

  Smo(const Dataset& d, const std::vector<double>& labels, SvmKernel kernel, double box)
      : data(d), y(labels), c(box) {
    const std::size_t n = data.n;
    gram.resize(n * n);
    kernels::ops().matmul_nt(data.x.data(), data.x.data(), gram.data(), n, n, data.d);
    for (double& v : gram) v = poly_apply(kernel, v);
    diag.resize(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = gram[i * n + i];
    alpha.assign(n, 0.0);
    g.assign(n, 0.0);
  }

  bool in_up(std::size_t i) const {
    return (y[i] > 0.0 && alpha[i] < c) || (y[i] < 0.0 && alpha[i] > 0.0);
  }
  bool in_low(std::size_t i) const {
    return (y[i] > 0.0 && alpha[i] > 0.0) || (y[i] < 0.0 && alpha[i] < c);
  }

  // Indices whose alpha is pinned at a bound and whose f sits strictly on
  // the non-violating side are dropped from the scans ("shrinking").  Their
  // g entries go stale, so before any return on a shrunk problem the full
  // index set is restored, stale entries are rebuilt from g_bar plus the
  // free alphas, and the gap test is repeated over all rows.
  void solve() {
    const std::size_t n = data.n;
    std::vector<std::size_t> active(n);
    for (std::size_t i = 0; i < n; ++i) active[i] = i;
    std::vector<double> g_bar(n, 0.0);  // contribution of alphas pinned at c
    const long shrink_every = std::min<long>(static_cast<long>(n), 1000);
    long until_shrink = shrink_every;
    bool final_phase = false;

    auto apply_alpha = [&](std::size_t idx, double next) {
      const bool was_c = alpha[idx] >= c;
      alpha[idx] = next;
      if (was_c != (next >= c)) {
        const double s = (next >= c ? c : -c) * y[idx];
        const double* row = gram.data() + idx * n;
        for (std::size_t k = 0; k < n; ++k) g_bar[k] += s * row[k];
      }
    };

    auto restore_all = [&] {
      std::vector<std::uint8_t> is_active(n, 0);
      for (std::size_t j : active) is_active[j] = 1;
      std::vector<std::size_t> free_rows;
      for (std::size_t j : active)
        if (alpha[j] > 0.0 && alpha[j] < c) free_rows.push_back(j);
      for (std::size_t i = 0; i < n; ++i) {
        if (is_active[i]) continue;
        double s = g_bar[i];
        const double* row = gram.data() + i * n;
        for (std::size_t j : free_rows) s += alpha[j] * y[j] * row[j];
        g[i] = s;
      }
      active.resize(n);
      for (std::size_t i = 0; i < n; ++i) active[i] = i;
      until_shrink = shrink_every;
    };

    for (;;) {
      double f_low = -std::numeric_limits<double>::infinity();
      double f_up = std::numeric_limits<double>::infinity();
      std::size_t u = n;
      for (std::size_t i : active) {
        const double f = g[i] - y[i];
        if (in_low(i) && f > f_low) {
          f_low = f;
          u = i;
        }
        if (in_up(i) && f < f_up) f_up = f;
      }
      const bool shrunk = active.size() < n;
      if (u == n || f_low - f_up <= kKktTol) {
        if (!shrunk) return;
        restore_all();
        continue;
      }
      if (shrunk && !final_phase && f_low - f_up <= 10.0 * kKktTol) {
        // Close to done: rebuild everything once so the endgame scans and
        // the remaining shrink decisions see fresh values.
        final_phase = true;
        restore_all();
        continue;
      }
      if (++iterations > max_pair_updates(n))
        throw model_error("svm: optimizer failed to converge");

      // Partner choice: any i with f_i < f_low improves the dual by
      // (f_low - f_i)^2 / (2 eta_ui) on an unconstrained step; take the
      // largest.  The true minimizer of f is such a candidate whenever the
      // gap test above fails, so v is always found.  Gains are compared by
      // cross multiplication to keep division out of the scan.
      const double* ku = gram.data() + u * n;
      std::size_t v = n;
      double best_df2 = 0.0;
      double eta = 1.0;
      for (std::size_t i : active) {
        const double f = g[i] - y[i];
        if (!in_up(i) || f >= f_low) continue;
        const double df2 = (f_low - f) * (f_low - f);
        double e = diag[u] + diag[i] - 2.0 * ku[i];
        if (e < 1e-12) e = 1e-12;
        if (df2 * eta > best_df2 * e) {
          best_df2 = df2;
          v = i;
          eta = e;
        }
      }
      if (v == n) return;
      const double f_v = g[v] - y[v];

      // Along a_u += y_u t, a_v -= y_v t the dual is quadratic with
      // dW/dt|0 = f_v - f_low and curvature -eta, so t* = (f_v - f_low)/eta < 0.

      double t_lo = -std::numeric_limits<double>::infinity();
      double t_hi = std::numeric_limits<double>::infinity();
      auto bound_add = [&](double a, double yy) {
        // a + yy*t in [0, c]
        if (yy > 0.0) {
          t_lo = std::max(t_lo, -a);
          t_hi = std::min(t_hi, c - a);
        } else {
          t_lo = std::max(t_lo, a - c);
          t_hi = std::min(t_hi, a);
        }
      };
      bound_add(alpha[u], y[u]);
      // a_v - y_v t in [0, c]  <=>  a_v + (-y_v) t in [0, c]
      bound_add(alpha[v], -y[v]);

      double t = std::clamp((f_v - f_low) / eta, t_lo, t_hi);
      if (t == 0.0) {
        // Numerically stuck; the gap is within rounding of tol.
        if (!shrunk) return;
        restore_all();
        continue;
      }

      apply_alpha(u, std::clamp(alpha[u] + y[u] * t, 0.0, c));
      apply_alpha(v, std::clamp(alpha[v] - y[v] * t, 0.0, c));
      const double* kv = gram.data() + v * n;
      for (std::size_t k : active) g[k] += t * (ku[k] - kv[k]);

      if (--until_shrink == 0) {
        until_shrink = shrink_every;
        std::erase_if(active, [&](std::size_t i) {
          const bool up = in_up(i);
          const bool low = in_low(i);
          if (up && low) return false;  // free alpha: always kept
          const double f = g[i] - y[i];
          return up ? f > f_low : f < f_up;
        });
      }
    }
  }

  double bias() const {
    const std::size_t n = data.n;
    double sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] > 0.0 && alpha[i] < c) {
        sum += y[i] - g[i];
        ++free_count;
      }
    }
    if (free_count > 0) return sum / static_cast<double>(free_count);
    double f_low = -std::numeric_limits<double>::infinity();
    double f_up = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      const double f = g[i] - y[i];
      if (in_low(i)) f_low = std::max(f_low, f);
      if (in_up(i)) f_up = std::min(f_up, f);
    }
    return -0.5 * (f_low + f_up);
  }
};

}  // namespace

const char* svm_kernel_name(SvmKernel k) {
  switch (k) {
    case SvmKernel::linear: return "linear";
    case SvmKernel::poly2: return "poly2";
    case SvmKernel::poly3: return "poly3";
  }
  throw model_error("svm: unknown kernel");
}

SvmKernel svm_kernel_from_name(const std::string& name) {
  if (name == "linear") return SvmKernel::linear;
  if (name == "poly2") return SvmKernel::poly2;
  if (name == "poly3") return SvmKernel::poly3;
  throw data_error("svm: unknown kernel name '" + name + "'");
}

double svm_kernel_eval(SvmKernel k, const double* u, const double* v, std::size_t d) {
  return poly_apply(k, kernels::ops().dot(u, v, d));
}

SvmModel::SvmModel(std::string variant, SvmKernel kernel, Dataset support,
                   std::vector<double> dual_coef, double bias)
    : Model(std::move(variant), support.d),
      kernel_(kernel),
      support_(std::move(support)),
      dual_coef_(std::move(dual_coef)),
      bias_(bias) {
  if (dual_coef_.size() != support_.n) throw model_error("svm: coefficient count mismatch");
}

double SvmModel::decision(const double* features) const {
  double f = bias_;
  for (std::size_t i = 0; i < support_.n; ++i)
    f += dual_coef_[i] * svm_kernel_eval(kernel_, support_.row(i), features, support_.d);
  return f;
}

int SvmModel::predict_row(const double* features) const {
  return decision(features) > 0.0 ? 1 : 0;
}

json SvmModel::to_json() const {
  json j;
  j["kind"] = "svm";
  j["variant"] = variant();
  j["kernel"] = svm_kernel_name(kernel_);
  j["bias"] = bias_;
  j["n"] = support_.n;
  j["d"] = support_.d;
  j["x"] = support_.x;
  j["y"] = support_.y;
  j["dual_coef"] = dual_coef_;
  return j;
}

std::unique_ptr<SvmModel> SvmModel::from_json(const json& j) {
  Dataset sv;
  sv.n = j.at("n").get<std::size_t>();
  sv.d = j.at("d").get<std::size_t>();
  sv.x = j.at("x").get<std::vector<double>>();
  sv.y = j.at("y").get<std::vector<int>>();
  auto coef = j.at("dual_coef").get<std::vector<double>>();
  if (sv.x.size() != sv.n * sv.d || sv.y.size() != sv.n || coef.size() != sv.n)
    throw data_error("svm model: inconsistent stored shapes");
  return std::make_unique<SvmModel>(j.at("variant").get<std::string>(),
                                    svm_kernel_from_name(j.at("kernel").get<std::string>()),
                                    std::move(sv), std::move(coef), j.at("bias").get<double>());
}

std::unique_ptr<SvmModel> svm_fit(const std::vector<LabeledExample>& train, SvmKernel kernel,
                                  double c, std::string variant, SvmFitInfo* info) {
  if (!(c > 0.0)) throw model_error("svm: box constraint must be positive");
  const Dataset data = dataset_from(train);
  if (data.n == 0) throw model_error("svm: empty training set");
  bool saw[2] = {false, false};
  std::vector<double> y(data.n);
  for (std::size_t i = 0; i < data.n; ++i) {
    saw[data.y[i]] = true;
    y[i] = data.y[i] ? 1.0 : -1.0;
  }
  if (!saw[0] || !saw[1]) throw data_error("svm: training data holds a single class");

  Smo smo(data, y, kernel, c);
  smo.solve();
  const double b = smo.bias();
  if (info) {
    info->alpha = smo.alpha;
    info->bias = b;
    info->iterations = smo.iterations;
  }

  std::vector<std::size_t> sv_rows;
  for (std::size_t i = 0; i < data.n; ++i)
    if (smo.alpha[i] > 0.0) sv_rows.push_back(i);
  Dataset support = dataset_rows(data, sv_rows);
  std::vector<double> coef(sv_rows.size());
  for (std::size_t k = 0; k < sv_rows.size(); ++k)
    coef[k] = smo.alpha[sv_rows[k]] * y[sv_rows[k]];
  return std::make_unique<SvmModel>(std::move(variant), kernel, std::move(support),
                                    std::move(coef), b);
}

}  // namespace cfrsense::ml
