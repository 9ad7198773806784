#include "cfrsense/dsp/savgol.hpp"

#include <cmath>
#include <cstddef>

#include "cfrsense/error.hpp"

namespace cfrsense::dsp {

namespace {

// Solve the small SPD system G u = e0 by Cholesky; G = A^T A of the
// Vandermonde design matrix.
std::vector<double> solve_normal_e0(const std::vector<double>& g, int m) {
  std::vector<double> l(static_cast<std::size_t>(m) * m, 0.0);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = g[static_cast<std::size_t>(i) * m + j];
      for (int k = 0; k < j; ++k)
        sum -= l[static_cast<std::size_t>(i) * m + k] * l[static_cast<std::size_t>(j) * m + k];
      if (i == j) {
        if (sum <= 0.0) throw config_error("savgol: singular normal equations");
        l[static_cast<std::size_t>(i) * m + j] = std::sqrt(sum);
      } else {
        l[static_cast<std::size_t>(i) * m + j] = sum / l[static_cast<std::size_t>(j) * m + j];
      }
    }
  }
  std::vector<double> u(m, 0.0);
  u[0] = 1.0;
  for (int i = 0; i < m; ++i) {
    double sum = u[i];
    for (int k = 0; k < i; ++k) sum -= l[static_cast<std::size_t>(i) * m + k] * u[k];
    u[i] = sum / l[static_cast<std::size_t>(i) * m + i];
  }
  for (int i = m - 1; i >= 0; --i) {
    double sum = u[i];
    for (int k = i + 1; k < m; ++k) sum -= l[static_cast<std::size_t>(k) * m + i] * u[k];
    u[i] = sum / l[static_cast<std::size_t>(i) * m + i];
  }
  return u;
}

}  // namespace

std::vector<double> savgol_coeffs(int window, int polyorder) {
  if (window < 1 || window % 2 == 0) throw config_error("savgol: window must be odd");
  if (polyorder < 0 || polyorder >= window)
    throw config_error("savgol: polyorder must be < window");

  const int h = window / 2;
  const int m = polyorder + 1;

  // G[a][b] = sum_i i^(a+b) over i in [-h, h].
  std::vector<double> g(static_cast<std::size_t>(m) * m, 0.0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double sum = 0.0;
      for (int i = -h; i <= h; ++i) sum += std::pow(static_cast<double>(i), a + b);
      g[static_cast<std::size_t>(a) * m + b] = sum;
    }
  const std::vector<double> u = solve_normal_e0(g, m);

  std::vector<double> c(window);
  for (int i = -h; i <= h; ++i) {
    double v = 0.0;
    double p = 1.0;
    for (int j = 0; j < m; ++j) {
      v += u[j] * p;
      p *= static_cast<double>(i);
    }
    c[i + h] = v;
  }
  return c;
}

std::vector<double> savgol_filter(std::span<const double> x, int window, int polyorder) {
  const std::vector<double> c = savgol_coeffs(window, polyorder);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
  const int h = window / 2;
  if (n < window) throw config_error("savgol: series shorter than the window");

  auto mirrored = [&](std::ptrdiff_t i) -> double {
    if (i < 0) i = -i;
    if (i >= n) i = 2 * (n - 1) - i;
    return x[static_cast<std::size_t>(i)];
  };

  std::vector<double> y(static_cast<std::size_t>(n));
  for (std::ptrdiff_t t = 0; t < n; ++t) {
    double acc = 0.0;
    for (int d = -h; d <= h; ++d) acc += c[d + h] * mirrored(t + d);
    y[static_cast<std::size_t>(t)] = acc;
  }
  return y;
}

}  // namespace cfrsense::dsp
