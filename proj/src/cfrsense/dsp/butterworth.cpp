#include "cfrsense/dsp/butterworth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "cfrsense/error.hpp"

namespace cfrsense::dsp {

namespace {
constexpr double kPi = 3.1415926535897932384626433832795;

// DF2T single-stage pass with initial state scaled to the stage's first
// sample, so a constant input is reproduced exactly from sample 0.
void run_stage(const Biquad& s, std::vector<double>& x) {
  if (x.empty()) return;
  // Steady state for unit constant input (unit DC gain per stage => y = 1).
  const double zi1 = 1.0 - s.b0;
  const double zi2 = zi1 - s.b1 + s.a1;
  double z1 = zi1 * x.front();
  double z2 = zi2 * x.front();
  for (double& v : x) {
    const double in = v;
    const double out = s.b0 * in + z1;
    z1 = s.b1 * in - s.a1 * out + z2;
    z2 = s.b2 * in - s.a2 * out;
    v = out;
  }
}
}  // namespace

std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double rate_hz) {
  if (order < 1) throw config_error("butterworth: order must be >= 1");
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < rate_hz / 2.0))
    throw config_error("butterworth: cutoff must lie in (0, rate/2)");

  const double fs2 = 2.0 * rate_hz;
  const double warped = fs2 * std::tan(kPi * cutoff_hz / rate_hz);

  std::vector<Biquad> sos;
  // Conjugate pole pairs of the analog prototype, each bilinear-transformed
  // into one section with zeros at z = -1 and unit DC gain.
  for (int k = 0; k < order / 2; ++k) {
    const double theta = kPi * (2.0 * k + 1.0) / (2.0 * order) + kPi / 2.0;
    const std::complex<double> s_pole =
        warped * std::complex<double>(std::cos(theta), std::sin(theta));
    const std::complex<double> z_pole = (fs2 + s_pole) / (fs2 - s_pole);
    const double a1 = -2.0 * z_pole.real();
    const double a2 = std::norm(z_pole);
    const double g = (1.0 + a1 + a2) / 4.0;
    sos.push_back({g, 2.0 * g, g, a1, a2});
  }
  if (order % 2 == 1) {
    // The real pole at s = -warped.
    const double z_pole = (fs2 - warped) / (fs2 + warped);
    const double a1 = -z_pole;
    const double g = (1.0 + a1) / 2.0;
    sos.push_back({g, g, 0.0, a1, 0.0});
  }
  return sos;
}

double sos_mag2(const std::vector<Biquad>& sos, double f_hz, double rate_hz) {
  const double w = 2.0 * kPi * f_hz / rate_hz;
  const std::complex<double> z_inv = std::exp(std::complex<double>(0.0, -w));
  double mag2 = 1.0;
  for (const auto& s : sos) {
    const std::complex<double> num = s.b0 + s.b1 * z_inv + s.b2 * z_inv * z_inv;
    const std::complex<double> den = 1.0 + s.a1 * z_inv + s.a2 * z_inv * z_inv;
    mag2 *= std::norm(num) / std::norm(den);
  }
  return mag2;
}

std::vector<double> filtfilt(const std::vector<Biquad>& sos, std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t order = 2 * sos.size();
  if (n < 3 * order) throw config_error("filtfilt: series too short for the filter order");

  const std::size_t pad = std::min<std::size_t>(3 * (2 * sos.size() + 1), n - 1);
  std::vector<double> buf;
  buf.reserve(n + 2 * pad);
  for (std::size_t i = 0; i < pad; ++i) buf.push_back(2.0 * x[0] - x[pad - i]);
  buf.insert(buf.end(), x.begin(), x.end());
  for (std::size_t i = 0; i < pad; ++i) buf.push_back(2.0 * x[n - 1] - x[n - 2 - i]);

  for (const auto& s : sos) run_stage(s, buf);
  std::reverse(buf.begin(), buf.end());
  for (const auto& s : sos) run_stage(s, buf);
  std::reverse(buf.begin(), buf.end());

  return std::vector<double>(buf.begin() + pad, buf.begin() + pad + n);
}

}  // namespace cfrsense::dsp
