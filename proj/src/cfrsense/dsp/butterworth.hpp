#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace cfrsense::dsp {

// One second-order section, direct form II transposed.
// b may degenerate to a first-order stage (b2 = a2 = 0) for odd orders.
struct Biquad {
  double b0, b1, b2;
  double a1, a2;  // a0 normalized to 1
};

// Digital Butterworth lowpass designed by prewarped bilinear transform of the
// analog prototype, returned as cascaded sections each with exactly unit DC
// gain. Throws config_error unless 0 < cutoff_hz < rate_hz / 2.
std::vector<Biquad> butterworth_lowpass(int order, double cutoff_hz, double rate_hz);

// Squared magnitude response of the cascade at frequency f (one pass).
double sos_mag2(const std::vector<Biquad>& sos, double f_hz, double rate_hz);

// Zero-phase filtering: odd-reflection padding, forward pass, backward pass,
// each stage started from its constant-input steady state. Output length
// equals input length. Requires length >= 3 * order.
std::vector<double> filtfilt(const std::vector<Biquad>& sos, std::span<const double> x);

}  // namespace cfrsense::dsp
