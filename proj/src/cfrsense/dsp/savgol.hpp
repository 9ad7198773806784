#pragma once

#include <span>
#include <vector>

namespace cfrsense::dsp {

// Savitzky-Golay smoothing coefficients: the center row of the least-squares
// polynomial fit over a window of odd length. Exact on polynomials up to
// the fit order. Throws config_error on even window or polyorder >= window.
std::vector<double> savgol_coeffs(int window, int polyorder);

// Convolution with the coefficients, mirror padding at the edges
// (x[-i] = x[i], x[n-1+i] = x[n-1-i]). Requires length >= window.
std::vector<double> savgol_filter(std::span<const double> x, int window, int polyorder);

}  // namespace cfrsense::dsp
