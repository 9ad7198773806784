#pragma once

#include <cstddef>
#include <vector>

#include "cfrsense/preprocess.hpp"

namespace cfrsense::ml {

// Row-major feature matrix with 0/1 class codes (0 = hydrated, 1 = dehydrated).
struct Dataset {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> x;
  std::vector<int> y;

  const double* row(std::size_t i) const { return x.data() + i * d; }
};

Dataset dataset_from(const std::vector<LabeledExample>& examples);

// Rows of `src` selected by index, in order; indices may repeat.
Dataset dataset_rows(const Dataset& src, const std::vector<std::size_t>& rows);

// Columns of `src` selected by index, in order.
Dataset dataset_cols(const Dataset& src, const std::vector<std::size_t>& cols);

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> a;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
  double* row(std::size_t i) { return a.data() + i * cols; }
  const double* row(std::size_t i) const { return a.data() + i * cols; }
  double& at(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

Matrix transpose(const Matrix& m);

}  // namespace cfrsense::ml
