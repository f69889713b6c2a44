// Copyright 2026 The iwf-sim Authors
// SPDX-License-Identifier: Apache-2.0

#include "iwf/matrix.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace iwf {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), data_(std::move(values)) {
  if (data_.size() != rows * cols) {
    throw std::invalid_argument("Matrix: expected " + std::to_string(rows * cols) +
                                " values, got " + std::to_string(data_.size()));
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

}  // namespace iwf
