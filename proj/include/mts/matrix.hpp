#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace mts {

/// Dense row-major matrix indexed (user, sbs).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }

  double row_sum(std::size_t r) const {
    double s = 0.0;
    for (double v : row(r)) s += v;
    return s;
  }

  void fill_row(std::size_t r, double v) {
    for (double& x : row(r)) x = v;
  }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

}  // namespace mts
