#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tfr/common.hpp"

namespace tfr {

/// Dense column-major matrix. Columns are contiguous, which is the layout the
/// per-frame transforms and the SIMD kernels work on.
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::size_t size() const noexcept { return data_.size(); }
  [[nodiscard]] bool empty() const noexcept { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) noexcept { return data_[c * rows_ + r]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept { return data_[c * rows_ + r]; }

  T& operator[](std::size_t linear) noexcept { return data_[linear]; }
  const T& operator[](std::size_t linear) const noexcept { return data_[linear]; }

  [[nodiscard]] std::span<T> col(std::size_t c) noexcept { return {data_.data() + c * rows_, rows_}; }
  [[nodiscard]] std::span<const T> col(std::size_t c) const noexcept {
    return {data_.data() + c * rows_, rows_};
  }

  [[nodiscard]] std::span<T> values() noexcept { return data_; }
  [[nodiscard]] std::span<const T> values() const noexcept { return data_; }

  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  [[nodiscard]] bool same_shape(const Matrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<Complex>;

/// Time-frequency coefficients: P (or S) rows by 2b+1 frames.
using TFMatrix = ComplexMatrix;

}  // namespace tfr
