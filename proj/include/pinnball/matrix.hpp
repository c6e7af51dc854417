#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace pinnball {

// Dense row-major matrix; row i holds the weight vector of neuron i.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }
  std::size_t size() const { return data_.size(); }

  bool all_finite() const {
    for (double v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// sequential accumulation, index order fixed
inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

// Fixed-shape pairwise reduction; the split points depend only on the
// length, so the result is stable under any parallel partitioning that
// respects the same tree.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 8) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.subspan(0, half)) + pairwise_sum(v.subspan(half));
}

enum class MatrixNorm { two_inf, frobenius, two_one };

inline double matrix_norm(const Matrix& w, MatrixNorm kind) {
  if (!w.all_finite())
    throw std::invalid_argument("matrix_norm: non-finite entries");
  double acc = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const double r = norm2(w.row(i));
    switch (kind) {
      case MatrixNorm::two_inf:
        acc = std::max(acc, r);
        break;
      case MatrixNorm::frobenius:
        acc += r * r;
        break;
      case MatrixNorm::two_one:
        acc += r;
        break;
    }
  }
  return kind == MatrixNorm::frobenius ? std::sqrt(acc) : acc;
}

// max_i ||a_i - b_i||_2 over rows
inline double max_row_distance(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double dij = a(i, j) - b(i, j);
      s += dij * dij;
    }
    worst = std::max(worst, std::sqrt(s));
  }
  return worst;
}

}  // namespace pinnball
