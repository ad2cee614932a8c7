#include "tpskit/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace tpskit {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return {};
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) {
      throw std::invalid_argument("Matrix::from_rows: ragged rows (row " + std::to_string(r) +
                                  " has " + std::to_string(rows[r].size()) + " columns, expected " +
                                  std::to_string(m.cols_) + ")");
    }
    for (std::size_t c = 0; c < m.cols_; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::select_rows(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), cols_);
  for (std::size_t r = 0; r < indices.size(); ++r) {
    if (indices[r] >= rows_) throw std::out_of_range("Matrix::select_rows: index out of range");
    auto src = row(indices[r]);
    auto dst = out.row(r);
    for (std::size_t c = 0; c < cols_; ++c) dst[c] = src[c];
  }
  return out;
}

Matrix Matrix::select_square(std::span<const std::size_t> indices) const {
  Matrix out(indices.size(), indices.size());
  for (std::size_t a = 0; a < indices.size(); ++a) {
    if (indices[a] >= rows_ || indices[a] >= cols_) {
      throw std::out_of_range("Matrix::select_square: index out of range");
    }
    for (std::size_t b = 0; b < indices.size(); ++b) out(a, b) = (*this)(indices[a], indices[b]);
  }
  return out;
}

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

}  // namespace tpskit
