#include "cosfit/array2d.hpp"

#include "cosfit/error.hpp"

namespace cosfit {

Array2D::Array2D(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw InvalidArgument("Array2D: data size does not match shape");
  }
}

Array2D Array2D::transposed() const {
  Array2D t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

std::vector<double> multiply(const Array2D& m, std::span<const double> x) {
  if (x.size() != m.cols()) throw InvalidArgument("multiply: length mismatch");
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) acc += m(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

}  // namespace cosfit
