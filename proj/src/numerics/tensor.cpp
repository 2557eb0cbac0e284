#include "saturn/numerics/tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace saturn::numerics {

Tensor::Tensor(std::size_t rows, std::size_t cols, double fill) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Tensor Tensor::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  std::size_t cols = rows.size() ? rows.begin()->size() : 0;
  Tensor t(rows.size(), cols);
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != cols) throw std::invalid_argument("ragged tensor literal");
    std::copy(row.begin(), row.end(), t.data_.begin() + static_cast<std::ptrdiff_t>(r * cols));
    ++r;
  }
  return t;
}

Tensor Tensor::column(std::span<const double> values) {
  Tensor t(values.size(), 1);
  std::copy(values.begin(), values.end(), t.data_.begin());
  return t;
}

void Tensor::fill(double value) { std::fill(data_.begin(), data_.end(), value); }

std::string Tensor::shape_string() const { return "[" + std::to_string(rows_) + "x" + std::to_string(cols_) + "]"; }

Parameter::Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)), grad(value.rows(), value.cols()) {}

void Parameter::zero_grad() {
  if (!grad.same_shape(value)) grad = Tensor(value.rows(), value.cols());
  grad.fill(0.0);
}

}  // namespace saturn::numerics
