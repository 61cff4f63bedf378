#include "leaplab/tensor.hpp"

#include <cmath>
#include <sstream>

namespace leaplab {

std::string shape_str(const Shape& s) {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    os << s[i];
  }
  os << ']';
  return os.str();
}

int64_t shape_numel(const Shape& s) {
  int64_t n = 1;
  for (int64_t d : s) n *= d;
  return n;
}

ShapeError::ShapeError(const std::string& op, const Shape& a, const Shape& b)
    : std::runtime_error("shape mismatch in " + op + ": " + shape_str(a) + " vs " +
                         shape_str(b)) {}

ShapeError::ShapeError(const std::string& op, const std::string& detail)
    : std::runtime_error("shape error in " + op + ": " + detail) {}

Tensor::Tensor(Shape s, std::vector<double> d) : shape(std::move(s)), data(std::move(d)) {
  if (shape_numel(shape) != static_cast<int64_t>(data.size())) {
    throw ShapeError("tensor", "numel " + shape_str(shape) + " != data length " +
                                   std::to_string(data.size()));
  }
  for (int64_t dim : shape) {
    if (dim <= 0) throw ShapeError("tensor", "non-positive dimension in " + shape_str(shape));
  }
}

Tensor Tensor::scalar(double v) { return Tensor({1}, {v}); }

Tensor Tensor::zeros(Shape s) {
  auto n = shape_numel(s);
  return Tensor(std::move(s), std::vector<double>(static_cast<std::size_t>(n), 0.0));
}

Tensor Tensor::full(Shape s, double v) {
  auto n = shape_numel(s);
  return Tensor(std::move(s), std::vector<double>(static_cast<std::size_t>(n), v));
}

bool Tensor::all_finite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

double Tensor::item() const {
  if (data.size() != 1) {
    throw ValueError("item() requires a scalar tensor, got shape " + shape_str(shape));
  }
  return data[0];
}

Tensor Tensor::detached() const {
  Tensor t;
  t.shape = shape;
  t.data = data;
  return t;
}

}  // namespace leaplab
