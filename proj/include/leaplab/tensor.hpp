#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace leaplab {

using Shape = std::vector<int64_t>;

class Tape;

// Error thrown when operand shapes do not conform; message names the op and
// both shapes.
class ShapeError : public std::runtime_error {
 public:
  ShapeError(const std::string& op, const Shape& a, const Shape& b);
  ShapeError(const std::string& op, const std::string& detail);
};

class ValueError : public std::runtime_error {
 public:
  explicit ValueError(const std::string& msg) : std::runtime_error(msg) {}
};

std::string shape_str(const Shape& s);
int64_t shape_numel(const Shape& s);

// A dense n-d array of doubles in row-major order. A tensor may additionally
// be attached to a Tape (tape != nullptr, node >= 0), in which case gradients
// can flow to/through it during Tape::backward. Detached tensors act as
// constants.
struct Tensor {
  Shape shape;
  std::vector<double> data;
  // Populated for leaf tensors by Tape::write_grads after a backward pass;
  // empty until then.
  std::vector<double> grad;
  Tape* tape = nullptr;
  int node = -1;

  Tensor() = default;
  Tensor(Shape s, std::vector<double> d);

  static Tensor scalar(double v);
  static Tensor zeros(Shape s);
  static Tensor full(Shape s, double v);

  int64_t size() const { return static_cast<int64_t>(data.size()); }
  int64_t ndim() const { return static_cast<int64_t>(shape.size()); }
  bool recorded() const { return tape != nullptr && node >= 0; }
  bool all_finite() const;

  // Scalar access; requires size() == 1.
  double item() const;

  // Detached copy: same value, no tape attachment.
  Tensor detached() const;
};

}  // namespace leaplab
