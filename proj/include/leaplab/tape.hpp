#pragma once

#include <cstdint>
#include <vector>

#include "leaplab/tensor.hpp"

namespace leaplab {

enum class Op : uint8_t {
  kLeaf,
  kConst,
  kAdd,
  kSub,
  kMul,
  kScalarMul,
  kScalarAdd,
  kMatMul,
  kTanh,
  kRelu,
  kExp,
  kSigmoid,
  kMeanAll,
  kMeanAxis,
  kSumAll,
  kProdAll,
  kAbs,
  kMaxScalar,
  kMinScalar,
  kSquare,
  kConcat,
  kBlend,
  kStraightThrough,
};

// Reverse-mode tape. Nodes are appended in execution order (parents always
// precede children) and each node keeps its forward value, so backward never
// re-executes forward code. Recording is toggled with set_recording(); while
// recording is off, ops compute values without touching the tape.
//
// backward() may be called repeatedly on the same tape (adjoints are rebuilt
// each time); nodes persist until reset().
class Tape {
 public:
  struct Node {
    Op op;
    int a = -1;
    int b = -1;
    double scalar = 0.0;  // per-op constant: scalar operand, clamp bound, blend factor
    int64_t axis = -1;
    Shape shape;
    std::vector<double> value;
    std::vector<int> extra_parents;  // concat operands beyond the first
  };

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  bool recording() const { return recording_; }
  void set_recording(bool on) { recording_ = on; }

  std::size_t size() const { return nodes_.size(); }
  void reset();

  // Registers a leaf (trainable) tensor on this tape and returns the attached
  // handle. The handle shares the leaf's current value by copy; gradients for
  // it are available from grad_of after backward.
  Tensor watch(const Tensor& t);

  // Reverse pass from a scalar loss recorded on this tape. Fills per-node
  // adjoints; unreachable nodes keep empty adjoints (read back as zeros).
  void backward(const Tensor& loss);

  // Adjoint of a tensor recorded on this tape (zeros when no gradient
  // reached it). Must follow backward().
  std::vector<double> grad_of(const Tensor& t) const;

  // Convenience: copy adjoints into the grad fields of the given tensors.
  void write_grads(std::vector<Tensor*> leaves) const;

  int push_node(Node n);
  int intern_const(const Tensor& t);
  const Node& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }

 private:
  std::vector<Node> nodes_;
  std::vector<std::vector<double>> adjoints_;
  bool recording_ = true;
  bool ran_backward_ = false;
};

}  // namespace leaplab
