#include "leaplab/ops.hpp"

#include <cmath>
#include <cstddef>

namespace leaplab {

namespace {

// The tape to record on, or nullptr when this op should run value-only.
// An op records when at least one operand is attached to a tape that is
// currently recording; operands from two different tapes are an error.
Tape* active_tape(std::initializer_list<const Tensor*> ins) {
  Tape* t = nullptr;
  for (const Tensor* x : ins) {
    if (x->recorded() && x->tape->recording()) {
      if (t != nullptr && t != x->tape) {
        throw ValueError("op mixes tensors from two different tapes");
      }
      t = x->tape;
    }
  }
  return t;
}

int parent_id(Tape* tape, const Tensor& t) {
  if (t.recorded() && t.tape == tape) return t.node;
  return tape->intern_const(t);
}

Tensor finish_unary(Tape* tape, Op op, const Tensor& a, Shape shape, std::vector<double> value,
                    double scalar = 0.0, int64_t axis = -1) {
  Tensor out;
  out.shape = std::move(shape);
  out.data = std::move(value);
  if (tape != nullptr) {
    Tape::Node n;
    n.op = op;
    n.a = parent_id(tape, a);
    n.scalar = scalar;
    n.axis = axis;
    n.shape = out.shape;
    n.value = out.data;
    out.node = tape->push_node(std::move(n));
    out.tape = tape;
  }
  return out;
}

Tensor finish_binary(Tape* tape, Op op, const Tensor& a, const Tensor& b, Shape shape,
                     std::vector<double> value) {
  Tensor out;
  out.shape = std::move(shape);
  out.data = std::move(value);
  if (tape != nullptr) {
    Tape::Node n;
    n.op = op;
    n.a = parent_id(tape, a);
    n.b = parent_id(tape, b);
    n.shape = out.shape;
    n.value = out.data;
    out.node = tape->push_node(std::move(n));
    out.tape = tape;
  }
  return out;
}

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape != b.shape) throw ShapeError(op, a.shape, b.shape);
}

}  // namespace

Tensor add(const Tensor& a, const Tensor& b) {
  check_same_shape("add", a, b);
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.data[i] + b.data[i];
  return finish_binary(active_tape({&a, &b}), Op::kAdd, a, b, a.shape, std::move(v));
}

Tensor sub(const Tensor& a, const Tensor& b) {
  check_same_shape("sub", a, b);
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.data[i] - b.data[i];
  return finish_binary(active_tape({&a, &b}), Op::kSub, a, b, a.shape, std::move(v));
}

Tensor mul(const Tensor& a, const Tensor& b) {
  check_same_shape("mul", a, b);
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.data[i] * b.data[i];
  return finish_binary(active_tape({&a, &b}), Op::kMul, a, b, a.shape, std::move(v));
}

Tensor smul(const Tensor& a, double s) {
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.data[i] * s;
  return finish_unary(active_tape({&a}), Op::kScalarMul, a, a.shape, std::move(v), s);
}

Tensor sadd(const Tensor& a, double s) {
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.data[i] + s;
  return finish_unary(active_tape({&a}), Op::kScalarAdd, a, a.shape, std::move(v), s);
}

Tensor neg(const Tensor& a) { return smul(a, -1.0); }

Tensor matmul(const Tensor& a, const Tensor& b) {
  if (a.ndim() == 1 && b.ndim() == 2) {
    if (a.shape[0] != b.shape[0]) throw ShapeError("matmul", a.shape, b.shape);
    const int64_t k = a.shape[0], n = b.shape[1];
    std::vector<double> v(static_cast<std::size_t>(n), 0.0);
    for (int64_t r = 0; r < k; ++r) {
      const double av = a.data[static_cast<std::size_t>(r)];
      for (int64_t c = 0; c < n; ++c)
        v[static_cast<std::size_t>(c)] += av * b.data[static_cast<std::size_t>(r * n + c)];
    }
    return finish_binary(active_tape({&a, &b}), Op::kMatMul, a, b, {n}, std::move(v));
  }
  if (a.ndim() == 2 && b.ndim() == 1) {
    if (a.shape[1] != b.shape[0]) throw ShapeError("matmul", a.shape, b.shape);
    const int64_t m = a.shape[0], k = a.shape[1];
    std::vector<double> v(static_cast<std::size_t>(m), 0.0);
    for (int64_t r = 0; r < m; ++r) {
      double acc = 0.0;
      for (int64_t c = 0; c < k; ++c)
        acc += a.data[static_cast<std::size_t>(r * k + c)] * b.data[static_cast<std::size_t>(c)];
      v[static_cast<std::size_t>(r)] = acc;
    }
    return finish_binary(active_tape({&a, &b}), Op::kMatMul, a, b, {m}, std::move(v));
  }
  if (a.ndim() == 2 && b.ndim() == 2) {
    if (a.shape[1] != b.shape[0]) throw ShapeError("matmul", a.shape, b.shape);
    const int64_t m = a.shape[0], k = a.shape[1], n = b.shape[1];
    std::vector<double> v(static_cast<std::size_t>(m * n), 0.0);
    for (int64_t r = 0; r < m; ++r)
      for (int64_t p = 0; p < k; ++p) {
        const double av = a.data[static_cast<std::size_t>(r * k + p)];
        for (int64_t c = 0; c < n; ++c)
          v[static_cast<std::size_t>(r * n + c)] +=
              av * b.data[static_cast<std::size_t>(p * n + c)];
      }
    return finish_binary(active_tape({&a, &b}), Op::kMatMul, a, b, {m, n}, std::move(v));
  }
  throw ShapeError("matmul", a.shape, b.shape);
}

Tensor tanh(const Tensor& a) {
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::tanh(a.data[i]);
  return finish_unary(active_tape({&a}), Op::kTanh, a, a.shape, std::move(v));
}

Tensor relu(const Tensor& a) {
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.data[i] > 0.0 ? a.data[i] : 0.0;
  return finish_unary(active_tape({&a}), Op::kRelu, a, a.shape, std::move(v));
}

Tensor exp(const Tensor& a) {
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::exp(a.data[i]);
  return finish_unary(active_tape({&a}), Op::kExp, a, a.shape, std::move(v));
}

Tensor sigmoid(const Tensor& a) {
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = 1.0 / (1.0 + std::exp(-a.data[i]));
  return finish_unary(active_tape({&a}), Op::kSigmoid, a, a.shape, std::move(v));
}

Tensor square(const Tensor& a) {
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.data[i] * a.data[i];
  return finish_unary(active_tape({&a}), Op::kSquare, a, a.shape, std::move(v));
}

Tensor abs(const Tensor& a) {
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::fabs(a.data[i]);
  return finish_unary(active_tape({&a}), Op::kAbs, a, a.shape, std::move(v));
}

Tensor mean_all(const Tensor& a) {
  double acc = 0.0;
  for (double x : a.data) acc += x;
  return finish_unary(active_tape({&a}), Op::kMeanAll, a, {1},
                      {acc / static_cast<double>(a.data.size())});
}

Tensor mean_axis(const Tensor& a, int64_t axis) {
  if (a.ndim() != 2 || (axis != 0 && axis != 1)) {
    throw ShapeError("mean_axis", "requires a 2-d tensor and axis 0 or 1, got " +
                                      shape_str(a.shape) + " axis " + std::to_string(axis));
  }
  const int64_t m = a.shape[0], c = a.shape[1];
  if (axis == 0) {
    std::vector<double> v(static_cast<std::size_t>(c), 0.0);
    for (int64_t r = 0; r < m; ++r)
      for (int64_t cc = 0; cc < c; ++cc)
        v[static_cast<std::size_t>(cc)] += a.data[static_cast<std::size_t>(r * c + cc)];
    for (auto& x : v) x /= static_cast<double>(m);
    return finish_unary(active_tape({&a}), Op::kMeanAxis, a, {c}, std::move(v), 0.0, 0);
  }
  std::vector<double> v(static_cast<std::size_t>(m), 0.0);
  for (int64_t r = 0; r < m; ++r) {
    double acc = 0.0;
    for (int64_t cc = 0; cc < c; ++cc) acc += a.data[static_cast<std::size_t>(r * c + cc)];
    v[static_cast<std::size_t>(r)] = acc / static_cast<double>(c);
  }
  return finish_unary(active_tape({&a}), Op::kMeanAxis, a, {m}, std::move(v), 0.0, 1);
}

Tensor sum_all(const Tensor& a) {
  double acc = 0.0;
  for (double x : a.data) acc += x;
  return finish_unary(active_tape({&a}), Op::kSumAll, a, {1}, {acc});
}

Tensor prod_all(const Tensor& a) {
  double acc = 1.0;
  for (double x : a.data) acc *= x;
  return finish_unary(active_tape({&a}), Op::kProdAll, a, {1}, {acc});
}

Tensor max_scalar(const Tensor& a, double bound) {
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.data[i] > bound ? a.data[i] : bound;
  return finish_unary(active_tape({&a}), Op::kMaxScalar, a, a.shape, std::move(v), bound);
}

Tensor min_scalar(const Tensor& a, double bound) {
  std::vector<double> v(a.data.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.data[i] < bound ? a.data[i] : bound;
  return finish_unary(active_tape({&a}), Op::kMinScalar, a, a.shape, std::move(v), bound);
}

Tensor concat(const std::vector<Tensor>& parts, int64_t axis) {
  if (parts.empty()) throw ShapeError("concat", "no operands");
  const int64_t nd = parts[0].ndim();
  if (axis < 0 || axis >= nd) throw ShapeError("concat", "axis out of range");
  for (const Tensor& p : parts) {
    if (p.ndim() != nd) throw ShapeError("concat", parts[0].shape, p.shape);
    for (int64_t d = 0; d < nd; ++d)
      if (d != axis && p.shape[static_cast<std::size_t>(d)] !=
                           parts[0].shape[static_cast<std::size_t>(d)])
        throw ShapeError("concat", parts[0].shape, p.shape);
  }

  Shape out_shape = parts[0].shape;
  out_shape[static_cast<std::size_t>(axis)] = 0;
  for (const Tensor& p : parts)
    out_shape[static_cast<std::size_t>(axis)] += p.shape[static_cast<std::size_t>(axis)];

  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(shape_numel(out_shape)));
  if (nd == 1 || axis == 0) {
    for (const Tensor& p : parts) v.insert(v.end(), p.data.begin(), p.data.end());
  } else {
    // 2-d, axis == 1
    const int64_t rows = out_shape[0];
    v.assign(static_cast<std::size_t>(shape_numel(out_shape)), 0.0);
    const int64_t total_c = out_shape[1];
    int64_t coff = 0;
    for (const Tensor& p : parts) {
      const int64_t pc = p.shape[1];
      for (int64_t r = 0; r < rows; ++r)
        for (int64_t c = 0; c < pc; ++c)
          v[static_cast<std::size_t>(r * total_c + coff + c)] =
              p.data[static_cast<std::size_t>(r * pc + c)];
      coff += pc;
    }
  }

  std::vector<const Tensor*> ptrs;
  for (const Tensor& p : parts) ptrs.push_back(&p);
  Tape* tape = nullptr;
  for (const Tensor* p : ptrs) {
    if (p->recorded() && p->tape->recording()) {
      if (tape != nullptr && tape != p->tape)
        throw ValueError("concat mixes tensors from two different tapes");
      tape = p->tape;
    }
  }
  Tensor out;
  out.shape = std::move(out_shape);
  out.data = std::move(v);
  if (tape != nullptr) {
    Tape::Node n;
    n.op = Op::kConcat;
    n.axis = axis;
    n.shape = out.shape;
    n.value = out.data;
    n.a = parent_id(tape, parts[0]);
    for (std::size_t i = 1; i < parts.size(); ++i)
      n.extra_parents.push_back(parent_id(tape, parts[i]));
    out.node = tape->push_node(std::move(n));
    out.tape = tape;
  }
  return out;
}

Tensor stop_gradient(const Tensor& a) { return a.detached(); }

Tensor discount_blend(const Tensor& x, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw ValueError("discount_blend: alpha must lie in [0,1], got " + std::to_string(alpha));
  }
  return finish_unary(active_tape({&x}), Op::kBlend, x, x.shape, x.data, alpha);
}

Tensor straight_through(const Tensor& predicted, const Tensor& real) {
  check_same_shape("straight_through", predicted, real);
  return finish_unary(active_tape({&predicted}), Op::kStraightThrough, predicted, real.shape,
                      real.data);
}

std::vector<std::vector<double>> finite_diff_grad(const std::function<double()>& f,
                                                  const std::vector<Tensor*>& params, double h) {
  if (h <= 0.0) throw ValueError("finite_diff_grad: h must be positive");
  std::vector<std::vector<double>> grads;
  grads.reserve(params.size());
  for (Tensor* p : params) {
    std::vector<double> g(p->data.size());
    for (std::size_t i = 0; i < p->data.size(); ++i) {
      const double saved = p->data[i];
      p->data[i] = saved + h;
      const double up = f();
      p->data[i] = saved - h;
      const double down = f();
      p->data[i] = saved;
      g[i] = (up - down) / (2.0 * h);
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

}  // namespace leaplab
