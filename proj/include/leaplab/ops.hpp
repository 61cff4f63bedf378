#pragma once

#include <functional>

#include "leaplab/tape.hpp"
#include "leaplab/tensor.hpp"

namespace leaplab {

// Elementwise / reduction ops. Each op computes its forward value and, when
// an operand is attached to a tape that is currently recording, appends a
// node carrying the local derivative information. Tensors with no tape act
// as constants. No broadcasting beyond scalar-tensor.

Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);  // elementwise
Tensor smul(const Tensor& a, double s);
Tensor sadd(const Tensor& a, double s);
Tensor neg(const Tensor& a);

// 1-d x [k] times [k,n], [m,k] times [k] and [m,k] times [k,n].
Tensor matmul(const Tensor& a, const Tensor& b);

Tensor tanh(const Tensor& a);
Tensor relu(const Tensor& a);
Tensor exp(const Tensor& a);
Tensor sigmoid(const Tensor& a);
Tensor square(const Tensor& a);
Tensor abs(const Tensor& a);

Tensor mean_all(const Tensor& a);
Tensor mean_axis(const Tensor& a, int64_t axis);  // 2-d only
Tensor sum_all(const Tensor& a);
Tensor prod_all(const Tensor& a);

// Elementwise max(a_i, bound): clamp floor. Derivative is 1 where a_i > bound
// and 0 otherwise (ties take the inactive branch).
Tensor max_scalar(const Tensor& a, double bound);
Tensor min_scalar(const Tensor& a, double bound);

Tensor concat(const std::vector<Tensor>& parts, int64_t axis);

// Identity forward, zero gradient: returns a detached copy, so no tape node
// is ever created and the blocked path costs nothing during backward.
Tensor stop_gradient(const Tensor& a);

// Forward value is a bitwise copy of x; backward scales the incoming
// gradient by alpha. Equivalent to alpha*x + (1-alpha)*stop_gradient(x) but
// with an exact (copy) forward.
Tensor discount_blend(const Tensor& x, double alpha);

// Straight-through connector: forward value is a bitwise copy of `real`,
// backward routes the incoming gradient to `predicted` unchanged. Realizes
// predicted + stop_gradient(real - predicted) with an exact forward.
Tensor straight_through(const Tensor& predicted, const Tensor& real);

// Central-difference gradient oracle: perturbs every coordinate of every
// parameter tensor in place by +/- h, re-evaluating f. Returns one gradient
// vector per parameter tensor, in order. f must be deterministic.
std::vector<std::vector<double>> finite_diff_grad(
    const std::function<double()>& f, const std::vector<Tensor*>& params, double h);

}  // namespace leaplab
