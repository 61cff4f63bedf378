#pragma once

#include <vector>

#include "leaplab/tape.hpp"
#include "leaplab/tensor.hpp"

namespace leaplab {

// Anything that predicts a velocity field v(x, t, cond). Implementations own
// their parameters; bind() registers them as leaves on a tape so velocity()
// evaluations record, and grads() reads the parameter gradients back after a
// backward pass. Unbound models evaluate value-only.
class VelocityModel {
 public:
  virtual ~VelocityModel() = default;

  virtual int64_t dim() const = 0;
  // Condition labels run 0..cond_count()-1; cond_count() itself is the
  // reserved null label for unconditional evaluation.
  virtual int cond_count() const = 0;
  int null_condition() const { return cond_count(); }

  virtual Tensor velocity(const Tensor& x, double t, int cond) const = 0;

  virtual void bind(Tape& tape) = 0;
  virtual void unbind() = 0;
  virtual Tape* bound_tape() const = 0;

  virtual std::vector<Tensor*> param_ptrs() = 0;
  virtual int64_t param_count() = 0;

  // Per-parameter gradients from the bound tape (zeros where unreached).
  virtual std::vector<std::vector<double>> grads() const = 0;
};

// v_u + scale * (v_c - v_u) with the unconditional branch evaluated at the
// reserved null label. scale==1 and scale==0 return the single branch
// directly so the identity cases are bitwise.
Tensor guided_velocity(const VelocityModel& model, const Tensor& x, double t, int cond,
                       double scale);

}  // namespace leaplab
