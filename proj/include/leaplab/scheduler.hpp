#pragma once

#include <functional>
#include <vector>

#include "leaplab/tensor.hpp"

namespace leaplab {

struct SchedulerEval {
  double alpha;
  double beta;
  double dalpha;
  double dbeta;
};

// Interpolation schedule between data (t=0) and noise (t=1):
// x_t = alpha(t) * x0 + beta(t) * x1 with alpha(0)=1, beta(0)=0,
// alpha(1)=0, beta(1)=1. The rectified kind is alpha=1-t, beta=t exactly;
// the generic kind evaluates piecewise-linear tables over a uniform time
// grid and exists for verification.
class Scheduler {
 public:
  enum class Kind { kRectified, kGeneric };

  static Scheduler rectified();

  // Generic schedule from explicit sample tables over a uniform grid of
  // `samples` points (t = i/(samples-1)). Values between grid points are
  // linearly interpolated.
  static Scheduler generic_from_table(std::vector<double> alpha, std::vector<double> beta,
                                      std::vector<double> dalpha, std::vector<double> dbeta);

  // Generic schedule sampled from callables; derivative tables supplied
  // analytically.
  static Scheduler tabulated(const std::function<double(double)>& alpha,
                             const std::function<double(double)>& beta,
                             const std::function<double(double)>& dalpha,
                             const std::function<double(double)>& dbeta, int samples);

  Kind kind() const { return kind_; }

  // (alpha_t, beta_t, dalpha/dt, dbeta/dt); t must lie in [0,1].
  SchedulerEval eval(double t) const;

  const char* kind_name() const { return kind_ == Kind::kRectified ? "rectified" : "generic"; }

 private:
  Kind kind_ = Kind::kRectified;
  std::vector<double> alpha_, beta_, dalpha_, dbeta_;
};

// x_t = alpha_t * x0 + beta_t * x1 (Tensor op; differentiable through both).
Tensor noise_interpolate(const Tensor& x0, const Tensor& x1, double t, const Scheduler& s);

}  // namespace leaplab
