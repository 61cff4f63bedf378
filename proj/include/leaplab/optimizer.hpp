#pragma once

#include <cstdint>
#include <vector>

#include "leaplab/tensor.hpp"

namespace leaplab {

// Flat per-parameter gradient container, aligned with a model's parameter
// list. Accumulation is always done in index order so batched results do not
// depend on evaluation scheduling.
struct GradMap {
  std::vector<std::vector<double>> g;

  static GradMap zeros_like(const std::vector<Tensor*>& params);
  void accumulate(const std::vector<std::vector<double>>& other, double scale = 1.0);
  void scale(double s);
  double l2_norm() const;
  bool all_finite() const;
  double max_abs_diff(const GradMap& other) const;
  double max_rel_diff(const GradMap& other, double floor = 1e-9) const;
};

struct AdamWConfig {
  double lr = 1e-5;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;
};

struct AdamWState {
  int64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;

  static AdamWState init(const std::vector<Tensor*>& params);
};

// Adaptive moment update with bias correction; weight decay is decoupled
// (applied directly to the parameters, not through the gradient).
void optimizer_step(const std::vector<Tensor*>& params, const GradMap& grads, AdamWState& state,
                    const AdamWConfig& cfg);

// ema <- decay * ema + (1 - decay) * params
void ema_update(std::vector<Tensor>& ema, const std::vector<Tensor*>& params, double decay);

}  // namespace leaplab
