#pragma once

#include <utility>
#include <vector>

#include "leaplab/optimizer.hpp"
#include "leaplab/sampling.hpp"
#include "leaplab/velocity_net.hpp"

namespace leaplab {

// Conditional synthetic data: condition c picks a Gaussian mode.
struct DataSpec {
  int64_t latent_dim = 2;
  int cond_count = 2;
  std::vector<std::vector<double>> mode_centers;  // one center per condition
  double mode_std = 0.35;

  void validate() const;
};

std::pair<std::vector<double>, int> sample_data(const DataSpec& data, Rng& rng);

struct PretrainSpec {
  int64_t iterations = 5000;
  int64_t batch = 64;
  double lr = 1e-3;
  double cfg_dropout = 0.1;  // probability of replacing the condition with null
  uint64_t seed = 1;
};

// Flow-matching regression loss over one batch: per item draw t ~ U[0,1] and
// x1 ~ N(0,I), form x_t = alpha_t x0 + beta_t x1 and regress the velocity
// prediction onto the schedule's target (x1 - x0 for the rectified kind).
// Differentiable w.r.t. the bound network parameters. Conditions drop to the
// null label with probability cfg_dropout.
Tensor fm_pretrain_loss(const VelocityNet& net,
                        const std::vector<std::pair<std::vector<double>, int>>& batch,
                        const Scheduler& sched, Rng& rng, double cfg_dropout = 0.1);

struct PretrainRecord {
  int64_t iter;
  double loss;
};

// Full pretraining loop (AdamW without weight decay). Returns the per-
// iteration losses; the net is trained in place.
std::vector<PretrainRecord> pretrain_run(VelocityNet& net, const DataSpec& data,
                                         const PretrainSpec& spec, const Scheduler& sched);

}  // namespace leaplab
