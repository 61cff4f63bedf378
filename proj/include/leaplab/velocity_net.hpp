#pragma once

#include <vector>

#include "leaplab/rng.hpp"
#include "leaplab/velocity_model.hpp"

namespace leaplab {

struct NetSpec {
  int64_t latent_dim = 2;
  int cond_count = 2;
  std::vector<int64_t> hidden = {64, 64, 64};
  int time_frequencies = 4;

  int64_t input_dim() const {
    return latent_dim + 1 + 2 * static_cast<int64_t>(time_frequencies) + cond_count + 1;
  }
};

// MLP velocity field. Input is the concatenation of the latent, a timestep
// embedding (raw t plus sin/cos at time_frequencies dyadic frequencies) and a
// one-hot condition embedding with one extra reserved null slot. Hidden
// layers use tanh; the output layer is linear and matches the latent
// dimension. Parameters are stored as [W0, b0, W1, b1, ...].
class VelocityNet : public VelocityModel {
 public:
  VelocityNet(NetSpec spec, Rng& init_rng);
  VelocityNet(NetSpec spec, std::vector<Tensor> params);

  const NetSpec& spec() const { return spec_; }
  int64_t dim() const override { return spec_.latent_dim; }
  int cond_count() const override { return spec_.cond_count; }

  Tensor velocity(const Tensor& x, double t, int cond) const override;

  void bind(Tape& tape) override;
  void unbind() override;
  Tape* bound_tape() const override { return bound_tape_; }

  std::vector<Tensor>& params() { return params_; }
  const std::vector<Tensor>& params() const { return params_; }
  std::vector<Tensor*> param_ptrs() override;
  int64_t param_count() override;

  std::vector<std::vector<double>> grads() const override;

  std::vector<double> time_features(double t) const;

 private:
  NetSpec spec_;
  std::vector<Tensor> params_;
  std::vector<Tensor> bound_;  // tape handles, refreshed by bind()
  Tape* bound_tape_ = nullptr;
};

}  // namespace leaplab
