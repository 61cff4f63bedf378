#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "leaplab/rng.hpp"
#include "leaplab/scheduler.hpp"
#include "leaplab/velocity_model.hpp"

namespace leaplab {

class SingularSchedulerError : public ValueError {
 public:
  explicit SingularSchedulerError(double t)
      : ValueError("singular scheduler: endpoint prediction denominator below 1e-12 at t=" +
                   std::to_string(t)) {}
};

// Full Euler rollout on the uniform grid t_i = i/T. latents[i] holds x at
// t_i (latents[T] is the initial noise, latents[0] the sample) and
// velocities[s] is the guided velocity used to step latents[s+1] -> latents[s],
// so latents[s] == latents[s+1] - (t_{s+1} - t_s) * velocities[s] bitwise.
struct Trajectory {
  int steps = 0;
  std::vector<double> timesteps;                // length T+1, ascending index
  std::vector<std::vector<double>> latents;     // length T+1
  std::vector<std::vector<double>> velocities;  // length T
  int condition = 0;
  uint64_t seed = 0;

  double time_at(int index) const { return timesteps[static_cast<std::size_t>(index)]; }
};

// Single Euler update x - (t_from - t_to) * v. Every rollout and every test
// goes through this one function so the arithmetic order is identical
// everywhere.
Tensor euler_step(const Tensor& x, const Tensor& v, double t_from, double t_to);

struct Rollout {
  Trajectory traj;
  // Guided velocity tensors for steps whose record flag was set, keyed by
  // step index (the step from t_i to t_{i-1} has key i).
  std::map<int, Tensor> recorded_velocity;
};

// Euler ODE sampling from x ~ N(0, I) at t=1 down to t=0. record_flags, when
// non-empty, has size T+1 and enables tape recording only during flagged
// steps (flag index = step index in T..1); all stored latents/velocities are
// plain values either way. With no tape or all flags off, no tape nodes are
// created.
Rollout sample_trajectory(const VelocityModel& model, int cond, int steps, double guidance,
                          Rng& rng, const std::vector<uint8_t>& record_flags = {},
                          Tape* tape = nullptr);

// Value-only rollout; recording on any bound tape is suspended for the call.
Trajectory sample_plain(const VelocityModel& model, int cond, int steps, double guidance,
                        Rng& rng);

// One-step leap prediction of the latent at time j from (x_k, v_k) at time
// k >= j. Rectified schedulers use x_k - (k-j) * v_k; generic schedulers go
// through predict_endpoints. Differentiable through x_k and v_k.
Tensor leap_predict(const Tensor& x_k, double k, double j, const Tensor& v_k,
                    const Scheduler& sched);

// Endpoint estimates (x0_hat, x1_hat) implied by (x_t, v_t) at time t. One
// endpoint is solved from the velocity relation, the other from the
// interpolation identity; the branch whose divisor has the larger schedule
// magnitude is solved first so the t=0 and t=1 boundaries stay regular.
std::pair<Tensor, Tensor> predict_endpoints(const Tensor& x_t, double t, const Tensor& v_t,
                                            const Scheduler& sched);

}  // namespace leaplab
